/**
 * @license
 * Copyright 2026 VoxelKit Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "voxelkit/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include <json.hpp>

namespace voxelkit::bench {

void TimingReport::to_csv(std::ostream& out) const {
  out << "workload,stage,backend,shape,params,repeats,warmup,median_s,"
         "speedup_vs_reference\n";
  for (const auto& r : rows) {
    out << r.workload << "," << r.stage << "," << r.backend << "," << r.shape
        << "," << r.params << "," << r.repeats << "," << r.warmup << ","
        << r.median_s << "," << r.speedup_vs_reference << "\n";
  }
}

void TimingReport::to_json(std::ostream& out) const {
  nlohmann::json doc;
  doc["schema"] = 1;
  auto& arr = doc["rows"] = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"workload", r.workload},
                   {"stage", r.stage},
                   {"backend", r.backend},
                   {"shape", r.shape},
                   {"params", r.params},
                   {"repeats", r.repeats},
                   {"warmup", r.warmup},
                   {"median_s", r.median_s},
                   {"speedup_vs_reference", r.speedup_vs_reference}});
  }
  out << doc.dump(2) << "\n";
}

double time_median(int repeats, int warmup, const std::function<void()>& fn) {
  for (int i = 0; i < warmup; ++i) fn();
  std::vector<double> times;
  times.reserve(repeats);
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const std::chrono::duration<double> dt =
        std::chrono::steady_clock::now() - t0;
    times.push_back(dt.count());
  }
  std::sort(times.begin(), times.end());
  const std::size_t n = times.size();
  return n % 2 ? times[n / 2] : 0.5 * (times[n / 2 - 1] + times[n / 2]);
}

void write_metrics_json(std::ostream& out,
                        const std::vector<MetricEntry>& entries) {
  nlohmann::json doc;
  doc["schema"] = 1;
  auto& arr = doc["metrics"] = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json row{{"metric", e.metric}, {"params", e.params}};
    if (std::isinf(e.value)) {
      row["value"] = e.value > 0 ? "inf" : "-inf";
    } else {
      row["value"] = e.value;
    }
    arr.push_back(row);
  }
  out << doc.dump(2) << "\n";
}

}  // namespace voxelkit::bench
