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

#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "voxelkit/image.hpp"

namespace voxelkit::bench {

// One benchmark measurement. Every row carries the full parameter set
// needed to rerun it.
struct TimingRow {
  std::string workload;
  std::string stage;
  std::string backend;
  std::string shape;
  std::string params;
  int repeats = 0;
  int warmup = 0;
  double median_s = 0;
  double speedup_vs_reference = 0;  // reference median / this median
};

struct TimingReport {
  std::vector<TimingRow> rows;

  // Fixed column order:
  // workload,stage,backend,shape,params,repeats,warmup,median_s,speedup_vs_reference
  void to_csv(std::ostream& out) const;
  void to_json(std::ostream& out) const;  // {"schema":1,"rows":[...]}
};

// Median wall time of fn over `repeats` runs after `warmup` discarded runs
// (monotonic clock).
double time_median(int repeats, int warmup, const std::function<void()>& fn);

// {metric, value, params} entries serialized as JSON.
struct MetricEntry {
  std::string metric;
  double value = 0;
  std::string params;
};

void write_metrics_json(std::ostream& out,
                        const std::vector<MetricEntry>& entries);

}  // namespace voxelkit::bench
