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

#include "voxelkit/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "voxelkit/parallel.hpp"
#include "voxelkit/registry.hpp"
#include "register_ops.hpp"

namespace voxelkit::thresh {

namespace {

struct Histogram {
  std::vector<std::uint64_t> counts;
  float lo = 0, hi = 0;
  double bin_width = 0;

  float left_edge(int split) const {
    return static_cast<float>(lo + bin_width * split);
  }
};

Histogram build_histogram(const NdImage& img, int bins, bool parallel) {
  const NdImage src = img.as_f32();
  const auto v = src.f32_values();

  float mn = std::numeric_limits<float>::max();
  float mx = std::numeric_limits<float>::lowest();
  for (float x : v) {
    mn = std::min(mn, x);
    mx = std::max(mx, x);
  }
  if (!(mx > mn))
    throw DegenerateImage("thresholding needs at least two distinct values");

  Histogram h;
  h.lo = mn;
  h.hi = mx;
  h.bin_width = (static_cast<double>(mx) - mn) / bins;
  h.counts.assign(bins, 0);

  const int threads = parallel ? par::max_threads() : 1;
  const std::size_t chunks = par::chunk_count(v.size(), threads);
  std::vector<std::vector<std::uint64_t>> partial(
      chunks, std::vector<std::uint64_t>(bins, 0));
  par::run_chunks(v.size(), threads,
                  [&](std::size_t c, std::size_t lo_i, std::size_t hi_i) {
                    auto& counts = partial[c];
                    for (std::size_t i = lo_i; i < hi_i; ++i) {
                      int b = static_cast<int>((v[i] - mn) / h.bin_width);
                      b = std::clamp(b, 0, bins - 1);
                      ++counts[b];
                    }
                  });
  for (const auto& counts : partial)
    for (int b = 0; b < bins; ++b) h.counts[b] += counts[b];
  return h;
}

// Between-class variance of a two-way split at bin `k` (classes [0,k) and
// [k,bins)), with bin indices as class values.
struct CumulativeMoments {
  std::vector<double> weight;  // P[k] = count of bins [0, k)
  std::vector<double> sum;     // S[k] = sum of index*count over [0, k)

  explicit CumulativeMoments(const Histogram& h) {
    const std::size_t bins = h.counts.size();
    weight.assign(bins + 1, 0);
    sum.assign(bins + 1, 0);
    for (std::size_t b = 0; b < bins; ++b) {
      weight[b + 1] = weight[b] + static_cast<double>(h.counts[b]);
      sum[b + 1] = sum[b] + static_cast<double>(h.counts[b]) * b;
    }
  }

  // w * mu^2 contribution of class spanning bins [a, b); 0 for empty class.
  double class_term(int a, int b) const {
    const double w = weight[b] - weight[a];
    if (w <= 0) return 0;
    const double s = sum[b] - sum[a];
    return s * s / w;
  }
};

int best_two_way_split(const CumulativeMoments& m, int bins) {
  int best_k = 1;
  double best = -1;
  for (int k = 1; k < bins; ++k) {
    const double score = m.class_term(0, k) + m.class_term(k, bins);
    if (score > best) {
      best = score;
      best_k = k;
    }
  }
  return best_k;
}

float otsu_kernel(const NdImage& img, int bins, bool parallel) {
  if (bins < 2) throw Error("otsu needs at least 2 bins");
  const Histogram h = build_histogram(img, bins, parallel);
  const CumulativeMoments m(h);
  return h.left_edge(best_two_way_split(m, bins));
}

// Exhaustive search over strictly increasing split tuples, maximizing
// sum of w_i * mu_i^2 via the cumulative moments.
void search_splits(const CumulativeMoments& m, int bins, int depth,
                   int num_splits, int first, double acc,
                   std::vector<int>& current, double& best,
                   std::vector<int>& best_splits) {
  if (depth == num_splits) {
    const double score = acc + m.class_term(current.empty() ? 0 : current.back(), bins);
    if (score > best) {
      best = score;
      best_splits = current;
    }
    return;
  }
  for (int k = first; k <= bins - (num_splits - depth); ++k) {
    const int prev = current.empty() ? 0 : current.back();
    current.push_back(k);
    search_splits(m, bins, depth + 1, num_splits, k + 1,
                  acc + m.class_term(prev, k), current, best, best_splits);
    current.pop_back();
  }
}

std::vector<float> multi_otsu_kernel(const NdImage& img, int classes, int bins,
                                     bool parallel) {
  if (classes < 2) throw Error("multi_otsu needs classes >= 2");
  if (classes > 4)
    throw Error("multi_otsu exhaustive search supports classes <= 4");
  const Histogram h = build_histogram(img, bins, parallel);

  int nonempty = 0;
  for (auto c : h.counts) nonempty += (c != 0);
  if (nonempty < classes)
    throw DegenerateImage("multi_otsu needs at least `classes` occupied bins");

  const CumulativeMoments m(h);
  if (classes == 2) return {h.left_edge(best_two_way_split(m, bins))};

  std::vector<int> current, best_splits;
  double best = -1;
  search_splits(m, bins, 0, classes - 1, 1, 0.0, current, best, best_splits);

  std::vector<float> thresholds;
  thresholds.reserve(best_splits.size());
  for (int k : best_splits) thresholds.push_back(h.left_edge(k));
  return thresholds;
}

}  // namespace

float otsu_threshold(const NdImage& img, int bins) {
  return dispatch<float(const NdImage&, int)>("otsu_threshold", img, bins);
}

std::vector<float> multi_otsu(const NdImage& img, int classes, int bins) {
  return dispatch<std::vector<float>(const NdImage&, int, int)>(
      "multi_otsu", img, classes, bins);
}

NdImage apply_threshold(const NdImage& img, float threshold) {
  const NdImage src = img.as_f32();
  const auto v = src.f32_values();
  std::vector<std::uint8_t> mask(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) mask[i] = v[i] > threshold;
  return NdImage::boolean_like(src, std::move(mask));
}

}  // namespace voxelkit::thresh

namespace voxelkit::detail {

void register_threshold_ops(ExecutionRegistry& reg) {
  using OtsuSig = float(const NdImage&, int);
  using MultiSig = std::vector<float>(const NdImage&, int, int);

  reg.add<OtsuSig>("otsu_threshold", BackendId::reference,
                   [](const NdImage& img, int bins) {
                     return thresh::otsu_kernel(img, bins, false);
                   });
  reg.add<OtsuSig>("otsu_threshold", BackendId::accelerated,
                   [](const NdImage& img, int bins) {
                     return thresh::otsu_kernel(img, bins, true);
                   });
  reg.add<MultiSig>("multi_otsu", BackendId::reference,
                    [](const NdImage& img, int classes, int bins) {
                      return thresh::multi_otsu_kernel(img, classes, bins, false);
                    });
  reg.add<MultiSig>("multi_otsu", BackendId::accelerated,
                    [](const NdImage& img, int classes, int bins) {
                      return thresh::multi_otsu_kernel(img, classes, bins, true);
                    });
}

}  // namespace voxelkit::detail
