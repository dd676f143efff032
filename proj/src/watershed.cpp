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

#include <algorithm>
#include <queue>
#include <vector>

#include "voxelkit/registry.hpp"
#include "voxelkit/segmentation.hpp"
#include "nd_utils.hpp"
#include "register_ops.hpp"

namespace voxelkit::seg {

namespace {

struct QueueItem {
  float value;
  std::uint64_t seq;
  std::size_t index;
  std::uint32_t label;
};

struct LaterItem {
  bool operator()(const QueueItem& a, const QueueItem& b) const {
    if (a.value != b.value) return a.value > b.value;
    return a.seq > b.seq;
  }
};

LabelImage watershed_kernel(const NdImage& landscape, const LabelImage& seeds,
                            const NdImage& mask) {
  const NdImage land = landscape.as_f32();
  if (seeds.elem() != Elem::u32_label)
    throw ShapeMismatch("watershed expects u32 seed labels");
  require_same_shape(land, seeds, "watershed seeds");
  const bool has_mask = !mask.empty();
  if (has_mask) {
    require_same_shape(land, mask, "watershed mask");
    if (mask.elem() != Elem::boolean)
      throw ShapeMismatch("watershed mask must be bool");
  }

  const auto values = land.f32_values();
  const auto seed_v = seeds.values<std::uint32_t>();
  const std::uint8_t* mask_v =
      has_mask ? mask.values<std::uint8_t>().data() : nullptr;
  const Shape& shape = land.shape();
  const auto strides = nd::row_major_strides(shape);
  const std::size_t n = values.size();

  auto in_mask = [&](std::size_t i) { return !mask_v || mask_v[i]; };

  // Seeds grouped by label so insertion order is ascending label id, scan
  // order within a label.
  std::uint32_t max_label = 0;
  for (auto s : seed_v) max_label = std::max(max_label, s);
  std::vector<std::vector<std::size_t>> by_label(max_label + 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (seed_v[i] == 0) continue;
    if (!in_mask(i))
      throw SeedOutsideMask("seed voxel " + std::to_string(i) +
                            " lies outside the mask");
    by_label[seed_v[i]].push_back(i);
  }

  std::priority_queue<QueueItem, std::vector<QueueItem>, LaterItem> queue;
  std::uint64_t seq = 0;
  for (std::uint32_t label = 1; label <= max_label; ++label)
    for (std::size_t i : by_label[label])
      queue.push({values[i], seq++, i, label});

  std::vector<std::uint32_t> out(n, 0);
  while (!queue.empty()) {
    const QueueItem item = queue.top();
    queue.pop();
    if (out[item.index]) continue;
    out[item.index] = item.label;
    const auto c = nd::coords_at(shape, item.index);
    for (std::size_t a = 0; a < shape.size(); ++a) {
      for (int dir = -1; dir <= 1; dir += 2) {
        const long nc = c[a] + dir;
        if (nc < 0 || nc >= static_cast<long>(shape[a])) continue;
        const std::size_t ni = static_cast<std::size_t>(
            static_cast<long>(item.index) + dir * static_cast<long>(strides[a]));
        if (out[ni] || !in_mask(ni)) continue;
        queue.push({values[ni], seq++, ni, item.label});
      }
    }
  }
  return NdImage::labels_like(land, std::move(out));
}

}  // namespace

LabelImage watershed(const NdImage& landscape, const LabelImage& seeds,
                     const NdImage& mask) {
  return dispatch<LabelImage(const NdImage&, const LabelImage&, const NdImage&)>(
      "watershed", landscape, seeds, mask);
}

namespace detail {

void register_watershed_op(ExecutionRegistry& reg) {
  using Sig = LabelImage(const NdImage&, const LabelImage&, const NdImage&);
  // The priority flood is inherently sequential; the accelerated backend
  // reaches it through the dispatcher's fallback.
  reg.add<Sig>("watershed", BackendId::reference,
               [](const NdImage& land, const LabelImage& seeds,
                  const NdImage& mask) {
                 return watershed_kernel(land, seeds, mask);
               });
}

}  // namespace detail

}  // namespace voxelkit::seg
