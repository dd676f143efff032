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

#include <vector>

#include "voxelkit/parallel.hpp"
#include "voxelkit/registry.hpp"
#include "voxelkit/segmentation.hpp"
#include "nd_utils.hpp"
#include "register_ops.hpp"

namespace voxelkit::seg {

namespace {

// Neighbor deltas for the given connectivity (excluding the origin).
std::vector<std::vector<long>> neighbor_offsets(std::size_t rank,
                                                Connectivity conn) {
  std::vector<std::vector<long>> offsets;
  if (conn == Connectivity::face) {
    for (std::size_t a = 0; a < rank; ++a)
      for (int dir = -1; dir <= 1; dir += 2) {
        std::vector<long> off(rank, 0);
        off[a] = dir;
        offsets.push_back(off);
      }
    return offsets;
  }
  std::vector<long> off(rank, -1);
  while (true) {
    bool origin = true;
    for (long o : off) origin = origin && o == 0;
    if (!origin) offsets.push_back(off);
    std::size_t a = rank;
    bool done = true;
    while (a-- > 0) {
      if (++off[a] <= 1) {
        done = false;
        break;
      }
      off[a] = -1;
    }
    if (done) break;
  }
  return offsets;
}

// Scan-order flood labeling over `eligible`, where two eligible voxels join
// only if `joinable(a, b)` holds; ids are consecutive 1..K by first voxel.
template <class Eligible, class Joinable>
std::vector<std::uint32_t> flood_label(const Shape& shape,
                                       const std::vector<std::vector<long>>& offsets,
                                       Eligible&& eligible,
                                       Joinable&& joinable) {
  const auto strides = nd::row_major_strides(shape);
  const std::size_t n = shape_volume(shape);
  std::vector<long> linear;
  linear.reserve(offsets.size());
  for (const auto& off : offsets) {
    long delta = 0;
    for (std::size_t a = 0; a < shape.size(); ++a)
      delta += off[a] * static_cast<long>(strides[a]);
    linear.push_back(delta);
  }

  std::vector<std::uint32_t> labels(n, 0);
  std::vector<std::size_t> stack;
  std::uint32_t next_id = 0;
  for (std::size_t start = 0; start < n; ++start) {
    if (!eligible(start) || labels[start]) continue;
    labels[start] = ++next_id;
    stack.assign(1, start);
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      const auto c = nd::coords_at(shape, i);
      for (std::size_t k = 0; k < offsets.size(); ++k) {
        if (!nd::offset_in_bounds(c, offsets[k], shape)) continue;
        const std::size_t ni = static_cast<std::size_t>(
            static_cast<long>(i) + linear[k]);
        if (labels[ni] || !eligible(ni) || !joinable(i, ni)) continue;
        labels[ni] = next_id;
        stack.push_back(ni);
      }
    }
  }
  return labels;
}

LabelImage connected_components_kernel(const NdImage& mask, Connectivity conn) {
  if (mask.elem() != Elem::boolean)
    throw ShapeMismatch("connected_components expects a bool mask");
  const auto v = mask.values<std::uint8_t>();
  auto labels = flood_label(
      mask.shape(), neighbor_offsets(mask.rank(), conn),
      [&](std::size_t i) { return v[i] != 0; },
      [](std::size_t, std::size_t) { return true; });
  return NdImage::labels_like(mask, std::move(labels));
}

LabelImage find_seeds_kernel(const NdImage& distance,
                             const StructuringElement& se, bool parallel) {
  const NdImage src = distance.as_f32();
  const auto v = src.f32_values();
  const Shape& shape = src.shape();
  if (se.rank != shape.size())
    throw ShapeMismatch("find_seeds: structuring element rank mismatch");
  const auto packed = nd::pack_se(se, shape);

  // Candidate: no strictly greater value inside the footprint.
  std::vector<std::uint8_t> candidate(v.size());
  par::maybe_parallel(v.size(), parallel, [&](std::size_t lo, std::size_t hi) {
    std::vector<long> coords = nd::coords_at(shape, lo);
    for (std::size_t i = lo; i < hi; ++i) {
      bool is_max = true;
      for (std::size_t k = 0; k < packed.linear.size(); ++k) {
        if (!nd::offset_in_bounds(coords, packed.coords[k], shape)) continue;
        if (v[i + packed.linear[k]] > v[i]) {
          is_max = false;
          break;
        }
      }
      candidate[i] = is_max;
      nd::advance_coords(coords, shape);
    }
  });

  // Equal-valued plateaus of candidates become one seed each.
  auto labels = flood_label(
      shape, neighbor_offsets(shape.size(), Connectivity::face),
      [&](std::size_t i) { return candidate[i] != 0; },
      [&](std::size_t a, std::size_t b) { return v[a] == v[b]; });
  return NdImage::labels_like(src, std::move(labels));
}

}  // namespace

LabelImage connected_components(const NdImage& mask, Connectivity conn) {
  return dispatch<LabelImage(const NdImage&, Connectivity)>(
      "connected_components", mask, conn);
}

LabelImage find_seeds(const NdImage& distance, const StructuringElement& se) {
  return dispatch<LabelImage(const NdImage&, const StructuringElement&)>(
      "find_seeds", distance, se);
}

namespace detail {

void register_labeling_ops(ExecutionRegistry& reg) {
  using CcSig = LabelImage(const NdImage&, Connectivity);
  using SeedSig = LabelImage(const NdImage&, const StructuringElement&);

  // Flood labeling is sequential by construction (scan-order ids).
  reg.add<CcSig>("connected_components", BackendId::reference,
                 [](const NdImage& m, Connectivity c) {
                   return connected_components_kernel(m, c);
                 });
  reg.add<SeedSig>("find_seeds", BackendId::reference,
                   [](const NdImage& d, const StructuringElement& se) {
                     return find_seeds_kernel(d, se, false);
                   });
  reg.add<SeedSig>("find_seeds", BackendId::accelerated,
                   [](const NdImage& d, const StructuringElement& se) {
                     return find_seeds_kernel(d, se, true);
                   });
}

}  // namespace detail

}  // namespace voxelkit::seg
