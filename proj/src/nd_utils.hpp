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

// Internal N-D indexing helpers shared by the kernels.

#include <cstddef>
#include <vector>

#include "voxelkit/image.hpp"
#include "voxelkit/structuring.hpp"

namespace voxelkit::nd {

// Mirror (whole-sample symmetric, edge not repeated) index reflection:
// for n = 4, indices map as  -2 -1 | 0 1 2 3 | 4 5  ->  2 1 | 0 1 2 3 | 2 1.
inline std::size_t mirror_index(long i, long n) {
  if (n == 1) return 0;
  const long period = 2 * (n - 1);
  long m = i % period;
  if (m < 0) m += period;
  if (m >= n) m = period - m;
  return static_cast<std::size_t>(m);
}

// Number of lines along `axis`.
inline std::size_t line_count(const Shape& shape, std::size_t axis) {
  return shape_volume(shape) / shape[axis];
}

// Buffer offset of the first voxel of line `line` along `axis`; lines are
// enumerated in row-major order of the remaining axes.
inline std::size_t line_base(const Shape& shape,
                             const std::vector<std::size_t>& strides,
                             std::size_t axis, std::size_t line) {
  std::size_t base = 0;
  for (std::size_t a = shape.size(); a-- > 0;) {
    if (a == axis) continue;
    base += (line % shape[a]) * strides[a];
    line /= shape[a];
  }
  return base;
}

// Row-major coordinate counter.
inline void advance_coords(std::vector<long>& coords, const Shape& shape) {
  for (std::size_t a = shape.size(); a-- > 0;) {
    if (static_cast<std::size_t>(++coords[a]) < shape[a]) return;
    coords[a] = 0;
  }
}

inline std::vector<long> coords_at(const Shape& shape, std::size_t index) {
  std::vector<long> coords(shape.size());
  for (std::size_t a = shape.size(); a-- > 0;) {
    coords[a] = static_cast<long>(index % shape[a]);
    index /= shape[a];
  }
  return coords;
}

inline std::vector<std::size_t> row_major_strides(const Shape& shape) {
  std::vector<std::size_t> s(shape.size(), 1);
  for (std::size_t i = shape.size(); i-- > 1;) s[i - 1] = s[i] * shape[i];
  return s;
}

// Structuring element resolved against a concrete shape: linear deltas plus
// per-axis offsets for bounds checks.
struct PackedSe {
  std::vector<long> linear;
  std::vector<std::vector<long>> coords;
};

inline PackedSe pack_se(const StructuringElement& se, const Shape& shape) {
  PackedSe packed;
  const auto strides = row_major_strides(shape);
  packed.coords = se.offsets;
  packed.linear.reserve(se.offsets.size());
  for (const auto& off : se.offsets) {
    long delta = 0;
    for (std::size_t a = 0; a < shape.size(); ++a)
      delta += off[a] * static_cast<long>(strides[a]);
    packed.linear.push_back(delta);
  }
  return packed;
}

inline bool offset_in_bounds(const std::vector<long>& coords,
                             const std::vector<long>& offset,
                             const Shape& shape) {
  for (std::size_t a = 0; a < shape.size(); ++a) {
    const long c = coords[a] + offset[a];
    if (c < 0 || c >= static_cast<long>(shape[a])) return false;
  }
  return true;
}

}  // namespace voxelkit::nd
