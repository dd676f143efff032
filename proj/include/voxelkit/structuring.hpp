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

#include <cstddef>
#include <vector>

namespace voxelkit {

// Discrete Euclidean neighborhood (disk in 2D, ball in 3D) for morphology
// and rank filters. Membership rule: |offset| <= radius. Contains the origin
// and is symmetric under negation by construction.
struct StructuringElement {
  std::vector<std::vector<long>> offsets;  // per entry: one offset per axis
  double radius = 0.0;
  std::size_t rank = 0;

  static StructuringElement ball(double radius, std::size_t rank);
  // Disk embedded in 3D with zero z-offset (per-slice morphology on stacks).
  static StructuringElement plane_disk(double radius);
};

}  // namespace voxelkit
