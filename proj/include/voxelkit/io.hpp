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

#include <string>

#include "voxelkit/image.hpp"

namespace voxelkit::io {

// NDIV volume format:
//   bytes 0..3   magic "NDIV"
//   bytes 4..7   u32 little-endian header length H
//   bytes 8..8+H UTF-8 JSON header {"elem","shape","axes","spacing"?}
//   rest         raw little-endian row-major payload
// write_volume . read_volume is bitwise identity, spacing included.
NdImage read_volume(const std::string& path);
void write_volume(const std::string& path, const NdImage& img);

// 8-bit binary PGM (P5) of one 2D slice of a 3D volume, min-max scaled.
void export_slice(const NdImage& img, std::size_t axis, std::size_t index,
                  const std::string& path);

}  // namespace voxelkit::io
