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

#include "voxelkit/image.hpp"

namespace voxelkit {

enum class EwOp { add, sub, mul, div, max, min };

// Division guard shared by elementwise div and the deconvolution ratio step.
inline constexpr double kDivEpsilon = 1e-12;

// Affine map of the intensity range onto [0, 1]; a constant image maps to
// all zeros. Output is always f32.
NdImage normalize_minmax(const NdImage& img);

// Pointwise arithmetic. Inputs are promoted to f32; div clamps the
// denominator magnitude to kDivEpsilon.
NdImage elementwise(EwOp op, const NdImage& a, const NdImage& b);
NdImage elementwise(EwOp op, const NdImage& a, float b);

inline NdImage add(const NdImage& a, const NdImage& b) { return elementwise(EwOp::add, a, b); }
inline NdImage sub(const NdImage& a, const NdImage& b) { return elementwise(EwOp::sub, a, b); }
inline NdImage mul(const NdImage& a, const NdImage& b) { return elementwise(EwOp::mul, a, b); }
inline NdImage div(const NdImage& a, const NdImage& b) { return elementwise(EwOp::div, a, b); }
inline NdImage vmax(const NdImage& a, const NdImage& b) { return elementwise(EwOp::max, a, b); }
inline NdImage vmin(const NdImage& a, const NdImage& b) { return elementwise(EwOp::min, a, b); }
inline NdImage add(const NdImage& a, float b) { return elementwise(EwOp::add, a, b); }
inline NdImage sub(const NdImage& a, float b) { return elementwise(EwOp::sub, a, b); }
inline NdImage mul(const NdImage& a, float b) { return elementwise(EwOp::mul, a, b); }
inline NdImage div(const NdImage& a, float b) { return elementwise(EwOp::div, a, b); }
inline NdImage vmax(const NdImage& a, float b) { return elementwise(EwOp::max, a, b); }
inline NdImage vmin(const NdImage& a, float b) { return elementwise(EwOp::min, a, b); }

}  // namespace voxelkit
