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

#include <limits>
#include <optional>
#include <vector>

#include "voxelkit/image.hpp"

namespace voxelkit::metrics {

// 10 log10(data_range^2 / MSE) in dB; +inf for identical inputs.
// data_range defaults to max(ref) - min(ref).
double psnr(const NdImage& x, const NdImage& ref,
            std::optional<double> data_range = std::nullopt);

// PSNR after the least-squares affine fit a*x + b to ref. Always >= psnr.
double si_psnr(const NdImage& x, const NdImage& ref);

// Mean local structural similarity, Gaussian window sigma 1.5 (truncated at
// 3.5 sigma), K1 = 0.01, K2 = 0.03. Needs every extent >= 7.
double ssim(const NdImage& x, const NdImage& ref,
            std::optional<double> data_range = std::nullopt);

// Fourier ring (2D) / shell (3D) correlation, integer-radius bins of
// `ring_width` frequency samples. frequency is in cycles per sample
// ([0, 0.5]); counts holds the number of spectrum samples per ring.
struct FrcCurve {
  std::vector<double> frequency;
  std::vector<double> correlation;
  std::vector<std::size_t> counts;
};
FrcCurve frc(const NdImage& a, const NdImage& b, double ring_width = 1.0);

// First threshold crossing of the curve (linear interpolation between
// rings, DC excluded), as a physical length. No crossing -> +inf
// ("unresolved").
double frc_resolution(const FrcCurve& curve, double spacing,
                      double threshold = 1.0 / 7.0);
inline constexpr double kUnresolved =
    std::numeric_limits<double>::infinity();

// Single-image FRC: complementary checkerboard subsamples (even vs odd
// diagonal, downsampled 2x on every axis), with the doubled spacing.
double single_image_frc(const NdImage& img, double spacing,
                        double threshold = 1.0 / 7.0);

// Greedy one-to-one instance matching by descending IoU; pairs with
// IoU >= iou_threshold are TP and AP = TP / (TP + FP + FN).
double average_precision(const LabelImage& pred, const LabelImage& truth,
                         double iou_threshold = 0.5);

// PSNR/SSIM between the two intensity images with voxels outside their
// respective label masks zeroed.
struct MaskedQuality {
  double psnr;
  double ssim;
};
MaskedQuality masked_quality(const NdImage& intensity_a,
                             const NdImage& intensity_b,
                             const LabelImage& labels_a,
                             const LabelImage& labels_b);

}  // namespace voxelkit::metrics
