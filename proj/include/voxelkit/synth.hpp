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

#include <cstdint>

#include "voxelkit/image.hpp"

namespace voxelkit::synth {

// Synthetic ground-truth volume description. Same spec => same output,
// bit for bit, on every platform.
struct SynthSpec {
  Shape shape{32, 128, 128};     // ZYX
  std::size_t n_objects = 20;
  double radius_min = 6.0;       // voxels, in-plane
  double radius_max = 10.0;
  std::uint64_t seed = 0;
  double noise_sigma = 0.05;     // fraction of the clean dynamic range
  double anisotropy = 1.0;       // z spacing / xy spacing
  // Extra Y/X placement margin. Phantoms for the cell pipeline need their
  // content clear of the border erosion of the quarter-scale disk-17
  // closing (68 full-resolution voxels).
  double inplane_margin = 0.0;
};

struct BlobVolume {
  NdImage intensity;   // f32, soft-edged ellipsoids + Gaussian noise
  LabelImage labels;   // exact instance labels 1..n_objects
};

// Pairwise non-overlapping ellipsoids with a 2-voxel cosine edge taper.
// Throws PlacementFailure when the objects cannot be placed without overlap
// after bounded retries.
BlobVolume generate_blobs(const SynthSpec& spec);

// Separable Gaussian PSF on an odd-extent grid, centered, unit sum.
NdImage gaussian_psf(const Shape& shape, std::vector<double> sigmas);

// Three-channel stand-in for a membrane / mitochondria / DNA monolayer
// acquisition: DNA = blob intensity, membrane = shells around each blob,
// mitochondria = diffuse interior signal. Nuclei ground truth included.
struct MonolayerPhantom {
  NdImage membrane;
  NdImage mitochondria;
  NdImage dna;
  LabelImage nuclei;
};

MonolayerPhantom generate_monolayer_phantom(const SynthSpec& spec);

}  // namespace voxelkit::synth
