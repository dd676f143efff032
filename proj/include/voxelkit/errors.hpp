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

#include <stdexcept>
#include <string>

namespace voxelkit {

// Base class for every error the library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define VOXELKIT_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                        \
   public:                                                           \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

// dispatch / containers
VOXELKIT_DEFINE_ERROR(MixedBackends);
VOXELKIT_DEFINE_ERROR(UnknownOperation);
VOXELKIT_DEFINE_ERROR(ShapeMismatch);

// volume file format
VOXELKIT_DEFINE_ERROR(BadMagic);
VOXELKIT_DEFINE_ERROR(HeaderMismatch);
VOXELKIT_DEFINE_ERROR(TruncatedPayload);

// synthetic data / PSF
VOXELKIT_DEFINE_ERROR(PlacementFailure);
VOXELKIT_DEFINE_ERROR(EvenExtent);

// filters
VOXELKIT_DEFINE_ERROR(KernelTooLarge);

// transform
VOXELKIT_DEFINE_ERROR(BadOrder);
VOXELKIT_DEFINE_ERROR(NonPositiveFactor);

// thresholding
VOXELKIT_DEFINE_ERROR(DegenerateImage);

// segmentation
VOXELKIT_DEFINE_ERROR(SeedOutsideMask);

// deconvolution
VOXELKIT_DEFINE_ERROR(NegativeInput);
VOXELKIT_DEFINE_ERROR(UnnormalizedPsf);

// metrics
VOXELKIT_DEFINE_ERROR(DegenerateReference);
VOXELKIT_DEFINE_ERROR(TooSmall);
VOXELKIT_DEFINE_ERROR(OddExtent);

#undef VOXELKIT_DEFINE_ERROR

}  // namespace voxelkit
