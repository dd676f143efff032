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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "voxelkit/errors.hpp"

namespace voxelkit {

// Execution target carried by every image. `accelerated` is the parallel
// CPU backend; ops dispatch on this tag and fall back to `reference` when no
// accelerated kernel exists.
enum class BackendId : int { reference = 0, accelerated = 1 };

enum class Elem { f32, u16, u32_label, boolean };

const char* to_string(BackendId b);
const char* to_string(Elem e);
std::size_t elem_size(Elem e);

using Shape = std::vector<std::size_t>;

std::size_t shape_volume(const Shape& shape);
std::string shape_to_string(const Shape& shape);

// Immutable N-dimensional image. Axes are in ZYX (3D) or YX (2D) order and
// the buffer is contiguous row-major; every operation returns a new NdImage.
// Copies are cheap: the pixel buffer is shared, never mutated.
class NdImage {
 public:
  NdImage() = default;

  static NdImage f32(Shape shape, std::vector<float> data);
  static NdImage u16(Shape shape, std::vector<std::uint16_t> data);
  static NdImage labels(Shape shape, std::vector<std::uint32_t> data);
  static NdImage boolean(Shape shape, std::vector<std::uint8_t> data);
  static NdImage zeros(Elem elem, const Shape& shape);

  // New f32 image that inherits shape, spacing and backend from `meta`.
  static NdImage f32_like(const NdImage& meta, std::vector<float> data);
  static NdImage labels_like(const NdImage& meta, std::vector<std::uint32_t> data);
  static NdImage boolean_like(const NdImage& meta, std::vector<std::uint8_t> data);

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return count_; }
  std::size_t extent(std::size_t axis) const { return shape_[axis]; }
  Elem elem() const { return elem_; }
  BackendId backend() const { return backend_; }
  const std::optional<std::vector<double>>& spacing() const { return spacing_; }
  bool empty() const { return count_ == 0; }

  // Row-major strides, in voxels.
  std::vector<std::size_t> strides() const;

  template <class T>
  std::span<const T> values() const {
    check_elem<T>();
    return {static_cast<const T*>(data_.get()), count_};
  }
  std::span<const float> f32_values() const { return values<float>(); }

  // Copy of the buffer for element-kind T (no conversion).
  template <class T>
  std::vector<T> copy_values() const {
    auto v = values<T>();
    return {v.begin(), v.end()};
  }

  // Promotes u16 / bool / labels to f32; f32 input is returned as-is
  // (shared buffer).
  NdImage as_f32() const;

  // Same image, different metadata. Buffers are shared, never copied.
  NdImage with_backend(BackendId target) const;
  NdImage with_spacing(std::vector<double> spacing) const;
  NdImage without_spacing() const;

  bool same_shape(const NdImage& other) const { return shape_ == other.shape_; }

  // True when both images share one buffer (used by transfer tests).
  bool shares_buffer_with(const NdImage& other) const {
    return data_ == other.data_;
  }

 private:
  template <class T>
  void check_elem() const;

  Shape shape_;
  Elem elem_ = Elem::f32;
  BackendId backend_ = BackendId::reference;
  std::shared_ptr<const void> data_;
  std::size_t count_ = 0;
  std::optional<std::vector<double>> spacing_;
};

// Integer-labeled segmentation result; 0 is background. Stored as an NdImage
// with elem == u32_label.
using LabelImage = NdImage;

// Transfers an image to `target`. Value-preserving and involutive; the
// buffer is immutable, so the transfer shares it and only the tag changes.
NdImage to_backend(const NdImage& img, BackendId target);

inline void require_same_shape(const NdImage& a, const NdImage& b,
                               const char* what) {
  if (!a.same_shape(b))
    throw ShapeMismatch(std::string(what) + ": " + shape_to_string(a.shape()) +
                        " vs " + shape_to_string(b.shape()));
}

}  // namespace voxelkit
