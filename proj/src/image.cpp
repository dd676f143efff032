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

#include "voxelkit/image.hpp"

#include <sstream>

namespace voxelkit {

const char* to_string(BackendId b) {
  return b == BackendId::reference ? "reference" : "accelerated";
}

const char* to_string(Elem e) {
  switch (e) {
    case Elem::f32: return "f32";
    case Elem::u16: return "u16";
    case Elem::u32_label: return "u32";
    case Elem::boolean: return "bool";
  }
  return "?";
}

std::size_t elem_size(Elem e) {
  switch (e) {
    case Elem::f32: return 4;
    case Elem::u16: return 2;
    case Elem::u32_label: return 4;
    case Elem::boolean: return 1;
  }
  return 0;
}

std::size_t shape_volume(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t e : shape) n *= e;
  return shape.empty() ? 0 : n;
}

std::string shape_to_string(const Shape& shape) {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < shape.size(); ++i)
    out << (i ? "," : "") << shape[i];
  out << "]";
  return out.str();
}

namespace {

template <class T>
std::shared_ptr<const void> make_buffer(std::vector<T> data) {
  auto holder = std::make_shared<const std::vector<T>>(std::move(data));
  return std::shared_ptr<const void>(holder, holder->data());
}

void check_shape(const Shape& shape, std::size_t count) {
  if (shape.empty())
    throw ShapeMismatch("image shape must have at least one axis");
  for (std::size_t e : shape)
    if (e == 0) throw ShapeMismatch("image extents must be positive");
  if (shape_volume(shape) != count) {
    std::ostringstream out;
    out << "buffer has " << count << " values but shape "
        << shape_to_string(shape) << " needs " << shape_volume(shape);
    throw ShapeMismatch(out.str());
  }
}

}  // namespace

template <class T>
void NdImage::check_elem() const {
  bool ok = false;
  if constexpr (std::is_same_v<T, float>) ok = elem_ == Elem::f32;
  else if constexpr (std::is_same_v<T, std::uint16_t>) ok = elem_ == Elem::u16;
  else if constexpr (std::is_same_v<T, std::uint32_t>) ok = elem_ == Elem::u32_label;
  else if constexpr (std::is_same_v<T, std::uint8_t>) ok = elem_ == Elem::boolean;
  if (!ok)
    throw ShapeMismatch(std::string("typed access does not match element kind ") +
                        to_string(elem_));
}

template void NdImage::check_elem<float>() const;
template void NdImage::check_elem<std::uint16_t>() const;
template void NdImage::check_elem<std::uint32_t>() const;
template void NdImage::check_elem<std::uint8_t>() const;

// Factories share this one initializer.
#define VOXELKIT_IMAGE_FACTORY(T, ELEM)                       \
  check_shape(shape, data.size());                            \
  NdImage img;                                                \
  img.shape_ = std::move(shape);                              \
  img.elem_ = ELEM;                                           \
  img.count_ = img.shape_.empty() ? 0 : shape_volume(img.shape_); \
  img.data_ = make_buffer<T>(std::move(data));                \
  return img;

NdImage NdImage::f32(Shape shape, std::vector<float> data) {
  VOXELKIT_IMAGE_FACTORY(float, Elem::f32)
}
NdImage NdImage::u16(Shape shape, std::vector<std::uint16_t> data) {
  VOXELKIT_IMAGE_FACTORY(std::uint16_t, Elem::u16)
}
NdImage NdImage::labels(Shape shape, std::vector<std::uint32_t> data) {
  VOXELKIT_IMAGE_FACTORY(std::uint32_t, Elem::u32_label)
}
NdImage NdImage::boolean(Shape shape, std::vector<std::uint8_t> data) {
  VOXELKIT_IMAGE_FACTORY(std::uint8_t, Elem::boolean)
}

#undef VOXELKIT_IMAGE_FACTORY

NdImage NdImage::zeros(Elem elem, const Shape& shape) {
  const std::size_t n = shape_volume(shape);
  switch (elem) {
    case Elem::f32: return f32(shape, std::vector<float>(n, 0.0f));
    case Elem::u16: return u16(shape, std::vector<std::uint16_t>(n, 0));
    case Elem::u32_label: return labels(shape, std::vector<std::uint32_t>(n, 0));
    case Elem::boolean: return boolean(shape, std::vector<std::uint8_t>(n, 0));
  }
  throw Error("unreachable element kind");
}

NdImage NdImage::f32_like(const NdImage& meta, std::vector<float> data) {
  NdImage img = f32(meta.shape(), std::move(data));
  img.backend_ = meta.backend_;
  img.spacing_ = meta.spacing_;
  return img;
}

NdImage NdImage::labels_like(const NdImage& meta, std::vector<std::uint32_t> data) {
  NdImage img = labels(meta.shape(), std::move(data));
  img.backend_ = meta.backend_;
  img.spacing_ = meta.spacing_;
  return img;
}

NdImage NdImage::boolean_like(const NdImage& meta, std::vector<std::uint8_t> data) {
  NdImage img = boolean(meta.shape(), std::move(data));
  img.backend_ = meta.backend_;
  img.spacing_ = meta.spacing_;
  return img;
}

std::vector<std::size_t> NdImage::strides() const {
  std::vector<std::size_t> s(shape_.size(), 1);
  for (std::size_t i = shape_.size(); i-- > 1;)
    s[i - 1] = s[i] * shape_[i];
  return s;
}

NdImage NdImage::as_f32() const {
  if (elem_ == Elem::f32) return *this;
  std::vector<float> out(count_);
  switch (elem_) {
    case Elem::u16: {
      auto v = values<std::uint16_t>();
      for (std::size_t i = 0; i < count_; ++i) out[i] = static_cast<float>(v[i]);
      break;
    }
    case Elem::u32_label: {
      auto v = values<std::uint32_t>();
      for (std::size_t i = 0; i < count_; ++i) out[i] = static_cast<float>(v[i]);
      break;
    }
    case Elem::boolean: {
      auto v = values<std::uint8_t>();
      for (std::size_t i = 0; i < count_; ++i) out[i] = v[i] ? 1.0f : 0.0f;
      break;
    }
    default: break;
  }
  return f32_like(*this, std::move(out));
}

NdImage NdImage::with_backend(BackendId target) const {
  if (target == backend_) return *this;
  NdImage img = *this;
  img.backend_ = target;
  return img;
}

NdImage NdImage::with_spacing(std::vector<double> spacing) const {
  if (spacing.size() != shape_.size())
    throw ShapeMismatch("spacing needs one entry per axis");
  for (double s : spacing)
    if (!(s > 0.0)) throw ShapeMismatch("spacing entries must be positive");
  NdImage img = *this;
  img.spacing_ = std::move(spacing);
  return img;
}

NdImage NdImage::without_spacing() const {
  NdImage img = *this;
  img.spacing_.reset();
  return img;
}

NdImage to_backend(const NdImage& img, BackendId target) {
  return img.with_backend(target);
}

}  // namespace voxelkit
