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

#include "voxelkit/io.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <limits>
#include <vector>

#include <json.hpp>

namespace voxelkit::io {

namespace {

constexpr char kMagic[4] = {'N', 'D', 'I', 'V'};

const char* axes_for_rank(std::size_t rank) {
  switch (rank) {
    case 1: return "X";
    case 2: return "YX";
    case 3: return "ZYX";
    case 4: return "CZYX";
  }
  throw HeaderMismatch("unsupported rank " + std::to_string(rank));
}

Elem elem_from_string(const std::string& s) {
  if (s == "f32") return Elem::f32;
  if (s == "u16") return Elem::u16;
  if (s == "u32") return Elem::u32_label;
  if (s == "bool") return Elem::boolean;
  throw HeaderMismatch("unknown element kind '" + s + "'");
}

}  // namespace

void write_volume(const std::string& path, const NdImage& img) {
  nlohmann::json header;
  header["elem"] = to_string(img.elem());
  header["shape"] = img.shape();
  header["axes"] = axes_for_rank(img.rank());
  if (img.spacing()) header["spacing"] = *img.spacing();
  const std::string head = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out.write(kMagic, 4);
  const std::uint32_t len = static_cast<std::uint32_t>(head.size());
  const unsigned char len_le[4] = {
      static_cast<unsigned char>(len & 0xff),
      static_cast<unsigned char>((len >> 8) & 0xff),
      static_cast<unsigned char>((len >> 16) & 0xff),
      static_cast<unsigned char>((len >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(len_le), 4);
  out.write(head.data(), static_cast<std::streamsize>(head.size()));

  const std::size_t bytes = img.size() * elem_size(img.elem());
  const void* payload = nullptr;
  switch (img.elem()) {
    case Elem::f32: payload = img.values<float>().data(); break;
    case Elem::u16: payload = img.values<std::uint16_t>().data(); break;
    case Elem::u32_label: payload = img.values<std::uint32_t>().data(); break;
    case Elem::boolean: payload = img.values<std::uint8_t>().data(); break;
  }
  out.write(static_cast<const char*>(payload),
            static_cast<std::streamsize>(bytes));
  if (!out) throw Error("write to '" + path + "' failed");
}

NdImage read_volume(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  char magic[4];
  unsigned char len_le[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw BadMagic("'" + path + "' is not an NDIV volume");
  if (!in.read(reinterpret_cast<char*>(len_le), 4))
    throw HeaderMismatch("missing header length");
  const std::uint32_t len = static_cast<std::uint32_t>(len_le[0]) |
                            (static_cast<std::uint32_t>(len_le[1]) << 8) |
                            (static_cast<std::uint32_t>(len_le[2]) << 16) |
                            (static_cast<std::uint32_t>(len_le[3]) << 24);
  std::string head(len, '\0');
  if (!in.read(head.data(), len)) throw HeaderMismatch("truncated header");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(head);
  } catch (const nlohmann::json::exception& e) {
    throw HeaderMismatch(std::string("header is not valid JSON: ") + e.what());
  }
  if (!header.contains("elem") || !header.contains("shape") ||
      !header.contains("axes"))
    throw HeaderMismatch("header needs elem, shape and axes");
  const Elem elem = elem_from_string(header["elem"].get<std::string>());
  const Shape shape = header["shape"].get<Shape>();
  const std::string axes = header["axes"].get<std::string>();
  if (axes.size() != shape.size())
    throw HeaderMismatch("axes string length must equal rank");

  const std::size_t count = shape_volume(shape);
  const std::size_t bytes = count * elem_size(elem);
  std::vector<char> payload(bytes);
  in.read(payload.data(), static_cast<std::streamsize>(bytes));
  if (static_cast<std::size_t>(in.gcount()) != bytes)
    throw TruncatedPayload("expected " + std::to_string(bytes) +
                           " payload bytes in '" + path + "'");
  in.peek();
  if (!in.eof())
    throw TruncatedPayload("trailing bytes after payload in '" + path + "'");

  NdImage img;
  switch (elem) {
    case Elem::f32: {
      std::vector<float> v(count);
      std::memcpy(v.data(), payload.data(), bytes);
      img = NdImage::f32(shape, std::move(v));
      break;
    }
    case Elem::u16: {
      std::vector<std::uint16_t> v(count);
      std::memcpy(v.data(), payload.data(), bytes);
      img = NdImage::u16(shape, std::move(v));
      break;
    }
    case Elem::u32_label: {
      std::vector<std::uint32_t> v(count);
      std::memcpy(v.data(), payload.data(), bytes);
      img = NdImage::labels(shape, std::move(v));
      break;
    }
    case Elem::boolean: {
      std::vector<std::uint8_t> v(count);
      std::memcpy(v.data(), payload.data(), bytes);
      img = NdImage::boolean(shape, std::move(v));
      break;
    }
  }
  if (header.contains("spacing"))
    img = img.with_spacing(header["spacing"].get<std::vector<double>>());
  return img;
}

void export_slice(const NdImage& img, std::size_t axis, std::size_t index,
                  const std::string& path) {
  if (img.rank() != 3) throw ShapeMismatch("export_slice expects a 3D volume");
  if (axis > 2) throw Error("axis must be 0, 1 or 2");
  if (index >= img.extent(axis)) throw Error("slice index out of range");

  const NdImage src = img.as_f32();
  const auto v = src.f32_values();
  const auto strides = src.strides();
  std::size_t h_axis = (axis == 0) ? 1 : 0;
  std::size_t w_axis = (axis == 2) ? 1 : 2;
  const std::size_t h = src.extent(h_axis), w = src.extent(w_axis);

  float mn = std::numeric_limits<float>::max();
  float mx = std::numeric_limits<float>::lowest();
  std::vector<float> slice(h * w);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x) {
      const float val = v[index * strides[axis] + y * strides[h_axis] +
                          x * strides[w_axis]];
      slice[y * w + x] = val;
      mn = std::min(mn, val);
      mx = std::max(mx, val);
    }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << "P5\n" << w << " " << h << "\n255\n";
  const double scale = (mx > mn) ? 255.0 / (mx - mn) : 0.0;
  for (float val : slice) {
    const int g = static_cast<int>((val - mn) * scale + 0.5);
    out.put(static_cast<char>(std::clamp(g, 0, 255)));
  }
  if (!out) throw Error("write to '" + path + "' failed");
}

}  // namespace voxelkit::io
