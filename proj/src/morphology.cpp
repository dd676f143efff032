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

#include "voxelkit/morphology.hpp"

#include <algorithm>
#include <vector>

#include "voxelkit/parallel.hpp"
#include "voxelkit/registry.hpp"
#include "nd_utils.hpp"
#include "register_ops.hpp"

namespace voxelkit::morph {

namespace {

void require_mask(const NdImage& mask, const char* what) {
  if (mask.elem() != Elem::boolean)
    throw ShapeMismatch(std::string(what) + " expects a bool mask");
}

NdImage erode_or_dilate(const NdImage& mask, const StructuringElement& se,
                        bool erode, bool parallel) {
  const auto v = mask.values<std::uint8_t>();
  const Shape& shape = mask.shape();
  const auto packed = nd::pack_se(se, shape);
  std::vector<std::uint8_t> out(v.size());

  par::maybe_parallel(v.size(), parallel, [&](std::size_t lo, std::size_t hi) {
    std::vector<long> coords = nd::coords_at(shape, lo);
    for (std::size_t i = lo; i < hi; ++i) {
      bool result = erode;
      for (std::size_t k = 0; k < packed.linear.size(); ++k) {
        const bool inside = nd::offset_in_bounds(coords, packed.coords[k], shape);
        if (erode) {
          // out-of-bounds counts as background
          if (!inside || !v[i + packed.linear[k]]) {
            result = false;
            break;
          }
        } else {
          if (inside && v[i + packed.linear[k]]) {
            result = true;
            break;
          }
        }
      }
      out[i] = result;
      nd::advance_coords(coords, shape);
    }
  });
  return NdImage::boolean_like(mask, std::move(out));
}

NdImage morphology_kernel(const NdImage& mask, const StructuringElement& se,
                          MorphOp op, bool parallel) {
  require_mask(mask, "binary_morphology");
  if (se.rank != mask.rank())
    throw ShapeMismatch("structuring element rank mismatch");
  switch (op) {
    case MorphOp::erode: return erode_or_dilate(mask, se, true, parallel);
    case MorphOp::dilate: return erode_or_dilate(mask, se, false, parallel);
    case MorphOp::open:
      return erode_or_dilate(erode_or_dilate(mask, se, true, parallel), se,
                             false, parallel);
    case MorphOp::close:
      return erode_or_dilate(erode_or_dilate(mask, se, false, parallel), se,
                             true, parallel);
  }
  throw Error("unreachable morphology op");
}

NdImage fill_holes_kernel(const NdImage& mask, std::size_t max_hole_size) {
  require_mask(mask, "fill_holes");
  const auto v = mask.values<std::uint8_t>();
  const Shape& shape = mask.shape();
  const auto strides = nd::row_major_strides(shape);
  const std::size_t rank = shape.size();

  std::vector<std::uint8_t> out(v.begin(), v.end());
  std::vector<std::uint8_t> visited(v.size(), 0);
  std::vector<std::size_t> stack, component;

  for (std::size_t start = 0; start < v.size(); ++start) {
    if (!v[start] && !visited[start]) {
      // flood one background component, face connectivity
      bool touches_border = false;
      component.clear();
      stack.assign(1, start);
      visited[start] = 1;
      while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        component.push_back(i);
        const auto c = nd::coords_at(shape, i);
        for (std::size_t a = 0; a < rank; ++a) {
          if (c[a] == 0 || c[a] == static_cast<long>(shape[a]) - 1)
            touches_border = true;
          for (int dir = -1; dir <= 1; dir += 2) {
            const long nc = c[a] + dir;
            if (nc < 0 || nc >= static_cast<long>(shape[a])) continue;
            const std::size_t ni = static_cast<std::size_t>(
                static_cast<long>(i) + dir * static_cast<long>(strides[a]));
            if (!v[ni] && !visited[ni]) {
              visited[ni] = 1;
              stack.push_back(ni);
            }
          }
        }
      }
      if (!touches_border && component.size() <= max_hole_size)
        for (std::size_t i : component) out[i] = 1;
    }
  }
  return NdImage::boolean_like(mask, std::move(out));
}

LabelImage remove_small_kernel(const LabelImage& labels, std::size_t min_size) {
  if (labels.elem() != Elem::u32_label)
    throw ShapeMismatch("remove_small_objects expects a label image");
  const auto v = labels.values<std::uint32_t>();
  std::uint32_t max_id = 0;
  for (auto id : v) max_id = std::max(max_id, id);
  std::vector<std::size_t> sizes(max_id + 1, 0);
  for (auto id : v) ++sizes[id];

  std::vector<std::uint32_t> out(v.begin(), v.end());
  for (auto& id : out)
    if (id != 0 && sizes[id] < min_size) id = 0;
  return NdImage::labels_like(labels, std::move(out));
}

}  // namespace

NdImage binary_morphology(const NdImage& mask, const StructuringElement& se,
                          MorphOp op) {
  return dispatch<NdImage(const NdImage&, const StructuringElement&, MorphOp)>(
      "binary_morphology", mask, se, op);
}

NdImage fill_holes(const NdImage& mask, std::size_t max_hole_size) {
  return dispatch<NdImage(const NdImage&, std::size_t)>("fill_holes", mask,
                                                        max_hole_size);
}

LabelImage remove_small_objects(const LabelImage& labels,
                                std::size_t min_size) {
  return dispatch<LabelImage(const LabelImage&, std::size_t)>(
      "remove_small_objects", labels, min_size);
}

}  // namespace voxelkit::morph

namespace voxelkit::detail {

void register_morphology_ops(ExecutionRegistry& reg) {
  using MorphSig = NdImage(const NdImage&, const StructuringElement&, morph::MorphOp);
  using FillSig = NdImage(const NdImage&, std::size_t);
  using RemoveSig = LabelImage(const LabelImage&, std::size_t);

  reg.add<MorphSig>("binary_morphology", BackendId::reference,
                    [](const NdImage& m, const StructuringElement& se,
                       morph::MorphOp op) {
                      return morph::morphology_kernel(m, se, op, false);
                    });
  reg.add<MorphSig>("binary_morphology", BackendId::accelerated,
                    [](const NdImage& m, const StructuringElement& se,
                       morph::MorphOp op) {
                      return morph::morphology_kernel(m, se, op, true);
                    });
  // CC-based fills stay sequential; the dispatcher's fallback covers the
  // accelerated path.
  reg.add<FillSig>("fill_holes", BackendId::reference,
                   [](const NdImage& m, std::size_t max_size) {
                     return morph::fill_holes_kernel(m, max_size);
                   });
  reg.add<RemoveSig>("remove_small_objects", BackendId::reference,
                     [](const LabelImage& l, std::size_t min_size) {
                       return morph::remove_small_kernel(l, min_size);
                     });
}

}  // namespace voxelkit::detail
