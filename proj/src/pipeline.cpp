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

#include <algorithm>
#include <chrono>
#include <vector>

#include "voxelkit/core_ops.hpp"
#include "voxelkit/filters.hpp"
#include "voxelkit/morphology.hpp"
#include "voxelkit/registry.hpp"
#include "voxelkit/segmentation.hpp"
#include "voxelkit/threshold.hpp"
#include "voxelkit/transform.hpp"
#include "nd_utils.hpp"
#include "register_ops.hpp"

namespace voxelkit::seg {

namespace {

template <class F>
auto timed(StageTimes* times, const char* stage, F&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  auto result = fn();
  if (times) {
    const std::chrono::duration<double> dt =
        std::chrono::steady_clock::now() - t0;
    times->push_back({stage, dt.count()});
  }
  return result;
}

// Zeroes seed labels outside the mask, then renumbers surviving labels
// consecutively in scan order (plateau labels outside the mask, e.g. the
// background plateau of a distance field, drop out here).
LabelImage clip_and_renumber(const LabelImage& seeds, const NdImage& mask) {
  const auto s = seeds.values<std::uint32_t>();
  const auto m = mask.values<std::uint8_t>();
  std::uint32_t max_id = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (m[i]) max_id = std::max(max_id, s[i]);
  std::vector<std::uint32_t> remap(max_id + 1, 0);
  std::uint32_t next = 0;
  std::vector<std::uint32_t> out(s.size(), 0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!m[i] || s[i] == 0) continue;
    if (!remap[s[i]]) remap[s[i]] = ++next;
    out[i] = remap[s[i]];
  }
  return NdImage::labels_like(seeds, std::move(out));
}

// Per-label ball erosion, restricted to each label's padded bounding box.
// Voxels of other labels count as background, so touching nuclei erode apart
// instead of merging.
LabelImage erode_labels_ball(const LabelImage& labels, double radius) {
  const auto v = labels.values<std::uint32_t>();
  const Shape& shape = labels.shape();
  const auto strides = nd::row_major_strides(shape);
  const std::size_t rank = shape.size();

  std::uint32_t max_id = 0;
  for (auto id : v) max_id = std::max(max_id, id);
  std::vector<std::uint32_t> out(v.size(), 0);
  if (max_id == 0) return NdImage::labels_like(labels, std::move(out));

  // Bounding boxes per label.
  std::vector<std::vector<long>> lo(max_id + 1, std::vector<long>(rank, 0));
  std::vector<std::vector<long>> hi(max_id + 1, std::vector<long>(rank, -1));
  {
    std::vector<long> c(rank, 0);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::uint32_t id = v[i];
      if (id) {
        if (hi[id][0] < lo[id][0]) {
          lo[id] = c;
          hi[id] = c;
        } else {
          for (std::size_t a = 0; a < rank; ++a) {
            lo[id][a] = std::min(lo[id][a], c[a]);
            hi[id][a] = std::max(hi[id][a], c[a]);
          }
        }
      }
      nd::advance_coords(c, shape);
    }
  }

  const StructuringElement se = StructuringElement::ball(radius, rank);
  for (std::uint32_t id = 1; id <= max_id; ++id) {
    if (hi[id][0] < lo[id][0]) continue;
    std::vector<long> c(rank);
    // iterate the label's bbox
    std::vector<long> begin = lo[id], end = hi[id];
    c = begin;
    while (true) {
      std::size_t idx = 0;
      for (std::size_t a = 0; a < rank; ++a)
        idx += static_cast<std::size_t>(c[a]) * strides[a];
      if (v[idx] == id) {
        bool keep = true;
        for (const auto& off : se.offsets) {
          long nidx = static_cast<long>(idx);
          bool inside = true;
          for (std::size_t a = 0; a < rank; ++a) {
            const long nc = c[a] + off[a];
            if (nc < 0 || nc >= static_cast<long>(shape[a])) {
              inside = false;
              break;
            }
            nidx += off[a] * static_cast<long>(strides[a]);
          }
          if (!inside || v[static_cast<std::size_t>(nidx)] != id) {
            keep = false;
            break;
          }
        }
        if (keep) out[idx] = id;
      }
      // advance within bbox
      std::size_t a = rank;
      bool done = true;
      while (a-- > 0) {
        if (++c[a] <= end[a]) {
          done = false;
          break;
        }
        c[a] = begin[a];
      }
      if (done) break;
    }
  }
  return NdImage::labels_like(labels, std::move(out));
}

NdImage union_masks(const NdImage& a, const NdImage& b) {
  const auto va = a.values<std::uint8_t>();
  const auto vb = b.values<std::uint8_t>();
  std::vector<std::uint8_t> out(va.size());
  for (std::size_t i = 0; i < va.size(); ++i) out[i] = va[i] || vb[i];
  return NdImage::boolean_like(a, std::move(out));
}

std::vector<double> upscale_factors(const Shape& from, const Shape& to) {
  std::vector<double> f(from.size());
  for (std::size_t a = 0; a < from.size(); ++a)
    f[a] = static_cast<double>(to[a]) / static_cast<double>(from[a]);
  return f;
}

}  // namespace

LabelImage segment_nuclei(const NdImage& dna, StageTimes* timings) {
  if (dna.rank() != 3)
    throw ShapeMismatch("segment_nuclei expects a 3D single-channel volume");

  const NdImage norm = timed(timings, "normalize",
                             [&] { return normalize_minmax(dna); });
  const NdImage down = timed(timings, "downscale_0.5x", [&] {
    return transform::rescale(norm, 0.5, 1, true);
  });
  const NdImage med = timed(timings, "median_ball5", [&] {
    return filters::median(down, StructuringElement::ball(5, 3));
  });
  bool degenerate = false;
  const NdImage mask = timed(timings, "otsu_threshold", [&]() -> NdImage {
    // No objects after thresholding (e.g. the median flattened a noise-only
    // volume): return empty labels instead of failing.
    try {
      return thresh::apply_threshold(med, thresh::otsu_threshold(med));
    } catch (const DegenerateImage&) {
      degenerate = true;
      return NdImage::zeros(Elem::boolean, med.shape());
    }
  });
  if (degenerate)
    return NdImage::zeros(Elem::u32_label, dna.shape())
        .with_backend(dna.backend());
  const NdImage filled = timed(timings, "fill_holes_20", [&] {
    return morph::fill_holes(mask, 20);
  });
  const NdImage edt = timed(timings, "distance_transform", [&] {
    return distance_transform(filled);
  });
  const LabelImage seeds = timed(timings, "find_seeds_ball10", [&] {
    return clip_and_renumber(
        find_seeds(edt, StructuringElement::ball(10, 3)), filled);
  });
  const LabelImage basins = timed(timings, "watershed", [&] {
    return watershed(mul(edt, -1.0f), seeds, filled);
  });
  const LabelImage up = timed(timings, "upscale_labels", [&] {
    return transform::rescale(basins,
                              upscale_factors(basins.shape(), dna.shape()), 0,
                              false);
  });
  return timed(timings, "size_filter_50", [&] {
    return morph::remove_small_objects(up, 50);
  });
}

LabelImage segment_cells(const NdImage& membrane, const NdImage& mitochondria,
                         const NdImage& dna, const LabelImage& nuclei,
                         StageTimes* timings) {
  require_same_shape(membrane, mitochondria, "segment_cells");
  require_same_shape(membrane, dna, "segment_cells");
  require_same_shape(membrane, nuclei, "segment_cells");
  if (membrane.rank() != 3)
    throw ShapeMismatch("segment_cells expects 3D volumes");

  const NdImage mem_norm = normalize_minmax(membrane);

  // Membrane foreground: above the lowest of the 3-class thresholds, holes
  // removed without an area limit.
  const NdImage mem_mask = timed(timings, "membrane_multi_otsu", [&] {
    const auto ts = thresh::multi_otsu(mem_norm, 3);
    return morph::fill_holes(thresh::apply_threshold(mem_norm, ts[0]),
                             morph::kUnlimitedHoleSize);
  });

  // Monolayer mask from the combined channels at quarter resolution.
  const NdImage monolayer = timed(timings, "monolayer_mask", [&] {
    const NdImage mem_q = transform::rescale(mem_mask, 0.25, 0, false);
    const NdImage mito_q =
        transform::rescale(normalize_minmax(mitochondria), 0.25, 1, true);
    const NdImage dna_q =
        transform::rescale(normalize_minmax(dna), 0.25, 1, true);
    NdImage combined = union_masks(
        mem_q, thresh::apply_threshold(mito_q, thresh::otsu_threshold(mito_q)));
    combined = union_masks(
        combined, thresh::apply_threshold(dna_q, thresh::otsu_threshold(dna_q)));
    const NdImage closed = morph::binary_morphology(
        combined, StructuringElement::plane_disk(17), morph::MorphOp::close);
    return transform::rescale(
        closed, upscale_factors(closed.shape(), membrane.shape()), 0, false);
  });

  // Seeds: per-label erosion of the nuclei, clipped to the monolayer. Labels
  // keep their nucleus ids so each cell maps back to its nucleus.
  const LabelImage seeds = timed(timings, "seeds_eroded_nuclei", [&] {
    const LabelImage eroded = erode_labels_ball(nuclei, 5);
    const auto e = eroded.values<std::uint32_t>();
    const auto m = monolayer.values<std::uint8_t>();
    std::vector<std::uint32_t> clipped(e.size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (m[i]) clipped[i] = e[i];
    return NdImage::labels_like(eroded, std::move(clipped));
  });

  const LabelImage basins = timed(timings, "watershed", [&] {
    const NdImage landscape = add(mul(mem_norm, -1.0f), 1.0f);
    return watershed(landscape, seeds, monolayer);
  });

  return timed(timings, "size_filter_100", [&] {
    return morph::remove_small_objects(basins, 100);
  });
}

}  // namespace voxelkit::seg

namespace voxelkit::detail {

void register_segmentation_ops(ExecutionRegistry& reg) {
  seg::detail::register_distance_op(reg);
  seg::detail::register_labeling_ops(reg);
  seg::detail::register_watershed_op(reg);
}

}  // namespace voxelkit::detail
