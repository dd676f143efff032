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

#include "voxelkit/core_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "voxelkit/parallel.hpp"
#include "voxelkit/registry.hpp"
#include "register_ops.hpp"

namespace voxelkit {

namespace {

inline float apply(EwOp op, float a, float b) {
  switch (op) {
    case EwOp::add: return a + b;
    case EwOp::sub: return a - b;
    case EwOp::mul: return a * b;
    case EwOp::div: {
      double d = b;
      if (std::abs(d) < kDivEpsilon) d = std::copysign(kDivEpsilon, d);
      return static_cast<float>(static_cast<double>(a) / d);
    }
    case EwOp::max: return std::max(a, b);
    case EwOp::min: return std::min(a, b);
  }
  return 0.0f;
}

NdImage normalize_kernel(const NdImage& img, bool parallel) {
  const NdImage src = img.as_f32();
  const auto v = src.f32_values();
  const std::size_t n = v.size();

  // min/max are exact reductions, so chunked partials merge bit-identically.
  const int threads = parallel ? par::max_threads() : 1;
  const std::size_t chunks = par::chunk_count(n, threads);
  std::vector<float> lo(chunks, std::numeric_limits<float>::max());
  std::vector<float> hi(chunks, std::numeric_limits<float>::lowest());
  par::run_chunks(n, threads, [&](std::size_t c, std::size_t b, std::size_t e) {
    float mn = v[b], mx = v[b];
    for (std::size_t i = b; i < e; ++i) {
      mn = std::min(mn, v[i]);
      mx = std::max(mx, v[i]);
    }
    lo[c] = mn;
    hi[c] = mx;
  });
  float mn = lo[0], mx = hi[0];
  for (std::size_t c = 1; c < chunks; ++c) {
    mn = std::min(mn, lo[c]);
    mx = std::max(mx, hi[c]);
  }

  std::vector<float> out(n);
  if (mx > mn) {
    const double base = mn, range = static_cast<double>(mx) - mn;
    par::maybe_parallel(n, parallel, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i)
        out[i] = static_cast<float>((v[i] - base) / range);
    });
  }
  return NdImage::f32_like(src, std::move(out));
}

NdImage elementwise_kernel(EwOp op, const NdImage& a, const NdImage& b,
                           bool parallel) {
  require_same_shape(a, b, "elementwise");
  const NdImage fa = a.as_f32(), fb = b.as_f32();
  const auto va = fa.f32_values(), vb = fb.f32_values();
  std::vector<float> out(va.size());
  par::maybe_parallel(va.size(), parallel, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) out[i] = apply(op, va[i], vb[i]);
  });
  return NdImage::f32_like(fa, std::move(out));
}

NdImage elementwise_scalar_kernel(EwOp op, const NdImage& a, float b,
                                  bool parallel) {
  const NdImage fa = a.as_f32();
  const auto va = fa.f32_values();
  std::vector<float> out(va.size());
  par::maybe_parallel(va.size(), parallel, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) out[i] = apply(op, va[i], b);
  });
  return NdImage::f32_like(fa, std::move(out));
}

}  // namespace

NdImage normalize_minmax(const NdImage& img) {
  return dispatch<NdImage(const NdImage&)>("normalize_minmax", img);
}

NdImage elementwise(EwOp op, const NdImage& a, const NdImage& b) {
  return dispatch<NdImage(EwOp, const NdImage&, const NdImage&)>("elementwise",
                                                                 op, a, b);
}

NdImage elementwise(EwOp op, const NdImage& a, float b) {
  return dispatch<NdImage(EwOp, const NdImage&, float)>("elementwise_scalar",
                                                        op, a, b);
}

namespace detail {

void register_core_ops(ExecutionRegistry& reg) {
  using Unary = NdImage(const NdImage&);
  using Binary = NdImage(EwOp, const NdImage&, const NdImage&);
  using Scalar = NdImage(EwOp, const NdImage&, float);

  reg.add<Unary>("normalize_minmax", BackendId::reference,
                 [](const NdImage& img) { return normalize_kernel(img, false); });
  reg.add<Unary>("normalize_minmax", BackendId::accelerated,
                 [](const NdImage& img) { return normalize_kernel(img, true); });

  reg.add<Binary>("elementwise", BackendId::reference,
                  [](EwOp op, const NdImage& a, const NdImage& b) {
                    return elementwise_kernel(op, a, b, false);
                  });
  reg.add<Binary>("elementwise", BackendId::accelerated,
                  [](EwOp op, const NdImage& a, const NdImage& b) {
                    return elementwise_kernel(op, a, b, true);
                  });

  reg.add<Scalar>("elementwise_scalar", BackendId::reference,
                  [](EwOp op, const NdImage& a, float b) {
                    return elementwise_scalar_kernel(op, a, b, false);
                  });
  reg.add<Scalar>("elementwise_scalar", BackendId::accelerated,
                  [](EwOp op, const NdImage& a, float b) {
                    return elementwise_scalar_kernel(op, a, b, true);
                  });
}

}  // namespace detail

}  // namespace voxelkit
