// Brute-force reference implementations used as test oracles. Everything in
// this header is deliberately independent of the library's algorithms:
// direct loops, exhaustive searches, and permutation enumeration only.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "voxelkit/image.hpp"
#include "voxelkit/structuring.hpp"

namespace oracle {

using voxelkit::Shape;

// Deterministic draws on top of mt19937_64 (std distributions are
// implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }
  std::uint64_t next_u64() { return gen_(); }
  double normal() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  std::mt19937_64 gen_;
};

inline std::vector<float> random_values(const Shape& shape, std::uint64_t seed,
                                        float lo = 0.0f, float hi = 1.0f) {
  Rng rng(seed);
  std::vector<float> v(voxelkit::shape_volume(shape));
  for (auto& x : v) x = static_cast<float>(rng.uniform(lo, hi));
  return v;
}

inline std::vector<std::uint8_t> random_mask(const Shape& shape,
                                             std::uint64_t seed,
                                             double fg_prob = 0.5) {
  Rng rng(seed);
  std::vector<std::uint8_t> v(voxelkit::shape_volume(shape));
  for (auto& x : v) x = rng.uniform01() < fg_prob;
  return v;
}

inline double max_abs_diff(std::span<const float> a, std::span<const float> b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(static_cast<double>(a[i]) - b[i]));
  return m;
}

inline double max_abs(std::span<const float> v) {
  double m = 0;
  for (float x : v) m = std::max(m, std::abs(static_cast<double>(x)));
  return m;
}

// ------------------------------------------------------------ convolution

// Mirror index (edge not repeated), same convention the library documents.
inline long mirror(long i, long n) {
  if (n == 1) return 0;
  const long period = 2 * (n - 1);
  long m = i % period;
  if (m < 0) m += period;
  return m >= n ? period - m : m;
}

// Dense 1D convolution with mirror boundary.
inline std::vector<double> convolve_1d_mirror(const std::vector<double>& x,
                                              const std::vector<double>& k) {
  const long n = static_cast<long>(x.size());
  const long half = static_cast<long>(k.size() / 2);
  std::vector<double> out(n, 0.0);
  for (long i = 0; i < n; ++i)
    for (long j = -half; j <= half; ++j)
      out[i] += k[j + half] * x[mirror(i + j, n)];
  return out;
}

// Direct 'same'-size 3D linear convolution, zero padding, kernel center at
// (extent-1)/2 per axis.
inline std::vector<float> convolve_3d_same(const std::vector<float>& img,
                                           const Shape& is,
                                           const std::vector<float>& ker,
                                           const Shape& ks) {
  std::vector<float> out(img.size(), 0.0f);
  const long cz = (static_cast<long>(ks[0]) - 1) / 2;
  const long cy = (static_cast<long>(ks[1]) - 1) / 2;
  const long cx = (static_cast<long>(ks[2]) - 1) / 2;
  for (long z = 0; z < static_cast<long>(is[0]); ++z)
    for (long y = 0; y < static_cast<long>(is[1]); ++y)
      for (long x = 0; x < static_cast<long>(is[2]); ++x) {
        double acc = 0;
        for (long kz = 0; kz < static_cast<long>(ks[0]); ++kz)
          for (long ky = 0; ky < static_cast<long>(ks[1]); ++ky)
            for (long kx = 0; kx < static_cast<long>(ks[2]); ++kx) {
              const long sz = z - (kz - cz), sy = y - (ky - cy),
                         sx = x - (kx - cx);
              if (sz < 0 || sz >= static_cast<long>(is[0]) || sy < 0 ||
                  sy >= static_cast<long>(is[1]) || sx < 0 ||
                  sx >= static_cast<long>(is[2]))
                continue;
              acc += static_cast<double>(
                         ker[(kz * ks[1] + ky) * ks[2] + kx]) *
                     img[(sz * is[1] + sy) * is[2] + sx];
            }
        out[(z * is[1] + y) * is[2] + x] = static_cast<float>(acc);
      }
  return out;
}

// ------------------------------------------------------------------ median

inline std::vector<float> median_filter_direct(
    const std::vector<float>& img, const Shape& shape,
    const voxelkit::StructuringElement& se) {
  std::vector<float> out(img.size());
  const long nz = shape.size() == 3 ? static_cast<long>(shape[0]) : 1;
  const Shape s3 = shape.size() == 3 ? shape : Shape{1, shape[0], shape[1]};
  for (long z = 0; z < nz; ++z)
    for (long y = 0; y < static_cast<long>(s3[1]); ++y)
      for (long x = 0; x < static_cast<long>(s3[2]); ++x) {
        std::vector<float> neigh;
        for (const auto& off : se.offsets) {
          const long oz = se.rank == 3 ? off[0] : 0;
          const long oy = se.rank == 3 ? off[1] : off[0];
          const long ox = se.rank == 3 ? off[2] : off[1];
          const long zz = z + oz, yy = y + oy, xx = x + ox;
          if (zz < 0 || zz >= nz || yy < 0 ||
              yy >= static_cast<long>(s3[1]) || xx < 0 ||
              xx >= static_cast<long>(s3[2]))
            continue;
          neigh.push_back(img[(zz * s3[1] + yy) * s3[2] + xx]);
        }
        std::sort(neigh.begin(), neigh.end());
        out[(z * s3[1] + y) * s3[2] + x] = neigh[(neigh.size() - 1) / 2];
      }
  return out;
}

// --------------------------------------------------------------------- EDT

// O(n^2) exact nearest-background search.
inline std::vector<float> edt_direct(const std::vector<std::uint8_t>& mask,
                                     const Shape& shape,
                                     const std::vector<double>& spacing) {
  std::vector<std::vector<long>> coords;
  {
    std::vector<long> c(shape.size(), 0);
    for (std::size_t i = 0; i < mask.size(); ++i) {
      coords.push_back(c);
      for (std::size_t a = shape.size(); a-- > 0;) {
        if (static_cast<std::size_t>(++c[a]) < shape[a]) break;
        c[a] = 0;
      }
    }
  }
  std::vector<std::size_t> background;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (!mask[i]) background.push_back(i);

  std::vector<float> out(mask.size(), 0.0f);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t b : background) {
      double d2 = 0;
      for (std::size_t a = 0; a < shape.size(); ++a) {
        const double d = (coords[i][a] - coords[b][a]) * spacing[a];
        d2 += d * d;
      }
      best = std::min(best, d2);
    }
    out[i] = static_cast<float>(std::sqrt(best));
  }
  return out;
}

// -------------------------------------------------------------------- otsu

// Exhaustive two-class search straight from the histogram definition.
inline float otsu_direct(const std::vector<float>& values, int bins = 256) {
  float mn = values[0], mx = values[0];
  for (float v : values) {
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  const double width = (static_cast<double>(mx) - mn) / bins;
  std::vector<double> hist(bins, 0);
  for (float v : values) {
    int b = static_cast<int>((v - mn) / width);
    b = std::clamp(b, 0, bins - 1);
    hist[b] += 1;
  }
  double best = -1;
  int best_k = 1;
  for (int k = 1; k < bins; ++k) {
    double w0 = 0, w1 = 0, m0 = 0, m1 = 0;
    for (int b = 0; b < k; ++b) {
      w0 += hist[b];
      m0 += hist[b] * b;
    }
    for (int b = k; b < bins; ++b) {
      w1 += hist[b];
      m1 += hist[b] * b;
    }
    if (w0 == 0 || w1 == 0) continue;
    m0 /= w0;
    m1 /= w1;
    const double score = w0 * w1 * (m0 - m1) * (m0 - m1);
    if (score > best) {
      best = score;
      best_k = k;
    }
  }
  return static_cast<float>(mn + width * best_k);
}

// Exhaustive three-class search, O(bins^2).
inline std::vector<float> multi_otsu3_direct(const std::vector<float>& values,
                                             int bins = 256) {
  float mn = values[0], mx = values[0];
  for (float v : values) {
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  const double width = (static_cast<double>(mx) - mn) / bins;
  std::vector<double> hist(bins, 0);
  for (float v : values) {
    int b = static_cast<int>((v - mn) / width);
    b = std::clamp(b, 0, bins - 1);
    hist[b] += 1;
  }
  double total = 0, total_mean = 0;
  for (int b = 0; b < bins; ++b) {
    total += hist[b];
    total_mean += hist[b] * b;
  }
  total_mean /= total;

  double best = -1;
  int best_k1 = 1, best_k2 = 2;
  for (int k1 = 1; k1 < bins - 1; ++k1) {
    for (int k2 = k1 + 1; k2 < bins; ++k2) {
      double score = 0;
      const int edges[4] = {0, k1, k2, bins};
      for (int c = 0; c < 3; ++c) {
        double w = 0, m = 0;
        for (int b = edges[c]; b < edges[c + 1]; ++b) {
          w += hist[b];
          m += hist[b] * b;
        }
        if (w == 0) continue;
        m /= w;
        score += w * (m - total_mean) * (m - total_mean);
      }
      if (score > best) {
        best = score;
        best_k1 = k1;
        best_k2 = k2;
      }
    }
  }
  return {static_cast<float>(mn + width * best_k1),
          static_cast<float>(mn + width * best_k2)};
}

// --------------------------------------------------------- label matching

// AP with exhaustive optimal one-to-one matching (permutations; needs the
// smaller side <= ~6 instances).
inline double ap_optimal(const std::vector<std::uint32_t>& pred,
                         const std::vector<std::uint32_t>& truth,
                         double iou_threshold) {
  std::set<std::uint32_t> pset(pred.begin(), pred.end());
  std::set<std::uint32_t> tset(truth.begin(), truth.end());
  pset.erase(0);
  tset.erase(0);
  std::vector<std::uint32_t> pid(pset.begin(), pset.end());
  std::vector<std::uint32_t> tid(tset.begin(), tset.end());
  if (pid.empty() && tid.empty()) return 1.0;
  if (pid.empty() || tid.empty()) return 0.0;

  auto iou = [&](std::uint32_t p, std::uint32_t t) {
    std::size_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      const bool a = pred[i] == p, b = truth[i] == t;
      inter += a && b;
      uni += a || b;
    }
    return uni ? static_cast<double>(inter) / uni : 0.0;
  };

  // try every assignment of predictions to truths, maximize TP count
  std::vector<std::size_t> order(tid.size());
  std::iota(order.begin(), order.end(), 0);
  std::size_t best_tp = 0;
  do {
    std::size_t tp = 0;
    for (std::size_t i = 0; i < std::min(pid.size(), tid.size()); ++i)
      if (iou(pid[i], tid[order[i]]) >= iou_threshold) ++tp;
    best_tp = std::max(best_tp, tp);
  } while (std::next_permutation(order.begin(), order.end()));

  if (pid.size() > tid.size()) {
    // permute predictions instead so every pairing is reachable
    std::vector<std::size_t> porder(pid.size());
    std::iota(porder.begin(), porder.end(), 0);
    do {
      std::size_t tp = 0;
      for (std::size_t i = 0; i < tid.size(); ++i)
        if (iou(pid[porder[i]], tid[i]) >= iou_threshold) ++tp;
      best_tp = std::max(best_tp, tp);
    } while (std::next_permutation(porder.begin(), porder.end()));
  }

  const std::size_t fp = pid.size() - best_tp, fn = tid.size() - best_tp;
  return static_cast<double>(best_tp) /
         static_cast<double>(best_tp + fp + fn);
}

}  // namespace oracle
