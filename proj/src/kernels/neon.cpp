// AArch64 NEON variants (two doubles per register). vfmaq is avoided so the
// rounding sequence matches the scalar reference.

#include <arm_neon.h>

#include "variants.hpp"

namespace lwr::kernels::neon {

namespace {

void correlate(const double* src, std::size_t n_out, const double* taps, std::size_t n_taps, double* dst) {
  std::size_t i = 0;
  for (; i + 2 <= n_out; i += 2) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t k = 0; k < n_taps; ++k) {
      acc = vaddq_f64(acc, vmulq_f64(vdupq_n_f64(taps[k]), vld1q_f64(src + i + k)));
    }
    vst1q_f64(dst + i, acc);
  }
  for (; i < n_out; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n_taps; ++k) acc = acc + taps[k] * src[i + k];
    dst[i] = acc;
  }
}

void squared_difference(const double* a, const double* b, std::size_t n, double* dst) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    vst1q_f64(dst + i, vmulq_f64(d, d));
  }
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    dst[i] = d * d;
  }
}

void add_into(const double* src, std::size_t n, double* acc) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(acc + i, vaddq_f64(vld1q_f64(acc + i), vld1q_f64(src + i)));
  for (; i < n; ++i) acc[i] = acc[i] + src[i];
}

void weighted_accumulate(const double* w, const double* v, std::size_t n, double* acc, double* wsum) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t wv = vld1q_f64(w + i);
    vst1q_f64(acc + i, vaddq_f64(vld1q_f64(acc + i), vmulq_f64(wv, vld1q_f64(v + i))));
    vst1q_f64(wsum + i, vaddq_f64(vld1q_f64(wsum + i), wv));
  }
  for (; i < n; ++i) {
    acc[i] = acc[i] + w[i] * v[i];
    wsum[i] = wsum[i] + w[i];
  }
}

void power_accumulate(const double* interleaved, std::size_t n, double scale, double* acc) {
  const float64x2_t s = vdupq_n_f64(scale);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const float64x2x2_t z = vld2q_f64(interleaved + 2 * k);  // deinterleave re / im
    const float64x2_t p = vaddq_f64(vmulq_f64(z.val[0], z.val[0]), vmulq_f64(z.val[1], z.val[1]));
    vst1q_f64(acc + k, vaddq_f64(vld1q_f64(acc + k), vmulq_f64(s, p)));
  }
  for (; k < n; ++k) {
    const double re = interleaved[2 * k];
    const double im = interleaved[2 * k + 1];
    acc[k] = acc[k] + scale * (re * re + im * im);
  }
}

void affine(const double* src, std::size_t n, double a, double b, double* dst) {
  const float64x2_t av = vdupq_n_f64(a);
  const float64x2_t bv = vdupq_n_f64(b);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(dst + i, vaddq_f64(vmulq_f64(av, vld1q_f64(src + i)), bv));
  for (; i < n; ++i) dst[i] = a * src[i] + b;
}

void scaled_add(const double* src, std::size_t n, double a, double* acc) {
  const float64x2_t av = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(acc + i, vaddq_f64(vld1q_f64(acc + i), vmulq_f64(av, vld1q_f64(src + i))));
  for (; i < n; ++i) acc[i] = acc[i] + a * src[i];
}

constexpr KernelTable kTable{correlate, squared_difference, add_into, weighted_accumulate, power_accumulate, affine, scaled_add};

}  // namespace

const KernelTable& table() { return kTable; }

}  // namespace lwr::kernels::neon
