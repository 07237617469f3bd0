// Compiled with -mavx2 only; never called unless the CPU reports AVX2.
// No FMA: products and sums are rounded separately, as in the scalar path.

#include <immintrin.h>

#include "variants.hpp"

namespace lwr::kernels::avx2 {

namespace {

void correlate(const double* src, std::size_t n_out, const double* taps, std::size_t n_taps, double* dst) {
  std::size_t i = 0;
  for (; i + 4 <= n_out; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < n_taps; ++k) {
      const __m256d t = _mm256_set1_pd(taps[k]);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(t, _mm256_loadu_pd(src + i + k)));
    }
    _mm256_storeu_pd(dst + i, acc);
  }
  for (; i < n_out; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n_taps; ++k) acc = acc + taps[k] * src[i + k];
    dst[i] = acc;
  }
}

void squared_difference(const double* a, const double* b, std::size_t n, double* dst) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(dst + i, _mm256_mul_pd(d, d));
  }
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    dst[i] = d * d;
  }
}

void add_into(const double* src, std::size_t n, double* acc) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), _mm256_loadu_pd(src + i)));
  }
  for (; i < n; ++i) acc[i] = acc[i] + src[i];
}

void weighted_accumulate(const double* w, const double* v, std::size_t n, double* acc, double* wsum) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d wv = _mm256_loadu_pd(w + i);
    const __m256d prod = _mm256_mul_pd(wv, _mm256_loadu_pd(v + i));
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), prod));
    _mm256_storeu_pd(wsum + i, _mm256_add_pd(_mm256_loadu_pd(wsum + i), wv));
  }
  for (; i < n; ++i) {
    acc[i] = acc[i] + w[i] * v[i];
    wsum[i] = wsum[i] + w[i];
  }
}

void power_accumulate(const double* interleaved, std::size_t n, double scale, double* acc) {
  const __m256d s = _mm256_set1_pd(scale);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d a = _mm256_loadu_pd(interleaved + 2 * k);      // re0 im0 re1 im1
    const __m256d b = _mm256_loadu_pd(interleaved + 2 * k + 4);  // re2 im2 re3 im3
    // hadd -> |0|2|1|3| ordering, fixed by the lane permute.
    const __m256d sums = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
    const __m256d ordered = _mm256_permute4x64_pd(sums, 0xD8);
    _mm256_storeu_pd(acc + k, _mm256_add_pd(_mm256_loadu_pd(acc + k), _mm256_mul_pd(s, ordered)));
  }
  for (; k < n; ++k) {
    const double re = interleaved[2 * k];
    const double im = interleaved[2 * k + 1];
    acc[k] = acc[k] + scale * (re * re + im * im);
  }
}

void affine(const double* src, std::size_t n, double a, double b, double* dst) {
  const __m256d av = _mm256_set1_pd(a);
  const __m256d bv = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_mul_pd(av, _mm256_loadu_pd(src + i)), bv));
  }
  for (; i < n; ++i) dst[i] = a * src[i] + b;
}

void scaled_add(const double* src, std::size_t n, double a, double* acc) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), _mm256_mul_pd(av, _mm256_loadu_pd(src + i))));
  }
  for (; i < n; ++i) acc[i] = acc[i] + a * src[i];
}

constexpr KernelTable kTable{correlate, squared_difference, add_into, weighted_accumulate, power_accumulate, affine, scaled_add};

}  // namespace

const KernelTable& table() { return kTable; }

}  // namespace lwr::kernels::avx2
