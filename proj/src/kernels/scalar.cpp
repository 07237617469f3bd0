#include "variants.hpp"

namespace lwr::kernels::scalar {

namespace {

void correlate(const double* src, std::size_t n_out, const double* taps, std::size_t n_taps, double* dst) {
  for (std::size_t i = 0; i < n_out; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n_taps; ++k) acc = acc + taps[k] * src[i + k];
    dst[i] = acc;
  }
}

void squared_difference(const double* a, const double* b, std::size_t n, double* dst) {
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    dst[i] = d * d;
  }
}

void add_into(const double* src, std::size_t n, double* acc) {
  for (std::size_t i = 0; i < n; ++i) acc[i] = acc[i] + src[i];
}

void weighted_accumulate(const double* w, const double* v, std::size_t n, double* acc, double* wsum) {
  for (std::size_t i = 0; i < n; ++i) {
    acc[i] = acc[i] + w[i] * v[i];
    wsum[i] = wsum[i] + w[i];
  }
}

void power_accumulate(const double* interleaved, std::size_t n, double scale, double* acc) {
  for (std::size_t k = 0; k < n; ++k) {
    const double re = interleaved[2 * k];
    const double im = interleaved[2 * k + 1];
    acc[k] = acc[k] + scale * (re * re + im * im);
  }
}

void affine(const double* src, std::size_t n, double a, double b, double* dst) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a * src[i] + b;
}

void scaled_add(const double* src, std::size_t n, double a, double* acc) {
  for (std::size_t i = 0; i < n; ++i) acc[i] = acc[i] + a * src[i];
}

constexpr KernelTable kTable{correlate, squared_difference, add_into, weighted_accumulate, power_accumulate, affine, scaled_add};

}  // namespace

const KernelTable& table() { return kTable; }

}  // namespace lwr::kernels::scalar
