#include "lwrkit/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace lwr::fft {

namespace {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
using RealBuffer = std::unique_ptr<double[], FftwFree>;
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

RealBuffer real_buffer(std::size_t n) { return RealBuffer(fftw_alloc_real(n)); }
ComplexBuffer complex_buffer(std::size_t n) { return ComplexBuffer(fftw_alloc_complex(n)); }

// FFTW planning is not thread-safe; execution with new-array functions is.
// Plans are made once per length with FFTW_ESTIMATE (deterministic) and
// executed on fftw_malloc'd buffers so alignment always matches the plan.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, p] : forward_) fftw_destroy_plan(p);
    for (auto& [n, p] : inverse_) fftw_destroy_plan(p);
  }

  fftw_plan forward(std::size_t n) {
    std::lock_guard lock(mutex_);
    auto it = forward_.find(n);
    if (it != forward_.end()) return it->second;
    auto in = real_buffer(n);
    auto out = complex_buffer(n / 2 + 1);
    fftw_plan p = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE);
    if (!p) throw std::runtime_error("fft: planning failed");
    forward_.emplace(n, p);
    return p;
  }

  fftw_plan inverse(std::size_t n) {
    std::lock_guard lock(mutex_);
    auto it = inverse_.find(n);
    if (it != inverse_.end()) return it->second;
    auto in = complex_buffer(n / 2 + 1);
    auto out = real_buffer(n);
    fftw_plan p = fftw_plan_dft_c2r_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE);
    if (!p) throw std::runtime_error("fft: planning failed");
    inverse_.emplace(n, p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, fftw_plan> forward_;
  std::map<std::size_t, fftw_plan> inverse_;
};

PlanCache& plans() {
  static PlanCache cache;
  return cache;
}

}  // namespace

std::vector<std::complex<double>> forward_real(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("fft: need at least two samples");
  fftw_plan plan = plans().forward(n);
  auto in = real_buffer(n);
  auto out = complex_buffer(n / 2 + 1);
  std::copy(x.begin(), x.end(), in.get());
  fftw_execute_dft_r2c(plan, in.get(), out.get());
  std::vector<std::complex<double>> result(n / 2 + 1);
  for (std::size_t k = 0; k < result.size(); ++k) result[k] = {out[k][0], out[k][1]};
  return result;
}

std::vector<double> inverse_real(std::span<const std::complex<double>> half_spectrum, std::size_t n) {
  if (n < 2 || half_spectrum.size() != n / 2 + 1) throw std::invalid_argument("fft: spectrum size mismatch");
  fftw_plan plan = plans().inverse(n);
  auto in = complex_buffer(n / 2 + 1);
  auto out = real_buffer(n);
  for (std::size_t k = 0; k < half_spectrum.size(); ++k) {
    in[k][0] = half_spectrum[k].real();
    in[k][1] = half_spectrum[k].imag();
  }
  fftw_execute_dft_c2r(plan, in.get(), out.get());
  return std::vector<double>(out.get(), out.get() + n);
}

}  // namespace lwr::fft
