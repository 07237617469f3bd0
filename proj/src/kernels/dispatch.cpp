#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "variants.hpp"

namespace lwr::kernels {

namespace {

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(LWRKIT_HAVE_AVX2_KERNELS)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(LWRKIT_HAVE_NEON_KERNELS)
      return true;  // mandatory on AArch64
#else
      return false;
#endif
  }
  return false;
}

Isa detect() {
  if (const char* env = std::getenv("LWRKIT_ISA")) {
    const std::string want(env);
    if (want == "scalar") return Isa::scalar;
    if (want == "avx2" && cpu_supports(Isa::avx2)) return Isa::avx2;
    if (want == "neon" && cpu_supports(Isa::neon)) return Isa::neon;
  }
  if (cpu_supports(Isa::avx2)) return Isa::avx2;
  if (cpu_supports(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

const KernelTable& active() { return table(current().load(std::memory_order_relaxed)); }

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("kernels: size mismatch in ") + what);
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

bool isa_available(Isa isa) { return cpu_supports(isa); }

bool force_isa(Isa isa) {
  if (!cpu_supports(isa)) return false;
  current().store(isa, std::memory_order_relaxed);
  return true;
}

const KernelTable& table(Isa isa) {
  switch (isa) {
#if defined(LWRKIT_HAVE_AVX2_KERNELS)
    case Isa::avx2: return avx2::table();
#endif
#if defined(LWRKIT_HAVE_NEON_KERNELS)
    case Isa::neon: return neon::table();
#endif
    default: return scalar::table();
  }
}

void correlate_valid(std::span<const double> padded, std::span<const double> taps, std::span<double> out) {
  require(!taps.empty() && padded.size() == out.size() + taps.size() - 1, "correlate_valid");
  active().correlate(padded.data(), out.size(), taps.data(), taps.size(), out.data());
}

void squared_difference(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  require(a.size() == b.size() && a.size() == out.size(), "squared_difference");
  active().squared_difference(a.data(), b.data(), a.size(), out.data());
}

void add_into(std::span<const double> src, std::span<double> acc) {
  require(src.size() == acc.size(), "add_into");
  active().add_into(src.data(), src.size(), acc.data());
}

void weighted_accumulate(std::span<const double> weights, std::span<const double> values, std::span<double> acc,
                         std::span<double> weight_sum) {
  require(weights.size() == values.size() && values.size() == acc.size() && acc.size() == weight_sum.size(),
          "weighted_accumulate");
  active().weighted_accumulate(weights.data(), values.data(), weights.size(), acc.data(), weight_sum.data());
}

void power_accumulate(std::span<const std::complex<double>> spectrum, double scale, std::span<double> acc) {
  require(spectrum.size() == acc.size(), "power_accumulate");
  // std::complex<double> is layout-compatible with double[2].
  active().power_accumulate(reinterpret_cast<const double*>(spectrum.data()), spectrum.size(), scale, acc.data());
}

void affine(std::span<const double> src, double a, double b, std::span<double> out) {
  require(src.size() == out.size(), "affine");
  active().affine(src.data(), src.size(), a, b, out.data());
}

void scaled_add(std::span<const double> src, double a, std::span<double> acc) {
  require(src.size() == acc.size(), "scaled_add");
  active().scaled_add(src.data(), src.size(), a, acc.data());
}

}  // namespace lwr::kernels
