#pragma once

// Data-parallel inner loops used by rendering, denoising and spectral
// estimation. Every kernel has a scalar reference implementation and, where
// the target supports it, a SIMD variant. The variant is selected once at
// runtime from the CPU features; LWRKIT_ISA=scalar in the environment forces
// the reference path.
//
// All variants vectorize across independent outputs and keep the scalar
// operation order per output, so results are bit-identical across ISAs.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace lwr::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

/// ISA used by the dispatching wrappers below.
Isa active_isa();

/// True when `isa` can run on this machine and was compiled in.
bool isa_available(Isa isa);

/// Overrides the dispatch choice. Returns false (and changes nothing) when
/// the ISA is unavailable. Not thread-safe with concurrent kernel calls.
bool force_isa(Isa isa);

/// Raw function table; one per ISA.
struct KernelTable {
  // dst[i] = sum_k taps[k] * src[i + k], i in [0, n_out)
  void (*correlate)(const double* src, std::size_t n_out, const double* taps, std::size_t n_taps, double* dst);
  // dst[i] = (a[i] - b[i])^2
  void (*squared_difference)(const double* a, const double* b, std::size_t n, double* dst);
  // acc[i] += src[i]
  void (*add_into)(const double* src, std::size_t n, double* acc);
  // acc[i] += w[i] * v[i]; wsum[i] += w[i]
  void (*weighted_accumulate)(const double* w, const double* v, std::size_t n, double* acc, double* wsum);
  // acc[k] += scale * (re_k^2 + im_k^2) over interleaved complex input
  void (*power_accumulate)(const double* interleaved, std::size_t n, double scale, double* acc);
  // dst[i] = a * src[i] + b
  void (*affine)(const double* src, std::size_t n, double a, double b, double* dst);
  // acc[i] += a * src[i]
  void (*scaled_add)(const double* src, std::size_t n, double a, double* acc);
};

const KernelTable& table(Isa isa);

/// out[i] = sum_k taps[k] * padded[i + k]; requires padded.size() == out.size() + taps.size() - 1.
void correlate_valid(std::span<const double> padded, std::span<const double> taps, std::span<double> out);

void squared_difference(std::span<const double> a, std::span<const double> b, std::span<double> out);

void add_into(std::span<const double> src, std::span<double> acc);

void weighted_accumulate(std::span<const double> weights, std::span<const double> values, std::span<double> acc,
                         std::span<double> weight_sum);

void power_accumulate(std::span<const std::complex<double>> spectrum, double scale, std::span<double> acc);

void affine(std::span<const double> src, double a, double b, std::span<double> out);

void scaled_add(std::span<const double> src, double a, std::span<double> acc);

}  // namespace lwr::kernels
