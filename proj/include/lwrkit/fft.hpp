#pragma once

#include <complex>
#include <span>
#include <vector>

namespace lwr::fft {

/// Unnormalized forward DFT of a real sequence: X_k = sum_n x_n e^{-2 pi i k n / N},
/// k = 0 .. N/2. Thread-safe.
std::vector<std::complex<double>> forward_real(std::span<const double> x);

/// Unnormalized inverse of forward_real for a length-n real sequence:
/// x_n = sum over the full Hermitian spectrum of X_k e^{+2 pi i k n / N}.
/// `half_spectrum` must hold n/2 + 1 bins. Thread-safe.
std::vector<double> inverse_real(std::span<const std::complex<double>> half_spectrum, std::size_t n);

}  // namespace lwr::fft
