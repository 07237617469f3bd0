#pragma once

#include <optional>
#include <vector>

#include "lwrkit/image.hpp"

namespace lwr {

struct Histogram {
  std::vector<double> centers;  ///< uniform over [0, 1]
  std::vector<double> counts;
  double total() const;
};

struct HistogramOptions {
  int bins = 256;
  /// Pixels this close to the raster border are left out.
  int border = 2;
};

/// Two-Gaussian grayscale histogram model. After canonicalization i1 < i2:
/// peak 1 is the darker (space) population, peak 2 the brighter (line) one.
struct HistogramFit {
  double m1 = 0.0, i1 = 0.0, s1 = 0.0;
  double m2 = 0.0, i2 = 0.0, s2 = 0.0;
  double residual = 0.0;  ///< RMS count residual
  bool converged = false;
  int iterations = 0;

  double evaluate(double intensity) const;
};

struct SnrReport {
  double linescan_snr = 0.0;
  std::optional<double> snr_db;
  HistogramFit fit;
  int bins = 0;
};

Histogram grayscale_histogram(const GrayImage& image, const HistogramOptions& options = {});

/// Two-Gaussian counts H(I) = M1 exp(-(I-I1)^2 / 2 s1^2) + M2 exp(-(I-I2)^2 / 2 s2^2).
std::vector<double> bimodal_counts(const HistogramFit& params, const std::vector<double>& centers);

/// Initial guess from the two tallest well-separated maxima of the 3-bin
/// smoothed histogram. Empty when fewer than two modes are found.
std::optional<HistogramFit> bimodal_initial_guess(const Histogram& histogram);

/// Initial guess from an Otsu split: class means, spreads and peak heights.
/// Works for unimodal-looking mixtures where the modes are not resolved.
HistogramFit otsu_initial_guess(const Histogram& histogram);

/// Least-squares fit of the two-Gaussian model. Throws when no init is given
/// and the histogram does not show two modes.
HistogramFit fit_bimodal(const Histogram& histogram, std::optional<HistogramFit> init = std::nullopt);

/// 2 (i2 - i1) / (s1 + s2) on a canonicalized fit.
double linescan_snr(const HistogramFit& fit);

/// 10 log10(signal_variance / noise_variance).
double snr_db(double signal_variance, double noise_variance);

/// |denoised - noisy| / noisy * 100.
double snr_delta(double snr_noisy, double snr_denoised);

/// Histogram, fit (two-mode init, Otsu fallback) and linescan SNR of an image.
SnrReport estimate_snr(const GrayImage& image, const HistogramOptions& options = {});

}  // namespace lwr
