#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lwrkit/edges.hpp"
#include "lwrkit/palasantzas.hpp"

namespace lwr {

enum class Detrend { none, mean };
enum class Window { none, hann };

struct PsdConfig {
  int low_freq_exclusion = 3;        ///< lowest bins left out of the model fit
  double noise_band_fraction = 0.2;  ///< top fraction of bins seeding the noise floor
  Window window = Window::none;
  Detrend detrend = Detrend::mean;
  PsdModel model = PsdModel::palasantzas1;

  void validate() const;
};

/// One-sided roughness spectrum. Bin k (k = 1 .. L/2) sits at k / (L dx).
/// With no window, sum(density) * df equals the mean detrended trace variance.
struct PsdCurve {
  std::vector<double> frequencies;  ///< 1/nm
  std::vector<double> density;      ///< nm^3
  int n_traces_averaged = 0;
  int trace_length = 0;
  double pixel_size = 0.0;
  Detrend detrend = Detrend::mean;
  Window window = Window::none;

  double df() const { return 1.0 / (trace_length * pixel_size); }
  /// sum(density) * df, in nm^2.
  double area() const;
};

struct PalasantzasFit {
  double psd0 = 0.0;  ///< nm^3
  double xi = 0.0;    ///< nm
  double hurst = 0.0;
  std::optional<double> exponent_free;
  double noise_floor = 0.0;  ///< nm^3
  double sigma_biased = 0.0;
  double sigma_unbiased = 0.0;
  PsdModel model = PsdModel::palasantzas1;
  double fit_rms_log_residual = 0.0;
  bool converged = false;
  int iterations = 0;

  /// Model spectrum plus white floor at f.
  double evaluate(double f) const;
};

struct UnbiasResult {
  PsdCurve curve;
  double sigma_biased = 0.0;
  double sigma_unbiased = 0.0;
};

/// Averaged periodogram of equal-length traces (length even, >= 64).
PsdCurve compute_psd(std::span<const std::vector<double>> traces, double pixel_size, const PsdConfig& config = {});

/// Fits log10(density) with log10(model + floor) over the bins from
/// low_freq_exclusion on. Returns best-so-far parameters with converged=false
/// when 300 iterations are not enough.
PalasantzasFit fit_palasantzas(const PsdCurve& curve, const PsdConfig& config = {},
                               std::optional<PalasantzasFit> init = std::nullopt);

/// Removes a white floor bin-wise (clamped at zero) and integrates both curves.
UnbiasResult unbias(const PsdCurve& curve, double noise_floor);

struct RoughnessResult {
  PsdCurve biased;
  PsdCurve unbiased;
  PalasantzasFit fit;

  double sigma_biased() const { return fit.sigma_biased; }
  double sigma_unbiased() const { return fit.sigma_unbiased; }
  double three_sigma_biased() const { return 3.0 * fit.sigma_biased; }
  double three_sigma_unbiased() const { return 3.0 * fit.sigma_unbiased; }
};

struct RoughnessReport {
  RoughnessResult ler;  ///< all edges of all lines
  RoughnessResult lwr;  ///< all width traces
  std::vector<RoughnessResult> per_line_ler;
  std::vector<RoughnessResult> per_line_lwr;
};

/// Fit and unbias a curve in one step.
RoughnessResult analyze_roughness(std::span<const std::vector<double>> traces, double pixel_size,
                                  const PsdConfig& config);

RoughnessReport roughness_report(const EdgeSet& edges, const PsdConfig& config = {}, bool per_line = true);

}  // namespace lwr
