#include "lwrkit/psd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "lwrkit/fft.hpp"
#include "lwrkit/fit.hpp"
#include "lwrkit/kernels.hpp"

namespace lwr {

namespace {

constexpr double kLn10 = std::numbers::ln10;
constexpr int kMinUsableBins = 16;
constexpr double kInitialHurst = 0.75;

std::vector<double> hann(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / n));
  return w;
}

// Trace lengths from EdgeSets can be odd after row rejection.
std::vector<std::vector<double>> even_length(std::span<const std::vector<double>> traces) {
  std::vector<std::vector<double>> out(traces.begin(), traces.end());
  for (auto& t : out) {
    if (t.size() % 2) t.pop_back();
  }
  return out;
}

}  // namespace

void PsdConfig::validate() const {
  if (low_freq_exclusion < 0) throw std::invalid_argument("PsdConfig: low_freq_exclusion must be >= 0");
  if (!(noise_band_fraction > 0.0 && noise_band_fraction < 0.5)) {
    throw std::invalid_argument("PsdConfig: noise_band_fraction must lie in (0, 0.5)");
  }
}

double PsdCurve::area() const { return std::accumulate(density.begin(), density.end(), 0.0) * df(); }

double PalasantzasFit::evaluate(double f) const {
  return palasantzas_model(f, psd0, xi, hurst, model, exponent_free) + noise_floor;
}

PsdCurve compute_psd(std::span<const std::vector<double>> traces, double pixel_size, const PsdConfig& config) {
  config.validate();
  if (traces.empty()) throw std::invalid_argument("compute_psd: no traces");
  if (!(pixel_size > 0.0)) throw std::invalid_argument("compute_psd: pixel size must be positive");
  const std::size_t n = traces.front().size();
  if (n < 64 || n % 2) throw std::invalid_argument("compute_psd: trace length must be even and >= 64");
  for (const auto& t : traces) {
    if (t.size() != n) throw std::invalid_argument("compute_psd: traces differ in length");
  }

  PsdCurve curve;
  curve.trace_length = static_cast<int>(n);
  curve.pixel_size = pixel_size;
  curve.n_traces_averaged = static_cast<int>(traces.size());
  curve.detrend = config.detrend;
  curve.window = config.window;
  const std::size_t bins = n / 2;
  curve.frequencies.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) curve.frequencies[k] = (k + 1) / (n * pixel_size);
  curve.density.assign(bins, 0.0);

  std::vector<double> window;
  double window_power = 1.0;
  if (config.window == Window::hann) {
    window = hann(n);
    window_power = std::inner_product(window.begin(), window.end(), window.begin(), 0.0) / n;
  }

  // density_k = 2 dx / N |X_k|^2 for 0 < k < N/2; the Nyquist bin has no
  // mirrored partner and carries dx / N |X|^2, which keeps Parseval exact.
  const double scale = 2.0 * pixel_size / (n * window_power) / static_cast<double>(traces.size());
  std::vector<double> work(n);
  for (const auto& trace : traces) {
    const double mean =
        config.detrend == Detrend::mean ? std::accumulate(trace.begin(), trace.end(), 0.0) / n : 0.0;
    for (std::size_t i = 0; i < n; ++i) work[i] = trace[i] - mean;
    if (!window.empty()) {
      for (std::size_t i = 0; i < n; ++i) work[i] *= window[i];
    }
    const auto spectrum = fft::forward_real(work);
    kernels::power_accumulate(std::span(spectrum).subspan(1, bins - 1), scale, std::span(curve.density).first(bins - 1));
    const double nyq = spectrum[bins].real();
    curve.density[bins - 1] += 0.5 * scale * nyq * nyq;
  }
  return curve;
}

UnbiasResult unbias(const PsdCurve& curve, double noise_floor) {
  if (!(noise_floor >= 0.0)) throw std::invalid_argument("unbias: noise floor must be >= 0");
  UnbiasResult out;
  out.curve = curve;
  for (auto& d : out.curve.density) d = std::max(d - noise_floor, 0.0);
  out.sigma_biased = std::sqrt(curve.area());
  out.sigma_unbiased = std::sqrt(out.curve.area());
  return out;
}

PalasantzasFit fit_palasantzas(const PsdCurve& curve, const PsdConfig& config, std::optional<PalasantzasFit> init) {
  config.validate();
  const bool free_exponent = config.model == PsdModel::palasantzas2;

  std::vector<double> f, logd;
  for (std::size_t k = static_cast<std::size_t>(config.low_freq_exclusion); k < curve.density.size(); ++k) {
    if (curve.density[k] > 0.0 && std::isfinite(curve.density[k])) {
      f.push_back(curve.frequencies[k]);
      logd.push_back(std::log10(curve.density[k]));
    }
  }
  if (static_cast<int>(f.size()) < kMinUsableBins) {
    throw std::invalid_argument("fit_palasantzas: fewer than 16 usable bins after exclusions");
  }
  const std::size_t m = f.size();
  const double d_max = *std::max_element(curve.density.begin(), curve.density.end());
  const double psd0_min = 1e-9 * d_max;
  const double floor_min = 1e-12 * d_max;

  // Seeds: floor from the top band, PSD(0) from the first included bins,
  // xi from the half-power crossing of the floor-corrected curve.
  PalasantzasFit seed;
  seed.model = config.model;
  if (init) {
    seed = *init;
    seed.model = config.model;
    if (free_exponent && !seed.exponent_free) seed.exponent_free = 2.0 * seed.hurst + 1.0;
  } else {
    const std::size_t band = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(config.noise_band_fraction * m)));
    double floor = 0.0;
    for (std::size_t i = m - band; i < m; ++i) floor += std::pow(10.0, logd[i]);
    floor /= static_cast<double>(band);
    double low = 0.0;
    const std::size_t n_low = std::min<std::size_t>(3, m);
    for (std::size_t i = 0; i < n_low; ++i) low += std::pow(10.0, logd[i]);
    low /= static_cast<double>(n_low);
    seed.noise_floor = std::max(floor, floor_min);
    seed.psd0 = std::max(low - floor, psd0_min);
    seed.hurst = kInitialHurst;
    if (free_exponent) seed.exponent_free = 2.0 * kInitialHurst + 1.0;
    const double power = kInitialHurst + 0.5;
    double f_half = f.back();
    for (std::size_t i = 0; i < m; ++i) {
      if (std::pow(10.0, logd[i]) - floor < 0.5 * seed.psd0) {
        f_half = f[i];
        break;
      }
    }
    seed.xi = std::sqrt(std::pow(2.0, 1.0 / power) - 1.0) / (2.0 * std::numbers::pi * f_half);
  }

  const double two_pi = 2.0 * std::numbers::pi;
  fit::ResidualFn residuals = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
    const double psd0 = std::exp(p[0]);
    const double xi = std::exp(p[1]);
    const double shape = std::exp(p[2]);  // hurst, or exponent_free - 1
    const double floor = std::exp(p[3]);
    const double power = free_exponent ? 0.5 * (1.0 + shape) : shape + 0.5;
    r.resize(static_cast<Eigen::Index>(m));
    if (jac) jac->resize(static_cast<Eigen::Index>(m), 4);
    for (std::size_t i = 0; i < m; ++i) {
      const double u = two_pi * f[i] * xi;
      const double base = 1.0 + u * u;
      const double model = psd0 * std::pow(base, -power);
      const double total = model + floor;
      r[static_cast<Eigen::Index>(i)] = logd[i] - std::log10(total);
      if (jac) {
        const double k = -1.0 / (kLn10 * total);
        const auto row = static_cast<Eigen::Index>(i);
        (*jac)(row, 0) = k * model;
        (*jac)(row, 1) = k * model * (-power) * 2.0 * u * u / base;
        // d(power)/d(log shape) is shape (model 1) or shape / 2 (model 2).
        (*jac)(row, 2) = k * model * (-std::log(base)) * (free_exponent ? 0.5 * shape : shape);
        (*jac)(row, 3) = k * floor;
      }
    }
  };

  const double extent = curve.trace_length * curve.pixel_size;
  fit::LmOptions options;
  options.max_iterations = 300;
  options.relative_tolerance = 1e-10;
  options.lower = Eigen::VectorXd(4);
  options.upper = Eigen::VectorXd(4);
  options.lower << std::log(psd0_min), std::log(0.01 * curve.pixel_size),
      free_exponent ? std::log(1e-3) : std::log(1e-3), std::log(floor_min);
  options.upper << std::log(1e6 * d_max), std::log(1e3 * extent), free_exponent ? std::log(20.0) : 0.0,
      std::log(1e3 * d_max);

  Eigen::VectorXd start(4);
  const double shape0 = free_exponent ? std::max(*seed.exponent_free - 1.0, 1e-3) : seed.hurst;
  start << std::log(std::max(seed.psd0, psd0_min)), std::log(seed.xi), std::log(shape0),
      std::log(std::max(seed.noise_floor, floor_min));
  for (Eigen::Index i = 0; i < 4; ++i) start[i] = std::clamp(start[i], options.lower[i], options.upper[i]);

  const auto result = fit::levenberg_marquardt(residuals, start, options);

  PalasantzasFit out;
  out.model = config.model;
  out.psd0 = std::exp(result.params[0]);
  out.xi = std::exp(result.params[1]);
  const double shape = std::exp(result.params[2]);
  if (free_exponent) {
    out.exponent_free = 1.0 + shape;
    out.hurst = std::clamp(0.5 * (out.exponent_free.value() - 1.0), 1e-3, 1.0);
  } else {
    out.hurst = shape;
  }
  out.noise_floor = std::exp(result.params[3]);
  out.fit_rms_log_residual = std::sqrt(result.sse / static_cast<double>(m));
  out.converged = result.converged;
  out.iterations = result.iterations;
  const auto unbiased = unbias(curve, out.noise_floor);
  out.sigma_biased = unbiased.sigma_biased;
  out.sigma_unbiased = unbiased.sigma_unbiased;
  return out;
}

RoughnessResult analyze_roughness(std::span<const std::vector<double>> traces, double pixel_size,
                                  const PsdConfig& config) {
  const auto even = even_length(traces);
  RoughnessResult result;
  result.biased = compute_psd(even, pixel_size, config);
  result.fit = fit_palasantzas(result.biased, config);
  result.unbiased = unbias(result.biased, result.fit.noise_floor).curve;
  return result;
}

RoughnessReport roughness_report(const EdgeSet& edges, const PsdConfig& config, bool per_line) {
  const auto edge_traces = edges.edge_traces();
  std::vector<std::vector<double>> widths;
  for (int l = 0; l < edges.n_lines(); ++l) widths.push_back(width_trace(edges, l));

  RoughnessReport report;
  report.ler = analyze_roughness(edge_traces, edges.pixel_size(), config);
  report.lwr = analyze_roughness(widths, edges.pixel_size(), config);
  if (per_line) {
    for (int l = 0; l < edges.n_lines(); ++l) {
      const std::vector<std::vector<double>> pair{edge_traces[2 * l], edge_traces[2 * l + 1]};
      report.per_line_ler.push_back(analyze_roughness(pair, edges.pixel_size(), config));
      report.per_line_lwr.push_back(analyze_roughness(std::span(widths).subspan(l, 1), edges.pixel_size(), config));
    }
  }
  return report;
}

}  // namespace lwr
