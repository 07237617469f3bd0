#include "lwrkit/snr.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "lwrkit/fit.hpp"

namespace lwr {

namespace {

constexpr double kHwhmToSigma = 0.8493218002880191;  // 1 / sqrt(2 ln 2)

double bin_width(const Histogram& h) { return 1.0 / static_cast<double>(h.counts.size()); }

std::vector<double> smooth3(const std::vector<double>& c) {
  std::vector<double> s(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double left = i > 0 ? c[i - 1] : c[i];
    const double right = i + 1 < c.size() ? c[i + 1] : c[i];
    s[i] = (left + c[i] + right) / 3.0;
  }
  return s;
}

// Half width at half maximum walking away from `peak` in direction `dir`.
double half_width(const std::vector<double>& s, std::size_t peak, int dir) {
  const double half = 0.5 * s[peak];
  long i = static_cast<long>(peak);
  const long n = static_cast<long>(s.size());
  while (i + dir >= 0 && i + dir < n && s[i + dir] > half) i += dir;
  if (i + dir < 0 || i + dir >= n) return std::abs(static_cast<double>(i - static_cast<long>(peak))) + 0.5;
  // Linear interpolation between the last bin above half and the first below.
  const double above = s[i];
  const double below = s[i + dir];
  const double frac = above > below ? (above - half) / (above - below) : 0.5;
  return std::abs(static_cast<double>(i - static_cast<long>(peak))) + frac;
}

HistogramFit canonical(HistogramFit f) {
  if (f.i1 > f.i2) {
    std::swap(f.m1, f.m2);
    std::swap(f.i1, f.i2);
    std::swap(f.s1, f.s2);
  }
  return f;
}

HistogramFit run_fit(const Histogram& histogram, const HistogramFit& init) {
  const auto& x = histogram.centers;
  const auto& y = histogram.counts;
  const auto m = static_cast<Eigen::Index>(x.size());
  const double w = bin_width(histogram);
  const double peak = *std::max_element(y.begin(), y.end());

  fit::ResidualFn residuals = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
    r.resize(m);
    if (jac) jac->resize(m, 6);
    for (Eigen::Index j = 0; j < m; ++j) {
      double value = 0.0;
      for (int g = 0; g < 2; ++g) {
        const double amp = p[3 * g], mu = p[3 * g + 1], sd = p[3 * g + 2];
        const double d = x[j] - mu;
        const double e = std::exp(-0.5 * d * d / (sd * sd));
        value += amp * e;
        if (jac) {
          (*jac)(j, 3 * g) = e;
          (*jac)(j, 3 * g + 1) = amp * e * d / (sd * sd);
          (*jac)(j, 3 * g + 2) = amp * e * d * d / (sd * sd * sd);
        }
      }
      r[j] = value - y[j];
    }
  };

  fit::LmOptions options;
  options.max_iterations = 200;
  options.relative_tolerance = 1e-10;
  const double s_min = 0.05 * w;
  const double m_max = 1e3 * std::max(peak, 1.0);
  options.lower = Eigen::VectorXd(6);
  options.upper = Eigen::VectorXd(6);
  options.lower << 1e-12, 0.0, s_min, 1e-12, 0.0, s_min;
  options.upper << m_max, 1.0, 1.0, m_max, 1.0, 1.0;

  Eigen::VectorXd start(6);
  start << init.m1, init.i1, std::max(init.s1, s_min), init.m2, init.i2, std::max(init.s2, s_min);
  const auto result = fit::levenberg_marquardt(residuals, start, options);

  HistogramFit out;
  out.m1 = result.params[0];
  out.i1 = result.params[1];
  out.s1 = result.params[2];
  out.m2 = result.params[3];
  out.i2 = result.params[4];
  out.s2 = result.params[5];
  out.residual = std::sqrt(result.sse / static_cast<double>(m));
  out.converged = result.converged;
  out.iterations = result.iterations;
  return canonical(out);
}

}  // namespace

double Histogram::total() const { return std::accumulate(counts.begin(), counts.end(), 0.0); }

double HistogramFit::evaluate(double intensity) const {
  const double d1 = intensity - i1;
  const double d2 = intensity - i2;
  return m1 * std::exp(-0.5 * d1 * d1 / (s1 * s1)) + m2 * std::exp(-0.5 * d2 * d2 / (s2 * s2));
}

Histogram grayscale_histogram(const GrayImage& image, const HistogramOptions& options) {
  if (options.bins < 32) throw std::invalid_argument("grayscale_histogram: need at least 32 bins");
  if (options.border < 0 || 2 * options.border >= std::min(image.width(), image.height())) {
    throw std::invalid_argument("grayscale_histogram: border leaves no pixels");
  }
  Histogram h;
  h.counts.assign(options.bins, 0.0);
  h.centers.resize(options.bins);
  for (int i = 0; i < options.bins; ++i) h.centers[i] = (i + 0.5) / options.bins;
  for (int y = options.border; y < image.height() - options.border; ++y) {
    const auto row = image.row(y);
    for (int x = options.border; x < image.width() - options.border; ++x) {
      const int bin = std::min(static_cast<int>(row[x] * options.bins), options.bins - 1);
      h.counts[bin] += 1.0;
    }
  }
  return h;
}

std::vector<double> bimodal_counts(const HistogramFit& params, const std::vector<double>& centers) {
  std::vector<double> out(centers.size());
  for (std::size_t i = 0; i < centers.size(); ++i) out[i] = params.evaluate(centers[i]);
  return out;
}

std::optional<HistogramFit> bimodal_initial_guess(const Histogram& histogram) {
  const auto s = smooth3(histogram.counts);
  const std::size_t n = s.size();
  std::vector<std::size_t> maxima;
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? s[i - 1] : -1.0;
    const double right = i + 1 < n ? s[i + 1] : -1.0;
    if (s[i] > 0.0 && s[i] > left && s[i] >= right) maxima.push_back(i);
  }
  if (maxima.size() < 2) return std::nullopt;
  std::sort(maxima.begin(), maxima.end(), [&](std::size_t a, std::size_t b) { return s[a] > s[b]; });

  const std::size_t first = maxima.front();
  std::optional<std::size_t> second;
  for (std::size_t k = 1; k < maxima.size(); ++k) {
    const std::size_t cand = maxima[k];
    const auto [lo, hi] = std::minmax(first, cand);
    const double valley = *std::min_element(s.begin() + lo, s.begin() + hi + 1);
    if (valley < 0.8 * std::min(s[first], s[cand])) {
      second = cand;
      break;
    }
  }
  if (!second) return std::nullopt;

  const double w = bin_width(histogram);
  HistogramFit guess;
  const std::size_t a = std::min(first, *second);
  const std::size_t b = std::max(first, *second);
  guess.m1 = s[a];
  guess.i1 = histogram.centers[a];
  guess.s1 = half_width(s, a, -1) * w * kHwhmToSigma;
  guess.m2 = s[b];
  guess.i2 = histogram.centers[b];
  guess.s2 = half_width(s, b, +1) * w * kHwhmToSigma;
  return guess;
}

HistogramFit otsu_initial_guess(const Histogram& histogram) {
  const auto& c = histogram.counts;
  const auto& x = histogram.centers;
  const double total = histogram.total();
  if (!(total > 0.0)) throw std::invalid_argument("otsu_initial_guess: empty histogram");
  double sum_all = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) sum_all += c[i] * x[i];

  std::size_t best = 0;
  double best_between = -1.0;
  double w0 = 0.0, sum0 = 0.0;
  for (std::size_t t = 0; t + 1 < c.size(); ++t) {
    w0 += c[t];
    sum0 += c[t] * x[t];
    const double w1 = total - w0;
    if (w0 <= 0.0 || w1 <= 0.0) continue;
    const double mu0 = sum0 / w0;
    const double mu1 = (sum_all - sum0) / w1;
    const double between = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
    if (between > best_between) {
      best_between = between;
      best = t;
    }
  }

  const double w = bin_width(histogram);
  auto moments = [&](std::size_t lo, std::size_t hi) {
    double n = 0.0, s = 0.0, ss = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      n += c[i];
      s += c[i] * x[i];
    }
    const double mean = n > 0.0 ? s / n : 0.5 * (x[lo] + x[hi - 1]);
    for (std::size_t i = lo; i < hi; ++i) ss += c[i] * (x[i] - mean) * (x[i] - mean);
    const double sd = std::max(n > 0.0 ? std::sqrt(ss / n) : w, 0.5 * w);
    const double amp = std::max(n * w / (std::sqrt(2.0 * std::numbers::pi) * sd), 1e-6);
    return std::array<double, 3>{amp, mean, sd};
  };
  const auto lo = moments(0, best + 1);
  const auto hi = moments(best + 1, c.size());
  HistogramFit guess;
  guess.m1 = lo[0];
  guess.i1 = lo[1];
  guess.s1 = lo[2];
  guess.m2 = hi[0];
  guess.i2 = hi[1];
  guess.s2 = hi[2];
  return guess;
}

HistogramFit fit_bimodal(const Histogram& histogram, std::optional<HistogramFit> init) {
  if (histogram.counts.size() < 32 || histogram.counts.size() != histogram.centers.size()) {
    throw std::invalid_argument("fit_bimodal: malformed histogram");
  }
  if (!init) init = bimodal_initial_guess(histogram);
  if (!init) throw std::runtime_error("fit_bimodal: cannot locate two modes");
  return run_fit(histogram, canonical(*init));
}

double linescan_snr(const HistogramFit& fit) {
  if (!(fit.s1 > 0.0) || !(fit.s2 > 0.0)) throw std::invalid_argument("linescan_snr: widths must be positive");
  return 2.0 * std::abs(fit.i2 - fit.i1) / (fit.s1 + fit.s2);
}

double snr_db(double signal_variance, double noise_variance) {
  if (!(signal_variance > 0.0) || !(noise_variance > 0.0)) {
    throw std::invalid_argument("snr_db: variances must be positive");
  }
  return 10.0 * std::log10(signal_variance / noise_variance);
}

double snr_delta(double snr_noisy, double snr_denoised) {
  if (!(snr_noisy > 0.0)) throw std::invalid_argument("snr_delta: noisy SNR must be positive");
  return std::abs((snr_denoised - snr_noisy) / snr_noisy) * 100.0;
}

SnrReport estimate_snr(const GrayImage& image, const HistogramOptions& options) {
  const Histogram histogram = grayscale_histogram(image, options);
  std::optional<HistogramFit> best;
  if (auto guess = bimodal_initial_guess(histogram)) best = fit_bimodal(histogram, guess);
  const HistogramFit from_otsu = fit_bimodal(histogram, otsu_initial_guess(histogram));
  if (!best || from_otsu.residual < best->residual) best = from_otsu;

  SnrReport report;
  report.fit = *best;
  report.bins = options.bins;
  report.linescan_snr = linescan_snr(report.fit);

  // Population weights from the fitted Gaussian areas.
  const double a1 = report.fit.m1 * report.fit.s1;
  const double a2 = report.fit.m2 * report.fit.s2;
  const double p = a2 / (a1 + a2);
  const double gap = report.fit.i2 - report.fit.i1;
  const double signal = p * (1.0 - p) * gap * gap;
  const double noise = (1.0 - p) * report.fit.s1 * report.fit.s1 + p * report.fit.s2 * report.fit.s2;
  if (signal > 0.0 && noise > 0.0) report.snr_db = snr_db(signal, noise);
  return report;
}

}  // namespace lwr
