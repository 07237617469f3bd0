#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "lwrkit/psd.hpp"
#include "lwrkit/rng.hpp"
#include "lwrkit/scenario.hpp"
#include "lwrkit/pipeline.hpp"

using namespace lwr;

namespace {

const PalasantzasParams kParams{1.0, 20.0, 0.75, std::nullopt};

PsdCurve analytic_curve(int n, double dx, double psd0, double xi, double h, double floor,
                        PsdModel model = PsdModel::palasantzas1, std::optional<double> ef = std::nullopt) {
  PsdCurve c;
  c.trace_length = n;
  c.pixel_size = dx;
  c.n_traces_averaged = 1;
  for (int k = 1; k <= n / 2; ++k) {
    const double f = k / (n * dx);
    c.frequencies.push_back(f);
    c.density.push_back(palasantzas_model(f, psd0, xi, h, model, ef) + floor);
  }
  return c;
}

double variance(const std::vector<double>& v) {
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / v.size();
}

}  // namespace

TEST(ComputePsd, FrequencyAxisAndValidation) {
  const std::vector<std::vector<double>> t{std::vector<double>(128, 0.0)};
  const auto c = compute_psd(t, 0.5);
  ASSERT_EQ(c.frequencies.size(), 64u);
  EXPECT_DOUBLE_EQ(c.frequencies.front(), 1.0 / (128 * 0.5));
  EXPECT_DOUBLE_EQ(c.frequencies.back(), 1.0 / (2 * 0.5));
  for (std::size_t k = 1; k < c.frequencies.size(); ++k) EXPECT_GT(c.frequencies[k], c.frequencies[k - 1]);
  EXPECT_DOUBLE_EQ(c.df(), 1.0 / 64.0);

  EXPECT_THROW(compute_psd(std::vector<std::vector<double>>{}, 0.8), std::invalid_argument);
  EXPECT_THROW(compute_psd(std::vector<std::vector<double>>{std::vector<double>(63)}, 0.8), std::invalid_argument);
  EXPECT_THROW(compute_psd(std::vector<std::vector<double>>{std::vector<double>(65)}, 0.8), std::invalid_argument);
  EXPECT_THROW(compute_psd(std::vector<std::vector<double>>{std::vector<double>(64), std::vector<double>(66)}, 0.8),
               std::invalid_argument);
  EXPECT_THROW(compute_psd(t, 0.0), std::invalid_argument);
  PsdConfig bad;
  bad.noise_band_fraction = 0.5;
  EXPECT_THROW(compute_psd(t, 0.8, bad), std::invalid_argument);
}

TEST(ComputePsd, ToneAtExactBin) {
  const int n = 256, k0 = 10;
  const double dx = 0.8, a = 1.7;
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = a * std::sin(2.0 * std::numbers::pi * k0 * i / n);
  const auto c = compute_psd(std::vector<std::vector<double>>{t}, dx);
  for (int k = 0; k < n / 2; ++k) {
    if (k == k0 - 1) {
      EXPECT_NEAR(c.density[k] * c.df(), a * a / 2.0, 1e-12);
    } else {
      EXPECT_LT(c.density[k], 1e-20);
    }
  }
}

TEST(ComputePsd, NyquistToneKeepsParseval) {
  std::vector<double> t(64);
  for (int i = 0; i < 64; ++i) t[i] = i % 2 ? 1.0 : -1.0;
  const auto c = compute_psd(std::vector<std::vector<double>>{t}, 1.0);
  EXPECT_NEAR(c.area(), 1.0, 1e-14);
  EXPECT_NEAR(c.density.back() * c.df(), 1.0, 1e-14);
}

TEST(ComputePsd, ParsevalOnRandomTraces) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 * std::uniform_int_distribution<int>(32, 1500)(rng);
    const double dx = std::uniform_real_distribution<double>(0.1, 3.0)(rng);
    std::vector<std::vector<double>> traces(1 + trial % 4, std::vector<double>(n));
    double expected = 0.0;
    for (auto& t : traces) {
      double walk = 0.0;
      for (auto& v : t) v = 3.0 + (walk += normal(rng)) + normal(rng);
      expected += variance(t) / traces.size();
    }
    const auto c = compute_psd(traces, dx);
    EXPECT_NEAR(c.area() / expected, 1.0, 1e-9);
    for (double d : c.density) EXPECT_GE(d, 0.0);
  }
}

TEST(ComputePsd, WhiteNoiseLevel) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  std::vector<std::vector<double>> traces(500, std::vector<double>(256));
  for (auto& t : traces)
    for (auto& v : t) v = normal(rng);
  const auto c = compute_psd(traces, 0.8);
  const double mean = std::accumulate(c.density.begin(), c.density.end(), 0.0) / c.density.size();
  EXPECT_NEAR(mean / 1.6, 1.0, 0.05);
}

TEST(ComputePsd, HannWindowKeepsWhiteLevel) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  std::vector<std::vector<double>> traces(400, std::vector<double>(256));
  for (auto& t : traces)
    for (auto& v : t) v = normal(rng);
  PsdConfig cfg;
  cfg.window = Window::hann;
  const auto c = compute_psd(traces, 0.8, cfg);
  const double mean = std::accumulate(c.density.begin() + 2, c.density.end(), 0.0) / (c.density.size() - 2);
  EXPECT_NEAR(mean / 1.6, 1.0, 0.05);
}

TEST(ComputePsd, SynthesisMatchesModelPerDecade) {
  const auto traces = sample_edge_traces(kParams, PsdModel::palasantzas1, 200, 2048, 0.8, 4);
  const auto c = compute_psd(traces, 0.8);
  const double psd0 = psd0_for_sigma(kParams, PsdModel::palasantzas1);
  for (double lo : {1e-3, 1e-2, 1e-1}) {
    double ratio = 0.0;
    int bins = 0;
    for (std::size_t k = 0; k < c.frequencies.size(); ++k) {
      const double f = c.frequencies[k];
      if (f < lo || f >= 10.0 * lo) continue;
      ratio += c.density[k] / palasantzas_model(f, psd0, kParams.xi, kParams.hurst, PsdModel::palasantzas1);
      ++bins;
    }
    ASSERT_GT(bins, 0);
    EXPECT_NEAR(ratio / bins, 1.0, 0.10) << "decade from " << lo;
  }
}

TEST(FitPalasantzas, ExactModelOne) {
  const auto fit = fit_palasantzas(analytic_curve(1024, 0.8, 10.0, 20.0, 0.75, 0.5));
  EXPECT_NEAR(fit.psd0 / 10.0, 1.0, 0.01);
  EXPECT_NEAR(fit.xi / 20.0, 1.0, 0.01);
  EXPECT_NEAR(fit.hurst / 0.75, 1.0, 0.01);
  EXPECT_NEAR(fit.noise_floor / 0.5, 1.0, 0.01);
  EXPECT_TRUE(fit.converged);
  EXPECT_LT(fit.fit_rms_log_residual, 1e-6);
  EXPECT_LE(fit.sigma_unbiased, fit.sigma_biased);
}

TEST(FitPalasantzas, ExactModelTwo) {
  PsdConfig cfg;
  cfg.model = PsdModel::palasantzas2;
  const auto fit = fit_palasantzas(analytic_curve(1024, 0.8, 6.0, 12.0, 0.5, 0.2, PsdModel::palasantzas2, 3.4), cfg);
  ASSERT_TRUE(fit.exponent_free.has_value());
  EXPECT_NEAR(*fit.exponent_free / 3.4, 1.0, 0.01);
  EXPECT_NEAR(fit.psd0 / 6.0, 1.0, 0.01);
  EXPECT_NEAR(fit.xi / 12.0, 1.0, 0.01);
  EXPECT_NEAR(fit.noise_floor / 0.2, 1.0, 0.01);
}

TEST(FitPalasantzas, ScaleEquivariant) {
  const auto a = fit_palasantzas(analytic_curve(512, 1.0, 3.0, 15.0, 0.6, 0.05));
  const auto b = fit_palasantzas(analytic_curve(512, 1.0, 3000.0, 15.0, 0.6, 50.0));
  EXPECT_NEAR(b.psd0 / a.psd0, 1000.0, 1e-3);
  EXPECT_NEAR(b.xi, a.xi, 1e-6 * a.xi);
  EXPECT_NEAR(b.hurst, a.hurst, 1e-6);
}

TEST(FitPalasantzas, ConstantCurveIsPureNoise) {
  PsdCurve c = analytic_curve(256, 0.8, 1.0, 20.0, 0.75, 0.0);
  for (auto& d : c.density) d = 2.5;
  const auto fit = fit_palasantzas(c);
  EXPECT_NEAR(fit.noise_floor, 2.5, 1e-6);
  EXPECT_LT(fit.psd0, 1e-6 * 2.5);
  EXPECT_LT(fit.sigma_unbiased, 1e-3 * fit.sigma_biased);
}

TEST(FitPalasantzas, NoisyTracesRecoverPsd0AndFloor) {
  const double psd0 = psd0_for_sigma(kParams, PsdModel::palasantzas1);
  const double sd = 0.5, dx = 0.8;
  const double floor = 2.0 * dx * sd * sd;
  for (int seed = 0; seed < 5; ++seed) {
    auto traces = sample_edge_traces(kParams, PsdModel::palasantzas1, 50, 4096, dx, 50 + seed);
    CounterRng rng(seed, 3, 0);
    std::normal_distribution<double> normal(0.0, sd);
    for (auto& t : traces)
      for (auto& v : t) v += normal(rng);
    const auto fit = fit_palasantzas(compute_psd(traces, dx));
    EXPECT_NEAR(fit.psd0 / psd0, 1.0, 0.15) << seed;
    EXPECT_NEAR(fit.noise_floor / floor, 1.0, 0.10) << seed;
  }
}

TEST(FitPalasantzas, TooFewBinsThrows) {
  const auto c = analytic_curve(64, 0.8, 1.0, 20.0, 0.75, 0.1);
  PsdConfig cfg;
  cfg.low_freq_exclusion = 20;
  EXPECT_THROW(fit_palasantzas(c, cfg), std::invalid_argument);
  EXPECT_NO_THROW(fit_palasantzas(c));
}

TEST(FitPalasantzas, ExplicitInitReachesSameOptimum) {
  const auto c = analytic_curve(1024, 0.8, 10.0, 20.0, 0.75, 0.5);
  PalasantzasFit init;
  init.psd0 = 3.0;
  init.xi = 40.0;
  init.hurst = 0.5;
  init.noise_floor = 1.0;
  const auto fit = fit_palasantzas(c, {}, init);
  EXPECT_NEAR(fit.xi / 20.0, 1.0, 0.01);
}

TEST(Unbias, ZeroFloorIsIdentity) {
  const auto c = analytic_curve(256, 0.8, 4.0, 20.0, 0.75, 0.3);
  const auto u = unbias(c, 0.0);
  EXPECT_EQ(u.curve.density, c.density);
  EXPECT_EQ(u.curve.frequencies, c.frequencies);
  EXPECT_EQ(u.sigma_biased, u.sigma_unbiased);
  EXPECT_DOUBLE_EQ(u.sigma_biased, std::sqrt(c.area()));
}

TEST(Unbias, FlatCurveAtFloor) {
  PsdCurve c = analytic_curve(256, 0.8, 4.0, 20.0, 0.75, 0.0);
  for (auto& d : c.density) d = 0.7;
  const auto u = unbias(c, 0.7);
  for (double d : u.curve.density) EXPECT_EQ(d, 0.0);
  EXPECT_EQ(u.sigma_unbiased, 0.0);
  EXPECT_THROW(unbias(c, -1.0), std::invalid_argument);
}

TEST(Unbias, NeverExceedsBiased) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    PsdCurve c = analytic_curve(128, 0.8, 1.0, 20.0, 0.75, 0.0);
    for (auto& d : c.density) d = u(rng);
    const auto r = unbias(c, u(rng));
    EXPECT_LE(r.sigma_unbiased, r.sigma_biased);
    for (double d : r.curve.density) EXPECT_GE(d, 0.0);
  }
}

TEST(RoughnessReport, WidthSpectrumOfIndependentEdges) {
  // Independent edges: LWR density is twice the LER density.
  std::vector<double> ler, lwr;
  for (int seed = 0; seed < 500; ++seed) {
    const auto t = sample_edge_traces(kParams, PsdModel::palasantzas1, 2, 256, 0.8, seed);
    std::vector<double> right = t[1];
    for (auto& v : right) v += 16.0;
    const EdgeSet set({LineEdges{t[0], right}}, 0.8);
    const auto edges = set.edge_traces();
    const auto width = width_trace(set, 0);
    const auto ce = compute_psd(edges, 0.8);
    const auto cw = compute_psd(std::vector<std::vector<double>>{width}, 0.8);
    if (ler.empty()) ler.assign(ce.density.size(), 0.0), lwr.assign(ce.density.size(), 0.0);
    for (std::size_t k = 0; k < ler.size(); ++k) ler[k] += ce.density[k], lwr[k] += cw.density[k];
  }
  for (std::size_t k = 0; k < ler.size(); ++k) EXPECT_NEAR(lwr[k] / ler[k], 2.0, 0.2) << k;
}

TEST(RoughnessReport, CorrelatedAndAntiCorrelatedEdges) {
  const auto t = sample_edge_traces(kParams, PsdModel::palasantzas1, 2, 512, 0.8, 1);
  std::vector<double> left, right_same, right_mirror;
  for (double v : t[0]) {
    left.push_back(40.0 + v);
    right_same.push_back(56.0 + v);
    right_mirror.push_back(56.0 - v);
  }
  const EdgeSet rigid({LineEdges{left, right_same}}, 0.8);
  for (double w : width_trace(rigid, 0)) EXPECT_NEAR(w, 16.0, 1e-12);
  const auto ler_rigid = compute_psd(rigid.edge_traces(), 0.8);
  const auto single = compute_psd(std::vector<std::vector<double>>{left}, 0.8);
  for (std::size_t k = 0; k < single.density.size(); ++k) EXPECT_NEAR(ler_rigid.density[k], single.density[k], 1e-9 * single.density[k] + 1e-15);

  const EdgeSet mirror({LineEdges{left, right_mirror}}, 0.8);
  const auto lwr = compute_psd(std::vector<std::vector<double>>{width_trace(mirror, 0)}, 0.8);
  const auto ler = compute_psd(mirror.edge_traces(), 0.8);
  for (std::size_t k = 0; k < lwr.density.size(); ++k) EXPECT_NEAR(lwr.density[k] / ler.density[k], 4.0, 1e-9);
}

TEST(RoughnessReport, PooledAndPerLineFits) {
  const Scenario scenario;
  const auto sample = make_sample(scenario, 2);
  const std::vector<int> frames{64};
  const auto img = acquire(scenario, sample, frames)[0];
  const auto edges = detect_edges(img);
  const auto r = roughness_report(edges);
  EXPECT_EQ(r.ler.biased.n_traces_averaged, 2 * edges.n_lines());
  EXPECT_EQ(r.lwr.biased.n_traces_averaged, edges.n_lines());
  ASSERT_EQ(r.per_line_ler.size(), static_cast<std::size_t>(edges.n_lines()));
  ASSERT_EQ(r.per_line_lwr.size(), static_cast<std::size_t>(edges.n_lines()));
  EXPECT_DOUBLE_EQ(r.lwr.three_sigma_unbiased(), 3.0 * r.lwr.sigma_unbiased());
  EXPECT_LE(r.lwr.sigma_unbiased(), r.lwr.sigma_biased());
  EXPECT_NEAR(r.lwr.sigma_unbiased() / sample.truth.realized_lwr_sigma(), 1.0, 0.1);
  EXPECT_TRUE(roughness_report(edges, {}, false).per_line_ler.empty());
}

TEST(RoughnessReport, OddTraceLengthIsTruncated) {
  const auto t = sample_edge_traces(kParams, PsdModel::palasantzas1, 4, 301, 0.8, 3);
  const auto r = analyze_roughness(t, 0.8, {});
  EXPECT_EQ(r.biased.trace_length, 300);
}

TEST(Unbiasing, FourFrameLwrInHighSnrRegime) {
  // Higher contrast keeps 4-frame images above SNR 2.
  const Scenario scenario = Scenario{}.with_contrast(0.2);
  const std::vector<int> frames{4};
  AnalysisConfig cfg;
  cfg.per_line = false;
  std::vector<double> err;
  int biased_above = 0;
  for (int seed = 0; seed < 50; ++seed) {
    const auto sample = make_sample(scenario, 300 + seed);
    const auto a = analyze_image(acquire(scenario, sample, frames)[0], cfg);
    ASSERT_GT(a.snr.linescan_snr, 2.0);
    const double truth = sample.truth.realized_lwr_sigma();
    err.push_back(std::abs(a.roughness.lwr.sigma_unbiased() / truth - 1.0));
    // Subtracting the floor removes at most its area; clipping at zero keeps some of it.
    const auto& fit = a.roughness.lwr.fit;
    const double floor_area = fit.noise_floor * a.roughness.lwr.biased.frequencies.back();
    const double removed = fit.sigma_biased * fit.sigma_biased - fit.sigma_unbiased * fit.sigma_unbiased;
    EXPECT_LE(removed, floor_area * (1.0 + 1e-9));
    EXPECT_GT(removed, 0.8 * floor_area);
    biased_above += fit.sigma_biased > truth;
  }
  std::sort(err.begin(), err.end());
  EXPECT_LT(err[err.size() / 2], 0.10);
  EXPECT_EQ(biased_above, 50);
}
