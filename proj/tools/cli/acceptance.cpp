#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cli/commands.hpp"
#include "lwrkit/parallel.hpp"
#include "lwrkit/report_json.hpp"
#include "lwrkit/rng.hpp"

namespace lwr::cli {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kLadderSeeds = 50;
constexpr int kScalingSeeds = 20;
constexpr int kDenoiseImages = 20;
// Extra seeds drawn when a noisy 4 Fr baseline cannot be measured.
constexpr int kDenoiseSpareSeeds = 5;

double median(std::vector<double> v) {
  if (v.empty()) return kInf;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2) return *mid;
  return 0.5 * (*mid + *std::max_element(v.begin(), mid));
}

double rel_error(double value, double truth) { return std::abs(value - truth) / std::abs(truth); }

AnalysisConfig pooled_only() {
  AnalysisConfig config;
  config.per_line = false;
  return config;
}

// One seed of the frame ladder: SNR at every rung and the LWR error, +inf
// where edge detection or the fit failed.
struct LadderRow {
  std::vector<double> snr;
  std::vector<double> error;
  std::vector<std::string> failure;
};

struct LadderStudy {
  std::vector<int> frames;
  std::vector<LadderRow> rows;

  double mean_snr(std::size_t rung, std::size_t n_seeds) const {
    double sum = 0.0;
    for (std::size_t s = 0; s < n_seeds; ++s) sum += rows[s].snr[rung];
    return sum / static_cast<double>(n_seeds);
  }
  double median_error(std::size_t rung) const {
    std::vector<double> e;
    for (const auto& r : rows) e.push_back(r.error[rung]);
    return median(std::move(e));
  }
  int failures(std::size_t rung) const {
    return static_cast<int>(std::count_if(rows.begin(), rows.end(), [&](const auto& r) { return !r.failure[rung].empty(); }));
  }
};

LadderStudy run_ladder(const AcceptanceOptions& o) {
  LadderStudy study;
  study.frames.assign(kFrameLadder.begin(), kFrameLadder.end());
  study.rows.resize(kLadderSeeds);
  parallel_for(study.rows.size(), o.jobs, [&](std::size_t s) {
    const auto sample = make_sample(o.scenario, o.seed + s);
    const auto images = acquire(o.scenario, sample, study.frames);
    const double truth = sample.truth.realized_lwr_sigma();
    auto& row = study.rows[s];
    for (const auto& image : images) {
      try {
        const auto a = analyze_image(image, pooled_only());
        row.snr.push_back(a.snr.linescan_snr);
        row.error.push_back(rel_error(a.roughness.lwr.sigma_unbiased(), truth));
        row.failure.emplace_back();
      } catch (const std::exception& e) {
        row.snr.push_back(estimate_snr(image).linescan_snr);
        row.error.push_back(kInf);
        row.failure.emplace_back(e.what());
      }
    }
  });
  return study;
}

// Matched 4 Fr / 64 Fr / nlmeans-denoised 4 Fr analyses of one seed.
struct DenoiseSample {
  std::uint64_t seed = 0;
  std::optional<ImageAnalysis> noisy, denoised, reference;
  std::optional<DenoiserComparison> comparison;
  std::string noisy_failure, denoised_failure;
};

struct DenoiseStudy {
  std::vector<DenoiseSample> used;  ///< first kDenoiseImages seeds with a measurable noisy baseline
  std::vector<std::uint64_t> skipped;
};

DenoiseStudy run_denoise(const AcceptanceOptions& o) {
  std::vector<DenoiseSample> all(kDenoiseImages + kDenoiseSpareSeeds);
  const std::vector<int> frames{4, 64};
  parallel_for(all.size(), o.jobs, [&](std::size_t i) {
    auto& d = all[i];
    d.seed = o.seed + i;
    const auto sample = make_sample(o.scenario, d.seed);
    const auto images = acquire(o.scenario, sample, frames);
    try {
      d.noisy = analyze_image(images[0], pooled_only());
    } catch (const std::exception& e) {
      d.noisy_failure = e.what();
      return;
    }
    try {
      d.denoised = analyze_image(denoise(images[0], DenoiserSpec{}), pooled_only());
      d.comparison = compare_analyses(*d.noisy, *d.denoised, &sample.truth);
    } catch (const std::exception& e) {
      d.denoised_failure = e.what();
    }
    try {
      d.reference = analyze_image(images[1], pooled_only());
    } catch (const std::exception&) {
    }
  });
  DenoiseStudy study;
  for (auto& d : all) {
    if (!d.noisy) {
      study.skipped.push_back(d.seed);
    } else if (study.used.size() < kDenoiseImages) {
      study.used.push_back(std::move(d));
    }
  }
  return study;
}

class Runner {
 public:
  Runner(const AcceptanceOptions& o, std::ostream& log) : o_(o), log_(log) {}

  const LadderStudy& ladder() {
    if (!ladder_) {
      log_ << "  running frame-ladder study (" << kLadderSeeds << " seeds)\n";
      ladder_ = run_ladder(o_);
    }
    return *ladder_;
  }

  const DenoiseStudy& denoising() {
    if (!denoise_) {
      log_ << "  running denoising study (" << kDenoiseImages << " images)\n";
      denoise_ = run_denoise(o_);
    }
    return *denoise_;
  }

  Verdict parseval();
  Verdict synthesis();
  Verdict unbiasing();
  Verdict low_snr();
  Verdict frame_scaling();
  Verdict cd_invariance();
  Verdict snr_gain();
  Verdict psd_structure();
  Verdict self_consistency();
  Verdict determinism();

 private:
  const AcceptanceOptions& o_;
  std::ostream& log_;
  std::optional<LadderStudy> ladder_;
  std::optional<DenoiseStudy> denoise_;
};

Verdict make_verdict(int id, std::string name, double measured, double bound, bool pass, const json& details) {
  return {id, std::move(name), measured, bound, pass, details.dump()};
}

Verdict Runner::parseval() {
  CounterRng rng(o_.seed, 0xacce, 1);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  int worst_length = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = 2 * (32 + static_cast<int>(rng() % 2017));  // even, 64..4096
    const double dx = 0.2 + 2.0 * rng.uniform();
    const double phase = 2.0 * std::numbers::pi * rng.uniform();
    const double cycles = 1.0 + 30.0 * rng.uniform();
    std::vector<double> trace(n);
    double walk = 0.0;
    for (int i = 0; i < n; ++i) {
      walk += 0.3 * normal(rng);
      trace[i] = 5.0 + walk + normal(rng) + 2.0 * std::sin(2.0 * std::numbers::pi * cycles * i / n + phase);
    }
    const double mean = std::accumulate(trace.begin(), trace.end(), 0.0) / n;
    double var = 0.0;
    for (double v : trace) var += (v - mean) * (v - mean);
    var /= n;
    const std::vector<std::vector<double>> one{trace};
    const double err = rel_error(compute_psd(one, dx).area(), var);
    if (err > worst) {
      worst = err;
      worst_length = n;
    }
  }
  return make_verdict(1, "psd_parseval", worst, 1e-9, worst < 1e-9, {{"traces", 100}, {"worst_trace_length", worst_length}});
}

Verdict Runner::synthesis() {
  const PalasantzasParams params{1.0, 20.0, 0.75, std::nullopt};
  const int n = 2048;
  const double dx = 0.8;
  const int count = 200;
  const auto traces = sample_edge_traces(params, PsdModel::palasantzas1, count, n, dx, o_.seed);
  const auto curve = compute_psd(traces, dx);
  const double psd0 = psd0_for_sigma(params, PsdModel::palasantzas1);
  // Mid band: from the second bin up to half of Nyquist.
  const double f_lo = 2.0 / (n * dx);
  const double f_hi = 1.0 / (4.0 * dx);
  double worst = 0.0, worst_f = 0.0;
  int bins = 0, outside = 0;
  for (std::size_t k = 0; k < curve.frequencies.size(); ++k) {
    const double f = curve.frequencies[k];
    if (f < f_lo || f > f_hi) continue;
    const double dev = std::abs(curve.density[k] / palasantzas_model(f, psd0, params.xi, params.hurst, PsdModel::palasantzas1) - 1.0);
    ++bins;
    if (dev > 0.10) ++outside;
    if (dev > worst) {
      worst = dev;
      worst_f = f;
    }
  }
  return make_verdict(2, "spectral_synthesis_fidelity", worst, 0.10, worst <= 0.10,
                      {{"traces", count},
                       {"band_per_nm", {f_lo, f_hi}},
                       {"bins", bins},
                       {"bins_outside", outside},
                       {"worst_frequency_per_nm", worst_f},
                       {"per_bin_relative_sd", 1.0 / std::sqrt(static_cast<double>(count))}});
}

Verdict Runner::unbiasing() {
  const auto& s = ladder();
  double worst = 0.0;
  json rungs = json::array();
  for (std::size_t k = 0; k < s.frames.size(); ++k) {
    const double snr = s.mean_snr(k, s.rows.size());
    const double med = s.median_error(k);
    const bool eligible = snr > 2.0;
    if (eligible) worst = std::max(worst, med);
    rungs.push_back({{"frames", s.frames[k]},
                     {"mean_snr", snr},
                     {"median_rel_error", med},
                     {"failed_seeds", s.failures(k)},
                     {"snr_above_2", eligible}});
  }
  return make_verdict(3, "unbiasing_accuracy", worst, 0.10, worst <= 0.10, {{"seeds", kLadderSeeds}, {"rungs", rungs}});
}

Verdict Runner::low_snr() {
  const auto& s = ladder();
  // Frames ascend 4..64; the error must not grow with more frames.
  bool monotone = true;
  for (std::size_t k = 1; k < s.frames.size(); ++k) {
    if (s.median_error(k) > s.median_error(k - 1)) monotone = false;
  }
  const std::size_t four = static_cast<std::size_t>(std::find(s.frames.begin(), s.frames.end(), 4) - s.frames.begin());
  const double snr4 = s.mean_snr(four, s.rows.size());
  const double med4 = s.median_error(four);
  const bool pass = monotone && snr4 < 2.0 && med4 > 0.10;
  json medians = json::array();
  for (std::size_t k = 0; k < s.frames.size(); ++k) medians.push_back(s.median_error(k));
  return make_verdict(4, "low_snr_degradation", med4, 0.10, pass,
                      {{"frames", s.frames},
                       {"median_rel_error", medians},
                       {"monotone_nonincreasing", monotone},
                       {"mean_snr_4fr", snr4},
                       {"failed_seeds_4fr", s.failures(four)}});
}

Verdict Runner::frame_scaling() {
  const auto& s = ladder();
  const auto idx = [&](int f) { return static_cast<std::size_t>(std::find(s.frames.begin(), s.frames.end(), f) - s.frames.begin()); };
  const double snr4 = s.mean_snr(idx(4), kScalingSeeds);
  const double snr64 = s.mean_snr(idx(64), kScalingSeeds);
  const double ratio = snr64 / snr4;
  const double dev = std::abs(ratio / 4.0 - 1.0);
  return make_verdict(5, "frame_scaling_law", dev, 0.15, dev <= 0.15,
                      {{"seeds", kScalingSeeds}, {"mean_snr_4fr", snr4}, {"mean_snr_64fr", snr64}, {"ratio", ratio}, {"expected_ratio", 4.0}});
}

json denoise_details(const DenoiseStudy& s) {
  json failures = json::array();
  for (const auto& d : s.used) {
    if (!d.comparison) failures.push_back({{"seed", d.seed}, {"error", d.denoised_failure}});
  }
  return {{"images", s.used.size()}, {"skipped_seeds_noisy_unmeasurable", s.skipped}, {"denoised_failures", failures}};
}

Verdict Runner::cd_invariance() {
  const auto& s = denoising();
  double worst = s.used.size() < kDenoiseImages ? kInf : 0.0;
  json per = json::array();
  for (const auto& d : s.used) {
    const double v = d.comparison ? std::abs(d.comparison->dcd_pct) : kInf;
    worst = std::max(worst, v);
    per.push_back(d.comparison ? json(d.comparison->dcd_pct) : json(nullptr));
  }
  auto details = denoise_details(s);
  details["dcd_pct"] = per;
  return make_verdict(6, "cd_invariance_under_denoising", worst, 5.0, worst < 5.0, details);
}

Verdict Runner::snr_gain() {
  const auto& s = denoising();
  double worst = s.used.size() < kDenoiseImages ? -kInf : kInf;
  json per = json::array();
  for (const auto& d : s.used) {
    const double v = d.comparison ? d.comparison->snr_gain_pct() : -kInf;
    worst = std::min(worst, v);
    per.push_back(d.comparison ? json(v) : json(nullptr));
  }
  auto details = denoise_details(s);
  details["snr_gain_pct"] = per;
  return make_verdict(7, "denoising_improves_snr", worst, 0.0, worst > 0.0, details);
}

Verdict Runner::psd_structure() {
  const auto& s = denoising();
  std::vector<const DenoiseSample*> triples;
  for (const auto& d : s.used) {
    if (d.denoised && d.reference) triples.push_back(&d);
  }
  if (triples.size() < kDenoiseImages) {
    auto details = denoise_details(s);
    details["complete_triples"] = triples.size();
    return make_verdict(8, "psd_structure", kInf, 0.15, false, details);
  }

  // Row rejection can shorten traces; cut every width trace to one even
  // length so the three curves share a frequency axis.
  std::size_t length = std::numeric_limits<std::size_t>::max();
  for (const auto* d : triples) {
    for (const auto* a : {&*d->noisy, &*d->denoised, &*d->reference}) length = std::min<std::size_t>(length, a->edges.rows());
  }
  length -= length % 2;

  const PsdConfig psd;
  std::vector<std::vector<double>> biased(3), unbiased(3);
  for (const auto* d : triples) {
    const std::array<const ImageAnalysis*, 3> variants{&*d->noisy, &*d->denoised, &*d->reference};
    for (std::size_t v = 0; v < 3; ++v) {
      const auto& edges = variants[v]->edges;
      std::vector<std::vector<double>> widths;
      for (int l = 0; l < edges.n_lines(); ++l) {
        auto w = width_trace(edges, l);
        w.resize(length);
        widths.push_back(std::move(w));
      }
      const auto r = analyze_roughness(widths, edges.pixel_size(), psd);
      if (biased[v].empty()) {
        biased[v].assign(r.biased.density.size(), 0.0);
        unbiased[v].assign(r.unbiased.density.size(), 0.0);
      }
      for (std::size_t k = 0; k < r.biased.density.size(); ++k) {
        biased[v][k] += r.biased.density[k] / static_cast<double>(triples.size());
        unbiased[v][k] += r.unbiased.density[k] / static_cast<double>(triples.size());
      }
    }
  }

  const std::size_t bins = biased[0].size();
  int below = 0, top = 0;
  for (std::size_t k = bins / 2; k < bins; ++k) {
    ++top;
    if (biased[1][k] < biased[0][k]) ++below;
  }
  const double below_fraction = static_cast<double>(below) / top;

  // First 10 bins of the fit range, each compared with the 64 Fr curve.
  const std::size_t first = static_cast<std::size_t>(psd.low_freq_exclusion);
  double worst = 0.0;
  json noisy_ratio = json::array(), denoised_ratio = json::array();
  for (std::size_t k = first; k < first + 10 && k < bins; ++k) {
    const double r4 = unbiased[0][k] / unbiased[2][k];
    const double rd = unbiased[1][k] / unbiased[2][k];
    noisy_ratio.push_back(r4);
    denoised_ratio.push_back(rd);
    worst = std::max({worst, std::abs(r4 - 1.0), std::abs(rd - 1.0)});
  }
  const bool pass = worst <= 0.15 && below_fraction >= 0.95;
  auto details = denoise_details(s);
  details["trace_length"] = length;
  details["top_half_below_fraction"] = below_fraction;
  details["top_half_below_bound"] = 0.95;
  details["low_band_ratio_4fr_over_64fr"] = noisy_ratio;
  details["low_band_ratio_denoised_over_64fr"] = denoised_ratio;
  return make_verdict(8, "psd_structure", worst, 0.15, pass, details);
}

Verdict Runner::self_consistency() {
  json parts = json::object();
  double score = 0.0;
  const auto record = [&](const std::string& name, double err, double tol) {
    parts[name] = {{"max_rel_error", err}, {"tolerance", tol}};
    score = std::max(score, err / tol);
  };

  // Two-Gaussian histogram, exact and with Poisson counts.
  const HistogramFit truth_h{2000.0, 0.35, 0.04, 1600.0, 0.62, 0.05};
  Histogram h;
  for (int i = 0; i < 256; ++i) h.centers.push_back((i + 0.5) / 256.0);
  h.counts = bimodal_counts(truth_h, h.centers);
  {
    const auto f = fit_bimodal(h);
    record("bimodal_exact",
           std::max({rel_error(f.m1, truth_h.m1), rel_error(f.i1, truth_h.i1), rel_error(f.s1, truth_h.s1),
                     rel_error(f.m2, truth_h.m2), rel_error(f.i2, truth_h.i2), rel_error(f.s2, truth_h.s2)}),
           0.01);
  }
  {
    std::vector<double> mean_err(50), sigma_err(50);
    const auto expected = h.counts;
    parallel_for(50, o_.jobs, [&](std::size_t s) {
      CounterRng rng(o_.seed + s, 0xb1, 0);
      Histogram noisy = h;
      for (std::size_t i = 0; i < expected.size(); ++i) {
        std::poisson_distribution<long long> poisson(expected[i]);
        noisy.counts[i] = expected[i] > 0.0 ? static_cast<double>(poisson(rng)) : 0.0;
      }
      const auto f = fit_bimodal(noisy);
      mean_err[s] = std::max(rel_error(f.i1, truth_h.i1), rel_error(f.i2, truth_h.i2));
      sigma_err[s] = std::max(rel_error(f.s1, truth_h.s1), rel_error(f.s2, truth_h.s2));
    });
    record("bimodal_poisson_intensity", *std::max_element(mean_err.begin(), mean_err.end()), 0.02);
    record("bimodal_poisson_sigma", *std::max_element(sigma_err.begin(), sigma_err.end()), 0.05);
  }

  // Palasantzas spectrum plus floor, exact and estimated from traces.
  {
    const int n = 1024;
    const double dx = 0.8;
    PsdCurve curve;
    curve.trace_length = n;
    curve.pixel_size = dx;
    curve.n_traces_averaged = 1;
    for (int k = 1; k <= n / 2; ++k) {
      const double f = k / (n * dx);
      curve.frequencies.push_back(f);
      curve.density.push_back(palasantzas_model(f, 10.0, 20.0, 0.75, PsdModel::palasantzas1) + 0.5);
    }
    const auto fit = fit_palasantzas(curve);
    record("palasantzas_exact",
           std::max({rel_error(fit.psd0, 10.0), rel_error(fit.xi, 20.0), rel_error(fit.hurst, 0.75), rel_error(fit.noise_floor, 0.5)}),
           0.01);
  }
  {
    const PalasantzasParams params{1.0, 20.0, 0.75, std::nullopt};
    const double psd0 = psd0_for_sigma(params, PsdModel::palasantzas1);
    // 4096 samples put about 26 fitted bins on the plateau below 1 / (2 pi xi).
    const int n = 4096;
    const double dx = 0.8;
    const double noise_sd = 0.5;
    const double floor = 2.0 * dx * noise_sd * noise_sd;  // one-sided white density
    const int trials = 20;
    std::vector<double> psd0_err(trials), floor_err(trials);
    parallel_for(trials, o_.jobs, [&](std::size_t s) {
      auto traces = sample_edge_traces(params, PsdModel::palasantzas1, 50, n, dx, o_.seed + 1000 + s);
      CounterRng rng(o_.seed + s, 0xf1, 0);
      std::normal_distribution<double> normal(0.0, noise_sd);
      for (auto& t : traces) {
        for (auto& v : t) v += normal(rng);
      }
      const auto fit = fit_palasantzas(compute_psd(traces, dx));
      psd0_err[s] = rel_error(fit.psd0, psd0);
      floor_err[s] = rel_error(fit.noise_floor, floor);
    });
    record("palasantzas_noisy_psd0", *std::max_element(psd0_err.begin(), psd0_err.end()), 0.15);
    record("palasantzas_noisy_floor", *std::max_element(floor_err.begin(), floor_err.end()), 0.10);
  }
  return make_verdict(9, "estimator_self_consistency", score, 1.0, score <= 1.0,
                      {{"measured_is", "worst error / tolerance"}, {"checks", parts}});
}

std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::set<std::string> listing(const std::filesystem::path& dir) {
  std::set<std::string> names;
  for (const auto& e : std::filesystem::directory_iterator(dir)) names.insert(e.path().filename().string());
  return names;
}

// Largest relative difference between numeric leaves; +inf on structural mismatch.
double json_difference(const json& a, const json& b) {
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>(), y = b.get<double>();
    if (x == y) return 0.0;
    return std::abs(x - y) / std::max(std::abs(x), std::abs(y));
  }
  if (a.type() != b.type()) return kInf;
  if (a.is_object()) {
    if (a.size() != b.size()) return kInf;
    double worst = 0.0;
    for (auto it = a.begin(); it != a.end(); ++it) {
      if (!b.contains(it.key())) return kInf;
      worst = std::max(worst, json_difference(*it, b.at(it.key())));
    }
    return worst;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) return kInf;
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, json_difference(a[i], b[i]));
    return worst;
  }
  return a == b ? 0.0 : kInf;
}

Verdict Runner::determinism() {
  const auto root = (o_.out ? *o_.out : std::filesystem::temp_directory_path()) / "determinism_check";
  std::filesystem::remove_all(root);
  std::ostringstream quiet;
  const auto generate = [&](const std::string& name, int jobs) {
    GenerateOptions g;
    g.scenario = o_.scenario;
    g.frames = {4, 64};
    g.seed = o_.seed;
    g.n_seeds = 2;
    g.jobs = jobs;
    g.out = root / name;
    cmd_generate(g, quiet);
    return g.out;
  };
  const auto dir_a = generate("images_a", 1);
  const auto dir_b = generate("images_b", 2);

  int mismatched = 0;
  const auto names = listing(dir_a);
  if (names != listing(dir_b)) ++mismatched;
  for (const auto& n : names) {
    if (read_bytes(dir_a / n) != read_bytes(dir_b / n)) ++mismatched;
  }

  const auto analyze = [&](const std::filesystem::path& images, const std::string& name, int jobs) {
    AnalyzeOptions a;
    a.inputs = {(images / "*.pgm").string()};
    a.out = root / name;
    a.jobs = jobs;
    cmd_analyze(a, quiet);
    return a.out;
  };
  const auto out_a = analyze(dir_a, "reports_a", 1);
  const auto out_b = analyze(dir_b, "reports_b", 2);
  double worst = 0.0;
  int reports = 0;
  for (const auto& n : listing(out_a)) {
    if (!n.ends_with(".report.json")) continue;
    ++reports;
    if (!std::filesystem::exists(out_b / n)) {
      worst = kInf;
      continue;
    }
    worst = std::max(worst, json_difference(json::parse(read_bytes(out_a / n)), json::parse(read_bytes(out_b / n))));
  }
  if (reports == 0) worst = kInf;
  std::filesystem::remove_all(root);
  const bool pass = mismatched == 0 && worst <= 1e-12;
  return make_verdict(10, "determinism", worst, 1e-12, pass,
                      {{"measured_is", "max relative numeric difference between reports"},
                       {"files_compared", names.size()},
                       {"files_differing", mismatched},
                       {"reports_compared", reports}});
}

struct Criterion {
  int id;
  Verdict (Runner::*run)();
};

constexpr std::array<Criterion, 10> kCriteria{{{1, &Runner::parseval},
                                               {2, &Runner::synthesis},
                                               {3, &Runner::unbiasing},
                                               {4, &Runner::low_snr},
                                               {5, &Runner::frame_scaling},
                                               {6, &Runner::cd_invariance},
                                               {7, &Runner::snr_gain},
                                               {8, &Runner::psd_structure},
                                               {9, &Runner::self_consistency},
                                               {10, &Runner::determinism}}};

}  // namespace

std::vector<Verdict> run_acceptance(const AcceptanceOptions& options, std::ostream& log) {
  try {
    options.scenario.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  for (int id : options.only) {
    if (id < 1 || id > static_cast<int>(kCriteria.size())) throw ConfigError("acceptance: unknown criterion " + std::to_string(id));
  }
  Runner runner(options, log);
  std::vector<Verdict> verdicts;
  for (const auto& c : kCriteria) {
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), c.id) == options.only.end()) continue;
    log << "criterion " << c.id << '\n';
    const auto start = Clock::now();
    Verdict v;
    try {
      v = (runner.*c.run)();
    } catch (const std::exception& e) {
      v = make_verdict(c.id, "criterion_" + std::to_string(c.id), kInf, 0.0, false, {{"error", e.what()}});
    }
    auto details = json::parse(v.details);
    details["runtime_s"] = std::chrono::duration<double>(Clock::now() - start).count();
    v.details = details.dump();
    log << verdict_line(v) << '\n';
    verdicts.push_back(std::move(v));
  }
  return verdicts;
}

std::string verdict_line(const Verdict& v) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "[%s] %2d %-32s measured=%-12.6g bound=%.6g", v.pass ? "PASS" : "FAIL", v.id, v.name.c_str(),
                v.measured, v.bound);
  return buf;
}

int cmd_acceptance(const AcceptanceOptions& options, std::ostream& log) {
  const auto verdicts = run_acceptance(options, log);
  json out = json::array();
  bool all_pass = true;
  for (const auto& v : verdicts) {
    out.push_back({{"id", v.id},
                   {"name", v.name},
                   {"measured", v.measured},
                   {"bound", v.bound},
                   {"pass", v.pass},
                   {"details", json::parse(v.details)}});
    all_pass = all_pass && v.pass;
  }
  if (options.out) {
    std::filesystem::create_directories(*options.out);
    write_text(*options.out / "verdicts.json", out.dump(2) + "\n");
  }
  log << "summary:\n";
  for (const auto& v : verdicts) log << verdict_line(v) << '\n';
  return all_pass ? kSuccess : kFailure;
}

}  // namespace lwr::cli
