#include "lwrkit/report_json.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "lwrkit/text.hpp"

namespace lwr {

namespace {

using nlohmann::json;

// JSON has no NaN or infinity; such values become null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <class T>
json optional_number(const std::optional<T>& v) {
  return v ? number(*v) : json(nullptr);
}

}  // namespace

json to_json(const PalasantzasParams& p) {
  return {{"sigma_nm", p.sigma}, {"xi_nm", p.xi}, {"hurst", p.hurst}, {"exponent_free", optional_number(p.exponent_free)}};
}

json to_json(const PatternSpec& s) {
  return {{"cd_nm", s.cd},
          {"pitch_nm", s.pitch},
          {"n_lines", s.n_lines},
          {"edge_blur_sigma_nm", s.edge_blur_sigma},
          {"edge_effect_amplitude", s.edge_effect_amplitude},
          {"edge_effect_width_nm", s.edge_effect_width},
          {"line_level", s.line_level},
          {"space_level", s.space_level}};
}

json to_json(const NoiseSpec& n) {
  return {{"electrons_per_pixel_per_frame", n.electrons_per_pixel_per_frame},
          {"n_frames", n.n_frames},
          {"seed", n.seed}};
}

json to_json(const GroundTruth& t) {
  return {{"params", to_json(t.params)},
          {"model", static_cast<int>(t.model)},
          {"pattern", to_json(t.pattern)},
          {"noise", to_json(t.noise)},
          {"pixel_size_nm", t.pixel_size},
          {"width", t.width},
          {"height", t.height},
          {"realized_ler_sigma_nm", t.realized_ler_sigma()},
          {"realized_lwr_sigma_nm", t.realized_lwr_sigma()},
          {"edges_nm", t.edges}};
}

GroundTruth truth_from_json(const json& j) {
  GroundTruth t;
  const auto& p = j.at("params");
  t.params.sigma = p.at("sigma_nm").get<double>();
  t.params.xi = p.at("xi_nm").get<double>();
  t.params.hurst = p.at("hurst").get<double>();
  if (!p.at("exponent_free").is_null()) t.params.exponent_free = p.at("exponent_free").get<double>();
  t.model = psd_model_from_int(j.at("model").get<int>());
  const auto& s = j.at("pattern");
  t.pattern.cd = s.at("cd_nm").get<double>();
  t.pattern.pitch = s.at("pitch_nm").get<double>();
  t.pattern.n_lines = s.at("n_lines").get<int>();
  t.pattern.edge_blur_sigma = s.at("edge_blur_sigma_nm").get<double>();
  t.pattern.edge_effect_amplitude = s.at("edge_effect_amplitude").get<double>();
  t.pattern.edge_effect_width = s.at("edge_effect_width_nm").get<double>();
  t.pattern.line_level = s.at("line_level").get<double>();
  t.pattern.space_level = s.at("space_level").get<double>();
  const auto& n = j.at("noise");
  t.noise.electrons_per_pixel_per_frame = n.at("electrons_per_pixel_per_frame").get<double>();
  t.noise.n_frames = n.at("n_frames").get<int>();
  t.noise.seed = n.at("seed").get<std::uint64_t>();
  t.pixel_size = j.at("pixel_size_nm").get<double>();
  t.width = j.at("width").get<int>();
  t.height = j.at("height").get<int>();
  t.edges = j.at("edges_nm").get<std::vector<std::vector<double>>>();
  if (t.edges.size() != static_cast<std::size_t>(2 * t.pattern.n_lines)) {
    throw std::runtime_error("truth sidecar: edge count does not match n_lines");
  }
  for (const auto& e : t.edges) {
    if (e.size() != static_cast<std::size_t>(t.height)) throw std::runtime_error("truth sidecar: edge length != height");
  }
  return t;
}

json to_json(const HistogramFit& f) {
  return {{"m1", number(f.m1)}, {"i1", number(f.i1)}, {"s1", number(f.s1)},
          {"m2", number(f.m2)}, {"i2", number(f.i2)}, {"s2", number(f.s2)},
          {"residual", number(f.residual)}, {"converged", f.converged}, {"iterations", f.iterations}};
}

json to_json(const SnrReport& r) {
  return {{"linescan_snr", number(r.linescan_snr)},
          {"snr_db", optional_number(r.snr_db)},
          {"bins", r.bins},
          {"fit", to_json(r.fit)}};
}

json to_json(const CdReport& r) {
  json per_line = json::array();
  for (double v : r.per_line_mean) per_line.push_back(number(v));
  return {{"mean_cd_nm", number(r.mean_cd)},
          {"cd_std_nm", number(r.cd_std)},
          {"n_lines", r.n_lines},
          {"rows", r.rows},
          {"per_line_mean_nm", per_line}};
}

json to_json(const PalasantzasFit& f) {
  return {{"model", static_cast<int>(f.model)},
          {"psd0_nm3", number(f.psd0)},
          {"xi_nm", number(f.xi)},
          {"hurst", number(f.hurst)},
          {"exponent_free", optional_number(f.exponent_free)},
          {"noise_floor_nm3", number(f.noise_floor)},
          {"sigma_biased_nm", number(f.sigma_biased)},
          {"sigma_unbiased_nm", number(f.sigma_unbiased)},
          {"fit_rms_log_residual", number(f.fit_rms_log_residual)},
          {"converged", f.converged},
          {"iterations", f.iterations}};
}

json to_json(const RoughnessResult& r) {
  return {{"fit", to_json(r.fit)},
          {"three_sigma_biased_nm", number(r.three_sigma_biased())},
          {"three_sigma_unbiased_nm", number(r.three_sigma_unbiased())},
          {"n_traces", r.biased.n_traces_averaged},
          {"trace_length", r.biased.trace_length}};
}

json to_json(const ImageAnalysis& a) {
  json per_line_ler = json::array();
  json per_line_lwr = json::array();
  for (const auto& r : a.roughness.per_line_ler) per_line_ler.push_back(to_json(r));
  for (const auto& r : a.roughness.per_line_lwr) per_line_lwr.push_back(to_json(r));
  return {{"snr", to_json(a.snr)},
          {"cd", to_json(a.cd)},
          {"edges", {{"n_lines", a.edges.n_lines()}, {"rows", a.edges.rows()}, {"rejected_rows", a.edges.rejected_rows()}}},
          {"ler", to_json(a.roughness.ler)},
          {"lwr", to_json(a.roughness.lwr)},
          {"per_line_ler", per_line_ler},
          {"per_line_lwr", per_line_lwr}};
}

json to_json(const DenoiserComparison& c) {
  auto pair = [](const SigmaPair& p) {
    return json{{"sigma_biased_nm", number(p.biased)}, {"sigma_unbiased_nm", number(p.unbiased)}};
  };
  return {{"snr_noisy", number(c.snr_noisy)},
          {"snr_denoised", number(c.snr_denoised)},
          {"dsnr_pct", number(c.dsnr_pct)},
          {"cd_noisy_nm", number(c.cd_noisy)},
          {"cd_denoised_nm", number(c.cd_denoised)},
          {"dcd_pct", number(c.dcd_pct)},
          {"ler_noisy", pair(c.ler_noisy)},
          {"ler_denoised", pair(c.ler_denoised)},
          {"lwr_noisy", pair(c.lwr_noisy)},
          {"lwr_denoised", pair(c.lwr_denoised)},
          {"sigma_true_ler_nm", optional_number(c.sigma_true_ler)},
          {"sigma_true_lwr_nm", optional_number(c.sigma_true_lwr)},
          {"ler_error_noisy_nm", optional_number(c.ler_error_noisy)},
          {"ler_error_denoised_nm", optional_number(c.ler_error_denoised)},
          {"lwr_error_noisy_nm", optional_number(c.lwr_error_noisy)},
          {"lwr_error_denoised_nm", optional_number(c.lwr_error_denoised)}};
}

std::string psd_csv(const PsdCurve& biased, const PsdCurve* unbiased) {
  if (unbiased && unbiased->density.size() != biased.density.size()) {
    throw std::invalid_argument("psd_csv: curves differ in length");
  }
  std::string out = unbiased ? "frequency_per_nm,density_nm3,unbiased_density_nm3\n" : "frequency_per_nm,density_nm3\n";
  for (std::size_t k = 0; k < biased.density.size(); ++k) {
    std::vector<std::string> row{format_double(biased.frequencies[k]), format_double(biased.density[k])};
    if (unbiased) row.push_back(format_double(unbiased->density[k]));
    out += csv_row(row);
    out += '\n';
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace lwr
