#include <ostream>
#include <regex>

#include "cli/batch.hpp"
#include "lwrkit/parallel.hpp"
#include "lwrkit/report_json.hpp"
#include "lwrkit/text.hpp"

namespace lwr::cli {

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

const std::vector<std::string> kSummaryColumns{
    "id",           "image",           "frames",         "snr",
    "snr_db",       "cd_nm",           "cd_std_nm",      "ler_sigma_biased_nm",
    "ler_sigma_unbiased_nm", "ler3s_unbiased_nm", "lwr_sigma_biased_nm", "lwr_sigma_unbiased_nm",
    "lwr3s_unbiased_nm", "lwr_noise_floor_nm3", "fit_converged", "rejected_rows",
    "sigma_true_lwr_nm", "error"};

std::vector<std::string> summary_row(const ImageResult& r) {
  std::vector<std::string> row{r.id, r.path.filename().string(), r.frames ? std::to_string(*r.frames) : ""};
  if (r.analysis) {
    const auto& a = *r.analysis;
    const auto& ler = a.roughness.ler;
    const auto& lwr = a.roughness.lwr;
    row.insert(row.end(), {format_double(a.snr.linescan_snr), opt(a.snr.snr_db), format_double(a.cd.mean_cd),
                           format_double(a.cd.cd_std), format_double(ler.sigma_biased()),
                           format_double(ler.sigma_unbiased()), format_double(ler.three_sigma_unbiased()),
                           format_double(lwr.sigma_biased()), format_double(lwr.sigma_unbiased()),
                           format_double(lwr.three_sigma_unbiased()), format_double(lwr.fit.noise_floor),
                           (ler.fit.converged && lwr.fit.converged) ? "1" : "0",
                           std::to_string(a.edges.rejected_rows())});
  } else {
    row.resize(kSummaryColumns.size() - 2);
  }
  row.push_back(r.truth ? format_double(r.truth->realized_lwr_sigma()) : "");
  row.push_back(r.error);
  return row;
}

}  // namespace

std::optional<int> frames_for(const std::filesystem::path& path, const std::optional<GroundTruth>& truth) {
  if (truth && truth->noise.n_frames > 0) return truth->noise.n_frames;
  static const std::regex suffix(R"(_f(\d{1,6})$)");
  std::smatch m;
  const std::string stem = path.stem().string();
  if (std::regex_search(stem, m, suffix)) return std::stoi(m[1].str());
  return std::nullopt;
}

ImageResult analyze_file(const std::filesystem::path& path, const std::optional<double>& pixel_size,
                         const AnalysisConfig& config, const std::optional<GrayImage>& preloaded) {
  ImageResult r;
  r.id = image_id(path);
  r.path = path;
  try {
    const auto sidecar = truth_path_for(path);
    if (std::filesystem::exists(sidecar)) r.truth = read_truth(sidecar);
    r.frames = frames_for(path, r.truth);
    const GrayImage image = preloaded ? *preloaded : load_image(path, pixel_size);
    r.analysis = analyze_image(image, config);
  } catch (const std::exception& e) {
    r.analysis.reset();
    r.error = e.what();
  }
  return r;
}

nlohmann::json report_json(const ImageResult& r) {
  nlohmann::json j{{"id", r.id}, {"image", r.path.filename().string()}};
  j["frames"] = r.frames ? nlohmann::json(*r.frames) : nlohmann::json(nullptr);
  if (r.analysis) {
    j.update(to_json(*r.analysis));
  } else {
    j["error"] = r.error;
  }
  if (r.truth) {
    j["truth"] = {{"sigma_ler_nm", r.truth->realized_ler_sigma()},
                  {"sigma_lwr_nm", r.truth->realized_lwr_sigma()},
                  {"cd_nm", r.truth->realized_cd()}};
  }
  return j;
}

std::string edges_csv(const EdgeSet& edges) {
  std::string out = "row,line,left_nm,right_nm\n";
  for (int i = 0; i < edges.rows(); ++i) {
    for (int l = 0; l < edges.n_lines(); ++l) {
      const auto& line = edges.lines()[l];
      out += csv_row({std::to_string(edges.row_index()[i]), std::to_string(l), format_double(line.left[i]),
                      format_double(line.right[i])});
      out += '\n';
    }
  }
  return out;
}

void write_image_outputs(const ImageResult& r, const std::filesystem::path& out) {
  write_text(out / (r.id + ".report.json"), report_json(r).dump(1) + "\n");
  if (!r.analysis) return;
  const auto& a = *r.analysis;
  write_text(out / (r.id + ".ler_psd.csv"), psd_csv(a.roughness.ler.biased, &a.roughness.ler.unbiased));
  write_text(out / (r.id + ".lwr_psd.csv"), psd_csv(a.roughness.lwr.biased, &a.roughness.lwr.unbiased));
  write_text(out / (r.id + ".edges.csv"), edges_csv(a.edges));
}

int cmd_analyze(const AnalyzeOptions& options, std::ostream& log) {
  try {
    options.analysis.psd.validate();
    options.analysis.edges.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (options.pixel_size && !(*options.pixel_size > 0.0)) throw ConfigError("pixel size must be positive");
  auto inputs = expand_inputs(options.inputs);
  std::erase_if(inputs, [](const auto& p) { return is_denoised_name(p); });
  std::filesystem::create_directories(options.out);

  std::vector<ImageResult> results(inputs.size());
  parallel_for(inputs.size(), options.jobs, [&](std::size_t i) {
    results[i] = analyze_file(inputs[i], options.pixel_size, options.analysis);
    write_image_outputs(results[i], options.out);
  });
  std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) { return a.id < b.id; });

  std::string summary = csv_row(kSummaryColumns) + "\n";
  std::string snr = "image,bins,i1,i2,s1,s2,snr,converged\n";
  int failures = 0;
  for (const auto& r : results) {
    summary += csv_row(summary_row(r)) + "\n";
    if (r.analysis) {
      const auto& s = r.analysis->snr;
      snr += csv_row({r.id, std::to_string(s.bins), format_double(s.fit.i1), format_double(s.fit.i2),
                      format_double(s.fit.s1), format_double(s.fit.s2), format_double(s.linescan_snr),
                      s.fit.converged ? "1" : "0"}) +
             "\n";
    } else {
      ++failures;
      log << "error: " << r.path.string() << ": " << r.error << '\n';
    }
  }
  write_text(options.out / "summary.csv", summary);
  write_text(options.out / "snr.csv", snr);
  log << "analyzed " << results.size() - failures << " of " << results.size() << " images\n";
  return failures ? kFailure : kSuccess;
}

}  // namespace lwr::cli
