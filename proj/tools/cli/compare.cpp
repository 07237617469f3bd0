#include <ostream>

#include "cli/batch.hpp"
#include "lwrkit/parallel.hpp"
#include "lwrkit/report_json.hpp"
#include "lwrkit/text.hpp"

namespace lwr::cli {

namespace {

struct PairResult {
  std::string id;
  std::optional<int> frames;
  std::optional<DenoiserComparison> comparison;
  std::string error;
};

}  // namespace

int cmd_compare(const CompareOptions& options, std::ostream& log) {
  try {
    options.denoiser.validate();
    options.analysis.psd.validate();
    options.analysis.edges.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (options.pixel_size && !(*options.pixel_size > 0.0)) throw ConfigError("pixel size must be positive");
  const auto inputs = expand_inputs(options.inputs);
  std::filesystem::create_directories(options.out);
  const bool external = options.denoiser.kind == DenoiserKind::external;

  std::vector<std::filesystem::path> noisy;
  std::vector<std::filesystem::path> denoised_inputs;
  for (const auto& p : inputs) (is_denoised_name(p) ? denoised_inputs : noisy).push_back(p);

  std::vector<std::string> unpaired;
  std::vector<std::pair<std::filesystem::path, std::filesystem::path>> pairs;
  for (const auto& p : noisy) {
    const auto partner = external ? external_path(p, options.denoiser.external_pattern)
                                  : options.out / (image_id(p) + ".denoised.pgm");
    if (external && !std::filesystem::exists(partner)) {
      unpaired.push_back(p.string());
      continue;
    }
    pairs.emplace_back(p, partner);
  }
  for (const auto& d : denoised_inputs) {
    const bool used = std::any_of(pairs.begin(), pairs.end(), [&](const auto& pr) {
      return std::filesystem::weakly_canonical(pr.second) == std::filesystem::weakly_canonical(d);
    });
    if (!used) unpaired.push_back(d.string());
  }
  for (const auto& u : unpaired) log << "unpaired, skipped: " << u << '\n';

  std::vector<PairResult> results(pairs.size());
  parallel_for(pairs.size(), options.jobs, [&](std::size_t i) {
    const auto& [noisy_path, denoised_path] = pairs[i];
    PairResult& r = results[i];
    r.id = image_id(noisy_path);
    try {
      if (!external) {
        DenoiserSpec spec = options.denoiser;
        spec.threads = 1;
        const GrayImage image = load_image(noisy_path, options.pixel_size);
        save_image(denoise(image, spec), denoised_path, image.source_bit_depth() ? image.source_bit_depth() : 16);
      }
      const ImageResult a = analyze_file(noisy_path, options.pixel_size, options.analysis);
      if (!a.analysis) throw std::runtime_error(noisy_path.string() + ": " + a.error);
      const ImageResult b = analyze_file(denoised_path, options.pixel_size, options.analysis);
      if (!b.analysis) throw std::runtime_error(denoised_path.string() + ": " + b.error);
      r.frames = a.frames;
      r.comparison = compare_analyses(*a.analysis, *b.analysis, a.truth ? &*a.truth : nullptr);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
  });
  std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) { return a.id < b.id; });

  const bool with_truth =
      std::any_of(results.begin(), results.end(), [](const auto& r) { return r.comparison && r.comparison->sigma_true_lwr; });
  std::vector<std::string> columns{"id",         "frames",         "snr_noisy", "snr_denoised",     "dsnr_pct",
                                   "cd_noisy_nm", "cd_denoised_nm", "dcd_pct",   "ulwr3s_noisy_nm", "ulwr3s_denoised_nm"};
  if (with_truth) columns.push_back("sigma_true_nm");
  std::string table = csv_row(columns) + "\n";
  std::string scatter = "id,frames,variant,snr,ulwr3s_nm\n";
  nlohmann::json records = nlohmann::json::array();
  nlohmann::json errors = nlohmann::json::array();
  int failures = 0;
  for (const auto& r : results) {
    const std::string frames = r.frames ? std::to_string(*r.frames) : "";
    if (!r.comparison) {
      ++failures;
      log << "error: " << r.id << ": " << r.error << '\n';
      errors.push_back({{"id", r.id}, {"error", r.error}});
      continue;
    }
    const auto& c = *r.comparison;
    std::vector<std::string> row{r.id,
                                 frames,
                                 format_double(c.snr_noisy),
                                 format_double(c.snr_denoised),
                                 format_double(c.dsnr_pct),
                                 format_double(c.cd_noisy),
                                 format_double(c.cd_denoised),
                                 format_double(c.dcd_pct),
                                 format_double(3.0 * c.lwr_noisy.unbiased),
                                 format_double(3.0 * c.lwr_denoised.unbiased)};
    if (with_truth) row.push_back(c.sigma_true_lwr ? format_double(*c.sigma_true_lwr) : "");
    table += csv_row(row) + "\n";
    scatter += csv_row({r.id, frames, "noisy", format_double(c.snr_noisy), format_double(3.0 * c.lwr_noisy.unbiased)}) + "\n";
    scatter += csv_row({r.id, frames, "denoised", format_double(c.snr_denoised),
                        format_double(3.0 * c.lwr_denoised.unbiased)}) +
               "\n";
    nlohmann::json rec = to_json(c);
    rec["id"] = r.id;
    rec["frames"] = r.frames ? nlohmann::json(*r.frames) : nlohmann::json(nullptr);
    records.push_back(std::move(rec));
  }
  write_text(options.out / "compare.csv", table);
  write_text(options.out / "scatter.csv", scatter);
  const nlohmann::json doc{{"denoiser", denoiser_name(options.denoiser.kind)},
                           {"pairs", records},
                           {"errors", errors},
                           {"unpaired", unpaired}};
  write_text(options.out / "compare.json", doc.dump(1) + "\n");
  log << "compared " << results.size() - failures << " of " << results.size() << " pairs";
  if (!unpaired.empty()) log << ", " << unpaired.size() << " unpaired";
  log << '\n';
  return failures ? kFailure : kSuccess;
}

}  // namespace lwr::cli
