#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"

using namespace lwr;
using namespace lwr::cli;

namespace {

void add_jobs(CLI::App* app, int& jobs) {
  app->add_option("--jobs,-j", jobs, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
}

void add_analysis_options(CLI::App* app, AnalysisConfig& config, int& model) {
  app->add_option("--model", model, "PSD model: 1 = palasantzas1, 2 = palasantzas2")->check(CLI::IsMember({1, 2}));
  app->add_option("--low-freq-exclusion", config.psd.low_freq_exclusion, "Lowest PSD bins left out of the fit")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--noise-band-fraction", config.psd.noise_band_fraction, "Top fraction of bins seeding the floor");
  app->add_option("--threshold", config.edges.threshold_fraction, "Edge threshold as a fraction of the swing");
  app->add_option("--histogram-bins", config.histogram.bins, "Gray-level histogram bins");
  app->add_flag("!--no-per-line", config.per_line, "Skip the per-line fits");
}

// Inserts config-file entries right after the subcommand token.
std::vector<std::string> expand_config(int argc, char** argv, const std::vector<std::string>& subcommands) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config = args[i + 1];
    if (args[i].starts_with("--config=")) config = args[i].substr(9);
  }
  if (config.empty()) return args;
  const auto tokens = config_tokens(read_config_file(config), args);
  auto pos = args.begin();
  while (pos != args.end() && std::find(subcommands.begin(), subcommands.end(), *pos) == subcommands.end()) ++pos;
  if (pos == args.end()) throw ConfigError("a subcommand is required");
  args.insert(pos + 1, tokens.begin(), tokens.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Line/space SEM metrology: SNR, CD and unbiased LER/LWR from SEM images"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "Flat key = value file; command-line flags take precedence");

  // generate
  GenerateOptions gen;
  int gen_model = 1;
  std::optional<double> exponent_free;
  std::string gen_denoiser;
  double pixel_size = gen.scenario.pixel_size;
  auto* g = app.add_subcommand("generate", "Write synthetic line/space images with ground-truth sidecars");
  g->fallthrough();
  g->add_option("--out,-o", gen.out, "Output directory");
  g->add_option("--seed", gen.seed, "First seed");
  g->add_option("--n-seeds", gen.n_seeds, "Number of consecutive seeds");
  g->add_option("--frames", gen.frames, "Frame counts")->delimiter(',');
  g->add_option("--contrast", gen.contrasts, "Line/space contrast levels")->delimiter(',');
  g->add_option("--pixel-size-nm", pixel_size, "Pixel size");
  g->add_option("--model", gen_model, "Roughness model")->check(CLI::IsMember({1, 2}));
  g->add_option("--sigma-nm", gen.scenario.params.sigma, "Per-edge roughness sigma");
  g->add_option("--xi-nm", gen.scenario.params.xi, "Correlation length");
  g->add_option("--hurst", gen.scenario.params.hurst, "Roughness exponent");
  g->add_option("--exponent-free", exponent_free, "Model 2 high-frequency exponent");
  g->add_option("--cd-nm", gen.scenario.pattern.cd, "Line width");
  g->add_option("--pitch-nm", gen.scenario.pattern.pitch, "Pitch");
  g->add_option("--lines", gen.scenario.pattern.n_lines, "Number of lines");
  g->add_option("--edge-blur-nm", gen.scenario.pattern.edge_blur_sigma, "Edge blur sigma");
  g->add_option("--height", gen.scenario.height, "Rows");
  g->add_option("--width", gen.scenario.width, "Columns (0 = whole pitches)");
  g->add_option("--electrons", gen.scenario.electrons_per_pixel_per_frame, "Mean electrons per pixel and frame");
  g->add_option("--bit-depth", gen.bit_depth, "PGM bit depth")->check(CLI::IsMember({8, 16}));
  g->add_option("--denoiser", gen_denoiser, "Also write <stem>.denoised.pgm with this denoiser");
  add_jobs(g, gen.jobs);

  // analyze
  AnalyzeOptions ana;
  int ana_model = 1;
  auto* a = app.add_subcommand("analyze", "Measure SNR, CD and LER/LWR of images");
  a->fallthrough();
  a->add_option("inputs", ana.inputs, "Images or glob patterns")->required();
  a->add_option("--out,-o", ana.out, "Output directory");
  a->add_option("--pixel-size-nm", ana.pixel_size, "Override the pixel size stored in the images");
  add_analysis_options(a, ana.analysis, ana_model);
  add_jobs(a, ana.jobs);

  // compare
  CompareOptions cmp;
  int cmp_model = 1;
  std::string cmp_denoiser = "external";
  auto* c = app.add_subcommand("compare", "Compare noisy images with their denoised counterparts");
  c->fallthrough();
  c->add_option("inputs", cmp.inputs, "Noisy images or glob patterns")->required();
  c->add_option("--out,-o", cmp.out, "Output directory");
  c->add_option("--pixel-size-nm", cmp.pixel_size, "Override the pixel size stored in the images");
  c->add_option("--denoiser", cmp_denoiser, "external[:pattern], gaussian[:sigma], median[:radius] or nlmeans[:patch,search,h]");
  add_analysis_options(c, cmp.analysis, cmp_model);
  add_jobs(c, cmp.jobs);

  // acceptance
  AcceptanceOptions acc;
  std::string acc_out = ".";
  auto* t = app.add_subcommand("acceptance", "Run the acceptance criteria on synthetic data");
  t->fallthrough();
  t->add_option("--seed", acc.seed, "Base seed");
  t->add_option("--out,-o", acc_out, "Directory for verdicts.json");
  t->add_option("--only", acc.only, "Criterion numbers to run")->delimiter(',');
  add_jobs(t, acc.jobs);

  try {
    auto args = expand_config(argc, argv, {"generate", "analyze", "compare", "acceptance"});
    std::reverse(args.begin(), args.end());
    app.parse(args);

    if (g->parsed()) {
      gen.scenario.pixel_size = pixel_size;
      gen.scenario.model = psd_model_from_int(gen_model);
      gen.scenario.params.exponent_free = exponent_free;
      if (!gen_denoiser.empty()) gen.denoiser = DenoiserSpec::parse(gen_denoiser);
      cmd_generate(gen, std::cout);
      return kSuccess;
    }
    if (a->parsed()) {
      ana.analysis.psd.model = psd_model_from_int(ana_model);
      return cmd_analyze(ana, std::cout);
    }
    if (c->parsed()) {
      cmp.analysis.psd.model = psd_model_from_int(cmp_model);
      cmp.denoiser = DenoiserSpec::parse(cmp_denoiser);
      return cmd_compare(cmp, std::cout);
    }
    acc.out = acc_out;
    return cmd_acceptance(acc, std::cout);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kConfigError;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
