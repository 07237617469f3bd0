#include <cmath>
#include <cstdio>
#include <ostream>

#include "cli/commands.hpp"
#include "lwrkit/parallel.hpp"
#include "lwrkit/truth.hpp"

namespace lwr::cli {

namespace {

std::string generated_name(double contrast, std::uint64_t seed, int frames) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "ls_c%03d_s%04llu_f%02d", static_cast<int>(std::lround(contrast * 1000.0)),
                static_cast<unsigned long long>(seed), frames);
  return buf;
}

void check(const GenerateOptions& o) {
  try {
    o.scenario.validate();
    for (double c : o.contrasts) (void)o.scenario.with_contrast(c);
    if (o.denoiser) o.denoiser->validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (o.frames.empty()) throw ConfigError("generate: no frame counts");
  for (int f : o.frames) {
    if (f < 1) throw ConfigError("generate: frame counts must be >= 1");
  }
  if (o.n_seeds < 1) throw ConfigError("generate: --n-seeds must be >= 1");
  if (o.bit_depth != 8 && o.bit_depth != 16) throw ConfigError("generate: bit depth must be 8 or 16");
  if (o.denoiser && o.denoiser->kind == DenoiserKind::external) {
    throw ConfigError("generate: the external denoiser cannot produce images");
  }
}

}  // namespace

std::vector<std::filesystem::path> cmd_generate(const GenerateOptions& options, std::ostream& log) {
  check(options);
  std::filesystem::create_directories(options.out);

  std::vector<double> contrasts = options.contrasts;
  if (contrasts.empty()) contrasts.push_back(options.scenario.pattern.line_level - options.scenario.pattern.space_level);

  struct Task {
    double contrast;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (double c : contrasts) {
    for (int i = 0; i < options.n_seeds; ++i) tasks.push_back({c, options.seed + static_cast<std::uint64_t>(i)});
  }

  std::vector<std::vector<std::filesystem::path>> written(tasks.size());
  parallel_for(tasks.size(), options.jobs, [&](std::size_t t) {
    const Scenario scenario = options.contrasts.empty() ? options.scenario : options.scenario.with_contrast(tasks[t].contrast);
    const SyntheticSample sample = make_sample(scenario, tasks[t].seed);
    const auto images = acquire(scenario, sample, options.frames);
    for (std::size_t k = 0; k < images.size(); ++k) {
      const auto path = options.out / (generated_name(tasks[t].contrast, tasks[t].seed, options.frames[k]) + ".pgm");
      save_image(images[k], path, options.bit_depth);
      GroundTruth truth = sample.truth;
      truth.noise.n_frames = options.frames[k];
      write_truth(truth, truth_path_for(path));
      if (options.denoiser) {
        // Denoise the stored (quantized) image, as a downstream tool would see it.
        const GrayImage stored = load_image(path);
        auto denoised_path = path;
        denoised_path.replace_extension(".denoised.pgm");
        save_image(denoise(stored, *options.denoiser), denoised_path, options.bit_depth);
      }
      written[t].push_back(path);
    }
  });

  std::vector<std::filesystem::path> all;
  for (auto& w : written) all.insert(all.end(), w.begin(), w.end());
  log << "generated " << all.size() << " images in " << options.out.string() << '\n';
  return all;
}

}  // namespace lwr::cli
