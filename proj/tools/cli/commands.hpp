#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lwrkit/denoise.hpp"
#include "lwrkit/pipeline.hpp"
#include "lwrkit/scenario.hpp"

namespace lwr::cli {

enum ExitCode : int { kSuccess = 0, kFailure = 1, kConfigError = 2 };

/// Invalid options or configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GenerateOptions {
  Scenario scenario;
  std::vector<int> frames{kFrameLadder.begin(), kFrameLadder.end()};
  /// Line/space contrast levels (thickness proxy); empty keeps the scenario levels.
  std::vector<double> contrasts;
  std::uint64_t seed = 0;
  int n_seeds = 1;
  int bit_depth = 16;
  std::filesystem::path out = ".";
  int jobs = 0;
  /// Also writes `<stem>.denoised.pgm` next to each image.
  std::optional<DenoiserSpec> denoiser;
};

struct AnalyzeOptions {
  std::vector<std::string> inputs;  ///< paths or glob patterns
  std::filesystem::path out = ".";
  std::optional<double> pixel_size;
  AnalysisConfig analysis;
  int jobs = 0;
};

inline DenoiserSpec external_denoiser() {
  DenoiserSpec spec;
  spec.kind = DenoiserKind::external;
  return spec;
}

struct CompareOptions {
  std::vector<std::string> inputs;
  std::filesystem::path out = ".";
  std::optional<double> pixel_size;
  AnalysisConfig analysis;
  /// external (default) pairs files by name; other kinds denoise and save into `out`.
  DenoiserSpec denoiser = external_denoiser();
  int jobs = 0;
};

struct AcceptanceOptions {
  Scenario scenario;
  std::uint64_t seed = 0;
  int jobs = 0;
  std::optional<std::filesystem::path> out;  ///< verdict JSON directory
  std::vector<int> only;                     ///< criterion numbers; empty = all
};

struct Verdict {
  int id = 0;
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
  std::string details;  ///< JSON object text
};

/// Image stem used in generated file names and report ids.
std::string image_id(const std::filesystem::path& path);

/// Expands paths and glob patterns, sorted and de-duplicated. Throws ConfigError
/// when a pattern matches nothing.
std::vector<std::filesystem::path> expand_inputs(const std::vector<std::string>& patterns);

/// True for `<stem>.denoised.pgm`.
bool is_denoised_name(const std::filesystem::path& path);

/// Returns written image paths in generation order.
std::vector<std::filesystem::path> cmd_generate(const GenerateOptions& options, std::ostream& log);

int cmd_analyze(const AnalyzeOptions& options, std::ostream& log);

int cmd_compare(const CompareOptions& options, std::ostream& log);

std::vector<Verdict> run_acceptance(const AcceptanceOptions& options, std::ostream& log);

int cmd_acceptance(const AcceptanceOptions& options, std::ostream& log);

/// One pass/fail line per verdict.
std::string verdict_line(const Verdict& v);

}  // namespace lwr::cli
