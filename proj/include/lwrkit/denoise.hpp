#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "lwrkit/image.hpp"
#include "lwrkit/pipeline.hpp"
#include "lwrkit/truth.hpp"

namespace lwr {

enum class DenoiserKind { gaussian, median, nlmeans, external };

struct DenoiserSpec {
  DenoiserKind kind = DenoiserKind::nlmeans;
  double gaussian_sigma = 1.0;  ///< pixels
  int median_radius = 1;        ///< pixels
  int patch_radius = 2;
  int search_radius = 7;
  /// Filtering strength in intensity units; estimated from the image when unset.
  std::optional<double> h;
  /// Noise sigma in intensity units; estimated from the image when unset.
  std::optional<double> noise_sigma;
  /// Square-root variance stabilization around the nlmeans pass.
  bool vst = false;
  /// Path pattern for external results. {dir} and {stem} expand from the noisy image path.
  std::string external_pattern = "{dir}/{stem}.denoised.pgm";
  int threads = 1;  ///< nlmeans row workers (0 = hardware)

  void validate() const;

  /// Parses "kind[:p1[,p2[,p3]]]": gaussian:sigma, median:radius,
  /// nlmeans:patch,search,h, external:pattern.
  static DenoiserSpec parse(std::string_view text);
};

std::string_view denoiser_name(DenoiserKind kind);

/// `source` is the noisy image's path; required for the external kind.
GrayImage denoise(const GrayImage& image, const DenoiserSpec& spec,
                  const std::optional<std::filesystem::path>& source = std::nullopt);

/// Expands the external pattern for one noisy image.
std::filesystem::path external_path(const std::filesystem::path& noisy, const std::string& pattern);

/// Immerkaer noise estimate: Laplacian-difference mask response, in intensity units.
double estimate_noise_sigma(const GrayImage& image);

/// Analyzes both images and builds the comparison record.
DenoiserComparison evaluate_denoiser(const GrayImage& noisy, const GrayImage& denoised,
                                     const GroundTruth* truth = nullptr, const AnalysisConfig& config = {});

}  // namespace lwr
