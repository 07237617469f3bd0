#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "cli/commands.hpp"

namespace lwr::cli {

/// Outcome of analyzing one file; exactly one of analysis / error is set.
struct ImageResult {
  std::string id;
  std::filesystem::path path;
  std::optional<ImageAnalysis> analysis;
  std::optional<GroundTruth> truth;
  std::optional<int> frames;
  std::string error;
};

ImageResult analyze_file(const std::filesystem::path& path, const std::optional<double>& pixel_size,
                         const AnalysisConfig& config, const std::optional<GrayImage>& preloaded = std::nullopt);

/// Frame count from the truth sidecar, else from an `_fNN` name suffix.
std::optional<int> frames_for(const std::filesystem::path& path, const std::optional<GroundTruth>& truth);

nlohmann::json report_json(const ImageResult& result);

/// Writes `<id>.report.json`, `<id>.ler_psd.csv`, `<id>.lwr_psd.csv` and `<id>.edges.csv`.
void write_image_outputs(const ImageResult& result, const std::filesystem::path& out);

std::string edges_csv(const EdgeSet& edges);

}  // namespace lwr::cli
