#pragma once

#include <filesystem>
#include <vector>

#include "lwrkit/palasantzas.hpp"
#include "lwrkit/synthetic.hpp"

namespace lwr {

/// Everything a generated image was built from, plus the exact injected edges.
struct GroundTruth {
  PalasantzasParams params;
  PsdModel model = PsdModel::palasantzas1;
  PatternSpec pattern;
  NoiseSpec noise;
  double pixel_size = 0.0;
  int width = 0;
  int height = 0;
  /// Absolute edge positions in nm, edge-major (2 per line), one per row.
  std::vector<std::vector<double>> edges;

  /// Population sigma of the injected edge traces, pooled over edges.
  double realized_ler_sigma() const;
  /// Population sigma of the injected width traces, pooled over lines.
  double realized_lwr_sigma() const;
  /// Mean injected line width.
  double realized_cd() const;
};

/// Sidecar path for an image: `<image>.truth.json`.
std::filesystem::path truth_path_for(const std::filesystem::path& image_path);

void write_truth(const GroundTruth& truth, const std::filesystem::path& path);
GroundTruth read_truth(const std::filesystem::path& path);

}  // namespace lwr
