#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lwrkit/image.hpp"
#include "lwrkit/synthetic.hpp"
#include "lwrkit/truth.hpp"

namespace lwr {

/// Reference synthetic acquisition: 16 nm lines at 32 nm pitch, 0.8 nm
/// pixels, 512 rows. Per-edge sigma is 1/sqrt(2) nm so that independent
/// edges give a line-width sigma near 1 nm. Dose and contrast put the
/// linescan SNR just below 2 at 4 frames and above 2 from 8 frames on.
struct Scenario {
  PalasantzasParams params{0.7071067811865476, 20.0, 0.75, std::nullopt};
  PsdModel model = PsdModel::palasantzas1;
  PatternSpec pattern{16.0, 32.0, 6, 0.8, 0.0, 1.6, 0.5475, 0.4525};
  double pixel_size = 0.8;
  int height = 512;
  int width = 0;  ///< 0 = n_lines full pitches
  double electrons_per_pixel_per_frame = 64.0;

  void validate() const;
  int raster_width() const;
  /// Same scenario with line/space levels 0.5 +- contrast / 2.
  Scenario with_contrast(double contrast) const;
};

struct SyntheticSample {
  GroundTruth truth;  ///< noise.n_frames is 0 until an acquisition is chosen
  GrayImage ideal;
};

/// Rough pattern for one seed: edge traces, exact edges and the noise-free raster.
SyntheticSample make_sample(const Scenario& scenario, std::uint64_t seed);

/// Noisy acquisitions of a sample at nested frame counts.
std::vector<GrayImage> acquire(const Scenario& scenario, const SyntheticSample& sample, std::span<const int> frames);

}  // namespace lwr
