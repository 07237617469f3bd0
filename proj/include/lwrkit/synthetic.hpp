#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lwrkit/image.hpp"
#include "lwrkit/palasantzas.hpp"

namespace lwr {

/// Integration-frame ladder of the reference acquisitions.
inline constexpr std::array<int, 5> kFrameLadder{4, 8, 16, 32, 64};

struct PalasantzasParams {
  double sigma = 1.0;   ///< nm, true per-edge roughness
  double xi = 20.0;     ///< nm, correlation length
  double hurst = 0.75;  ///< roughness exponent in (0, 1]
  std::optional<double> exponent_free;  ///< model 2 only; > 1

  void validate(PsdModel model) const;
};

/// PSD(0) giving the spectrum an area of sigma^2.
double psd0_for_sigma(const PalasantzasParams& params, PsdModel model);

struct PatternSpec {
  double cd = 16.0;     ///< nm
  double pitch = 32.0;  ///< nm
  int n_lines = 6;
  double edge_blur_sigma = 0.8;        ///< nm
  double edge_effect_amplitude = 0.0;  ///< intensity added at each edge
  double edge_effect_width = 1.6;      ///< nm
  double line_level = 0.55;
  double space_level = 0.45;

  void validate() const;

  /// Unperturbed position (nm from the raster's left border) of edge `e`;
  /// edges are numbered left-to-right, 2 per line.
  double nominal_edge(int edge) const;

  /// Raster width that holds n_lines full pitches.
  int natural_width(double pixel_size) const;
};

struct NoiseSpec {
  double electrons_per_pixel_per_frame = 64.0;
  int n_frames = 4;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Rough edge deviations (nm) with the Palasantzas spectrum, synthesized from
/// independent Gaussian Fourier coefficients. n_points must be a power of two >= 64.
std::vector<double> sample_edge_trace(const PalasantzasParams& params, PsdModel model, int n_points,
                                      double pixel_size, std::uint64_t seed);

/// `count` independent traces of length `length` from one seed. Each is
/// synthesized at the next power of two >= max(length, 64) and truncated.
std::vector<std::vector<double>> sample_edge_traces(const PalasantzasParams& params, PsdModel model, int count,
                                                    int length, double pixel_size, std::uint64_t seed);

/// Noise-free line/space raster with the given per-edge deviations.
/// edge_traces holds 2 * n_lines sequences of `height` values.
GrayImage render_pattern(const PatternSpec& spec, std::span<const std::vector<double>> edge_traces, int width,
                         int height, double pixel_size);

/// Absolute edge positions (nm) per edge and row: nominal + deviation.
std::vector<std::vector<double>> true_edge_positions(const PatternSpec& spec,
                                                     std::span<const std::vector<double>> edge_traces);

/// Poisson shot noise averaged over noise.n_frames frames.
GrayImage simulate_frames(const GrayImage& ideal, const NoiseSpec& noise);

/// simulate_frames for several frame counts at once, sharing the nested
/// frame substreams. Output i is bit-identical to simulate_frames with
/// n_frames = frame_counts[i].
std::vector<GrayImage> simulate_frame_ladder(const GrayImage& ideal, double electrons_per_pixel_per_frame,
                                             std::uint64_t seed, std::span<const int> frame_counts);

}  // namespace lwr
