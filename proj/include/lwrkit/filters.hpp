#pragma once

#include <span>
#include <vector>

namespace lwr::filters {

/// Mirror index into [0, n) without repeating the border sample (dcb|abcd|cba).
int reflect_index(int i, int n);

/// Normalized sampled Gaussian, radius ceil(4 sigma). sigma in pixels, > 0.
std::vector<double> gaussian_taps(double sigma_px);

/// Uniform taps of length 2 * halfwidth + 1 summing to one.
std::vector<double> box_taps(int halfwidth);

/// Correlates one line with symmetric taps under mirror borders.
void filter_line(std::span<const double> line, std::span<const double> taps, std::span<double> out);

/// Separable 2-D filter on a row-major raster: taps along x, then along y.
std::vector<double> filter_separable(std::span<const double> samples, int width, int height,
                                     std::span<const double> taps_x, std::span<const double> taps_y);

}  // namespace lwr::filters
