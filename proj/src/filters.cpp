#include "lwrkit/filters.hpp"

#include <cmath>
#include <stdexcept>

#include "lwrkit/kernels.hpp"

namespace lwr::filters {

int reflect_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

std::vector<double> gaussian_taps(double sigma_px) {
  if (!(sigma_px > 0.0)) throw std::invalid_argument("gaussian_taps: sigma must be positive");
  const int radius = static_cast<int>(std::ceil(4.0 * sigma_px));
  std::vector<double> taps(2 * radius + 1);
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    const double v = std::exp(-0.5 * (k * k) / (sigma_px * sigma_px));
    taps[k + radius] = v;
    sum += v;
  }
  for (auto& t : taps) t /= sum;
  return taps;
}

std::vector<double> box_taps(int halfwidth) {
  if (halfwidth < 0) throw std::invalid_argument("box_taps: negative halfwidth");
  const int n = 2 * halfwidth + 1;
  return std::vector<double>(n, 1.0 / n);
}

void filter_line(std::span<const double> line, std::span<const double> taps, std::span<double> out) {
  const int n = static_cast<int>(line.size());
  const int radius = static_cast<int>(taps.size() / 2);
  std::vector<double> padded(line.size() + 2 * radius);
  for (int i = -radius; i < n + radius; ++i) padded[i + radius] = line[reflect_index(i, n)];
  kernels::correlate_valid(padded, taps, out);
}

std::vector<double> filter_separable(std::span<const double> samples, int width, int height,
                                     std::span<const double> taps_x, std::span<const double> taps_y) {
  if (samples.size() != static_cast<std::size_t>(width) * height) {
    throw std::invalid_argument("filter_separable: geometry mismatch");
  }
  std::vector<double> horizontal(samples.size());
  for (int y = 0; y < height; ++y) {
    const auto offset = static_cast<std::size_t>(y) * width;
    filter_line(samples.subspan(offset, width), taps_x, std::span(horizontal).subspan(offset, width));
  }

  // Vertical pass as a weighted sum of mirrored rows so every column is
  // processed by the vector kernels at once.
  std::vector<double> out(samples.size(), 0.0);
  const int radius = static_cast<int>(taps_y.size() / 2);
  const std::span<const double> rows(horizontal);
  for (int y = 0; y < height; ++y) {
    std::span<double> dst(out.data() + static_cast<std::size_t>(y) * width, width);
    for (int k = -radius; k <= radius; ++k) {
      const int src_row = reflect_index(y + k, height);
      kernels::scaled_add(rows.subspan(static_cast<std::size_t>(src_row) * width, width), taps_y[k + radius], dst);
    }
  }
  return out;
}

}  // namespace lwr::filters
