#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace lwr {

/// Grayscale raster with physical scale. Samples are row-major doubles in [0, 1].
///
/// Immutable once constructed; every constructor validates geometry, pixel size
/// and sample range, so a GrayImage in hand is always well formed.
class GrayImage {
 public:
  static constexpr int kMinSide = 8;

  GrayImage(int width, int height, double pixel_size_nm, std::vector<double> samples,
            int source_bit_depth = 0);

  static GrayImage filled(int width, int height, double pixel_size_nm, double value);

  /// Same geometry and pixel size, new samples.
  GrayImage with_samples(std::vector<double> samples) const;

  int width() const { return width_; }
  int height() const { return height_; }
  double pixel_size() const { return pixel_size_; }
  /// 8 or 16 when the image came from a file, 0 when computed in memory.
  int source_bit_depth() const { return bit_depth_; }
  std::size_t size() const { return samples_.size(); }

  double at(int x, int y) const { return samples_[static_cast<std::size_t>(y) * width_ + x]; }
  std::span<const double> row(int y) const {
    return {samples_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
  }
  std::span<const double> samples() const { return samples_; }

  bool operator==(const GrayImage&) const = default;

 private:
  int width_;
  int height_;
  double pixel_size_;
  int bit_depth_;
  std::vector<double> samples_;
};

/// Reads a binary PGM (P5), 8 or 16 bit. The pixel size comes from a
/// `# pixel_size_nm=<float>` header comment unless `pixel_size_override` is set.
GrayImage load_image(const std::filesystem::path& path,
                     std::optional<double> pixel_size_override = std::nullopt);

/// Writes a binary PGM with the pixel-size comment. Quantization rounds half to even.
void save_image(const GrayImage& image, const std::filesystem::path& path, int bit_depth);

/// Stored integer level for a sample at the given bit depth (round half to even).
unsigned quantize_sample(double value, int bit_depth);

}  // namespace lwr
