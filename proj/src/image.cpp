#include "lwrkit/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>

#include "lwrkit/text.hpp"

namespace lwr {

namespace {

constexpr const char* kPixelSizeKey = "pixel_size_nm=";

void validate(int width, int height, double pixel_size, std::span<const double> samples) {
  if (width < GrayImage::kMinSide || height < GrayImage::kMinSide) {
    throw std::invalid_argument("GrayImage: width and height must be >= 8, got " +
                                std::to_string(width) + "x" + std::to_string(height));
  }
  if (!(pixel_size > 0.0) || !std::isfinite(pixel_size)) {
    throw std::invalid_argument("GrayImage: pixel size must be positive");
  }
  if (samples.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw std::invalid_argument("GrayImage: sample count does not match geometry");
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double v = samples[i];
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw std::invalid_argument("GrayImage: sample " + std::to_string(i) + " outside [0, 1]");
    }
  }
}

// Header tokenizer for the PNM family: whitespace separated, '#' starts a
// comment running to end of line. Comments are collected for metadata.
class PnmHeaderReader {
 public:
  explicit PnmHeaderReader(std::istream& in) : in_(in) {}

  std::string token() {
    skip_space_and_comments();
    std::string tok;
    while (true) {
      const int c = in_.peek();
      if (c == EOF || std::isspace(c) || c == '#') break;
      tok.push_back(static_cast<char>(in_.get()));
    }
    if (tok.empty()) throw std::runtime_error("PGM: malformed header (unexpected end)");
    return tok;
  }

  unsigned long number() {
    const std::string tok = token();
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(tok, &pos);
    } catch (const std::exception&) {
      throw std::runtime_error("PGM: malformed header value '" + tok + "'");
    }
    if (pos != tok.size()) throw std::runtime_error("PGM: malformed header value '" + tok + "'");
    return v;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  void consume_raster_separator() {
    const int c = in_.get();
    if (c == EOF || !std::isspace(c)) throw std::runtime_error("PGM: malformed header (no raster separator)");
  }

  const std::vector<std::string>& comments() const { return comments_; }

 private:
  void skip_space_and_comments() {
    while (true) {
      const int c = in_.peek();
      if (c == EOF) return;
      if (std::isspace(c)) {
        in_.get();
      } else if (c == '#') {
        in_.get();
        std::string line;
        std::getline(in_, line);
        comments_.push_back(line);
      } else {
        return;
      }
    }
  }

  std::istream& in_;
  std::vector<std::string> comments_;
};

std::optional<double> pixel_size_from_comments(const std::vector<std::string>& comments) {
  for (const auto& raw : comments) {
    const auto pos = raw.find(kPixelSizeKey);
    if (pos == std::string::npos) continue;
    std::string value = raw.substr(pos + std::char_traits<char>::length(kPixelSizeKey));
    while (!value.empty() && std::isspace(static_cast<unsigned char>(value.back()))) value.pop_back();
    const auto parsed = parse_double(value);
    if (!parsed) throw std::runtime_error("PGM: malformed pixel_size_nm comment '" + raw + "'");
    return parsed;
  }
  return std::nullopt;
}

}  // namespace

GrayImage::GrayImage(int width, int height, double pixel_size_nm, std::vector<double> samples,
                     int source_bit_depth)
    : width_(width),
      height_(height),
      pixel_size_(pixel_size_nm),
      bit_depth_(source_bit_depth),
      samples_(std::move(samples)) {
  validate(width_, height_, pixel_size_, samples_);
  if (bit_depth_ != 0 && bit_depth_ != 8 && bit_depth_ != 16) {
    throw std::invalid_argument("GrayImage: source bit depth must be 0, 8 or 16");
  }
}

GrayImage GrayImage::filled(int width, int height, double pixel_size_nm, double value) {
  const auto n = static_cast<std::size_t>(std::max(width, 0)) * static_cast<std::size_t>(std::max(height, 0));
  return GrayImage(width, height, pixel_size_nm, std::vector<double>(n, value));
}

GrayImage GrayImage::with_samples(std::vector<double> samples) const {
  return GrayImage(width_, height_, pixel_size_, std::move(samples), 0);
}

unsigned quantize_sample(double value, int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16) throw std::invalid_argument("bit depth must be 8 or 16");
  const double maxval = bit_depth == 8 ? 255.0 : 65535.0;
  // nearbyint honours the default FE_TONEAREST mode: ties go to even.
  const double q = std::nearbyint(std::clamp(value, 0.0, 1.0) * maxval);
  return static_cast<unsigned>(q);
}

GrayImage load_image(const std::filesystem::path& path, std::optional<double> pixel_size_override) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("PGM: cannot open " + path.string());

  PnmHeaderReader header(in);
  const std::string magic = header.token();
  if (magic != "P5") throw std::runtime_error("PGM: unsupported format '" + magic + "' in " + path.string());
  const unsigned long width = header.number();
  const unsigned long height = header.number();
  const unsigned long maxval = header.number();
  if (maxval == 0 || maxval > 65535) throw std::runtime_error("PGM: unsupported maxval " + std::to_string(maxval));
  if (width == 0 || height == 0 || width > (1ul << 20) || height > (1ul << 20)) {
    throw std::runtime_error("PGM: malformed dimensions");
  }
  header.consume_raster_separator();

  std::optional<double> pixel_size = pixel_size_override;
  if (!pixel_size) pixel_size = pixel_size_from_comments(header.comments());
  if (!pixel_size) throw std::runtime_error("PGM: missing pixel size (no pixel_size_nm comment) in " + path.string());

  const bool wide = maxval > 255;
  const std::size_t n = width * height;
  const std::size_t bytes = n * (wide ? 2 : 1);
  std::vector<unsigned char> raw(bytes);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(bytes));
  if (static_cast<std::size_t>(in.gcount()) != bytes) throw std::runtime_error("PGM: truncated raster in " + path.string());

  std::vector<double> samples(n);
  const double full_scale = static_cast<double>(maxval);
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned v = wide ? (static_cast<unsigned>(raw[2 * i]) << 8) | raw[2 * i + 1] : raw[i];
    if (v > maxval) throw std::runtime_error("PGM: sample exceeds maxval in " + path.string());
    samples[i] = static_cast<double>(v) / full_scale;
  }
  return GrayImage(static_cast<int>(width), static_cast<int>(height), *pixel_size, std::move(samples),
                   wide ? 16 : 8);
}

void save_image(const GrayImage& image, const std::filesystem::path& path, int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16) throw std::invalid_argument("save_image: bit depth must be 8 or 16");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("PGM: cannot write " + path.string());

  out << "P5\n# " << kPixelSizeKey << format_double(image.pixel_size()) << "\n"
      << image.width() << ' ' << image.height() << '\n'
      << (bit_depth == 8 ? 255 : 65535) << '\n';

  const auto samples = image.samples();
  std::vector<unsigned char> raw(samples.size() * (bit_depth == 16 ? 2 : 1));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const unsigned q = quantize_sample(samples[i], bit_depth);
    if (bit_depth == 16) {
      raw[2 * i] = static_cast<unsigned char>(q >> 8);
      raw[2 * i + 1] = static_cast<unsigned char>(q & 0xff);
    } else {
      raw[i] = static_cast<unsigned char>(q);
    }
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw std::runtime_error("PGM: write failed for " + path.string());
}

}  // namespace lwr
