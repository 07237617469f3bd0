#include "lwrkit/denoise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "lwrkit/filters.hpp"
#include "lwrkit/kernels.hpp"
#include "lwrkit/parallel.hpp"
#include "lwrkit/text.hpp"

namespace lwr {

namespace {

constexpr double kDefaultHFactor = 0.4;  // h = factor * noise sigma
constexpr int kBandRows = 32;

std::vector<double> clamp_unit(std::vector<double> v) {
  for (auto& x : v) x = std::clamp(x, 0.0, 1.0);
  return v;
}

GrayImage gaussian(const GrayImage& image, double sigma) {
  if (sigma < 1e-6) return image;
  const auto taps = filters::gaussian_taps(sigma);
  return image.with_samples(
      clamp_unit(filters::filter_separable(image.samples(), image.width(), image.height(), taps, taps)));
}

GrayImage median(const GrayImage& image, int radius) {
  const int w = image.width();
  const int h = image.height();
  std::vector<double> out(image.size());
  std::vector<double> window(static_cast<std::size_t>((2 * radius + 1) * (2 * radius + 1)));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::size_t k = 0;
      for (int dy = -radius; dy <= radius; ++dy) {
        const int yy = filters::reflect_index(y + dy, h);
        for (int dx = -radius; dx <= radius; ++dx) window[k++] = image.at(filters::reflect_index(x + dx, w), yy);
      }
      const auto mid = window.begin() + static_cast<long>(window.size() / 2);
      std::nth_element(window.begin(), mid, window.end());
      out[static_cast<std::size_t>(y) * w + x] = *mid;
    }
  }
  return image.with_samples(std::move(out));
}

// Mirror-padded copy of a raster, `pad` samples on every side.
struct Padded {
  int width = 0;
  int pad = 0;
  std::vector<double> data;

  std::span<const double> row(int y, int x0, int n) const {
    return {data.data() + static_cast<std::size_t>(y + pad) * width + (x0 + pad), static_cast<std::size_t>(n)};
  }
};

Padded pad_image(std::span<const double> samples, int w, int h, int pad) {
  Padded p;
  p.pad = pad;
  p.width = w + 2 * pad;
  p.data.resize(static_cast<std::size_t>(p.width) * (h + 2 * pad));
  for (int y = -pad; y < h + pad; ++y) {
    const int sy = filters::reflect_index(y, h);
    for (int x = -pad; x < w + pad; ++x) {
      p.data[static_cast<std::size_t>(y + pad) * p.width + (x + pad)] =
          samples[static_cast<std::size_t>(sy) * w + filters::reflect_index(x, w)];
    }
  }
  return p;
}

// Offset-major non-local means. For each search offset the patch distance of
// every pixel is a box sum of squared differences, so the inner loops are the
// vector kernels. Rows are split into bands; each band replays the same
// per-pixel operation sequence, so the result does not depend on the split.
std::vector<double> nlmeans(std::span<const double> x, int w, int h, int patch, int search, double sigma, double hh,
                            int threads) {
  const Padded p = pad_image(x, w, h, patch + search);
  const int side = 2 * patch + 1;
  const auto box = filters::box_taps(patch);
  const double inv_side = 1.0 / side;
  const double offset = 2.0 * sigma * sigma;
  const double inv_h2 = 1.0 / (hh * hh);
  std::vector<double> out(x.size());
  const int n_bands = (h + kBandRows - 1) / kBandRows;

  parallel_for(static_cast<std::size_t>(n_bands), threads, [&](std::size_t band) {
    const int y0 = static_cast<int>(band) * kBandRows;
    const int y1 = std::min(h, y0 + kBandRows);
    const int rows = y1 - y0;
    const int ext_rows = rows + 2 * patch;
    const auto ww = static_cast<std::size_t>(w);
    std::vector<double> diff(ww + 2 * patch);
    std::vector<double> horiz(static_cast<std::size_t>(ext_rows) * ww);
    std::vector<double> dist(ww), weight(ww);
    std::vector<double> acc(static_cast<std::size_t>(rows) * ww, 0.0);
    std::vector<double> wsum(static_cast<std::size_t>(rows) * ww, 0.0);

    for (int dy = -search; dy <= search; ++dy) {
      for (int dx = -search; dx <= search; ++dx) {
        for (int r = 0; r < ext_rows; ++r) {
          const int y = y0 - patch + r;
          kernels::squared_difference(p.row(y, -patch, w + 2 * patch), p.row(y + dy, dx - patch, w + 2 * patch), diff);
          kernels::correlate_valid(diff, box, std::span(horiz).subspan(static_cast<std::size_t>(r) * ww, ww));
        }
        for (int r = 0; r < rows; ++r) {
          std::fill(dist.begin(), dist.end(), 0.0);
          for (int k = 0; k < side; ++k) {
            kernels::scaled_add(std::span<const double>(horiz).subspan(static_cast<std::size_t>(r + k) * ww, ww),
                                inv_side, dist);
          }
          for (std::size_t i = 0; i < ww; ++i) weight[i] = std::exp(-std::max(dist[i] - offset, 0.0) * inv_h2);
          kernels::weighted_accumulate(weight, p.row(y0 + r + dy, dx, w),
                                       std::span(acc).subspan(static_cast<std::size_t>(r) * ww, ww),
                                       std::span(wsum).subspan(static_cast<std::size_t>(r) * ww, ww));
        }
      }
    }
    for (std::size_t i = 0; i < acc.size(); ++i) out[static_cast<std::size_t>(y0) * ww + i] = acc[i] / wsum[i];
  });
  return out;
}

std::string replace_all(std::string s, const std::string& key, const std::string& value) {
  for (std::size_t pos = s.find(key); pos != std::string::npos; pos = s.find(key, pos + value.size())) {
    s.replace(pos, key.size(), value);
  }
  return s;
}

double parse_number(std::string_view field, std::string_view what) {
  const auto v = parse_double(field);
  if (!v) throw std::invalid_argument("denoiser: bad " + std::string(what) + " '" + std::string(field) + "'");
  return *v;
}

int parse_int(std::string_view field, std::string_view what) {
  const double v = parse_number(field, what);
  if (v != std::floor(v) || std::abs(v) > 1e6) {
    throw std::invalid_argument("denoiser: " + std::string(what) + " must be an integer");
  }
  return static_cast<int>(v);
}

}  // namespace

void DenoiserSpec::validate() const {
  switch (kind) {
    case DenoiserKind::gaussian:
      if (!(gaussian_sigma > 0.0)) throw std::invalid_argument("gaussian denoiser: sigma must be positive");
      break;
    case DenoiserKind::median:
      if (median_radius < 1) throw std::invalid_argument("median denoiser: radius must be >= 1");
      break;
    case DenoiserKind::nlmeans:
      if (patch_radius < 1 || search_radius < 1) {
        throw std::invalid_argument("nlmeans denoiser: patch and search radius must be >= 1");
      }
      if (h && !(*h > 0.0)) throw std::invalid_argument("nlmeans denoiser: h must be positive");
      if (noise_sigma && !(*noise_sigma >= 0.0)) throw std::invalid_argument("nlmeans denoiser: noise sigma must be >= 0");
      break;
    case DenoiserKind::external:
      if (external_pattern.empty()) throw std::invalid_argument("external denoiser: empty path pattern");
      break;
  }
}

DenoiserSpec DenoiserSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  std::vector<std::string_view> args;
  if (!rest.empty()) {
    std::size_t start = 0;
    while (true) {
      const auto comma = rest.find(',', start);
      args.push_back(rest.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  }

  DenoiserSpec spec;
  if (name == "gaussian") {
    spec.kind = DenoiserKind::gaussian;
    if (args.size() > 1) throw std::invalid_argument("gaussian denoiser takes one parameter");
    if (!args.empty()) spec.gaussian_sigma = parse_number(args[0], "sigma");
  } else if (name == "median") {
    spec.kind = DenoiserKind::median;
    if (args.size() > 1) throw std::invalid_argument("median denoiser takes one parameter");
    if (!args.empty()) spec.median_radius = parse_int(args[0], "radius");
  } else if (name == "nlmeans") {
    spec.kind = DenoiserKind::nlmeans;
    if (args.size() > 3) throw std::invalid_argument("nlmeans denoiser takes at most three parameters");
    if (args.size() > 0) spec.patch_radius = parse_int(args[0], "patch radius");
    if (args.size() > 1) spec.search_radius = parse_int(args[1], "search radius");
    if (args.size() > 2) spec.h = parse_number(args[2], "h");
  } else if (name == "external") {
    spec.kind = DenoiserKind::external;
    if (!rest.empty()) spec.external_pattern = std::string(rest);
  } else {
    throw std::invalid_argument("unknown denoiser '" + std::string(name) + "'");
  }
  spec.validate();
  return spec;
}

std::string_view denoiser_name(DenoiserKind kind) {
  switch (kind) {
    case DenoiserKind::gaussian: return "gaussian";
    case DenoiserKind::median: return "median";
    case DenoiserKind::nlmeans: return "nlmeans";
    case DenoiserKind::external: return "external";
  }
  return "unknown";
}

std::filesystem::path external_path(const std::filesystem::path& noisy, const std::string& pattern) {
  std::string dir = noisy.parent_path().string();
  if (dir.empty()) dir = ".";
  return replace_all(replace_all(pattern, "{dir}", dir), "{stem}", noisy.stem().string());
}

double estimate_noise_sigma(const GrayImage& image) {
  const int w = image.width();
  const int h = image.height();
  double sum = 0.0;
  for (int y = 1; y + 1 < h; ++y) {
    for (int x = 1; x + 1 < w; ++x) {
      const double v = image.at(x - 1, y - 1) - 2.0 * image.at(x, y - 1) + image.at(x + 1, y - 1) -
                       2.0 * image.at(x - 1, y) + 4.0 * image.at(x, y) - 2.0 * image.at(x + 1, y) +
                       image.at(x - 1, y + 1) - 2.0 * image.at(x, y + 1) + image.at(x + 1, y + 1);
      sum += std::abs(v);
    }
  }
  return std::sqrt(std::numbers::pi / 2.0) * sum / (6.0 * (w - 2) * (h - 2));
}

GrayImage denoise(const GrayImage& image, const DenoiserSpec& spec,
                  const std::optional<std::filesystem::path>& source) {
  spec.validate();
  switch (spec.kind) {
    case DenoiserKind::gaussian:
      return gaussian(image, spec.gaussian_sigma);
    case DenoiserKind::median:
      return median(image, spec.median_radius);
    case DenoiserKind::nlmeans: {
      std::vector<double> x(image.samples().begin(), image.samples().end());
      if (spec.vst) {
        for (auto& v : x) v = 2.0 * std::sqrt(v);
      }
      const GrayImage working =
          spec.vst ? GrayImage(image.width(), image.height(), image.pixel_size(),
                               [&] {
                                 auto s = x;
                                 for (auto& v : s) v = std::min(v * 0.5, 1.0);
                                 return s;
                               }())
                   : image;
      // Sigma of the stabilized image, estimated on the half-scale copy above.
      const double sigma = spec.noise_sigma.value_or(estimate_noise_sigma(working) * (spec.vst ? 2.0 : 1.0));
      const double hh = spec.h.value_or(std::max(kDefaultHFactor * sigma, 1e-6));
      auto y = nlmeans(x, image.width(), image.height(), spec.patch_radius, spec.search_radius, sigma, hh, spec.threads);
      if (spec.vst) {
        for (auto& v : y) v = 0.25 * v * v;
      }
      return image.with_samples(clamp_unit(std::move(y)));
    }
    case DenoiserKind::external: {
      if (!source) throw std::invalid_argument("external denoiser needs the noisy image path");
      const auto path = external_path(*source, spec.external_pattern);
      if (!std::filesystem::exists(path)) throw std::runtime_error("external denoised image missing: " + path.string());
      GrayImage out = load_image(path);
      if (out.width() != image.width() || out.height() != image.height() || out.pixel_size() != image.pixel_size()) {
        throw std::runtime_error("external denoised image geometry differs: " + path.string());
      }
      return out;
    }
  }
  throw std::logic_error("unreachable denoiser kind");
}

DenoiserComparison evaluate_denoiser(const GrayImage& noisy, const GrayImage& denoised, const GroundTruth* truth,
                                     const AnalysisConfig& config) {
  if (noisy.width() != denoised.width() || noisy.height() != denoised.height() ||
      noisy.pixel_size() != denoised.pixel_size()) {
    throw std::invalid_argument("evaluate_denoiser: geometry mismatch");
  }
  return compare_analyses(analyze_image(noisy, config), analyze_image(denoised, config), truth);
}

}  // namespace lwr
