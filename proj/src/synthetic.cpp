#include "lwrkit/synthetic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <string>

#include "lwrkit/fft.hpp"
#include "lwrkit/filters.hpp"
#include "lwrkit/rng.hpp"

namespace lwr {

namespace {

constexpr std::uint64_t kTraceStream = 0x7472616365ull;  // "trace"
constexpr std::uint64_t kFrameStreamTag = 0x6672616d65ull;  // "frame"

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

std::vector<double> synthesize_trace(const PalasantzasParams& params, PsdModel model, int n_points,
                                     double pixel_size, CounterRng& rng) {
  const double psd0 = psd0_for_sigma(params, model);
  const auto n = static_cast<std::size_t>(n_points);
  const double df = 1.0 / (n_points * pixel_size);
  std::normal_distribution<double> normal(0.0, 1.0);

  // One-sided periodogram convention: density_k = 2 dx/N |X_k|^2 for
  // 0 < k < N/2 and dx/N |X_k|^2 at Nyquist. Coefficients are drawn so that
  // E[density_k] equals the model at f_k.
  std::vector<std::complex<double>> spectrum(n / 2 + 1, {0.0, 0.0});
  for (std::size_t k = 1; k <= n / 2; ++k) {
    const double density =
        palasantzas_model(k * df, psd0, params.xi, params.hurst, model, params.exponent_free);
    if (k < n / 2) {
      const double sd = std::sqrt(n * density / (4.0 * pixel_size));
      const double re = sd * normal(rng);
      const double im = sd * normal(rng);
      spectrum[k] = {re, im};
    } else {
      spectrum[k] = {std::sqrt(n * density / pixel_size) * normal(rng), 0.0};
    }
  }
  auto trace = fft::inverse_real(spectrum, n);
  for (auto& v : trace) v /= static_cast<double>(n);
  return trace;
}

}  // namespace

void PalasantzasParams::validate(PsdModel model) const {
  require(sigma > 0.0 && std::isfinite(sigma), "PalasantzasParams: sigma must be > 0");
  require(xi > 0.0 && std::isfinite(xi), "PalasantzasParams: xi must be > 0");
  require(hurst > 0.0 && hurst <= 1.0, "PalasantzasParams: hurst must lie in (0, 1]");
  if (exponent_free) require(*exponent_free > 1.0, "PalasantzasParams: exponent_free must be > 1");
  if (model == PsdModel::palasantzas2) require(exponent_free.has_value(), "PalasantzasParams: model 2 needs exponent_free");
}

double psd0_for_sigma(const PalasantzasParams& params, PsdModel model) {
  params.validate(model);
  const double power = palasantzas_power(params.hurst, model, params.exponent_free);
  return params.sigma * params.sigma / palasantzas_unit_area(params.xi, power);
}

void PatternSpec::validate() const {
  require(cd > 0.0 && cd < pitch, "PatternSpec: need 0 < cd < pitch");
  require(n_lines >= 1, "PatternSpec: n_lines must be >= 1");
  require(line_level != space_level, "PatternSpec: line and space levels must differ");
  require(line_level >= 0.0 && line_level <= 1.0 && space_level >= 0.0 && space_level <= 1.0,
          "PatternSpec: levels must lie in [0, 1]");
  require(edge_blur_sigma >= 0.0, "PatternSpec: edge_blur_sigma must be >= 0");
  require(edge_effect_amplitude >= 0.0, "PatternSpec: edge_effect_amplitude must be >= 0");
  require(edge_effect_amplitude == 0.0 || edge_effect_width > 0.0,
          "PatternSpec: edge_effect_width must be > 0 when the edge effect is on");
}

double PatternSpec::nominal_edge(int edge) const {
  const int line = edge / 2;
  const double left = line * pitch + 0.5 * (pitch - cd);
  return (edge % 2 == 0) ? left : left + cd;
}

int PatternSpec::natural_width(double pixel_size) const {
  return static_cast<int>(std::lround(n_lines * pitch / pixel_size));
}

void NoiseSpec::validate() const {
  require(electrons_per_pixel_per_frame > 0.0 && std::isfinite(electrons_per_pixel_per_frame),
          "NoiseSpec: electrons_per_pixel_per_frame must be > 0");
  require(n_frames >= 1, "NoiseSpec: n_frames must be >= 1");
}

std::vector<double> sample_edge_trace(const PalasantzasParams& params, PsdModel model, int n_points,
                                      double pixel_size, std::uint64_t seed) {
  params.validate(model);
  require(n_points >= 64 && std::has_single_bit(static_cast<unsigned>(n_points)),
          "sample_edge_trace: n_points must be a power of two >= 64");
  require(pixel_size > 0.0, "sample_edge_trace: pixel size must be > 0");
  CounterRng rng(seed, kTraceStream, 0);
  return synthesize_trace(params, model, n_points, pixel_size, rng);
}

std::vector<std::vector<double>> sample_edge_traces(const PalasantzasParams& params, PsdModel model, int count,
                                                    int length, double pixel_size, std::uint64_t seed) {
  params.validate(model);
  require(count >= 1 && length >= 1, "sample_edge_traces: need count, length >= 1");
  const int n = static_cast<int>(std::bit_ceil(static_cast<unsigned>(std::max(length, 64))));
  std::vector<std::vector<double>> traces;
  traces.reserve(count);
  for (int e = 0; e < count; ++e) {
    CounterRng rng(seed, kTraceStream, static_cast<std::uint64_t>(e) + 1);
    auto t = synthesize_trace(params, model, n, pixel_size, rng);
    t.resize(length);
    traces.push_back(std::move(t));
  }
  return traces;
}

std::vector<std::vector<double>> true_edge_positions(const PatternSpec& spec,
                                                     std::span<const std::vector<double>> edge_traces) {
  std::vector<std::vector<double>> out;
  out.reserve(edge_traces.size());
  for (std::size_t e = 0; e < edge_traces.size(); ++e) {
    const double nominal = spec.nominal_edge(static_cast<int>(e));
    std::vector<double> pos(edge_traces[e].size());
    for (std::size_t r = 0; r < pos.size(); ++r) pos[r] = nominal + edge_traces[e][r];
    out.push_back(std::move(pos));
  }
  return out;
}

GrayImage render_pattern(const PatternSpec& spec, std::span<const std::vector<double>> edge_traces, int width,
                         int height, double pixel_size) {
  spec.validate();
  require(pixel_size > 0.0, "render_pattern: pixel size must be > 0");
  require(width >= GrayImage::kMinSide && height >= GrayImage::kMinSide, "render_pattern: raster too small");
  const auto n_edges = static_cast<std::size_t>(2 * spec.n_lines);
  require(edge_traces.size() == n_edges, "render_pattern: need exactly 2 * n_lines edge traces");
  for (const auto& t : edge_traces) {
    require(t.size() == static_cast<std::size_t>(height), "render_pattern: every trace must have `height` values");
  }

  const auto edges = true_edge_positions(spec, edge_traces);
  const double extent = width * pixel_size;
  for (int r = 0; r < height; ++r) {
    double previous = 0.0;
    for (std::size_t e = 0; e < n_edges; ++e) {
      const double x = edges[e][r];
      if (!std::isfinite(x) || x <= 0.0 || x >= extent) {
        throw std::invalid_argument("render_pattern: edge " + std::to_string(e) + " leaves the raster in row " +
                                    std::to_string(r));
      }
      if (e > 0 && x <= previous) {
        throw std::invalid_argument("render_pattern: edges " + std::to_string(e - 1) + " and " + std::to_string(e) +
                                    " cross in row " + std::to_string(r));
      }
      previous = x;
    }
  }

  // Exact area coverage of each pixel by the line intervals.
  const double contrast = spec.line_level - spec.space_level;
  std::vector<double> samples(static_cast<std::size_t>(width) * height, spec.space_level);
  for (int r = 0; r < height; ++r) {
    double* row = samples.data() + static_cast<std::size_t>(r) * width;
    for (int line = 0; line < spec.n_lines; ++line) {
      const double a = edges[2 * line][r] / pixel_size;
      const double b = edges[2 * line + 1][r] / pixel_size;
      const int first = static_cast<int>(std::floor(a));
      const int last = std::min(static_cast<int>(std::ceil(b)), width) - 1;
      for (int i = first; i <= last; ++i) {
        const double cover = std::min(b, i + 1.0) - std::max(a, static_cast<double>(i));
        if (cover > 0.0) row[i] += contrast * cover;
      }
    }
  }

  if (spec.edge_blur_sigma / pixel_size > 1e-6) {
    const auto taps = filters::gaussian_taps(spec.edge_blur_sigma / pixel_size);
    samples = filters::filter_separable(samples, width, height, taps, taps);
  }

  if (spec.edge_effect_amplitude > 0.0) {
    const double w = spec.edge_effect_width;
    for (int r = 0; r < height; ++r) {
      double* row = samples.data() + static_cast<std::size_t>(r) * width;
      for (std::size_t e = 0; e < n_edges; ++e) {
        const double x0 = edges[e][r];
        const int lo = std::max(0, static_cast<int>(std::floor((x0 - 6.0 * w) / pixel_size)));
        const int hi = std::min(width - 1, static_cast<int>(std::ceil((x0 + 6.0 * w) / pixel_size)));
        for (int i = lo; i <= hi; ++i) {
          const double d = (i + 0.5) * pixel_size - x0;
          row[i] += spec.edge_effect_amplitude * std::exp(-0.5 * d * d / (w * w));
        }
      }
    }
  }

  for (auto& v : samples) v = std::clamp(v, 0.0, 1.0);
  return GrayImage(width, height, pixel_size, std::move(samples));
}

std::vector<GrayImage> simulate_frame_ladder(const GrayImage& ideal, double electrons_per_pixel_per_frame,
                                             std::uint64_t seed, std::span<const int> frame_counts) {
  NoiseSpec probe{electrons_per_pixel_per_frame, 1, seed};
  probe.validate();
  require(!frame_counts.empty(), "simulate_frame_ladder: no frame counts");
  for (int c : frame_counts) require(c >= 1, "simulate_frame_ladder: frame counts must be >= 1");
  const int max_frames = *std::max_element(frame_counts.begin(), frame_counts.end());

  const auto samples = ideal.samples();
  const std::size_t n = samples.size();
  std::vector<std::vector<double>> outputs(frame_counts.size(), std::vector<double>(n));

  // Frame k of pixel p draws from the substream (seed, k, p), so a run with
  // fewer frames sees exactly the first frames of a longer run.
  std::vector<long long> snapshot_at(max_frames + 1, -1);
  for (std::size_t i = 0; i < frame_counts.size(); ++i) snapshot_at[frame_counts[i]] = static_cast<long long>(i);

  for (std::size_t p = 0; p < n; ++p) {
    const double lambda = electrons_per_pixel_per_frame * samples[p];
    long long total = 0;
    if (lambda > 0.0) {
      std::poisson_distribution<long long> poisson(lambda);
      for (int k = 0; k < max_frames; ++k) {
        CounterRng rng(seed, kFrameStreamTag ^ static_cast<std::uint64_t>(k), p);
        poisson.reset();
        total += poisson(rng);
        if (snapshot_at[k + 1] >= 0) {
          for (std::size_t i = 0; i < frame_counts.size(); ++i) {
            if (frame_counts[i] == k + 1) {
              const double scale = static_cast<double>(k + 1) * electrons_per_pixel_per_frame;
              outputs[i][p] = std::min(static_cast<double>(total) / scale, 1.0);
            }
          }
        }
      }
    }
  }

  std::vector<GrayImage> images;
  images.reserve(outputs.size());
  for (auto& o : outputs) images.push_back(ideal.with_samples(std::move(o)));
  return images;
}

GrayImage simulate_frames(const GrayImage& ideal, const NoiseSpec& noise) {
  noise.validate();
  const int counts[] = {noise.n_frames};
  return std::move(simulate_frame_ladder(ideal, noise.electrons_per_pixel_per_frame, noise.seed, counts).front());
}

}  // namespace lwr
