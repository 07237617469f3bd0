#include "lwrkit/scenario.hpp"

#include <stdexcept>

namespace lwr {

void Scenario::validate() const {
  params.validate(model);
  pattern.validate();
  if (!(pixel_size > 0.0)) throw std::invalid_argument("scenario: pixel size must be positive");
  if (height < GrayImage::kMinSide) throw std::invalid_argument("scenario: height too small");
  if (width != 0 && width < GrayImage::kMinSide) throw std::invalid_argument("scenario: width too small");
  if (!(electrons_per_pixel_per_frame > 0.0)) throw std::invalid_argument("scenario: dose must be positive");
}

int Scenario::raster_width() const { return width > 0 ? width : pattern.natural_width(pixel_size); }

Scenario Scenario::with_contrast(double contrast) const {
  if (!(contrast > 0.0 && contrast <= 1.0)) throw std::invalid_argument("contrast must lie in (0, 1]");
  Scenario s = *this;
  s.pattern.line_level = 0.5 + 0.5 * contrast;
  s.pattern.space_level = 0.5 - 0.5 * contrast;
  return s;
}

SyntheticSample make_sample(const Scenario& scenario, std::uint64_t seed) {
  scenario.validate();
  const int width = scenario.raster_width();
  const auto traces = sample_edge_traces(scenario.params, scenario.model, 2 * scenario.pattern.n_lines,
                                         scenario.height, scenario.pixel_size, seed);
  GroundTruth truth;
  truth.params = scenario.params;
  truth.model = scenario.model;
  truth.pattern = scenario.pattern;
  truth.noise = NoiseSpec{scenario.electrons_per_pixel_per_frame, 0, seed};
  truth.pixel_size = scenario.pixel_size;
  truth.width = width;
  truth.height = scenario.height;
  truth.edges = true_edge_positions(scenario.pattern, traces);
  GrayImage ideal = render_pattern(scenario.pattern, traces, width, scenario.height, scenario.pixel_size);
  return SyntheticSample{std::move(truth), std::move(ideal)};
}

std::vector<GrayImage> acquire(const Scenario& scenario, const SyntheticSample& sample, std::span<const int> frames) {
  return simulate_frame_ladder(sample.ideal, scenario.electrons_per_pixel_per_frame, sample.truth.noise.seed, frames);
}

}  // namespace lwr
