#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lwrkit/edges.hpp"
#include "lwrkit/scenario.hpp"
#include "lwrkit/synthetic.hpp"

using namespace lwr;

namespace {

PatternSpec reference_pattern() {
  PatternSpec spec;
  spec.line_level = 0.7;
  spec.space_level = 0.3;
  return spec;
}

GrayImage render(const PatternSpec& spec, const std::vector<std::vector<double>>& traces, int height) {
  return render_pattern(spec, traces, spec.natural_width(0.8), height, 0.8);
}

GrayImage flip(const GrayImage& img) {
  std::vector<double> s(img.size());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) s[static_cast<std::size_t>(y) * img.width() + x] = img.at(img.width() - 1 - x, y);
  return img.with_samples(std::move(s));
}

}  // namespace

TEST(Edges, ParamsValidate) {
  EdgeDetectParams p;
  EXPECT_NO_THROW(p.validate());
  p.threshold_fraction = 1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.fit_halfwidth = 1;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Edges, IdealRasterWidths) {
  const auto spec = reference_pattern();
  const std::vector<std::vector<double>> zeros(2 * spec.n_lines, std::vector<double>(32, 0.0));
  const auto edges = detect_edges(render(spec, zeros, 32));
  EXPECT_EQ(edges.n_lines(), spec.n_lines);
  EXPECT_EQ(edges.rows(), 32);
  EXPECT_EQ(edges.rejected_rows(), 0);
  for (int l = 0; l < edges.n_lines(); ++l) {
    for (double w : width_trace(edges, l)) EXPECT_NEAR(w, 16.0, 0.1);
    EXPECT_NEAR(edges.lines()[l].left[0], spec.nominal_edge(2 * l), 0.1);
  }
  const auto cd = mean_cd(edges);
  EXPECT_NEAR(cd.mean_cd, 16.0, 0.1);
  EXPECT_EQ(cd.n_lines, spec.n_lines);
  EXPECT_EQ(cd.rows, 32);
}

TEST(Edges, RecoversInjectedSinusoid) {
  const auto spec = reference_pattern();
  const int rows = 128;
  std::vector<double> wave(rows);
  for (int r = 0; r < rows; ++r) wave[r] = std::sin(2.0 * std::numbers::pi * r / 32.0);
  const std::vector<std::vector<double>> traces(2 * spec.n_lines, wave);
  const auto edges = detect_edges(render(spec, traces, rows));
  ASSERT_EQ(edges.rows(), rows);
  for (int e = 0; e < 2 * spec.n_lines; ++e) {
    const auto t = edges.edge_traces()[e];
    double s = 0.0, c = 0.0;
    for (int r = 0; r < rows; ++r) {
      s += t[r] * wave[r];
      c += t[r] * std::cos(2.0 * std::numbers::pi * r / 32.0);
    }
    const double amplitude = 2.0 * std::hypot(s, c) / rows;
    EXPECT_NEAR(amplitude, 1.0, 0.1) << "edge " << e;
  }
}

TEST(Edges, MirrorSymmetry) {
  const Scenario scenario;
  const auto sample = make_sample(scenario, 3);
  const auto img = sample.ideal;
  const auto a = detect_edges(img);
  const auto b = detect_edges(flip(img));
  ASSERT_EQ(a.n_lines(), b.n_lines());
  const double extent = img.width() * img.pixel_size();
  const int n = a.n_lines();
  for (int l = 0; l < n; ++l) {
    const auto& la = a.lines()[l];
    const auto& lb = b.lines()[n - 1 - l];
    for (int r = 0; r < a.rows(); ++r) {
      EXPECT_NEAR(lb.left[r], extent - la.right[r], 1e-9);
      EXPECT_NEAR(lb.right[r], extent - la.left[r], 1e-9);
    }
  }
}

TEST(Edges, TracksGroundTruthOnRoughIdealImage) {
  const Scenario scenario;
  const auto sample = make_sample(scenario, 12);
  const auto edges = detect_edges(sample.ideal);
  const auto traces = edges.edge_traces();
  ASSERT_EQ(traces.size(), sample.truth.edges.size());
  double worst = 0.0;
  for (std::size_t e = 0; e < traces.size(); ++e)
    for (int r = 0; r < edges.rows(); ++r) worst = std::max(worst, std::abs(traces[e][r] - sample.truth.edges[e][r]));
  EXPECT_LT(worst, 0.25);
}

TEST(Edges, FlatImageHasNoLines) {
  EXPECT_THROW(detect_edges(GrayImage::filled(64, 16, 0.8, 0.4)), std::runtime_error);
}

TEST(Edges, PartialLinesAtBorderAreSkipped) {
  PatternSpec spec = reference_pattern();
  spec.n_lines = 3;
  const std::vector<std::vector<double>> zeros(6, std::vector<double>(16, 0.0));
  const auto full = render_pattern(spec, zeros, 120, 16, 0.8);
  // Crop so the first line is cut by the left border.
  std::vector<double> s;
  for (int y = 0; y < 16; ++y)
    for (int x = 20; x < 120; ++x) s.push_back(full.at(x, y));
  const auto edges = detect_edges(GrayImage(100, 16, 0.8, s));
  EXPECT_EQ(edges.n_lines(), 2);
}

TEST(Edges, WidthTraceAlgebra) {
  std::vector<double> left(8), right(8);
  for (int r = 0; r < 8; ++r) {
    left[r] = 10.0 + 0.1 * r;
    right[r] = left[r] + 16.0 - 0.01 * r * r;
  }
  const EdgeSet set({LineEdges{left, right}}, 0.8);
  const auto w = width_trace(set, 0);
  for (int r = 0; r < 8; ++r) EXPECT_DOUBLE_EQ(w[r], right[r] - left[r]);
  EXPECT_THROW(width_trace(set, 1), std::out_of_range);

  const EdgeSet straight({LineEdges{std::vector<double>(4, 0.0), std::vector<double>(4, 16.0)}}, 0.8);
  for (double v : width_trace(straight, 0)) EXPECT_EQ(v, 16.0);
}

TEST(Edges, IndependentEdgesDoubleWidthVariance) {
  const PalasantzasParams p{1.0, 20.0, 0.75, std::nullopt};
  double total = 0.0;
  for (int seed = 0; seed < 200; ++seed) {
    const auto t = sample_edge_traces(p, PsdModel::palasantzas1, 2, 1024, 0.8, seed);
    std::vector<double> left = t[0], right = t[1];
    for (auto& v : right) v += 16.0;
    const EdgeSet set({LineEdges{left, right}}, 0.8);
    const auto w = width_trace(set, 0);
    double mean = 0.0, var = 0.0;
    for (double v : w) mean += v / w.size();
    for (double v : w) var += (v - mean) * (v - mean) / w.size();
    total += var;
  }
  EXPECT_NEAR(total / 200.0, 2.0, 0.2);
}

TEST(Edges, EdgeSetValidates) {
  EXPECT_THROW(EdgeSet({}, 0.8), std::invalid_argument);
  EXPECT_THROW(EdgeSet({LineEdges{{1.0, 2.0}, {3.0}}}, 0.8), std::invalid_argument);
  EXPECT_THROW(EdgeSet({LineEdges{{5.0}, {3.0}}}, 0.8), std::invalid_argument);
  EXPECT_THROW(EdgeSet({LineEdges{{NAN}, {3.0}}}, 0.8), std::invalid_argument);
  EXPECT_THROW(EdgeSet({LineEdges{{10.0}, {20.0}}, LineEdges{{5.0}, {8.0}}}, 0.8), std::invalid_argument);
}

TEST(MeanCd, AveragesLines) {
  const EdgeSet set({LineEdges{{0.0, 0.0}, {15.0, 15.0}}, LineEdges{{32.0, 32.0}, {49.0, 49.0}}}, 0.8);
  const auto cd = mean_cd(set);
  EXPECT_DOUBLE_EQ(cd.mean_cd, 16.0);
  ASSERT_EQ(cd.per_line_mean.size(), 2u);
  EXPECT_DOUBLE_EQ(cd.per_line_mean[0], 15.0);
  EXPECT_DOUBLE_EQ(cd.per_line_mean[1], 17.0);
}

TEST(MeanCd, NoisyAndAveragedImagesAgree) {
  const Scenario scenario;
  const std::vector<int> frames{8, 64};
  const auto images = acquire(scenario, make_sample(scenario, 6), frames);
  const double cd8 = mean_cd(detect_edges(images[0])).mean_cd;
  const double cd64 = mean_cd(detect_edges(images[1])).mean_cd;
  EXPECT_LT(std::abs(cd_delta(cd64, cd8)), 5.0);
}

TEST(CdDelta, TableValues) {
  EXPECT_EQ(cd_delta(16.0, 16.0), 0.0);
  EXPECT_NEAR(cd_delta(16.0, 16.9696), -6.06, 1e-9);
  EXPECT_NEAR(cd_delta(16.0, 15.7872), 1.33, 1e-9);
  EXPECT_THROW(cd_delta(0.0, 1.0), std::invalid_argument);
}
