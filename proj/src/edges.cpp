#include "lwrkit/edges.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

#include "lwrkit/filters.hpp"

namespace lwr {

namespace {

constexpr double kMaxRejectedFraction = 0.02;

struct NominalEdge {
  double position;  // fractional pixel index of the threshold crossing
  bool rising;      // dark -> bright going right
};

struct Levels {
  double low;
  double high;
};

Levels plateau_levels(std::vector<double> profile) {
  std::sort(profile.begin(), profile.end());
  const std::size_t n = profile.size();
  const std::size_t half = n / 2;
  auto median = [&](std::size_t lo, std::size_t hi) {
    const std::size_t len = hi - lo;
    const std::size_t mid = lo + len / 2;
    return len % 2 ? profile[mid] : 0.5 * (profile[mid - 1] + profile[mid]);
  };
  return {median(0, half), median(n - half, n)};
}

// Runs of above/below-threshold columns; runs shorter than min_run are
// absorbed by their neighbours until none remain.
std::vector<std::pair<int, bool>> threshold_runs(const std::vector<double>& profile, double threshold,
                                                 int min_run) {
  std::vector<std::pair<int, bool>> runs;  // (length, above)
  for (double v : profile) {
    const bool above = v > threshold;
    if (!runs.empty() && runs.back().second == above) {
      ++runs.back().first;
    } else {
      runs.emplace_back(1, above);
    }
  }
  bool changed = true;
  while (changed && runs.size() > 1) {
    changed = false;
    // Interior short runs only; the outer runs may be clipped by the raster.
    auto shortest = runs.end();
    for (auto it = runs.begin() + 1; it + 1 < runs.end(); ++it) {
      if (it->first < min_run && (shortest == runs.end() || it->first < shortest->first)) shortest = it;
    }
    if (shortest != runs.end()) {
      const auto idx = static_cast<std::size_t>(shortest - runs.begin());
      const int merged = runs[idx - 1].first + runs[idx].first + runs[idx + 1].first;
      runs[idx - 1].first = merged;
      runs.erase(runs.begin() + static_cast<long>(idx), runs.begin() + static_cast<long>(idx) + 2);
      changed = true;
    }
  }
  return runs;
}

double interpolate_crossing(const std::vector<double>& s, int j, double threshold) {
  const double a = s[j];
  const double b = s[j + 1];
  if (a == b) return j + 0.5;
  return j + std::clamp((threshold - a) / (b - a), 0.0, 1.0);
}

bool is_crossing(const std::vector<double>& s, int j, double threshold, bool rising) {
  return rising ? (s[j] < threshold && s[j + 1] >= threshold) : (s[j] >= threshold && s[j + 1] < threshold);
}

double poly_eval(const Eigen::VectorXd& c, double u) {
  double v = 0.0;
  for (Eigen::Index k = c.size() - 1; k >= 0; --k) v = v * u + c[k];
  return v;
}

class RowEdgeFitter {
 public:
  RowEdgeFitter(const EdgeDetectParams& params, double threshold) : params_(params), threshold_(threshold) {
    const int h = params.fit_halfwidth;
    Eigen::MatrixXd vander(2 * h + 1, params.poly_order + 1);
    for (int i = -h; i <= h; ++i) {
      double p = 1.0;
      for (int k = 0; k <= params.poly_order; ++k) {
        vander(i + h, k) = p;
        p *= i;
      }
    }
    // Fixed local grid, so the least-squares operator is shared by every row.
    solver_ = vander.completeOrthogonalDecomposition().pseudoInverse();
  }

  // Sub-pixel crossing (fractional pixel index) or nullopt when the row fails.
  std::optional<double> locate(const std::vector<double>& s, const NominalEdge& nominal, int search_lo,
                               int search_hi) const {
    const int width = static_cast<int>(s.size());
    const double t = threshold_;
    std::optional<double> coarse;
    int bracket = -1;
    for (int j = std::max(search_lo, 0); j < std::min(search_hi, width - 1); ++j) {
      if (!is_crossing(s, j, t, nominal.rising)) continue;
      const double p = interpolate_crossing(s, j, t);
      if (!coarse || std::abs(p - nominal.position) < std::abs(*coarse - nominal.position)) {
        coarse = p;
        bracket = j;
      }
    }
    if (!coarse) return std::nullopt;

    // Window centre: the bracket sample nearer the threshold; ties go to the bright side.
    const int dark = nominal.rising ? bracket : bracket + 1;
    const int bright = nominal.rising ? bracket + 1 : bracket;
    const double d_dark = std::abs(s[dark] - t);
    const double d_bright = std::abs(s[bright] - t);
    const int centre = d_dark < d_bright ? dark : bright;
    const int h = params_.fit_halfwidth;
    if (centre - h < 0 || centre + h >= width) return std::nullopt;

    Eigen::VectorXd values(2 * h + 1);
    for (int i = -h; i <= h; ++i) values[i + h] = s[centre + i] - t;
    const Eigen::VectorXd coeffs = solver_ * values;

    // Pick the poly crossing of the right direction nearest the coarse estimate.
    const double target = *coarse - centre;
    std::optional<double> best;
    for (int u = -h; u < h; ++u) {
      double a = u, b = u + 1.0;
      double fa = poly_eval(coeffs, a), fb = poly_eval(coeffs, b);
      const bool crosses = nominal.rising ? (fa < 0.0 && fb >= 0.0) : (fa >= 0.0 && fb < 0.0);
      if (!crosses) continue;
      for (int it = 0; it < 100 && b - a > 1e-13; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = poly_eval(coeffs, m);
        const bool left_side = nominal.rising ? fm < 0.0 : fm >= 0.0;
        if (left_side) {
          a = m;
          fa = fm;
        } else {
          b = m;
          fb = fm;
        }
      }
      const double root = 0.5 * (a + b);
      if (!best || std::abs(root - target) < std::abs(*best - target)) best = root;
    }
    if (!best) return std::nullopt;
    return centre + *best;
  }

 private:
  EdgeDetectParams params_;
  double threshold_;
  Eigen::MatrixXd solver_;
};

}  // namespace

void EdgeDetectParams::validate() const {
  if (!(threshold_fraction > 0.0 && threshold_fraction < 1.0)) {
    throw std::invalid_argument("EdgeDetectParams: threshold_fraction must lie in (0, 1)");
  }
  if (poly_order < 1) throw std::invalid_argument("EdgeDetectParams: poly_order must be >= 1");
  if (2 * fit_halfwidth < poly_order) throw std::invalid_argument("EdgeDetectParams: fit_halfwidth < poly_order / 2");
  if (2 * fit_halfwidth + 1 <= poly_order) throw std::invalid_argument("EdgeDetectParams: window not overdetermined");
  if (smoothing_halfwidth < 0) throw std::invalid_argument("EdgeDetectParams: smoothing_halfwidth must be >= 0");
  if (min_run < 1) throw std::invalid_argument("EdgeDetectParams: min_run must be >= 1");
}

EdgeSet::EdgeSet(std::vector<LineEdges> lines, double pixel_size, EdgeDetectParams params,
                 std::vector<int> row_index)
    : lines_(std::move(lines)), pixel_size_(pixel_size), params_(params), row_index_(std::move(row_index)) {
  if (!(pixel_size_ > 0.0)) throw std::invalid_argument("EdgeSet: pixel size must be positive");
  if (lines_.empty()) throw std::invalid_argument("EdgeSet: no lines");
  rows_ = static_cast<int>(lines_.front().left.size());
  if (rows_ == 0) throw std::invalid_argument("EdgeSet: empty traces");
  for (std::size_t l = 0; l < lines_.size(); ++l) {
    const auto& line = lines_[l];
    if (line.left.size() != static_cast<std::size_t>(rows_) || line.right.size() != static_cast<std::size_t>(rows_)) {
      throw std::invalid_argument("EdgeSet: traces of unequal length");
    }
    for (int r = 0; r < rows_; ++r) {
      if (!std::isfinite(line.left[r]) || !std::isfinite(line.right[r])) {
        throw std::invalid_argument("EdgeSet: non-finite edge position");
      }
      if (!(line.left[r] < line.right[r])) {
        throw std::invalid_argument("EdgeSet: left edge not left of right edge in line " + std::to_string(l));
      }
      if (l > 0 && !(lines_[l - 1].right[r] < line.left[r])) {
        throw std::invalid_argument("EdgeSet: lines out of order at line " + std::to_string(l));
      }
    }
  }
  if (row_index_.empty()) {
    row_index_.resize(rows_);
    std::iota(row_index_.begin(), row_index_.end(), 0);
  }
  if (row_index_.size() != static_cast<std::size_t>(rows_)) throw std::invalid_argument("EdgeSet: row index size");
}

std::vector<std::vector<double>> EdgeSet::edge_traces() const {
  std::vector<std::vector<double>> out;
  out.reserve(2 * lines_.size());
  for (const auto& line : lines_) {
    out.push_back(line.left);
    out.push_back(line.right);
  }
  return out;
}

EdgeSet detect_edges(const GrayImage& image, const EdgeDetectParams& params) {
  params.validate();
  const int width = image.width();
  const int height = image.height();

  std::vector<double> profile(width, 0.0);
  for (int y = 0; y < height; ++y) {
    const auto row = image.row(y);
    for (int x = 0; x < width; ++x) profile[x] += row[x];
  }
  for (auto& v : profile) v /= height;

  const Levels levels = plateau_levels(profile);
  if (!(levels.high - levels.low > 1e-9)) throw std::runtime_error("detect_edges: no line found (flat column profile)");
  const double threshold = levels.low + params.threshold_fraction * (levels.high - levels.low);

  // Nominal edges of every bright run with dark runs on both sides.
  const auto runs = threshold_runs(profile, threshold, params.min_run);
  std::vector<NominalEdge> nominal;
  int start = 0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto [len, above] = runs[k];
    if (above && k > 0 && k + 1 < runs.size()) {
      nominal.push_back({interpolate_crossing(profile, start - 1, threshold), true});
      nominal.push_back({interpolate_crossing(profile, start + len - 1, threshold), false});
    }
    start += len;
  }
  if (nominal.empty()) throw std::runtime_error("detect_edges: no line found in column profile");

  const int n_edges = static_cast<int>(nominal.size());
  std::vector<int> search_lo(n_edges), search_hi(n_edges);
  for (int e = 0; e < n_edges; ++e) {
    search_lo[e] = e == 0 ? 0 : static_cast<int>(std::floor(0.5 * (nominal[e - 1].position + nominal[e].position)));
    search_hi[e] = e + 1 == n_edges ? width - 1
                                    : static_cast<int>(std::ceil(0.5 * (nominal[e].position + nominal[e + 1].position)));
  }

  const RowEdgeFitter fitter(params, threshold);
  const auto box = filters::box_taps(params.smoothing_halfwidth);
  std::vector<std::vector<double>> found(n_edges, std::vector<double>(height, 0.0));
  std::vector<char> row_ok(height, 1);
  std::vector<int> rejected(n_edges, 0);
  std::vector<double> smoothed(width);
  for (int y = 0; y < height; ++y) {
    filters::filter_line(image.row(y), box, smoothed);
    for (int e = 0; e < n_edges; ++e) {
      const auto pos = fitter.locate(smoothed, nominal[e], search_lo[e], search_hi[e]);
      if (!pos) {
        ++rejected[e];
        row_ok[y] = 0;
        continue;
      }
      found[e][y] = (*pos + 0.5) * image.pixel_size();
    }
    for (int e = 1; row_ok[y] && e < n_edges; ++e) {
      if (!(found[e][y] > found[e - 1][y])) row_ok[y] = 0;
    }
  }

  for (int e = 0; e < n_edges; ++e) {
    if (rejected[e] > kMaxRejectedFraction * height) {
      throw std::runtime_error("edge detection unreliable: edge " + std::to_string(e) + " failed in " +
                               std::to_string(rejected[e]) + " of " + std::to_string(height) + " rows");
    }
  }

  std::vector<int> kept;
  for (int y = 0; y < height; ++y) {
    if (row_ok[y]) kept.push_back(y);
  }
  if (kept.size() < 2) throw std::runtime_error("edge detection unreliable: no usable rows");
  std::vector<LineEdges> lines(n_edges / 2);
  for (int l = 0; l < n_edges / 2; ++l) {
    for (int y : kept) {
      lines[l].left.push_back(found[2 * l][y]);
      lines[l].right.push_back(found[2 * l + 1][y]);
    }
  }
  EdgeSet set(std::move(lines), image.pixel_size(), params, std::move(kept));
  set.set_rejected_rows(height - set.rows());
  return set;
}

std::vector<double> width_trace(const EdgeSet& edges, int line_index) {
  if (line_index < 0 || line_index >= edges.n_lines()) {
    throw std::out_of_range("width_trace: line index " + std::to_string(line_index) + " out of range");
  }
  const auto& line = edges.lines()[line_index];
  std::vector<double> w(line.left.size());
  for (std::size_t r = 0; r < w.size(); ++r) w[r] = line.right[r] - line.left[r];
  return w;
}

CdReport mean_cd(const EdgeSet& edges) {
  CdReport report;
  report.n_lines = edges.n_lines();
  report.rows = edges.rows();
  double sum = 0.0;
  std::size_t count = 0;
  std::vector<std::vector<double>> widths;
  for (int l = 0; l < edges.n_lines(); ++l) {
    auto w = width_trace(edges, l);
    const double line_sum = std::accumulate(w.begin(), w.end(), 0.0);
    report.per_line_mean.push_back(line_sum / static_cast<double>(w.size()));
    sum += line_sum;
    count += w.size();
    widths.push_back(std::move(w));
  }
  report.mean_cd = sum / static_cast<double>(count);
  double ss = 0.0;
  for (const auto& w : widths) {
    for (double v : w) ss += (v - report.mean_cd) * (v - report.mean_cd);
  }
  report.cd_std = count > 1 ? std::sqrt(ss / static_cast<double>(count - 1)) : 0.0;
  return report;
}

double cd_delta(double cd_noisy, double cd_denoised) {
  if (!(cd_noisy > 0.0)) throw std::invalid_argument("cd_delta: noisy CD must be positive");
  return (cd_noisy - cd_denoised) / cd_noisy * 100.0;
}

}  // namespace lwr
