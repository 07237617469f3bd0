#include "lwrkit/truth.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "lwrkit/report_json.hpp"

namespace lwr {

namespace {

double pooled_sigma(const std::vector<std::vector<double>>& traces) {
  if (traces.empty()) throw std::invalid_argument("ground truth holds no edges");
  double sum_var = 0.0;
  for (const auto& t : traces) {
    const double mean = std::accumulate(t.begin(), t.end(), 0.0) / static_cast<double>(t.size());
    double ss = 0.0;
    for (double v : t) ss += (v - mean) * (v - mean);
    sum_var += ss / static_cast<double>(t.size());
  }
  return std::sqrt(sum_var / static_cast<double>(traces.size()));
}

std::vector<std::vector<double>> widths(const GroundTruth& truth) {
  std::vector<std::vector<double>> out;
  for (std::size_t l = 0; l + 1 < truth.edges.size(); l += 2) {
    const auto& left = truth.edges[l];
    const auto& right = truth.edges[l + 1];
    std::vector<double> w(left.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = right[i] - left[i];
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace

double GroundTruth::realized_ler_sigma() const { return pooled_sigma(edges); }

double GroundTruth::realized_lwr_sigma() const { return pooled_sigma(widths(*this)); }

double GroundTruth::realized_cd() const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& w : widths(*this)) {
    sum += std::accumulate(w.begin(), w.end(), 0.0);
    n += w.size();
  }
  if (n == 0) throw std::invalid_argument("ground truth holds no edges");
  return sum / static_cast<double>(n);
}

std::filesystem::path truth_path_for(const std::filesystem::path& image_path) {
  return std::filesystem::path(image_path.string() + ".truth.json");
}

void write_truth(const GroundTruth& truth, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_json(truth).dump(1) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

GroundTruth read_truth(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return truth_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": malformed truth sidecar: " + e.what());
  }
}

}  // namespace lwr
