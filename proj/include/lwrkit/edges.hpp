#pragma once

#include <vector>

#include "lwrkit/image.hpp"

namespace lwr {

struct EdgeDetectParams {
  double threshold_fraction = 0.5;  ///< of the plateau-to-plateau swing
  int poly_order = 3;
  int fit_halfwidth = 3;        ///< pixels each side of the crossing
  int smoothing_halfwidth = 1;  ///< box smoothing along the row
  int min_run = 4;              ///< shortest line/space run in the column profile

  void validate() const;
};

/// Per-row positions (nm from the left raster border) of one line's edges.
struct LineEdges {
  std::vector<double> left;
  std::vector<double> right;
};

/// Sub-pixel edges of every full line. All traces share the same rows;
/// rows where any edge failed are absent.
class EdgeSet {
 public:
  EdgeSet(std::vector<LineEdges> lines, double pixel_size, EdgeDetectParams params = {},
          std::vector<int> row_index = {});

  const std::vector<LineEdges>& lines() const { return lines_; }
  int n_lines() const { return static_cast<int>(lines_.size()); }
  int rows() const { return rows_; }
  double pixel_size() const { return pixel_size_; }
  const EdgeDetectParams& params() const { return params_; }
  /// Source image row of each trace sample.
  const std::vector<int>& row_index() const { return row_index_; }
  /// Rows dropped during detection.
  int rejected_rows() const { return rejected_rows_; }
  void set_rejected_rows(int n) { rejected_rows_ = n; }

  /// All edge traces, left-to-right (line 0 left, line 0 right, line 1 left, ...).
  std::vector<std::vector<double>> edge_traces() const;

 private:
  std::vector<LineEdges> lines_;
  int rows_ = 0;
  double pixel_size_ = 0.0;
  EdgeDetectParams params_;
  std::vector<int> row_index_;
  int rejected_rows_ = 0;
};

struct CdReport {
  double mean_cd = 0.0;  ///< nm
  double cd_std = 0.0;   ///< nm, pooled over rows and lines
  std::vector<double> per_line_mean;
  int n_lines = 0;
  int rows = 0;
};

/// Column-profile line finding followed by per-row polynomial sub-pixel
/// threshold crossings. Throws if no full line exists or if more than 2% of
/// the rows fail for any edge.
EdgeSet detect_edges(const GrayImage& image, const EdgeDetectParams& params = {});

/// right - left per row for one line.
std::vector<double> width_trace(const EdgeSet& edges, int line_index);

CdReport mean_cd(const EdgeSet& edges);

/// Signed (noisy - denoised) / noisy * 100.
double cd_delta(double cd_noisy, double cd_denoised);

}  // namespace lwr
