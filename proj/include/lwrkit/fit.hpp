#pragma once

#include <Eigen/Dense>
#include <functional>

namespace lwr::fit {

/// Computes residuals r(p) and, when `jacobian` is non-null, dr/dp.
using ResidualFn = std::function<void(const Eigen::VectorXd& params, Eigen::VectorXd& residuals,
                                      Eigen::MatrixXd* jacobian)>;

struct LmOptions {
  int max_iterations = 200;
  /// Converged once an accepted step improves the squared residual sum by
  /// less than this fraction.
  double relative_tolerance = 1e-10;
  double initial_damping = 1e-3;
  /// Optional box; empty means unbounded. Trial points are projected onto it.
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

struct LmResult {
  Eigen::VectorXd params;
  double sse = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Damped Gauss-Newton (Marquardt diagonal scaling) on sum of squared residuals.
LmResult levenberg_marquardt(const ResidualFn& fn, Eigen::VectorXd start, const LmOptions& options);

}  // namespace lwr::fit
