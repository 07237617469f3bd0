#include "lwrkit/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace lwr::fit {

namespace {

void project(Eigen::VectorXd& p, const LmOptions& o) {
  if (o.lower.size() == p.size()) p = p.cwiseMax(o.lower);
  if (o.upper.size() == p.size()) p = p.cwiseMin(o.upper);
}

}  // namespace

LmResult levenberg_marquardt(const ResidualFn& fn, Eigen::VectorXd start, const LmOptions& options) {
  const Eigen::Index n = start.size();
  if (n == 0) throw std::invalid_argument("levenberg_marquardt: empty parameter vector");
  project(start, options);

  LmResult result;
  result.params = std::move(start);

  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  fn(result.params, r, &jac);
  result.sse = r.squaredNorm();
  if (!std::isfinite(result.sse)) throw std::runtime_error("levenberg_marquardt: non-finite residual at start");

  double damping = options.initial_damping;
  Eigen::VectorXd r_trial;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    result.iterations = iter + 1;
    if (result.sse == 0.0) {
      result.converged = true;
      break;
    }
    const Eigen::MatrixXd normal = jac.transpose() * jac;
    const Eigen::VectorXd gradient = jac.transpose() * r;
    const Eigen::VectorXd diag = normal.diagonal().cwiseMax(1e-300);

    bool accepted = false;
    while (!accepted) {
      Eigen::MatrixXd damped = normal;
      damped.diagonal() += damping * diag;
      const Eigen::VectorXd step = damped.ldlt().solve(-gradient);
      Eigen::VectorXd trial = result.params + step;
      project(trial, options);
      fn(trial, r_trial, nullptr);
      const double sse_trial = r_trial.squaredNorm();
      if (step.allFinite() && std::isfinite(sse_trial) && sse_trial < result.sse) {
        const double improvement = (result.sse - sse_trial) / result.sse;
        result.params = std::move(trial);
        result.sse = sse_trial;
        damping = std::max(damping / 3.0, 1e-12);
        fn(result.params, r, &jac);
        accepted = true;
        if (improvement < options.relative_tolerance) result.converged = true;
      } else {
        damping *= 4.0;
        if (damping > 1e16) {
          // No descent direction left: stationary point within the box.
          result.converged = true;
          return result;
        }
      }
    }
    if (result.converged) break;
  }
  return result;
}

}  // namespace lwr::fit
