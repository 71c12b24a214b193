#pragma once

// Small dense nonlinear least squares: Levenberg–Marquardt on central
// finite-difference Jacobians.

#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace mink {

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
/// In-place normalization of an iterate (e.g. angle wrapping).
using WrapFn = std::function<void(Eigen::VectorXd&)>;

struct SolverConfig {
  int max_iters = 100;
  double residual_tol = 1e-10;
  double step_tol = 1e-12;
  double damping_init = 1e-3;
  double damping_up = 10.0;
  double damping_down = 0.1;
  double fd_step = 1e-6;

  /// Throws DomainError unless every field is positive and max_iters >= 1.
  void validate() const;
};

struct SolveResult {
  Eigen::VectorXd x;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Residual norm of the initial point followed by every accepted step.
  std::vector<double> accepted_residuals;
};

/// Residual evaluated to a non-finite value; `probe` is the offending point.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const Eigen::VectorXd& probe, const std::string& what);
  const Eigen::VectorXd& probe() const { return probe_; }

 private:
  Eigen::VectorXd probe_;
};

/// Central differences: J(i,j) = (r_i(x + h e_j) − r_i(x − h e_j)) / 2h.
Eigen::MatrixXd fd_jacobian(const ResidualFn& residual, const Eigen::VectorXd& x, double step);

/// Minimizes ‖r(x)‖².  Returns the best iterate; converged is set when the
/// residual norm falls below residual_tol or an accepted step is shorter than
/// step_tol.
SolveResult levenberg_marquardt(const ResidualFn& residual, const Eigen::VectorXd& x0,
                                const SolverConfig& cfg = {}, const WrapFn& wrap = {});

}  // namespace mink
