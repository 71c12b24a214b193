#include "minksum/nls.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "minksum/errors.hpp"

namespace mink {

namespace {

std::string describe(const Eigen::VectorXd& x) {
  std::ostringstream os;
  os << "[";
  for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x(i);
  os << "]";
  return os.str();
}

// Damping beyond this means no descent direction is left at double precision.
constexpr double kMaxDamping = 1e16;

}  // namespace

void SolverConfig::validate() const {
  if (max_iters < 1 || !(residual_tol > 0) || !(step_tol > 0) || !(damping_init > 0) ||
      !(damping_up > 0) || !(damping_down > 0) || !(fd_step > 0)) {
    throw DomainError("solver config: all settings must be positive and max_iters >= 1");
  }
}

EvaluationError::EvaluationError(const Eigen::VectorXd& probe, const std::string& what)
    : std::runtime_error(what + " at " + describe(probe)), probe_(probe) {}

Eigen::MatrixXd fd_jacobian(const ResidualFn& residual, const Eigen::VectorXd& x, double step) {
  Eigen::MatrixXd J;
  Eigen::VectorXd probe = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    probe(j) = x(j) + step;
    const Eigen::VectorXd plus = residual(probe);
    if (!plus.allFinite()) throw EvaluationError(probe, "non-finite residual");
    probe(j) = x(j) - step;
    const Eigen::VectorXd minus = residual(probe);
    if (!minus.allFinite()) throw EvaluationError(probe, "non-finite residual");
    probe(j) = x(j);
    if (j == 0) J.resize(plus.size(), x.size());
    J.col(j) = (plus - minus) / (2.0 * step);
  }
  return J;
}

SolveResult levenberg_marquardt(const ResidualFn& residual, const Eigen::VectorXd& x0,
                                const SolverConfig& cfg, const WrapFn& wrap) {
  cfg.validate();
  SolveResult out;
  out.x = x0;
  if (wrap) wrap(out.x);
  Eigen::VectorXd r = residual(out.x);
  if (!r.allFinite()) throw EvaluationError(out.x, "non-finite residual at the initial point");
  out.residual_norm = r.norm();
  out.accepted_residuals.push_back(out.residual_norm);
  if (out.residual_norm <= cfg.residual_tol) {
    out.converged = true;
    return out;
  }

  double damping = cfg.damping_init;
  Eigen::MatrixXd J = fd_jacobian(residual, out.x, cfg.fd_step);
  while (out.iterations < cfg.max_iters) {
    ++out.iterations;
    const Eigen::MatrixXd A = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    // Marquardt scaling, floored so that zero columns stay regularized.
    const Eigen::VectorXd diag = A.diagonal().cwiseMax(1e-12 * std::max(1.0, A.diagonal().maxCoeff()));
    Eigen::MatrixXd lhs = A;
    lhs.diagonal() += damping * diag;
    const Eigen::VectorXd step = lhs.ldlt().solve(-g);

    Eigen::VectorXd trial = out.x + step;
    if (wrap) wrap(trial);
    const Eigen::VectorXd r_trial = residual(trial);
    const double trial_norm = r_trial.allFinite() ? r_trial.norm() : INFINITY;

    if (trial_norm < out.residual_norm) {
      out.x = trial;
      r = r_trial;
      out.residual_norm = trial_norm;
      out.accepted_residuals.push_back(trial_norm);
      damping = std::max(damping * cfg.damping_down, 1e-15);
      if (trial_norm <= cfg.residual_tol || step.norm() <= cfg.step_tol) {
        out.converged = true;
        return out;
      }
      J = fd_jacobian(residual, out.x, cfg.fd_step);
    } else {
      if (step.norm() <= cfg.step_tol) {
        out.converged = true;
        return out;
      }
      damping *= cfg.damping_up;
      if (damping > kMaxDamping) return out;
    }
  }
  return out;
}

}  // namespace mink
