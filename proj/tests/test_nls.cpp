#include <limits>

#include "doctest.h"
#include "minksum/collision.hpp"
#include "support.hpp"

using namespace mink;
using testing::vec;

namespace {

Eigen::VectorXd v1(double x) { return Eigen::VectorXd::Constant(1, x); }

}  // namespace

TEST_CASE("fd_jacobian") {
  const ResidualFn sq = [](const Eigen::VectorXd& x) { return Eigen::VectorXd(x.array().square()); };
  CHECK(fd_jacobian(sq, v1(3.0), 1e-6)(0, 0) == doctest::Approx(6.0).epsilon(1e-6));

  Eigen::MatrixXd A(3, 2);
  A << 1, 2, -3, 0.5, 4, -1;
  const ResidualFn lin = [&](const Eigen::VectorXd& x) { return Eigen::VectorXd(A * x); };
  for (double h : {1e-4, 1e-5, 1e-6}) {
    CHECK((fd_jacobian(lin, Eigen::Vector2d(0.3, -2.0), h) - A).norm() < 1e-9);
  }

  // Step refinement consistency on the common-normal residual.
  Rng rng(83);
  RandomBodyOptions opts;
  opts.center_range = 3;
  const BodyInstance b1 = random_body(3, rng, opts);
  const BodyInstance b2 = random_body(3, rng, opts);
  const ResidualFn cn = [&](const Eigen::VectorXd& v) {
    return residual_common_normal(b1, b2, SphericalParam::spatial(v(0), v(1)), SphericalParam::spatial(v(2), v(3)));
  };
  Eigen::VectorXd x(4);
  x << 0.3, -0.7, -0.4, 2.1;
  const Eigen::MatrixXd J1 = fd_jacobian(cn, x, 1e-5);
  const Eigen::MatrixXd J2 = fd_jacobian(cn, x, 1e-6);
  CHECK((J1 - J2).norm() <= 1e-4 * J2.norm());

  const ResidualFn bad = [](const Eigen::VectorXd& x) {
    return x(0) > 1.0 ? v1(std::numeric_limits<double>::quiet_NaN()) : x;
  };
  try {
    (void)fd_jacobian(bad, v1(1.0), 1e-3);
    FAIL("expected EvaluationError");
  } catch (const EvaluationError& e) {
    CHECK(e.probe()(0) == doctest::Approx(1.001));
  }
}

TEST_CASE("levenberg_marquardt on a linear residual") {
  const ResidualFn r = [](const Eigen::VectorXd& x) { return v1(x(0) - 2.0); };
  const SolveResult s = levenberg_marquardt(r, v1(10.0));
  CHECK(s.converged);
  CHECK(std::abs(s.x(0) - 2.0) < 1e-10);
  CHECK(s.accepted_residuals.size() - 1 <= 4);
  CHECK(s.accepted_residuals.front() == doctest::Approx(8.0));

  SolverConfig light;
  light.damping_init = 1e-9;
  const SolveResult fast = levenberg_marquardt(r, v1(10.0), light);
  CHECK(fast.converged);
  CHECK(fast.accepted_residuals.size() - 1 <= 2);
}

TEST_CASE("levenberg_marquardt on Rosenbrock") {
  const ResidualFn rosen = [](const Eigen::VectorXd& x) {
    return Eigen::Vector2d(10.0 * (x(1) - x(0) * x(0)), 1.0 - x(0)).eval();
  };
  SolverConfig cfg;
  cfg.max_iters = 500;
  const SolveResult s = levenberg_marquardt(rosen, Eigen::Vector2d(-1.2, 1.0), cfg);
  CHECK(s.converged);
  CHECK((s.x - Eigen::Vector2d(1, 1)).norm() < 1e-6);
  CHECK(rosen(s.x).norm() < 1e-9);
  for (std::size_t i = 1; i < s.accepted_residuals.size(); ++i) {
    CHECK(s.accepted_residuals[i] < s.accepted_residuals[i - 1]);
  }
}

TEST_CASE("levenberg_marquardt on the contact-space normal residual") {
  const BodyInstance s1 = testing::unit_sphere(vec({0, 0, 0}));
  const BodyInstance s2 = testing::unit_sphere(vec({3, 0, 0}));
  const MinkSumQuery q{s1, s2, SumMode::contact};
  const ResidualFn fn = [&](const Eigen::VectorXd& v) {
    return residual_mink_normal(q, SphericalParam::spatial(v(0), v(1)));
  };
  const SolveResult s = levenberg_marquardt(fn, Eigen::Vector2d(0.2, 0.3));
  CHECK(s.converged);
  CHECK(s.iterations <= 10);
  CHECK(std::abs(s.x(0)) < 1e-8);
  CHECK(std::abs(s.x(1)) < 1e-8);
}

TEST_CASE("levenberg_marquardt reports non-convergence with its best iterate") {
  const ResidualFn r = [](const Eigen::VectorXd& x) { return Eigen::Vector2d(x(0) - 1.0, x(0) + 1.0).eval(); };
  SolverConfig cfg;
  cfg.max_iters = 3;
  cfg.step_tol = 1e-30;
  const SolveResult s = levenberg_marquardt(r, v1(5.0), cfg);
  CHECK_FALSE(s.converged);
  CHECK(s.iterations == 3);
  CHECK(s.residual_norm == doctest::Approx(r(s.x).norm()));
  CHECK(s.residual_norm < r(v1(5.0)).norm());
}

TEST_CASE("levenberg_marquardt wraps iterates and validates its config") {
  const ResidualFn r = [](const Eigen::VectorXd& x) { return v1(std::sin(x(0))); };
  const WrapFn clamp = [](Eigen::VectorXd& x) { x(0) = std::remainder(x(0), 2 * 3.141592653589793); };
  const SolveResult s = levenberg_marquardt(r, v1(9.0), {}, clamp);
  CHECK(std::abs(s.x(0)) <= 3.141592653589793);
  CHECK(std::abs(std::sin(s.x(0))) < 1e-10);

  SolverConfig bad;
  bad.max_iters = 0;
  CHECK_THROWS_AS(levenberg_marquardt(r, v1(1.0), bad), DomainError);
  bad = {};
  bad.fd_step = -1;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("levenberg_marquardt rejects a non-finite start") {
  const ResidualFn r = [](const Eigen::VectorXd&) { return v1(std::numeric_limits<double>::infinity()); };
  CHECK_THROWS_AS(levenberg_marquardt(r, v1(0.0)), EvaluationError);
}
