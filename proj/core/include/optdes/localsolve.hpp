#pragma once

#include <Eigen/Dense>
#include <functional>

namespace optdes {

/// Componentwise box constraints, lower[j] < upper[j].
struct BoxBounds {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  static BoxBounds symmetric(int m, double half_width = 1.0);
};

/// Tolerances and budget for the bounded derivative-free solvers.
/// max_evals == 0 means the default budget of 200 evaluations per
/// dimension. f_tol == 0 disables the relative-objective stop.
struct SolveSettings {
  double x_tol = 1e-6;
  double f_tol = 0.0;
  int max_evals = 0;
};

struct ScalarSolveResult {
  double x = 0.0;
  double f = 0.0;
  int evals = 0;
};

struct VectorSolveResult {
  Eigen::VectorXd x;
  double f = 0.0;
  int evals = 0;
};

/// Bounded scalar minimization: Brent's golden-section/parabolic hybrid
/// seeded at the incumbent x0, with both interval endpoints evaluated
/// explicitly so boundary optima are returned exactly. Guarantees
/// f <= objective(x0); when nothing strictly better is found the incumbent
/// itself comes back unchanged. Deterministic. Throws std::invalid_argument
/// on x0 outside the interval or a non-finite objective at x0.
ScalarSolveResult minimize_scalar(const std::function<double(double)>& objective,
                                  double lower, double upper,
                                  const SolveSettings& settings, double x0);

/// Bounded multivariate minimization by compass (coordinate pattern)
/// search with step halving. Trial points are clipped to the box exactly,
/// so bound-active optima land exactly on the bound. Same incumbent and
/// determinism guarantees as minimize_scalar.
VectorSolveResult minimize_box(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const BoxBounds& bounds, const SolveSettings& settings,
    const Eigen::VectorXd& x0);

}  // namespace optdes
