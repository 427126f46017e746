#include "optdes/localsolve.hpp"

#include <cmath>
#include <stdexcept>

namespace optdes {

namespace {

constexpr int kDefaultEvalsPerDim = 200;

double clamp(double v, double lo, double hi) {
  return v < lo ? lo : (v > hi ? hi : v);
}

}  // namespace

BoxBounds BoxBounds::symmetric(int m, double half_width) {
  BoxBounds b;
  b.lower = Eigen::VectorXd::Constant(m, -half_width);
  b.upper = Eigen::VectorXd::Constant(m, half_width);
  return b;
}

ScalarSolveResult minimize_scalar(
    const std::function<double(double)>& objective, double lower, double upper,
    const SolveSettings& settings, double x0) {
  if (!(lower < upper))
    throw std::invalid_argument("minimize_scalar: empty interval");
  if (!(x0 >= lower && x0 <= upper))
    throw std::invalid_argument("minimize_scalar: start outside interval");

  const int budget =
      settings.max_evals > 0 ? settings.max_evals : kDefaultEvalsPerDim;

  int evals = 0;
  double best_x = x0;
  double best_f = objective(x0);
  ++evals;
  if (!std::isfinite(best_f))
    throw std::invalid_argument(
        "minimize_scalar: objective not finite at the start point");
  const double f0 = best_f;

  auto probe = [&](double t) {
    const double v = objective(t);
    ++evals;
    if (v < best_f) {
      best_f = v;
      best_x = t;
    }
    return v;
  };

  // Endpoints first: bound-active optima must come back exactly on the
  // bound, and Brent alone never evaluates there.
  if (x0 != lower && evals < budget) probe(lower);
  if (x0 != upper && evals < budget) probe(upper);

  // Brent's golden-section/parabolic minimization, seeded at the incumbent
  // when it is interior.
  const double golden = 0.5 * (3.0 - std::sqrt(5.0));
  const double sqrt_eps = std::sqrt(2.220446049250313e-16);
  double a = lower, b = upper;
  double x, fx;
  if (x0 > lower && x0 < upper) {
    x = x0;
    fx = f0;
  } else {
    x = a + golden * (b - a);
    if (evals >= budget) return {best_x, best_f, evals};
    fx = probe(x);
  }
  double v = x, w = x, fv = fx, fw = fx;
  double d = 0.0, e = 0.0;
  double prev_best = best_f;

  while (evals < budget) {
    const double mid = 0.5 * (a + b);
    const double tol = sqrt_eps * std::abs(x) + settings.x_tol;
    const double tol2 = 2.0 * tol;
    if (std::abs(x - mid) <= tol2 - 0.5 * (b - a)) break;

    double p = 0.0, q = 0.0, r = 0.0;
    if (std::abs(e) > tol) {
      // parabola through (x,fx),(v,fv),(w,fw)
      r = (x - w) * (fx - fv);
      q = (x - v) * (fx - fw);
      p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      r = e;
      e = d;
    }

    if (std::abs(p) < std::abs(0.5 * q * r) && p > q * (a - x) &&
        p < q * (b - x)) {
      d = p / q;
      double u = x + d;
      if (u - a < tol2 || b - u < tol2) d = (x < mid) ? tol : -tol;
    } else {
      e = (x < mid ? b : a) - x;
      d = golden * e;
    }

    const double u =
        x + (std::abs(d) >= tol ? d : (d > 0.0 ? tol : -tol));
    const double fu = probe(u);

    if (fu <= fx) {
      if (u < x)
        b = x;
      else
        a = x;
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      if (u < x)
        a = u;
      else
        b = u;
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }

    if (settings.f_tol > 0.0 && best_f < prev_best &&
        prev_best - best_f <= settings.f_tol * std::abs(prev_best))
      break;
    prev_best = best_f;
  }

  return {best_x, best_f, evals};
}

VectorSolveResult minimize_box(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const BoxBounds& bounds, const SolveSettings& settings,
    const Eigen::VectorXd& x0) {
  const int m = static_cast<int>(x0.size());
  if (bounds.lower.size() != m || bounds.upper.size() != m)
    throw std::invalid_argument("minimize_box: bounds dimension mismatch");
  for (int j = 0; j < m; ++j) {
    if (!(bounds.lower[j] < bounds.upper[j]))
      throw std::invalid_argument("minimize_box: empty box");
    if (!(x0[j] >= bounds.lower[j] && x0[j] <= bounds.upper[j]))
      throw std::invalid_argument("minimize_box: start outside box");
  }

  const int budget =
      settings.max_evals > 0 ? settings.max_evals : kDefaultEvalsPerDim * m;

  int evals = 0;
  double fx = objective(x0);
  ++evals;
  if (!std::isfinite(fx))
    throw std::invalid_argument(
        "minimize_box: objective not finite at the start point");

  Eigen::VectorXd x = x0;
  Eigen::VectorXd best_x = x0;
  double best_f = fx;
  Eigen::VectorXd trial = x;

  // Compass search: probe +/- h along each coordinate, accept improvements
  // as they are found, halve the step after a full sweep with none.
  double step = 0.25 * (bounds.upper - bounds.lower).maxCoeff();
  double level_best = fx;

  while (step >= settings.x_tol && evals < budget) {
    bool improved = false;
    for (int j = 0; j < m && evals < budget; ++j) {
      for (const double sign : {1.0, -1.0}) {
        if (evals >= budget) break;
        const double t = clamp(x[j] + sign * step, bounds.lower[j],
                               bounds.upper[j]);
        if (t == x[j]) continue;
        trial = x;
        trial[j] = t;
        const double ft = objective(trial);
        ++evals;
        if (ft < best_f) {
          best_f = ft;
          best_x = trial;
        }
        if (ft < fx) {
          x[j] = t;
          fx = ft;
          improved = true;
          break;  // re-scan remaining coordinates from the new point
        }
      }
    }
    if (!improved) {
      if (settings.f_tol > 0.0 && level_best > fx &&
          level_best - fx <= settings.f_tol * std::abs(level_best))
        break;
      level_best = fx;
      step *= 0.5;
    }
  }

  return {best_x, best_f, evals};
}

}  // namespace optdes
