#include "optdes/criteria.hpp"

#include <cmath>
#include <stdexcept>

namespace optdes {

namespace {

// A factorization pivot below this fraction of the largest diagonal entry
// of M marks the matrix as numerically rank-deficient.
constexpr double kRelPivotTol = 1e-12;

struct Factorization {
  bool valid = false;
  double log_det = 0.0;
};

Factorization factorize(const Eigen::MatrixXd& m,
                        Eigen::LLT<Eigen::MatrixXd>& llt) {
  llt.compute(m);
  if (llt.info() != Eigen::Success) return {};

  const double max_diag = m.diagonal().maxCoeff();
  if (!(max_diag > 0.0) || !std::isfinite(max_diag)) return {};

  const auto& chol = llt.matrixLLT();
  double log_det = 0.0;
  for (int i = 0; i < m.rows(); ++i) {
    const double pivot_sqrt = chol(i, i);
    const double pivot = pivot_sqrt * pivot_sqrt;
    if (!(pivot >= kRelPivotTol * max_diag) || !std::isfinite(pivot))
      return {};
    log_det += std::log(pivot_sqrt);
  }
  log_det *= 2.0;
  if (!std::isfinite(log_det)) return {};
  return {true, log_det};
}

}  // namespace

const char* to_string(Criterion c) {
  return c == Criterion::D ? "D" : "I";
}

Criterion parse_criterion(const std::string& s) {
  if (s == "D" || s == "d") return Criterion::D;
  if (s == "I" || s == "i") return Criterion::I;
  throw std::invalid_argument("unknown criterion '" + s + "' (expected D or I)");
}

CriterionScore d_score(const Design& d, const ModelSpec& spec) {
  CriterionEvaluator eval(spec, Criterion::D);
  return eval.evaluate(d);
}

CriterionScore i_score(const Design& d, const ModelSpec& spec,
                       const Eigen::MatrixXd& moments) {
  validate_design(d, spec);
  if (moments.rows() != spec.p || moments.cols() != spec.p)
    throw std::invalid_argument("i_score: moments matrix must be p x p");

  const Eigen::MatrixXd m = information_matrix(d, spec);
  Eigen::LLT<Eigen::MatrixXd> llt;
  const Factorization fact = factorize(m, llt);
  if (!fact.valid) return {};

  const double value = spec.n * llt.solve(moments).trace();
  if (!std::isfinite(value) || !(value > 0.0)) return {};
  return {value, true, fact.log_det};
}

double spv(const Eigen::VectorXd& x, const Design& d, const ModelSpec& spec) {
  const Eigen::VectorXd fx = expand_point(x, spec);
  const Eigen::MatrixXd m = information_matrix(d, spec);
  Eigen::LLT<Eigen::MatrixXd> llt;
  if (!factorize(m, llt).valid)
    throw std::domain_error(
        "spv: singular information matrix, design is unscorable");
  return spec.n * fx.dot(llt.solve(fx));
}

double efficiency(const CriterionScore& score, const CriterionScore& best,
                  Criterion criterion, const ModelSpec& spec) {
  if (!score.valid || !best.valid)
    throw std::invalid_argument("efficiency: both scores must be valid");
  const double ratio = best.value / score.value;
  if (criterion == Criterion::D)
    return std::pow(ratio, 1.0 / static_cast<double>(spec.p));
  return ratio;
}

CriterionEvaluator::CriterionEvaluator(const ModelSpec& spec,
                                       Criterion criterion)
    : spec_(spec), criterion_(criterion) {
  if (criterion_ == Criterion::I) {
    moments_ = moments_matrix(spec_);
    // The moments matrix is positive definite, so with M = L L' the trace
    // tr(M^{-1} W) equals |L^{-1} C|_F^2 for W = C C'; one triangular
    // solve per evaluation instead of a full p-column solve.
    Eigen::LLT<Eigen::MatrixXd> wllt(moments_);
    if (wllt.info() != Eigen::Success)
      throw std::logic_error("moments matrix is not positive definite");
    moments_cw_ = wllt.matrixL();
    z_.resize(spec_.p, spec_.p);
  }
  f_.resize(spec_.n, spec_.p);
  m_.resize(spec_.p, spec_.p);
  xbuf_.resize(spec_.k);
}

CriterionScore CriterionEvaluator::evaluate(const Eigen::MatrixXd& points) {
  ++evals_;
  if (points.rows() != spec_.n || points.cols() != spec_.k)
    throw std::invalid_argument("evaluate: design shape mismatch");

  for (int i = 0; i < spec_.n; ++i) {
    xbuf_ = points.row(i);
    detail::expand_point_into(xbuf_.data(), spec_.k, f_.row(i).data());
  }
  // Only the lower triangle is accumulated; the factorization reads no
  // more than that.
  m_.setZero();
  m_.selfadjointView<Eigen::Lower>().rankUpdate(f_.transpose());

  const Factorization fact = factorize(m_, llt_);
  if (!fact.valid) return {};

  double value;
  if (criterion_ == Criterion::D) {
    value = std::exp(-fact.log_det);
  } else {
    z_ = moments_cw_;
    llt_.matrixL().solveInPlace(z_);
    value = spec_.n * z_.squaredNorm();
  }
  if (!std::isfinite(value) || !(value > 0.0)) return {};
  return {value, true, fact.log_det};
}

}  // namespace optdes
