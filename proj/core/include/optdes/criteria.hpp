#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>

#include "optdes/model.hpp"

namespace optdes {

enum class Criterion { D, I };

const char* to_string(Criterion c);
Criterion parse_criterion(const std::string& s);  // throws on unknown name

/// Score of a design under one criterion. Lower is better for both kinds.
/// `valid` is false when the information matrix is singular or numerically
/// rank-deficient; `value` and `log_det_m` are meaningful only when valid.
struct CriterionScore {
  double value = 0.0;
  bool valid = false;
  double log_det_m = 0.0;
};

/// D-criterion: the determinant of the inverse information matrix,
/// evaluated as exp(-log det M) through a Cholesky factorization.
CriterionScore d_score(const Design& d, const ModelSpec& spec);

/// I-criterion: n * trace(M^{-1} W) with W the volume-normalized moments
/// matrix, evaluated by a linear solve (never an explicit inverse).
CriterionScore i_score(const Design& d, const ModelSpec& spec,
                       const Eigen::MatrixXd& moments);

/// Scaled prediction variance n * f(x)' M^{-1} f(x) at a point.
/// Throws std::domain_error when the information matrix is singular.
double spv(const Eigen::VectorXd& x, const Design& d, const ModelSpec& spec);

/// Efficiency of `score` relative to `best`:
///   D: (best.value / score.value)^(1/p)    I: best.value / score.value.
/// May exceed 1 when the candidate beats the reference; callers surface
/// such events rather than clamping. Throws on invalid inputs.
double efficiency(const CriterionScore& score, const CriterionScore& best,
                  Criterion criterion, const ModelSpec& spec);

/// Convention string recorded in every output file that reports an
/// efficiency, so downstream consumers know exactly how it was computed.
inline constexpr const char* kEfficiencyConvention =
    "D: (best/score)^(1/p); I: best/score; score = criterion value, lower "
    "is better";

/// Monotone objective used by all optimizers: log of the criterion value
/// for valid scores, a large finite penalty otherwise. log() keeps every
/// valid objective far below the penalty (raw D values can exceed 1e12 on
/// ill-conditioned designs) while preserving the argmin.
inline constexpr double kInvalidPenalty = 1e12;

inline double score_objective(const CriterionScore& s) {
  return s.valid ? std::log(s.value) : kInvalidPenalty;
}

/// Reusable criterion evaluator: owns the moments matrix and all scratch
/// buffers so repeated scoring never allocates. One instance per thread;
/// instances share nothing.
class CriterionEvaluator {
 public:
  CriterionEvaluator(const ModelSpec& spec, Criterion criterion);

  CriterionScore evaluate(const Eigen::MatrixXd& points);
  CriterionScore evaluate(const Design& d) { return evaluate(d.points); }

  double objective(const Eigen::MatrixXd& points) {
    return score_objective(evaluate(points));
  }

  const ModelSpec& spec() const { return spec_; }
  Criterion criterion() const { return criterion_; }
  const Eigen::MatrixXd& moments() const { return moments_; }

  /// Number of evaluate() calls since construction or reset.
  std::uint64_t evals() const { return evals_; }
  void reset_evals() { evals_ = 0; }

 private:
  using RowMajorMatrix =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  ModelSpec spec_;
  Criterion criterion_;
  Eigen::MatrixXd moments_;      // empty for the D-criterion
  Eigen::MatrixXd moments_cw_;   // lower Cholesky factor of the moments
  RowMajorMatrix f_;             // n x p model matrix scratch
  Eigen::MatrixXd m_;            // p x p information matrix scratch
  Eigen::MatrixXd z_;            // p x p solve scratch (I only)
  Eigen::VectorXd xbuf_;         // one design row
  Eigen::LLT<Eigen::MatrixXd> llt_;
  std::uint64_t evals_ = 0;
};

}  // namespace optdes
