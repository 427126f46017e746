#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

namespace optdes {

/// Dimensions of a full second-order model on the hypercube [-1,1]^k:
/// intercept, k linear terms, k(k-1)/2 two-factor interactions and k pure
/// quadratics, for p = (k+2)(k+1)/2 coefficients in total.
struct ModelSpec {
  int k;  ///< number of experimental factors (columns)
  int n;  ///< number of runs (rows)
  int p;  ///< number of model coefficients, derived from k

  ModelSpec(int k_factors, int n_runs);
};

/// An exact n-run design: n rows of k coded factor settings, every entry
/// in [-1,1].
struct Design {
  Eigen::MatrixXd points;  // n x k

  Design() = default;
  explicit Design(Eigen::MatrixXd pts) : points(std::move(pts)) {}

  int runs() const { return static_cast<int>(points.rows()); }
  int factors() const { return static_cast<int>(points.cols()); }
};

/// Throws std::invalid_argument if dimensions disagree with the spec or an
/// entry falls outside [-1,1].
void validate_design(const Design& d, const ModelSpec& spec);

/// One model term as a monomial: exponents[j] is the power of factor j.
using ExponentVector = std::vector<int>;

/// The p monomials of the second-order model in the canonical term order:
/// intercept, x_1..x_k, x_i*x_j for i<j in lexicographic order, then
/// x_1^2..x_k^2. This table is the authoritative term-index <-> monomial
/// mapping; expansion and moments are tested against it.
std::vector<ExponentVector> model_terms(const ModelSpec& spec);

/// Expansion of a single point into the p-vector of model terms, in the
/// canonical order. Throws on dimension mismatch.
Eigen::VectorXd expand_point(const Eigen::VectorXd& x, const ModelSpec& spec);

/// n x p matrix whose row i is the expansion of design row i.
Eigen::MatrixXd model_matrix(const Design& d, const ModelSpec& spec);

/// p x p information matrix: the cross-product of the model matrix with
/// itself. Accumulated over rows in a content-sorted order, so the result
/// is bit-identical under any permutation of design rows.
Eigen::MatrixXd information_matrix(const Design& d, const ModelSpec& spec);

/// Volume-normalized moments of the model terms over the hypercube:
/// entry (u,v) integrates term_u * term_v against the uniform density on
/// [-1,1]^k. Closed form: the product over factors of 1/(e_u[j]+e_v[j]+1)
/// when every summed exponent is even, zero otherwise.
Eigen::MatrixXd moments_matrix(const ModelSpec& spec);

namespace detail {

// Expansion without validation, for hot paths. `out` must hold p doubles.
inline void expand_point_into(const double* x, int k, double* out) {
  int idx = 0;
  out[idx++] = 1.0;
  for (int j = 0; j < k; ++j) out[idx++] = x[j];
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) out[idx++] = x[a] * x[b];
  for (int j = 0; j < k; ++j) out[idx++] = x[j] * x[j];
}

// Information matrix of `pts` accumulated into `m` (full symmetric
// storage). `f` must be the n x p model matrix of `pts`. Rank-1
// contributions are added in an order keyed to row content, not row
// index, which makes the sum bit-identical under row permutation.
template <typename PointsLike, typename ModelMatrixLike>
void information_matrix_into(const PointsLike& pts, const ModelMatrixLike& f,
                             Eigen::MatrixXd& m) {
  const int n = static_cast<int>(pts.rows());
  const int k = static_cast<int>(pts.cols());
  const int p = static_cast<int>(f.cols());

  int order_buf[64];
  std::vector<int> order_vec;
  int* order = order_buf;
  if (n > 64) {
    order_vec.resize(n);
    order = order_vec.data();
  }
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order, order + n, [&pts, k](int a, int b) {
    for (int j = 0; j < k; ++j) {
      if (pts(a, j) < pts(b, j)) return true;
      if (pts(a, j) > pts(b, j)) return false;
    }
    return false;
  });

  if (m.rows() != p || m.cols() != p) m.resize(p, p);
  m.setZero();
  for (int r = 0; r < n; ++r)
    m.selfadjointView<Eigen::Lower>().rankUpdate(f.row(order[r]).transpose());
  m.triangularView<Eigen::StrictlyUpper>() =
      m.transpose().triangularView<Eigen::StrictlyUpper>();
}

}  // namespace detail

}  // namespace optdes
