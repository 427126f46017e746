#include "optdes/model.hpp"

#include <stdexcept>
#include <string>

namespace optdes {

ModelSpec::ModelSpec(int k_factors, int n_runs)
    : k(k_factors), n(n_runs), p((k_factors + 2) * (k_factors + 1) / 2) {
  if (k_factors < 1)
    throw std::invalid_argument("ModelSpec: factor count must be >= 1");
  if (n_runs < 1)
    throw std::invalid_argument("ModelSpec: run count must be >= 1");
}

void validate_design(const Design& d, const ModelSpec& spec) {
  if (d.runs() != spec.n || d.factors() != spec.k)
    throw std::invalid_argument(
        "design is " + std::to_string(d.runs()) + "x" +
        std::to_string(d.factors()) + ", spec wants " + std::to_string(spec.n) +
        "x" + std::to_string(spec.k));
  for (int i = 0; i < d.runs(); ++i)
    for (int j = 0; j < d.factors(); ++j) {
      const double v = d.points(i, j);
      if (!(v >= -1.0 && v <= 1.0))
        throw std::invalid_argument("design entry (" + std::to_string(i + 1) +
                                    "," + std::to_string(j + 1) + ") = " +
                                    std::to_string(v) + " outside [-1,1]");
    }
}

std::vector<ExponentVector> model_terms(const ModelSpec& spec) {
  std::vector<ExponentVector> terms;
  terms.reserve(spec.p);
  terms.emplace_back(spec.k, 0);  // intercept
  for (int j = 0; j < spec.k; ++j) {
    ExponentVector e(spec.k, 0);
    e[j] = 1;
    terms.push_back(std::move(e));
  }
  for (int a = 0; a < spec.k; ++a)
    for (int b = a + 1; b < spec.k; ++b) {
      ExponentVector e(spec.k, 0);
      e[a] = 1;
      e[b] = 1;
      terms.push_back(std::move(e));
    }
  for (int j = 0; j < spec.k; ++j) {
    ExponentVector e(spec.k, 0);
    e[j] = 2;
    terms.push_back(std::move(e));
  }
  return terms;
}

Eigen::VectorXd expand_point(const Eigen::VectorXd& x, const ModelSpec& spec) {
  if (x.size() != spec.k)
    throw std::invalid_argument(
        "expand_point: point has " + std::to_string(x.size()) +
        " components, spec.k = " + std::to_string(spec.k));
  Eigen::VectorXd out(spec.p);
  detail::expand_point_into(x.data(), spec.k, out.data());
  return out;
}

Eigen::MatrixXd model_matrix(const Design& d, const ModelSpec& spec) {
  validate_design(d, spec);
  Eigen::MatrixXd f(spec.n, spec.p);
  Eigen::VectorXd row(spec.k);
  Eigen::VectorXd expanded(spec.p);
  for (int i = 0; i < spec.n; ++i) {
    row = d.points.row(i);
    detail::expand_point_into(row.data(), spec.k, expanded.data());
    f.row(i) = expanded;
  }
  return f;
}

Eigen::MatrixXd information_matrix(const Design& d, const ModelSpec& spec) {
  const Eigen::MatrixXd f = model_matrix(d, spec);
  Eigen::MatrixXd m;
  detail::information_matrix_into(d.points, f, m);
  return m;
}

Eigen::MatrixXd moments_matrix(const ModelSpec& spec) {
  const auto terms = model_terms(spec);
  Eigen::MatrixXd w(spec.p, spec.p);
  for (int u = 0; u < spec.p; ++u)
    for (int v = u; v < spec.p; ++v) {
      double entry = 1.0;
      for (int j = 0; j < spec.k; ++j) {
        const int e = terms[u][j] + terms[v][j];
        if (e % 2 != 0) {
          entry = 0.0;
          break;
        }
        entry /= static_cast<double>(e + 1);
      }
      w(u, v) = entry;
      w(v, u) = entry;
    }
  return w;
}

}  // namespace optdes
