#include "sparsecs/decoders.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sparsecs {

Eigen::MatrixXd to_dense(const SparseBinaryMatrix& a) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(a.rows()),
                                              static_cast<Eigen::Index>(a.cols()));
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (auto i : a.column(j)) out(i, static_cast<Eigen::Index>(j)) = 1.0;
  }
  return out;
}

namespace {

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

void check_rhs(const Eigen::MatrixXd& a, std::span<const double> y, const char* what) {
  if (static_cast<Eigen::Index>(y.size()) != a.rows()) {
    throw std::invalid_argument(std::string(what) + ": y has length " + std::to_string(y.size()) +
                                ", matrix has " + std::to_string(a.rows()) + " rows");
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite y");
  }
  if (!a.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite matrix entry");
}

}  // namespace

NnlsResult nnls_solve(const Eigen::MatrixXd& a, std::span<const double> y_span) {
  check_rhs(a, y_span, "nnls_solve");
  const auto m = a.rows();
  const auto n = a.cols();
  const auto y = as_vector(y_span);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<char> passive(static_cast<std::size_t>(n), 0);
  std::vector<char> excluded(static_cast<std::size_t>(n), 0);
  const double tol = 1e-12 * std::max(1.0, a.norm() * y.norm());
  Eigen::VectorXd gradient = a.transpose() * y;

  NnlsResult result;
  const std::size_t max_outer = 3 * static_cast<std::size_t>(std::max<Eigen::Index>(n, 1));
  for (;;) {
    Eigen::Index entering = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      if (!passive[ju] && !excluded[ju] && gradient[j] > best) {
        best = gradient[j];
        entering = j;
      }
    }
    if (entering < 0) break;
    if (++result.outer_iterations > max_outer) {
      throw std::runtime_error("nnls_solve: active set did not converge in 3n outer iterations");
    }
    passive[static_cast<std::size_t>(entering)] = 1;

    bool first_inner = true;
    for (;;) {
      std::vector<Eigen::Index> idx;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
      }
      Eigen::MatrixXd sub(m, static_cast<Eigen::Index>(idx.size()));
      for (std::size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
      const Eigen::VectorXd z = sub.colPivHouseholderQr().solve(y);

      bool positive = true;
      for (Eigen::Index k = 0; k < z.size(); ++k) positive = positive && z[k] > 0.0;
      if (positive) {
        x.setZero();
        for (std::size_t k = 0; k < idx.size(); ++k) x[idx[k]] = z[static_cast<Eigen::Index>(k)];
        std::fill(excluded.begin(), excluded.end(), 0);
        break;
      }

      if (first_inner) {
        // The entering column itself came out non-positive: a rounding artefact
        // of a near-zero gradient. Skip it until x changes.
        const auto pos = std::find(idx.begin(), idx.end(), entering) - idx.begin();
        if (z[pos] <= 0.0) {
          passive[static_cast<std::size_t>(entering)] = 0;
          excluded[static_cast<std::size_t>(entering)] = 1;
          break;
        }
      }
      first_inner = false;

      double alpha = 1.0;
      for (std::size_t k = 0; k < idx.size(); ++k) {
        const double zk = z[static_cast<Eigen::Index>(k)];
        const double xk = x[idx[k]];
        if (zk <= 0.0) alpha = std::min(alpha, xk / (xk - zk));
      }
      for (std::size_t k = 0; k < idx.size(); ++k) {
        const Eigen::Index j = idx[k];
        x[j] += alpha * (z[static_cast<Eigen::Index>(k)] - x[j]);
        if (x[j] <= tol) {
          x[j] = 0.0;
          passive[static_cast<std::size_t>(j)] = 0;
        }
      }
      std::fill(excluded.begin(), excluded.end(), 0);
    }
    gradient = a.transpose() * (y - a * x);
  }

  result.x.assign(x.data(), x.data() + n);
  result.residual_l2 = (a * x - y).norm();
  return result;
}

double nnls_kkt_violation(const Eigen::MatrixXd& a, std::span<const double> y,
                          std::span<const double> x) {
  check_rhs(a, y, "nnls_kkt_violation");
  if (static_cast<Eigen::Index>(x.size()) != a.cols()) {
    throw std::invalid_argument("nnls_kkt_violation: x has wrong length");
  }
  const auto xv = as_vector(x);
  const Eigen::VectorXd g = a.transpose() * (as_vector(y) - a * xv);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    if (xv[j] < 0.0) {
      worst = std::max(worst, -xv[j]);
    } else if (xv[j] > 0.0) {
      worst = std::max(worst, std::abs(g[j]));
    } else {
      worst = std::max(worst, g[j]);
    }
  }
  return worst;
}

namespace {

std::vector<double> row_of(const Eigen::MatrixXd& a, Eigen::Index i, std::size_t width,
                           std::size_t offset, double sign) {
  std::vector<double> row(width, 0.0);
  for (Eigen::Index j = 0; j < a.cols(); ++j) row[offset + static_cast<std::size_t>(j)] = sign * a(i, j);
  return row;
}

DecodeResult finish(const LpSolution& sol, std::size_t n, bool split) {
  DecodeResult out;
  out.status = sol.status;
  out.iterations = sol.iterations;
  if (sol.status != LpStatus::optimal) return out;
  out.z.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    out.z[j] = split ? sol.x[j] - sol.x[n + j] : sol.x[j];
  }
  out.objective = -sol.objective_value;
  return out;
}

}  // namespace

DecodeResult bp_equality(const Eigen::MatrixXd& a, std::span<const double> y, bool nonneg) {
  check_rhs(a, y, "bp_equality");
  const auto n = static_cast<std::size_t>(a.cols());
  const std::size_t parts = nonneg ? n : 2 * n;
  LinearProgram lp(parts);
  std::fill(lp.objective.begin(), lp.objective.end(), -1.0);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    auto row = row_of(a, i, parts, 0, 1.0);
    if (!nonneg) {
      for (std::size_t j = 0; j < n; ++j) row[n + j] = -row[j];
    }
    lp.add_constraint(std::move(row), Relation::equal, y[static_cast<std::size_t>(i)]);
  }
  return finish(lp_solve(lp), n, !nonneg);
}

DecodeResult qcbp_l1(const Eigen::MatrixXd& a, std::span<const double> y, double eta,
                     bool nonneg) {
  check_rhs(a, y, "qcbp_l1");
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw std::invalid_argument("qcbp_l1: eta must be >= 0");
  const auto n = static_cast<std::size_t>(a.cols());
  const auto m = static_cast<std::size_t>(a.rows());
  // Layout: z+ (n), z- (n, absent when nonneg), r+ (m), r- (m); A(z+ - z-) - r+ + r- = y.
  const std::size_t parts = nonneg ? n : 2 * n;
  const std::size_t width = parts + 2 * m;
  LinearProgram lp(width);
  for (std::size_t j = 0; j < parts; ++j) lp.objective[j] = -1.0;
  for (std::size_t i = 0; i < m; ++i) {
    auto row = row_of(a, static_cast<Eigen::Index>(i), width, 0, 1.0);
    if (!nonneg) {
      for (std::size_t j = 0; j < n; ++j) row[n + j] = -row[j];
    }
    row[parts + i] = -1.0;
    row[parts + m + i] = 1.0;
    lp.add_constraint(std::move(row), Relation::equal, y[i]);
  }
  std::vector<double> budget(width, 0.0);
  std::fill(budget.begin() + static_cast<std::ptrdiff_t>(parts), budget.end(), 1.0);
  lp.add_constraint(std::move(budget), Relation::less_equal, eta);
  return finish(lp_solve(lp), n, !nonneg);
}

DecodeResult nnlad(const Eigen::MatrixXd& a, std::span<const double> y) {
  check_rhs(a, y, "nnlad");
  const auto n = static_cast<std::size_t>(a.cols());
  const auto m = static_cast<std::size_t>(a.rows());
  // Layout: z (n), r+ (m), r- (m); A z - r+ + r- = y.
  const std::size_t width = n + 2 * m;
  LinearProgram lp(width);
  for (std::size_t k = n; k < width; ++k) lp.objective[k] = -1.0;
  for (std::size_t i = 0; i < m; ++i) {
    auto row = row_of(a, static_cast<Eigen::Index>(i), width, 0, 1.0);
    row[n + i] = -1.0;
    row[n + m + i] = 1.0;
    lp.add_constraint(std::move(row), Relation::equal, y[i]);
  }
  return finish(lp_solve(lp), n, false);
}

}  // namespace sparsecs
