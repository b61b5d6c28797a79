// Reference implementations used only by tests. Each one is written from the
// definition, shares no code with the library beyond data types, and favours
// obviousness over speed.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "sparsecs/lp.hpp"
#include "sparsecs/matrix.hpp"

namespace oracle {

// Dense 0/1 copy of a sparse matrix, built cell by cell through contains().
inline std::vector<std::vector<int>> dense(const sparsecs::SparseBinaryMatrix& a) {
  std::vector<std::vector<int>> out(a.rows(), std::vector<int>(a.cols(), 0));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out[i][j] = a.contains(i, j) ? 1 : 0;
  }
  return out;
}

// min over |J| = k of |R(J)|, by bitmask over all 2^n subsets.
inline std::vector<std::size_t> min_neighbourhood_by_size(const sparsecs::SparseBinaryMatrix& a) {
  const std::size_t n = a.cols();
  std::vector<std::uint64_t> rows_of(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    for (auto i : a.column(j)) rows_of[j] |= std::uint64_t{1} << i;
  }
  std::vector<std::size_t> best(n + 1, std::numeric_limits<std::size_t>::max());
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    std::uint64_t hit = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask >> j & 1) hit |= rows_of[j];
    }
    const auto k = static_cast<std::size_t>(__builtin_popcountll(mask));
    best[k] = std::min(best[k], static_cast<std::size_t>(__builtin_popcountll(hit)));
  }
  return best;
}

// theta_k from the definition: smallest theta in [0,1] such that
// |R(J)| >= (1 - theta) d |J| for all nonempty |J| <= k.
inline std::vector<double> theta_bruteforce(const sparsecs::SparseBinaryMatrix& a, std::size_t s_max,
                                            double d) {
  const auto best = min_neighbourhood_by_size(a);
  std::vector<double> out;
  double running = 0.0;
  for (std::size_t k = 1; k <= s_max; ++k) {
    const double need = 1.0 - static_cast<double>(best[k]) / (d * static_cast<double>(k));
    running = std::max(running, std::clamp(need, 0.0, 1.0));
    out.push_back(running);
  }
  return out;
}

struct VertexResult {
  bool feasible = false;
  double value = 0.0;
  std::vector<double> x;
};

// Maximises c.x over a bounded polyhedron by trying every basis: all n-subsets
// of the active-capable rows (equalities always active), with finite
// variable bounds treated as rows. Only valid when the feasible set is bounded
// and there are at most n equalities.
inline VertexResult vertex_enumeration(const sparsecs::LinearProgram& lp, double tol = 1e-9) {
  using sparsecs::Relation;
  const std::size_t n = lp.variables();
  struct Row {
    std::vector<double> a;
    double b;
    bool eq;
  };
  std::vector<Row> eqs;
  std::vector<Row> ineqs;  // a.x <= b
  for (const auto& c : lp.constraints) {
    if (c.relation == Relation::equal) {
      eqs.push_back({c.coefficients, c.rhs, true});
    } else {
      const double sign = c.relation == Relation::less_equal ? 1.0 : -1.0;
      std::vector<double> a(n);
      for (std::size_t j = 0; j < n; ++j) a[j] = sign * c.coefficients[j];
      ineqs.push_back({a, sign * c.rhs, false});
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isfinite(lp.upper[j])) {
      std::vector<double> a(n, 0.0);
      a[j] = 1.0;
      ineqs.push_back({a, lp.upper[j], false});
    }
    if (std::isfinite(lp.lower[j])) {
      std::vector<double> a(n, 0.0);
      a[j] = -1.0;
      ineqs.push_back({a, -lp.lower[j], false});
    }
  }
  VertexResult best;
  best.value = -std::numeric_limits<double>::infinity();
  std::vector<Row> all = eqs;
  all.insert(all.end(), ineqs.begin(), ineqs.end());
  const std::size_t r = all.size();
  if (r < n) return best;
  std::vector<std::size_t> pick(n);
  for (std::size_t k = 0; k < n; ++k) pick[k] = k;
  for (;;) {
    // Equalities occupy rows 0..E-1; a sorted pick contains them all iff it starts 0..E-1.
    bool has_all_eqs = eqs.size() <= n;
    for (std::size_t e = 0; e < eqs.size() && has_all_eqs; ++e) has_all_eqs = pick[e] == e;
    if (has_all_eqs) {
      Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
      Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = all[pick[k]].a[j];
        rhs[static_cast<Eigen::Index>(k)] = all[pick[k]].b;
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
      if (lu.rank() == static_cast<Eigen::Index>(n)) {
        const Eigen::VectorXd x = lu.solve(rhs);
        bool ok = true;
        for (const auto& row : all) {
          double lhs = 0.0;
          double mag = 0.0;
          for (std::size_t j = 0; j < n; ++j) {
            lhs += row.a[j] * x[static_cast<Eigen::Index>(j)];
            mag += std::abs(row.a[j] * x[static_cast<Eigen::Index>(j)]);
          }
          const double t = tol * (1.0 + mag + std::abs(row.b));
          if (row.eq ? std::abs(lhs - row.b) > t : lhs > row.b + t) {
            ok = false;
            break;
          }
        }
        if (ok) {
          double v = 0.0;
          for (std::size_t j = 0; j < n; ++j) v += lp.objective[j] * x[static_cast<Eigen::Index>(j)];
          if (!best.feasible || v > best.value) {
            best.feasible = true;
            best.value = v;
            best.x.assign(x.data(), x.data() + n);
          }
        }
      }
    }
    std::size_t t = n;
    while (t > 0 && pick[t - 1] == r - n + (t - 1)) --t;
    if (t == 0) break;
    ++pick[t - 1];
    for (std::size_t u = t; u < n; ++u) pick[u] = pick[u - 1] + 1;
  }
  return best;
}

// Accelerated projected gradient (FISTA with restart) for min_{x>=0} ||Ax - y||^2 / 2.
inline std::vector<double> nnls_projected_gradient(const Eigen::MatrixXd& a, const Eigen::VectorXd& y,
                                                   std::size_t iterations = 200000, double tol = 1e-13) {
  const Eigen::Index n = a.cols();
  const Eigen::MatrixXd g = a.transpose() * a;
  const Eigen::VectorXd b = a.transpose() * y;
  const double lipschitz = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g).eigenvalues().maxCoeff();
  const double step = 1.0 / std::max(lipschitz, 1e-300);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd z = x;
  double t = 1.0;
  for (std::size_t k = 0; k < iterations; ++k) {
    Eigen::VectorXd next = (z - step * (g * z - b)).cwiseMax(0.0);
    const double tn = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
    Eigen::VectorXd momentum = next + ((t - 1.0) / tn) * (next - x);
    if ((next - x).dot(z - next) > 0.0) {  // restart when the objective would rise
      momentum = next;
      t = 1.0;
    } else {
      t = tn;
    }
    const double change = (next - x).norm();
    x = next;
    z = momentum;
    if (change <= tol * (1.0 + x.norm())) break;
  }
  return {x.data(), x.data() + n};
}

// P(some column is zero) by summing over all 2^(m n) matrices with weights
// p^ones (1-p)^zeros. Feasible for m n <= 16.
inline double zero_column_exhaustive(std::size_t n, std::size_t m, double p) {
  const std::size_t cells = n * m;
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cells); ++mask) {
    bool zero_col = false;
    for (std::size_t j = 0; j < n && !zero_col; ++j) {
      bool any = false;
      for (std::size_t i = 0; i < m; ++i) any = any || (mask >> (j * m + i) & 1);
      zero_col = !any;
    }
    if (!zero_col) continue;
    const int ones = __builtin_popcountll(mask);
    total += std::pow(p, ones) * std::pow(1.0 - p, static_cast<double>(cells) - ones);
  }
  return total;
}

// Pearson chi-square statistic of observed counts against equal expected counts.
inline double chi_square_uniform(const std::vector<std::size_t>& counts) {
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0.0;
  for (auto c : counts) stat += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
  return stat;
}

// A generous acceptance threshold for chi-square with k degrees of freedom
// (mean + 6 standard deviations).
inline double chi_square_limit(std::size_t dof) {
  return static_cast<double>(dof) + 6.0 * std::sqrt(2.0 * static_cast<double>(dof));
}

}  // namespace oracle

namespace gen {

// Hand-rolled generators for property tests. std::mt19937_64 with explicit
// seeds; distributions built from raw draws so cases are reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t below(std::uint64_t bound) { return engine_() % bound; }
  std::size_t between(std::size_t lo, std::size_t hi) {
    if (hi < lo) throw std::invalid_argument("Rng::between: empty range");
    return lo + below(hi - lo + 1);
  }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  bool coin(double p = 0.5) { return unit() < p; }
  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

inline sparsecs::SparseBinaryMatrix random_matrix(Rng& rng, std::size_t m, std::size_t n, double p) {
  std::vector<std::vector<sparsecs::SparseBinaryMatrix::Index>> cols(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      if (rng.coin(p)) cols[j].push_back(static_cast<sparsecs::SparseBinaryMatrix::Index>(i));
    }
  }
  return {m, n, std::move(cols)};
}

inline sparsecs::SparseBinaryMatrix random_left_regular(Rng& rng, std::size_t m, std::size_t n,
                                                        std::size_t d) {
  std::vector<std::vector<sparsecs::SparseBinaryMatrix::Index>> cols(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<sparsecs::SparseBinaryMatrix::Index> all(m);
    for (std::size_t i = 0; i < m; ++i) all[i] = static_cast<sparsecs::SparseBinaryMatrix::Index>(i);
    for (std::size_t k = 0; k < d; ++k) std::swap(all[k], all[k + rng.below(m - k)]);
    cols[j].assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(d));
    std::sort(cols[j].begin(), cols[j].end());
  }
  return {m, n, std::move(cols)};
}

inline std::vector<double> random_vector(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

inline std::vector<std::size_t> random_subset(Rng& rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  for (std::size_t t = 0; t < k; ++t) std::swap(all[t], all[t + rng.below(n - t)]);
  std::vector<std::size_t> out(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(out.begin(), out.end());
  return out;
}

// Random bounded LP: every variable boxed, mixed relations, 1..8 rows.
inline sparsecs::LinearProgram random_lp(gen::Rng& rng) {
  const std::size_t n = rng.between(1, 6);
  const std::size_t rows = rng.between(1, 8);
  sparsecs::LinearProgram lp(n);
  for (double& c : lp.objective) c = rng.uniform(-3, 3);
  for (std::size_t j = 0; j < n; ++j) {
    switch (rng.below(4)) {
      case 0: lp.lower[j] = 0; lp.upper[j] = rng.uniform(0.5, 5); break;
      case 1: lp.lower[j] = rng.uniform(-5, 0); lp.upper[j] = rng.uniform(0, 5); break;
      case 2: lp.lower[j] = -rng.uniform(1, 4); lp.upper[j] = rng.uniform(-1, 4) + 4; break;
      default: lp.lower[j] = rng.uniform(-2, 1); lp.upper[j] = lp.lower[j] + rng.uniform(0, 3); break;
    }
  }
  std::size_t equalities = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<double> a(n);
    for (double& v : a) v = rng.coin(0.7) ? std::round(rng.uniform(-4, 4)) : 0.0;
    auto rel = sparsecs::Relation::less_equal;
    const auto pick = rng.below(5);
    if (pick == 0 && equalities < n) {
      rel = sparsecs::Relation::equal;
      ++equalities;
    } else if (pick == 1) {
      rel = sparsecs::Relation::greater_equal;
    }
    lp.add_constraint(std::move(a), rel, std::round(rng.uniform(-6, 8)));
  }
  return lp;
}

}  // namespace gen
