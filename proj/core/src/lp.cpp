#include "sparsecs/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sparsecs {

std::string_view to_string(LpStatus status) noexcept {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "unknown";
}

LinearProgram::LinearProgram(std::size_t variables)
    : objective(variables, 0.0), lower(variables, 0.0), upper(variables, kInfinity) {}

void LinearProgram::add_constraint(std::vector<double> coefficients, Relation relation,
                                   double rhs) {
  if (coefficients.size() != variables()) {
    throw std::invalid_argument("add_constraint: row has " + std::to_string(coefficients.size()) +
                                " coefficients, program has " + std::to_string(variables()) +
                                " variables");
  }
  constraints.push_back({std::move(coefficients), relation, rhs});
}

void LinearProgram::set_free(std::size_t j) {
  lower.at(j) = -kInfinity;
  upper.at(j) = kInfinity;
}

void LinearProgram::validate() const {
  const std::size_t n = variables();
  if (lower.size() != n || upper.size() != n) {
    throw std::invalid_argument("LinearProgram: bound vectors do not match variable count");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(objective[j])) throw std::invalid_argument("LinearProgram: non-finite objective");
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] == kInfinity ||
        upper[j] == -kInfinity) {
      throw std::invalid_argument("LinearProgram: invalid bounds for variable " + std::to_string(j));
    }
  }
  for (const auto& c : constraints) {
    if (c.coefficients.size() != n) {
      throw std::invalid_argument("LinearProgram: constraint has wrong length");
    }
    if (!std::isfinite(c.rhs)) throw std::invalid_argument("LinearProgram: non-finite rhs");
    for (double a : c.coefficients) {
      if (!std::isfinite(a)) throw std::invalid_argument("LinearProgram: non-finite coefficient");
    }
  }
}

namespace {

// x_j = offset + sum of coef * x'_col over its (at most two) standard columns.
struct VariableMap {
  double offset = 0.0;
  std::size_t first = 0;
  double first_coef = 1.0;
  bool split = false;  // second column is first + 1 with coefficient -1
};

class Simplex {
 public:
  Simplex(const LinearProgram& lp, const SimplexOptions& options) : lp_(lp), opt_(options) {}

  LpSolution solve() {
    LpSolution sol;
    sol.feasibility_tol = opt_.feasibility_tol;
    sol.optimality_tol = opt_.optimality_tol;
    if (!build()) {
      sol.status = LpStatus::infeasible;
      return sol;
    }
    max_iterations_ = opt_.max_iterations ? opt_.max_iterations : 50 * (rows_ + cols_) + 1000;

    if (artificial_begin_ < cols_) {
      std::vector<double> phase1(cols_, 0.0);
      for (std::size_t c = artificial_begin_; c < cols_; ++c) phase1[c] = -1.0;
      set_costs(phase1);
      run();  // bounded by zero, cannot be unbounded
      sol.iterations = iterations_;
      if (objective_ < -opt_.feasibility_tol * feasibility_scale_) {
        sol.status = LpStatus::infeasible;
        sol.used_bland = bland_;
        return sol;
      }
      drive_out_artificials();
      for (std::size_t c = artificial_begin_; c < cols_; ++c) blocked_[c] = 1;
    }

    set_costs(cost_);
    const bool bounded = run();
    sol.iterations = iterations_;
    sol.used_bland = bland_;
    sol.basis = basis_;
    sol.x = primal();
    sol.objective_value = 0.0;
    for (std::size_t j = 0; j < lp_.variables(); ++j) sol.objective_value += lp_.objective[j] * sol.x[j];
    if (!bounded) {
      sol.status = LpStatus::unbounded;
      sol.ray = ray(unbounded_column_);
      return sol;
    }
    sol.status = LpStatus::optimal;
    sol.duals = duals();
    return sol;
  }

 private:
  double& at(std::size_t r, std::size_t c) { return tableau_[r * width_ + c]; }
  double rhs(std::size_t r) const { return tableau_[r * width_ + cols_]; }

  // Converts to max c'x' s.t. T x' = b', x' >= 0, b' >= 0 with a unit starting basis.
  // Returns false when some variable has an empty bound interval.
  bool build() {
    lp_.validate();
    const std::size_t n = lp_.variables();
    maps_.resize(n);
    std::size_t structural = 0;
    std::vector<std::size_t> upper_rows;  // variables needing x' <= u - l
    for (std::size_t j = 0; j < n; ++j) {
      const double l = lp_.lower[j];
      const double u = lp_.upper[j];
      auto& vm = maps_[j];
      vm.first = structural;
      if (std::isfinite(l)) {
        if (u < l) return false;
        vm.offset = l;
        structural += 1;
        if (std::isfinite(u)) upper_rows.push_back(j);
      } else if (std::isfinite(u)) {
        vm.offset = u;
        vm.first_coef = -1.0;
        structural += 1;
      } else {
        vm.split = true;
        structural += 2;
      }
    }
    structural_ = structural;

    // Dense standard-form rows before slack/artificial columns are appended.
    struct Row {
      std::vector<double> coef;
      double rhs;
      double slack;  // +1, -1 or 0 (equality)
    };
    std::vector<Row> rows;
    rows.reserve(lp_.constraints.size() + upper_rows.size());
    for (const auto& con : lp_.constraints) {
      Row row{std::vector<double>(structural, 0.0), con.rhs, 0.0};
      for (std::size_t j = 0; j < n; ++j) {
        const double a = con.coefficients[j];
        if (a == 0.0) continue;
        const auto& vm = maps_[j];
        row.rhs -= a * vm.offset;
        row.coef[vm.first] += a * vm.first_coef;
        if (vm.split) row.coef[vm.first + 1] -= a;
      }
      row.slack = con.relation == Relation::less_equal ? 1.0
                  : con.relation == Relation::greater_equal ? -1.0 : 0.0;
      rows.push_back(std::move(row));
    }
    for (std::size_t j : upper_rows) {
      Row row{std::vector<double>(structural, 0.0), lp_.upper[j] - lp_.lower[j], 1.0};
      row.coef[maps_[j].first] = 1.0;
      rows.push_back(std::move(row));
    }
    rows_ = rows.size();
    constraint_rows_ = lp_.constraints.size();

    // Orientation: prefer a +1 slack with non-negative rhs.
    multiplier_.assign(rows_, 1.0);
    double max_rhs = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      auto& row = rows[r];
      if (row.rhs < 0.0 || (row.rhs == 0.0 && row.slack < 0.0)) {
        for (double& a : row.coef) a = -a;
        row.rhs = -row.rhs;
        row.slack = -row.slack;
        multiplier_[r] = -1.0;
      }
      max_rhs = std::max(max_rhs, row.rhs);
    }
    feasibility_scale_ = 1.0 + max_rhs;

    // Columns appearing in exactly one row can seed the basis for that row.
    std::vector<std::size_t> occurrences(structural, 0);
    std::vector<std::size_t> only_row(structural, 0);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < structural; ++c) {
        if (rows[r].coef[c] != 0.0) {
          ++occurrences[c];
          only_row[c] = r;
        }
      }
    }

    std::size_t slacks = 0;
    for (const auto& row : rows) slacks += row.slack != 0.0 ? 1 : 0;
    std::vector<std::ptrdiff_t> start(rows_, -1);
    std::vector<char> needs_artificial(rows_, 0);
    std::size_t artificials = 0;
    {
      std::size_t slack_col = structural;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (rows[r].slack != 0.0) {
          if (rows[r].slack > 0.0) start[r] = static_cast<std::ptrdiff_t>(slack_col);
          ++slack_col;
        }
      }
      for (std::size_t c = 0; c < structural; ++c) {
        if (occurrences[c] != 1) continue;
        const std::size_t r = only_row[c];
        if (start[r] < 0 && rows[r].coef[c] > 0.0) {
          const double scale = 1.0 / rows[r].coef[c];
          for (double& a : rows[r].coef) a *= scale;
          rows[r].rhs *= scale;
          rows[r].slack *= scale;
          multiplier_[r] *= scale;
          start[r] = static_cast<std::ptrdiff_t>(c);
        }
      }
      for (std::size_t r = 0; r < rows_; ++r) {
        if (start[r] < 0) {
          needs_artificial[r] = 1;
          ++artificials;
        }
      }
    }

    artificial_begin_ = structural + slacks;
    cols_ = artificial_begin_ + artificials;
    width_ = cols_ + 1;
    tableau_.assign(rows_ * width_, 0.0);
    basis_.assign(rows_, 0);
    start_column_.assign(rows_, 0);
    std::size_t slack_col = structural;
    std::size_t art_col = artificial_begin_;
    for (std::size_t r = 0; r < rows_; ++r) {
      double* out = &tableau_[r * width_];
      std::copy(rows[r].coef.begin(), rows[r].coef.end(), out);
      if (rows[r].slack != 0.0) out[slack_col++] = rows[r].slack;
      if (needs_artificial[r]) {
        out[art_col] = 1.0;
        start[r] = static_cast<std::ptrdiff_t>(art_col++);
      }
      out[cols_] = rows[r].rhs;
      basis_[r] = static_cast<std::size_t>(start[r]);
      start_column_[r] = basis_[r];
    }

    cost_.assign(cols_, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const auto& vm = maps_[j];
      cost_[vm.first] += lp_.objective[j] * vm.first_coef;
      if (vm.split) cost_[vm.first + 1] -= lp_.objective[j];
    }
    blocked_.assign(cols_, 0);
    reduced_.assign(cols_, 0.0);
    return true;
  }

  void set_costs(const std::vector<double>& cost) {
    phase_cost_ = cost;
    std::copy(cost.begin(), cost.end(), reduced_.begin());
    objective_ = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      const double cb = cost[basis_[r]];
      if (cb == 0.0) continue;
      const double* row = &tableau_[r * width_];
      for (std::size_t c = 0; c < cols_; ++c) reduced_[c] -= cb * row[c];
      objective_ += cb * row[cols_];
    }
    for (std::size_t r = 0; r < rows_; ++r) reduced_[basis_[r]] = 0.0;
    degenerate_run_ = 0;
  }

  std::ptrdiff_t price() const {
    std::ptrdiff_t best = -1;
    double best_value = opt_.optimality_tol;
    for (std::size_t c = 0; c < cols_; ++c) {
      if (blocked_[c] || reduced_[c] <= opt_.optimality_tol) continue;
      if (bland_) return static_cast<std::ptrdiff_t>(c);
      if (reduced_[c] > best_value) {
        best_value = reduced_[c];
        best = static_cast<std::ptrdiff_t>(c);
      }
    }
    return best;
  }

  std::ptrdiff_t ratio_test(std::size_t q) {
    std::ptrdiff_t best = -1;
    double best_ratio = kInfinity;
    double best_pivot = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      const double a = at(r, q);
      if (a <= opt_.pivot_tol) continue;
      const double ratio = std::max(rhs(r), 0.0) / a;
      if (best < 0 || ratio < best_ratio - 1e-12 * (1.0 + best_ratio)) {
        best = static_cast<std::ptrdiff_t>(r);
        best_ratio = ratio;
        best_pivot = a;
      } else if (ratio <= best_ratio + 1e-12 * (1.0 + best_ratio)) {
        const bool take = bland_ ? basis_[r] < basis_[static_cast<std::size_t>(best)]
                                 : a > best_pivot;
        if (take) {
          best = static_cast<std::ptrdiff_t>(r);
          best_ratio = std::min(best_ratio, ratio);
          best_pivot = a;
        }
      }
    }
    last_ratio_ = best_ratio;
    return best;
  }

  void pivot(std::size_t p, std::size_t q) {
    double* prow = &tableau_[p * width_];
    const double inv = 1.0 / prow[q];
    nonzero_.clear();
    for (std::size_t c = 0; c < width_; ++c) {
      if (prow[c] == 0.0) continue;
      prow[c] *= inv;
      nonzero_.push_back(c);
    }
    prow[q] = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == p) continue;
      double* row = &tableau_[r * width_];
      const double f = row[q];
      if (f == 0.0) continue;
      for (std::size_t c : nonzero_) row[c] -= f * prow[c];
      row[q] = 0.0;
      if (row[cols_] < 0.0 && row[cols_] > -opt_.feasibility_tol * feasibility_scale_) row[cols_] = 0.0;
    }
    const double f = reduced_[q];
    if (f != 0.0) {
      for (std::size_t c : nonzero_) {
        if (c < cols_) reduced_[c] -= f * prow[c];
      }
      objective_ += f * prow[cols_];
    }
    reduced_[q] = 0.0;
    basis_[p] = q;
  }

  // Returns false if unbounded; unbounded_column_ then holds the entering column.
  bool run() {
    for (;;) {
      const auto q = price();
      if (q < 0) return true;
      const auto p = ratio_test(static_cast<std::size_t>(q));
      if (p < 0) {
        unbounded_column_ = static_cast<std::size_t>(q);
        return false;
      }
      if (++iterations_ > max_iterations_) {
        throw std::runtime_error("simplex: iteration limit exceeded");
      }
      if (last_ratio_ <= opt_.feasibility_tol) {
        if (++degenerate_run_ > 3 * (rows_ + cols_)) bland_ = true;
      } else {
        degenerate_run_ = 0;
      }
      pivot(static_cast<std::size_t>(p), static_cast<std::size_t>(q));
    }
  }

  void drive_out_artificials() {
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] < artificial_begin_) continue;
      std::ptrdiff_t best = -1;
      double best_abs = 1e-9;
      for (std::size_t c = 0; c < artificial_begin_; ++c) {
        const double v = std::abs(at(r, c));
        if (v > best_abs) {
          best_abs = v;
          best = static_cast<std::ptrdiff_t>(c);
        }
      }
      if (best < 0) continue;  // redundant row; the artificial stays basic at zero
      at(r, cols_) = 0.0;
      pivot(r, static_cast<std::size_t>(best));
    }
  }

  std::vector<double> standard_values() const {
    std::vector<double> xs(cols_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) xs[basis_[r]] = std::max(rhs(r), 0.0);
    return xs;
  }

  std::vector<double> to_original(const std::vector<double>& xs, bool with_offset) const {
    std::vector<double> x(lp_.variables(), 0.0);
    for (std::size_t j = 0; j < x.size(); ++j) {
      const auto& vm = maps_[j];
      double v = with_offset ? vm.offset : 0.0;
      v += vm.first_coef * xs[vm.first];
      if (vm.split) v -= xs[vm.first + 1];
      x[j] = v;
    }
    return x;
  }

  std::vector<double> primal() const { return to_original(standard_values(), true); }

  std::vector<double> ray(std::size_t q) {
    std::vector<double> dir(cols_, 0.0);
    dir[q] = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) dir[basis_[r]] = -at(r, q);
    return to_original(dir, false);
  }

  std::vector<double> duals() {
    std::vector<double> y(constraint_rows_, 0.0);
    for (std::size_t i = 0; i < constraint_rows_; ++i) {
      const std::size_t c = start_column_[i];
      double sum = 0.0;
      for (std::size_t r = 0; r < rows_; ++r) {
        const double cb = phase_cost_[basis_[r]];
        if (cb != 0.0) sum += cb * at(r, c);
      }
      y[i] = sum * multiplier_[i];
    }
    return y;
  }

  const LinearProgram& lp_;
  SimplexOptions opt_;
  std::vector<VariableMap> maps_;
  std::size_t structural_ = 0;
  std::size_t rows_ = 0;
  std::size_t constraint_rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t width_ = 0;
  std::size_t artificial_begin_ = 0;
  std::vector<double> tableau_;
  std::vector<double> multiplier_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> start_column_;
  std::vector<double> cost_;
  std::vector<double> phase_cost_;
  std::vector<double> reduced_;
  std::vector<char> blocked_;
  std::vector<std::size_t> nonzero_;
  double objective_ = 0.0;
  double feasibility_scale_ = 1.0;
  double last_ratio_ = 0.0;
  std::size_t iterations_ = 0;
  std::size_t max_iterations_ = 0;
  std::size_t degenerate_run_ = 0;
  std::size_t unbounded_column_ = 0;
  bool bland_ = false;
};

}  // namespace

LpSolution lp_solve(const LinearProgram& lp, const SimplexOptions& options) {
  return Simplex(lp, options).solve();
}

}  // namespace sparsecs
