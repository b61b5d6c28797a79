#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace sparsecs {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Relation { less_equal, equal, greater_equal };
enum class LpStatus { optimal, infeasible, unbounded };

std::string_view to_string(LpStatus status) noexcept;

struct LinearConstraint {
  std::vector<double> coefficients;
  Relation relation = Relation::less_equal;
  double rhs = 0.0;
};

/// maximize objective . x  subject to the constraints and lower <= x <= upper.
/// Bounds may be infinite; new variables default to [0, +inf).
struct LinearProgram {
  std::vector<double> objective;
  std::vector<LinearConstraint> constraints;
  std::vector<double> lower;
  std::vector<double> upper;

  LinearProgram() = default;
  explicit LinearProgram(std::size_t variables);

  std::size_t variables() const noexcept { return objective.size(); }
  void add_constraint(std::vector<double> coefficients, Relation relation, double rhs);
  void set_free(std::size_t j);

  /// Throws std::invalid_argument on inconsistent dimensions or non-finite data.
  void validate() const;
};

struct SimplexOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-8;
  double pivot_tol = 1e-10;
  std::size_t max_iterations = 0;  // 0 = automatic limit from problem size
};

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> x;
  double objective_value = 0.0;
  // Row multipliers y with reduced costs c - A^T y; <= rows have y >= 0.
  std::vector<double> duals;
  // Improving direction when unbounded (x + t ray feasible for all t >= 0).
  std::vector<double> ray;
  // Basic columns of the internal standard form at termination.
  std::vector<std::size_t> basis;
  std::size_t iterations = 0;
  bool used_bland = false;
  double feasibility_tol = 0.0;
  double optimality_tol = 0.0;
};

/// Two-phase dense tableau simplex. Dantzig pricing; switches to Bland's rule
/// after 3 (rows + cols) consecutive degenerate pivots.
LpSolution lp_solve(const LinearProgram& lp, const SimplexOptions& options = {});

struct LpCheckReport {
  bool ok = false;
  double primal_violation = 0.0;
  double dual_violation = 0.0;
  double complementarity_violation = 0.0;
  double duality_gap = 0.0;
  std::string failure;
};

/// Certificate checker, written independently of the solver: primal
/// feasibility, dual sign feasibility, complementary slackness and reduced-cost
/// optimality for optimal solutions; ray validity for unbounded ones.
LpCheckReport check_lp_solution(const LinearProgram& lp, const LpSolution& solution,
                                double feasibility_tol = 1e-9, double optimality_tol = 1e-8);

}  // namespace sparsecs
