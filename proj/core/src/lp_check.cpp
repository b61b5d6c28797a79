// Independent verification of simplex output. Shares only the data types
// with lp.cpp; all arithmetic is recomputed from the original program.

#include <algorithm>
#include <cmath>

#include "sparsecs/lp.hpp"

namespace sparsecs {

namespace {

double row_dot(const std::vector<double>& a, const std::vector<double>& x, double* magnitude) {
  double sum = 0.0;
  double mag = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    sum += a[j] * x[j];
    mag += std::abs(a[j] * x[j]);
  }
  if (magnitude) *magnitude = mag;
  return sum;
}

bool check_primal(const LinearProgram& lp, const std::vector<double>& x, double tol,
                  LpCheckReport& report) {
  for (std::size_t j = 0; j < lp.variables(); ++j) {
    const double scale = 1.0 + std::abs(x[j]);
    const double below = lp.lower[j] - x[j];
    const double above = x[j] - lp.upper[j];
    report.primal_violation = std::max({report.primal_violation, below / scale, above / scale});
  }
  for (const auto& c : lp.constraints) {
    double mag = 0.0;
    const double r = row_dot(c.coefficients, x, &mag) - c.rhs;
    const double scale = 1.0 + mag + std::abs(c.rhs);
    double v = 0.0;
    switch (c.relation) {
      case Relation::less_equal: v = r; break;
      case Relation::greater_equal: v = -r; break;
      case Relation::equal: v = std::abs(r); break;
    }
    report.primal_violation = std::max(report.primal_violation, v / scale);
  }
  if (report.primal_violation > tol) {
    report.failure = "primal infeasible";
    return false;
  }
  return true;
}

}  // namespace

LpCheckReport check_lp_solution(const LinearProgram& lp, const LpSolution& solution,
                                double feasibility_tol, double optimality_tol) {
  LpCheckReport report;
  const std::size_t n = lp.variables();
  if (solution.status == LpStatus::infeasible) {
    report.failure = "no certificate is checked for infeasible status";
    return report;
  }
  if (solution.x.size() != n) {
    report.failure = "solution has wrong length";
    return report;
  }
  if (!check_primal(lp, solution.x, feasibility_tol, report)) return report;

  if (solution.status == LpStatus::unbounded) {
    const auto& d = solution.ray;
    if (d.size() != n) {
      report.failure = "missing ray";
      return report;
    }
    double norm = 0.0;
    for (double v : d) norm = std::max(norm, std::abs(v));
    if (norm == 0.0) {
      report.failure = "zero ray";
      return report;
    }
    double gain = 0.0;
    for (std::size_t j = 0; j < n; ++j) gain += lp.objective[j] * d[j] / norm;
    if (gain <= optimality_tol) {
      report.failure = "ray does not improve the objective";
      return report;
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double v = d[j] / norm;
      if ((std::isfinite(lp.lower[j]) && v < -feasibility_tol) ||
          (std::isfinite(lp.upper[j]) && v > feasibility_tol)) {
        report.failure = "ray leaves a variable bound";
        return report;
      }
    }
    for (const auto& c : lp.constraints) {
      double mag = 0.0;
      const double r = row_dot(c.coefficients, d, &mag) / norm;
      const double tol = feasibility_tol * (1.0 + mag / norm);
      const bool bad = (c.relation == Relation::less_equal && r > tol) ||
                       (c.relation == Relation::greater_equal && r < -tol) ||
                       (c.relation == Relation::equal && std::abs(r) > tol);
      if (bad) {
        report.failure = "ray violates a constraint";
        return report;
      }
    }
    report.ok = true;
    return report;
  }

  const auto& y = solution.duals;
  if (y.size() != lp.constraints.size()) {
    report.failure = "dual vector has wrong length";
    return report;
  }

  double c_scale = 1.0;
  for (double c : lp.objective) c_scale = std::max(c_scale, std::abs(c));

  // Row dual signs and complementary slackness.
  for (std::size_t i = 0; i < y.size(); ++i) {
    const auto& con = lp.constraints[i];
    double sign_violation = 0.0;
    if (con.relation == Relation::less_equal) sign_violation = std::max(0.0, -y[i]);
    if (con.relation == Relation::greater_equal) sign_violation = std::max(0.0, y[i]);
    report.dual_violation = std::max(report.dual_violation, sign_violation / c_scale);
    if (con.relation != Relation::equal) {
      double mag = 0.0;
      const double slack = std::abs(row_dot(con.coefficients, solution.x, &mag) - con.rhs);
      const double scaled = std::abs(y[i]) * slack / (c_scale * (1.0 + mag + std::abs(con.rhs)));
      report.complementarity_violation = std::max(report.complementarity_violation, scaled);
    }
  }

  // Reduced costs d = c - A^T y must be consistent with where x sits in its box.
  std::vector<double> reduced(lp.objective);
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == 0.0) continue;
    const auto& a = lp.constraints[i].coefficients;
    for (std::size_t j = 0; j < n; ++j) reduced[j] -= y[i] * a[j];
  }
  double dual_objective = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) dual_objective += y[i] * lp.constraints[i].rhs;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = solution.x[j];
    const double band = feasibility_tol * (1.0 + std::abs(x));
    const bool can_increase = x < lp.upper[j] - band;
    const bool can_decrease = x > lp.lower[j] + band;
    double v = 0.0;
    if (can_increase) v = std::max(v, reduced[j]);
    if (can_decrease) v = std::max(v, -reduced[j]);
    report.dual_violation = std::max(report.dual_violation, v / c_scale);
    // Bound multipliers: positive reduced cost sits at the upper bound, negative at the lower.
    if (reduced[j] > 0.0) {
      dual_objective += reduced[j] * (std::isfinite(lp.upper[j]) ? lp.upper[j] : x);
    } else if (reduced[j] < 0.0) {
      dual_objective += reduced[j] * (std::isfinite(lp.lower[j]) ? lp.lower[j] : x);
    }
  }
  double primal_objective = 0.0;
  double obj_mag = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    primal_objective += lp.objective[j] * solution.x[j];
    obj_mag += std::abs(lp.objective[j] * solution.x[j]);
  }
  report.duality_gap = std::abs(dual_objective - primal_objective) / (1.0 + obj_mag);
  if (std::abs(primal_objective - solution.objective_value) > optimality_tol * (1.0 + obj_mag)) {
    report.failure = "reported objective value does not match x";
    return report;
  }
  if (report.dual_violation > optimality_tol) {
    report.failure = "dual infeasible or reduced costs not optimal";
    return report;
  }
  if (report.complementarity_violation > optimality_tol) {
    report.failure = "complementary slackness violated";
    return report;
  }
  if (report.duality_gap > optimality_tol) {
    report.failure = "duality gap too large";
    return report;
  }
  report.ok = true;
  return report;
}

}  // namespace sparsecs
