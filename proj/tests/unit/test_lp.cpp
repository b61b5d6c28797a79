#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sparsecs/lp.hpp"

using namespace sparsecs;

namespace {

LinearProgram program(std::vector<double> c) {
  LinearProgram lp(c.size());
  lp.objective = std::move(c);
  return lp;
}

void require_certified(const LinearProgram& lp, const LpSolution& sol) {
  const auto report = check_lp_solution(lp, sol);
  INFO(report.failure);
  REQUIRE(report.ok);
}

}  // namespace

TEST_SUITE("optim.lp") {

TEST_CASE("basic programs") {
  auto lp = program({1});
  lp.add_constraint({1}, Relation::less_equal, 3);
  auto sol = lp_solve(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.x[0] == doctest::Approx(3));
  CHECK(sol.objective_value == doctest::Approx(3));
  require_certified(lp, sol);
  CHECK(sol.feasibility_tol == 1e-9);
  CHECK(sol.optimality_tol == 1e-8);

  auto face = program({1, 1});
  face.add_constraint({1, 1}, Relation::less_equal, 1);
  sol = lp_solve(face);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.objective_value == doctest::Approx(1));
  require_certified(face, sol);
}

TEST_CASE("infeasible and unbounded") {
  auto lp = program({1, 0});
  lp.add_constraint({1, 1}, Relation::less_equal, -1);
  CHECK(lp_solve(lp).status == LpStatus::infeasible);

  auto eq = program({1});
  eq.add_constraint({1}, Relation::equal, 2);
  eq.add_constraint({1}, Relation::equal, 3);
  CHECK(lp_solve(eq).status == LpStatus::infeasible);

  auto empty_box = program({1});
  empty_box.lower[0] = 2;
  empty_box.upper[0] = 1;
  CHECK(lp_solve(empty_box).status == LpStatus::infeasible);

  auto ray = program({1, 1});
  ray.add_constraint({1, -1}, Relation::less_equal, 1);
  const auto sol = lp_solve(ray);
  REQUIRE(sol.status == LpStatus::unbounded);
  require_certified(ray, sol);
  CHECK(sol.ray[0] + sol.ray[1] > 0);
}

TEST_CASE("free, negative and shifted variables") {
  // max -|x - 2| over free x, written with t >= x - 2, t >= 2 - x.
  auto lp = program({0, -1});
  lp.set_free(0);
  lp.add_constraint({-1, 1}, Relation::greater_equal, -2);
  lp.add_constraint({1, 1}, Relation::greater_equal, 2);
  auto sol = lp_solve(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.x[0] == doctest::Approx(2));
  CHECK(sol.objective_value == doctest::Approx(0).epsilon(1e-12));
  require_certified(lp, sol);

  auto upper_only = program({1});
  upper_only.lower[0] = -kInfinity;
  upper_only.upper[0] = -3;
  sol = lp_solve(upper_only);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.x[0] == doctest::Approx(-3));
  require_certified(upper_only, sol);

  auto shifted = program({1, -1});
  shifted.lower = {-2, 1};
  shifted.upper = {5, 4};
  shifted.add_constraint({1, 1}, Relation::less_equal, 4);
  sol = lp_solve(shifted);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.objective_value == doctest::Approx(2));
  require_certified(shifted, sol);
}

TEST_CASE("degenerate program terminates (Beale's cycling example)") {
  // Classic instance on which Dantzig's rule with naive tie-breaking cycles.
  auto lp = program({0.75, -150, 0.02, -6});
  lp.add_constraint({0.25, -60, -0.04, 9}, Relation::less_equal, 0);
  lp.add_constraint({0.5, -90, -0.02, 3}, Relation::less_equal, 0);
  lp.add_constraint({0, 0, 1, 0}, Relation::less_equal, 1);
  const auto sol = lp_solve(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.objective_value == doctest::Approx(0.05));
  require_certified(lp, sol);
}

TEST_CASE("validation") {
  LinearProgram lp(2);
  CHECK_THROWS_AS(lp.add_constraint({1}, Relation::less_equal, 1), std::invalid_argument);
  lp.add_constraint({1, 1}, Relation::less_equal, 1);
  lp.constraints[0].rhs = std::nan("");
  CHECK_THROWS_AS(lp.validate(), std::invalid_argument);
  CHECK_THROWS_AS(lp.set_free(5), std::out_of_range);
}

TEST_CASE("duals recover the objective on a textbook program") {
  // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18: x = 2, y = 6, value 36,
  // duals (0, 3/2, 1).
  auto lp = program({3, 5});
  lp.add_constraint({1, 0}, Relation::less_equal, 4);
  lp.add_constraint({0, 2}, Relation::less_equal, 12);
  lp.add_constraint({3, 2}, Relation::less_equal, 18);
  const auto sol = lp_solve(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.objective_value == doctest::Approx(36));
  CHECK(sol.duals[0] == doctest::Approx(0).epsilon(1e-12));
  CHECK(sol.duals[1] == doctest::Approx(1.5));
  CHECK(sol.duals[2] == doctest::Approx(1));
  require_certified(lp, sol);
}

TEST_CASE("property: simplex agrees with vertex enumeration") {
  gen::Rng rng(1234);
  int feasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto lp = gen::random_lp(rng);
    const auto ref = oracle::vertex_enumeration(lp);
    const auto sol = lp_solve(lp);
    INFO("trial " << trial);
    if (!ref.feasible) {
      REQUIRE(sol.status == LpStatus::infeasible);
      continue;
    }
    ++feasible;
    REQUIRE(sol.status == LpStatus::optimal);
    REQUIRE(std::abs(sol.objective_value - ref.value) <= 1e-8 * (1 + std::abs(ref.value)));
    require_certified(lp, sol);
  }
  CHECK(feasible > 100);
}

TEST_CASE("property: objective is invariant under row permutation") {
  gen::Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    auto lp = gen::random_lp(rng);
    const auto a = lp_solve(lp);
    std::reverse(lp.constraints.begin(), lp.constraints.end());
    const auto b = lp_solve(lp);
    REQUIRE(a.status == b.status);
    if (a.status == LpStatus::optimal) REQUIRE(a.objective_value == doctest::Approx(b.objective_value).epsilon(1e-9));
  }
}

TEST_CASE("checker rejects tampered solutions") {
  auto lp = program({3, 5});
  lp.add_constraint({1, 0}, Relation::less_equal, 4);
  lp.add_constraint({0, 2}, Relation::less_equal, 12);
  lp.add_constraint({3, 2}, Relation::less_equal, 18);
  const auto sol = lp_solve(lp);
  auto bad = sol;
  bad.x[0] += 1.0;
  CHECK_FALSE(check_lp_solution(lp, bad).ok);
  bad = sol;
  bad.x = {0, 0};
  bad.objective_value = 0;
  CHECK_FALSE(check_lp_solution(lp, bad).ok);
  bad = sol;
  bad.duals[2] = -1;
  CHECK_FALSE(check_lp_solution(lp, bad).ok);
  bad = sol;
  bad.objective_value = 40;
  CHECK_FALSE(check_lp_solution(lp, bad).ok);
}

}  // TEST_SUITE
