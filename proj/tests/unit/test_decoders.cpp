#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sparsecs/decoders.hpp"

using namespace sparsecs;

namespace {

Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) out(i, j++) = v;
    ++i;
  }
  return out;
}

double l1(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

double nnls_objective(const Eigen::MatrixXd& a, const std::vector<double>& y, const std::vector<double>& x) {
  const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
  return 0.5 * (a * xv - yv).squaredNorm();
}

Eigen::MatrixXd random_dense(gen::Rng& rng, Eigen::Index m, Eigen::Index n) {
  Eigen::MatrixXd a(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = rng.uniform(-1, 1);
  }
  return a;
}

}  // namespace

TEST_SUITE("optim.decoders") {

TEST_CASE("to_dense") {
  const SparseBinaryMatrix a(3, 2, {{0, 2}, {1}});
  CHECK(to_dense(a) == mat({{1, 0}, {0, 1}, {1, 0}}));
}

TEST_CASE("nnls examples") {
  const Eigen::MatrixXd i2 = Eigen::MatrixXd::Identity(2, 2);
  auto r = nnls_solve(i2, std::vector<double>{-1, 2});
  CHECK(r.x == std::vector<double>{0, 2});
  r = nnls_solve(Eigen::MatrixXd::Identity(3, 3), std::vector<double>{1, 0, 4});
  CHECK(r.x == std::vector<double>{1, 0, 4});
  CHECK(nnls_solve(i2, std::vector<double>{-1, -2}).x == std::vector<double>{0, 0});
  CHECK_THROWS_AS(nnls_solve(i2, std::vector<double>{1}), std::invalid_argument);
  CHECK_THROWS_AS(nnls_solve(i2, std::vector<double>{1, std::nan("")}), std::invalid_argument);
  // Rank-deficient A: duplicated column.
  const auto dup = mat({{1, 1}, {0, 0}});
  r = nnls_solve(dup, std::vector<double>{2, 1});
  CHECK(r.x[0] + r.x[1] == doctest::Approx(2));
  CHECK(nnls_kkt_violation(dup, std::vector<double>{2, 1}, r.x) <= 1e-8);
}

TEST_CASE("property: nnls satisfies KKT and matches projected gradient") {
  gen::Rng rng(2718);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = static_cast<Eigen::Index>(rng.between(6, 10));
    const auto n = static_cast<Eigen::Index>(rng.between(2, 6));
    const Eigen::MatrixXd a = random_dense(rng, m, n);
    const auto y = gen::random_vector(rng, static_cast<std::size_t>(m), -2, 2);
    const auto sol = nnls_solve(a, y);
    for (double v : sol.x) REQUIRE(v >= 0.0);
    REQUIRE(nnls_kkt_violation(a, y, sol.x) <= 1e-8);
    const auto ref = oracle::nnls_projected_gradient(a, Eigen::Map<const Eigen::VectorXd>(y.data(), m));
    REQUIRE(std::abs(nnls_objective(a, y, sol.x) - nnls_objective(a, y, ref)) <= 1e-6);
    for (Eigen::Index j = 0; j < n; ++j) REQUIRE(std::abs(sol.x[static_cast<std::size_t>(j)] - ref[static_cast<std::size_t>(j)]) <= 1e-6);
  }
}

TEST_CASE("property: nnls on underdetermined binary systems satisfies KKT") {
  gen::Rng rng(31415);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = to_dense(gen::random_matrix(rng, rng.between(2, 10), rng.between(2, 16), rng.uniform(0.1, 0.5)));
    const auto y = gen::random_vector(rng, static_cast<std::size_t>(a.rows()), -1, 3);
    const auto sol = nnls_solve(a, y);
    REQUIRE(nnls_kkt_violation(a, y, sol.x) <= 1e-8);
  }
}

TEST_CASE("kkt violation detects bad points") {
  const Eigen::MatrixXd i2 = Eigen::MatrixXd::Identity(2, 2);
  CHECK(nnls_kkt_violation(i2, std::vector<double>{1, 1}, std::vector<double>{0, 1}) == doctest::Approx(1));
  CHECK(nnls_kkt_violation(i2, std::vector<double>{1, 1}, std::vector<double>{-0.5, 1}) >= 0.5);
  CHECK(nnls_kkt_violation(i2, std::vector<double>{1, 1}, std::vector<double>{1, 1}) == 0.0);
}

TEST_CASE("bp_equality examples") {
  const Eigen::MatrixXd i3 = Eigen::MatrixXd::Identity(3, 3);
  auto r = bp_equality(i3, std::vector<double>{1, -2, 0.5});
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.z[0] == doctest::Approx(1));
  CHECK(r.z[1] == doctest::Approx(-2));
  CHECK(r.z[2] == doctest::Approx(0.5));
  CHECK(r.objective == doctest::Approx(3.5));

  r = bp_equality(mat({{1, 2}}), std::vector<double>{2});
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.z[0] == doctest::Approx(0).epsilon(1e-12));
  CHECK(r.z[1] == doctest::Approx(1));
  CHECK(r.objective == doctest::Approx(1));

  // Inconsistent system.
  CHECK(bp_equality(mat({{1}, {1}}), std::vector<double>{1, 2}).status == LpStatus::infeasible);
  // Nonnegative variant cannot reach a negative target.
  CHECK(bp_equality(mat({{1}}), std::vector<double>{-1}, true).status == LpStatus::infeasible);
  r = bp_equality(mat({{1, 1}}), std::vector<double>{3}, true);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.objective == doctest::Approx(3));
}

TEST_CASE("qcbp_l1 examples") {
  const Eigen::MatrixXd i2 = Eigen::MatrixXd::Identity(2, 2);
  auto r = qcbp_l1(i2, std::vector<double>{3, 0}, 1.0);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.z[0] == doctest::Approx(2));
  CHECK(r.z[1] == doctest::Approx(0).epsilon(1e-12));
  r = qcbp_l1(i2, std::vector<double>{3, -1}, 4.0);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(l1(r.z) == doctest::Approx(0).epsilon(1e-12));
  CHECK_THROWS_AS(qcbp_l1(i2, std::vector<double>{3, 0}, -1.0), std::invalid_argument);
  // z >= 0 keeps the second residual at least 1.
  CHECK(qcbp_l1(i2, std::vector<double>{3, -1}, 0.5, true).status == LpStatus::infeasible);
  r = qcbp_l1(i2, std::vector<double>{3, -1}, 1.5, true);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.objective == doctest::Approx(2.5));
}

TEST_CASE("property: qcbp_l1 at eta = 0 matches bp_equality") {
  gen::Rng rng(88);
  for (int trial = 0; trial < 100; ++trial) {
    const auto sparse = gen::random_matrix(rng, rng.between(2, 8), rng.between(2, 10), rng.uniform(0.2, 0.6));
    const auto a = to_dense(sparse);
    const auto x = gen::random_vector(rng, sparse.cols(), -2, 2);
    const auto y = matvec(sparse, x);
    const auto bp = bp_equality(a, y);
    const auto qc = qcbp_l1(a, y, 0.0);
    REQUIRE(bp.status == LpStatus::optimal);
    REQUIRE(qc.status == LpStatus::optimal);
    REQUIRE(std::abs(bp.objective - qc.objective) <= 1e-8 * (1 + bp.objective));
    REQUIRE(bp.objective <= l1(x) + 1e-9);
  }
}

TEST_CASE("nnlad examples") {
  auto r = nnlad(Eigen::MatrixXd::Identity(3, 3), std::vector<double>{1, 0, 2});
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.z[0] == doctest::Approx(1));
  CHECK(r.z[2] == doctest::Approx(2));
  CHECK(r.objective == doctest::Approx(0).epsilon(1e-12));
  r = nnlad(Eigen::MatrixXd::Identity(1, 1), std::vector<double>{-5});
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.z[0] == 0.0);
  CHECK(r.objective == doctest::Approx(5));
}

TEST_CASE("property: decoder objectives are invariant under row permutation") {
  gen::Rng rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    const auto sparse = gen::random_matrix(rng, rng.between(2, 8), rng.between(2, 8), rng.uniform(0.2, 0.6));
    const auto a = to_dense(sparse);
    auto y = gen::random_vector(rng, sparse.rows(), -1, 3);
    Eigen::MatrixXd ap = a.colwise().reverse();
    std::vector<double> yp(y.rbegin(), y.rend());
    REQUIRE(nnlad(a, y).objective == doctest::Approx(nnlad(ap, yp).objective).epsilon(1e-9));
    const double eta = rng.uniform(0, 2);
    const auto q1 = qcbp_l1(a, y, eta);
    const auto q2 = qcbp_l1(ap, yp, eta);
    REQUIRE(q1.status == q2.status);
    if (q1.status == LpStatus::optimal) REQUIRE(q1.objective == doctest::Approx(q2.objective).epsilon(1e-9));
    const auto b1 = bp_equality(a, y);
    const auto b2 = bp_equality(ap, yp);
    REQUIRE(b1.status == b2.status);
    if (b1.status == LpStatus::optimal) REQUIRE(b1.objective == doctest::Approx(b2.objective).epsilon(1e-9));
    const auto n1 = nnls_solve(a, y);
    const auto n2 = nnls_solve(ap, yp);
    REQUIRE(n1.residual_l2 == doctest::Approx(n2.residual_l2).epsilon(1e-9));
  }
}

TEST_CASE("property: nnlad is scale equivariant") {
  gen::Rng rng(4242);
  for (int trial = 0; trial < 60; ++trial) {
    const auto sparse = gen::random_matrix(rng, rng.between(2, 10), rng.between(2, 10), rng.uniform(0.2, 0.6));
    const auto a = to_dense(sparse);
    auto y = gen::random_vector(rng, sparse.rows(), -1, 3);
    const double c = rng.uniform(0.1, 20);
    auto yc = y;
    for (double& v : yc) v *= c;
    REQUIRE(nnlad(a, yc).objective == doctest::Approx(c * nnlad(a, y).objective).epsilon(1e-9));
  }
}

TEST_CASE("property: column permutation leaves bp_equality objective unchanged") {
  gen::Rng rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const auto sparse = gen::random_matrix(rng, rng.between(2, 7), rng.between(2, 9), rng.uniform(0.2, 0.6));
    const auto a = to_dense(sparse);
    const auto y = matvec(sparse, gen::random_vector(rng, sparse.cols()));
    const Eigen::MatrixXd ap = a.rowwise().reverse();
    REQUIRE(bp_equality(a, y).objective == doctest::Approx(bp_equality(ap, y).objective).epsilon(1e-9));
  }
}

}  // TEST_SUITE
