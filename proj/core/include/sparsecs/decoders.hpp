#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sparsecs/lp.hpp"
#include "sparsecs/matrix.hpp"

namespace sparsecs {

Eigen::MatrixXd to_dense(const SparseBinaryMatrix& a);

struct NnlsResult {
  std::vector<double> x;
  std::size_t outer_iterations = 0;
  double residual_l2 = 0.0;
};

/// Lawson-Hanson active set: argmin_{x >= 0} ||A x - y||_2. Throws
/// std::runtime_error if 3n outer iterations pass without convergence.
NnlsResult nnls_solve(const Eigen::MatrixXd& a, std::span<const double> y);

/// max over j of the KKT violation for g = A^T (y - A x): |g_j| on x_j > 0,
/// max(g_j, 0) on x_j == 0, and -x_j if x_j < 0.
double nnls_kkt_violation(const Eigen::MatrixXd& a, std::span<const double> y,
                          std::span<const double> x);

struct DecodeResult {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> z;
  double objective = 0.0;  // value of the decoder's own minimisation objective
  std::size_t iterations = 0;
};

/// min ||z||_1 s.t. A z = y, via z = z+ - z-. `nonneg` pins z- to 0.
DecodeResult bp_equality(const Eigen::MatrixXd& a, std::span<const double> y, bool nonneg = false);

/// min ||z||_1 s.t. ||A z - y||_1 <= eta.
DecodeResult qcbp_l1(const Eigen::MatrixXd& a, std::span<const double> y, double eta,
                     bool nonneg = false);

/// min_{z >= 0} ||A z - y||_1.
DecodeResult nnlad(const Eigen::MatrixXd& a, std::span<const double> y);

}  // namespace sparsecs
