#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sparsecs/lp.hpp"
#include "sparsecs/matrix.hpp"
#include "sparsecs/nsp.hpp"

namespace sparsecs {

/// Planted truth: y = A x + e, with e stored so its norms are exact.
struct Truth {
  std::vector<double> x;
  std::vector<double> e;
};

class RecoveryProblem {
 public:
  /// Observations only.
  RecoveryProblem(SparseBinaryMatrix a, std::vector<double> y);
  /// Computes y = A x + e. An empty e means no noise.
  static RecoveryProblem planted(SparseBinaryMatrix a, std::vector<double> x,
                                 std::vector<double> e = {});
  /// Observations with a known x; keeps y as given and stores e = y - A x.
  static RecoveryProblem with_truth(SparseBinaryMatrix a, std::vector<double> y,
                                    std::vector<double> x);

  const SparseBinaryMatrix& matrix() const noexcept { return a_; }
  const std::vector<double>& y() const noexcept { return y_; }
  const std::optional<Truth>& truth() const noexcept { return truth_; }

  std::optional<double> eta;  // noise level for qcbp_l1, l1 norm
  bool nonneg = false;        // restrict qcbp_l1 / bp_eq to z >= 0
  std::size_t s = 0;          // order used for sigma_s in reports

 private:
  RecoveryProblem() = default;
  SparseBinaryMatrix a_;
  std::vector<double> y_;
  std::optional<Truth> truth_;
};

/// Sum of the n - s smallest magnitudes of x.
double sigma_s(std::span<const double> x, std::size_t s);

struct ScalingWitness {
  std::vector<double> t;  // (1 / (p m)) 1_m
  std::vector<double> w;  // A^T t
  double kappa = 0.0;     // max w / min w; 0 when failed
  bool band_ok = false;   // 1/2 <= min w and max w <= 3/2
  bool failed = false;    // some w_j = 0 (zero column)
};

/// Requires 0 < p <= 1.
ScalingWitness positive_orthant_witness(const SparseBinaryMatrix& a, double p);

enum class Method { qcbp_l1, nnlad, nnls, bp_eq };

std::string_view to_string(Method method) noexcept;
/// Throws std::invalid_argument for unknown names.
Method method_from_string(std::string_view name);

struct RecoveryReport {
  Method method = Method::nnlad;
  LpStatus status = LpStatus::optimal;  // nnls always reports optimal
  std::vector<double> xhat;             // empty unless status is optimal
  double residual_l1 = 0.0;
  double residual_l2 = 0.0;
  std::size_t s = 0;
  double sigma_s = 0.0;                 // of the truth when known, else of xhat
  std::optional<double> err_l1;
  std::optional<double> forward_err_l1; // ||A (xhat - x)||_1
  std::optional<double> e_l1;
  std::optional<double> e_l2;
  std::optional<double> bound_value;    // NSP error bound when a certificate is supplied
};

/// Decodes and recomputes every reported norm from (A, y, xhat). If `cert` is
/// given and the truth is known, bound_value holds error_bound(cert,
/// sigma_{cert.order}(x), ||A (xhat - x)||_1, max(0, ||xhat||_1 - ||x||_1)),
/// which bounds err_l1 for any decoder output.
RecoveryReport recover(const RecoveryProblem& problem, Method method,
                       const NspCertificate* cert = nullptr);

inline constexpr double kDefaultEnvelope = 50.0;
inline constexpr double kExactTolerance = 1e-6;

struct BoundCheck {
  bool pass = false;
  double ratio = 0.0;        // err_l1 / denominator, 0 in the guarded case
  double denominator = 0.0;  // sigma_s + noise term
  double slack = 0.0;        // envelope - ratio (tolerance - err_l1 when guarded)
  bool guarded = false;      // denominator was 0
  // Deterministic bound through the rescaled certificate, when one is given.
  std::optional<double> chain_bound;
};

/**
 * Noise-blind error check. The noise term is ||e||_1 / (p m) for every method
 * except nnls, which uses ||e||_2 / (p sqrt(m)). Passes iff the ratio is at
 * most `envelope`; with a zero denominator, iff err_l1 <= 1e-6.
 *
 * With a certificate for A, nonnegative x and xhat, and a usable witness,
 * chain_bound = (1 / min w) error_bound(cert', sigma_s(W x), g, max(0, <t, A (xhat - x)>))
 * where cert' certifies A W^{-1} and g = ||A (xhat - x)||_1. It always bounds err_l1.
 */
BoundCheck verify_bound(const RecoveryProblem& problem, const RecoveryReport& report,
                        const ScalingWitness& witness, double p, std::size_t m,
                        double envelope = kDefaultEnvelope, const NspCertificate* cert = nullptr);

}  // namespace sparsecs
