#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sparsecs/expander.hpp"
#include "sparsecs/matrix.hpp"

namespace sparsecs {

enum class ResidualNorm { l1 };
enum class Provenance { expansion_derived, exact_lp, rescaled };

std::string_view to_string(Provenance provenance) noexcept;

struct ExpansionSource {
  double theta2s = 0.0;
  double delta = 0.0;
  double d = 0.0;
};

/**
 * l1 robust null space property of order s:
 *   ||v_S||_1 <= rho ||v_{S^c}||_1 + tau ||A v||_1   for all v and |S| <= s.
 */
struct NspCertificate {
  std::size_t order = 0;
  double rho = 0.0;
  double tau = 0.0;
  ResidualNorm norm = ResidualNorm::l1;
  Provenance provenance = Provenance::expansion_derived;
  std::optional<ExpansionSource> source;
  std::optional<Rational> rho_exact;
  std::optional<Rational> tau_exact;
};

/// A checked negative answer: the request was valid but cannot be granted.
struct Refusal {
  std::string reason;
  double value = 0.0;  // the quantity that failed its gate
};

template <class T>
using Checked = std::variant<T, Refusal>;

/// rho = (2 theta + 6 delta) / (1 - 4 theta - 13 delta),
/// tau = 1 / (d (1 - 4 theta - 13 delta)), granted iff 6 theta + 19 delta < 1.
Checked<NspCertificate> certify_from_expansion(double theta2s, double delta, double d,
                                               std::size_t s);
Checked<NspCertificate> certify_from_expansion(const Rational& theta2s, const Rational& delta,
                                               const Rational& d, std::size_t s);

/// Uses theta_{2s} and delta from an exact profile with s_max >= 2s.
Checked<NspCertificate> certify_from_profile(const ExpansionProfile& profile, std::size_t s);

struct NspHolds {
  double worst_ratio = 0.0;  // max ||v_S||_1 over the unit budget set
  std::size_t lp_count = 0;
};

struct NspViolation {
  std::vector<double> witness;
  VertexSet support;
  double lhs = 0.0;
  double rhs = 0.0;
  bool from_ray = false;
};

struct NspCheckOptions {
  std::size_t max_n = 24;
  std::size_t max_s = 3;
  bool all_orders = true;            // check every |S| <= s, not only |S| = s
  std::vector<double> column_scale;  // optional D: checks A diag(D) instead of A
  double tolerance = 1e-8;
};

class NspBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * Decides the property exactly for small matrices. For each support S and
 * sign pattern eps it solves
 *   max <eps, v_S>  s.t.  rho ||v_{S^c}||_1 + tau ||A v||_1 <= 1
 * and reports a violation when any optimum exceeds 1 + tolerance or the
 * program is unbounded. eps and -eps give the same optimum, so only patterns
 * with a positive first sign are solved.
 */
std::variant<NspHolds, NspViolation> nsp_exact(const SparseBinaryMatrix& a, std::size_t s,
                                               double rho, double tau,
                                               const NspCheckOptions& options = {});

/// nsp_exact packaged as a certificate with exact_lp provenance.
Checked<NspCertificate> certify_exact(const SparseBinaryMatrix& a, std::size_t s, double rho,
                                      double tau, const NspCheckOptions& options = {});

/// Certificate for A W^{-1}, W = diag(w): rho' = kappa(W) rho, tau' = max(w) tau.
Checked<NspCertificate> rescale_certificate(const NspCertificate& cert, std::span<const double> w);

/// C (2 sigma_s + gap) + D tau residual_l1 with C = (1 + rho)/(1 - rho), D = 2/(1 - rho).
double error_bound(const NspCertificate& cert, double sigma_s, double residual_l1,
                   double gap = 0.0);

/// "s,rho,tau,provenance" with 9 significant digits.
std::string to_csv(const NspCertificate& cert);
NspCertificate certificate_from_csv(const std::string& line);

}  // namespace sparsecs
