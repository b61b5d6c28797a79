#include "sparsecs/nsp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "sparsecs/lp.hpp"

namespace sparsecs {

std::string_view to_string(Provenance provenance) noexcept {
  switch (provenance) {
    case Provenance::expansion_derived: return "expansion";
    case Provenance::exact_lp: return "exact_lp";
    case Provenance::rescaled: return "rescaled";
  }
  return "unknown";
}

namespace {

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

Refusal gate_refusal(double gate) {
  return Refusal{"not certifiable from expansion: 6*theta_2s + 19*delta = " + fmt9(gate) +
                     " >= 1",
                 gate};
}

void check_expansion_inputs(double theta2s, double delta, double d, std::size_t s) {
  if (!(theta2s >= 0.0) || !(delta >= 0.0) || !std::isfinite(theta2s) || !std::isfinite(delta)) {
    throw std::invalid_argument("certify_from_expansion: theta_2s and delta must be >= 0");
  }
  if (!(d > 0.0) || !std::isfinite(d)) throw std::invalid_argument("certify_from_expansion: d must be > 0");
  if (s < 1) throw std::invalid_argument("certify_from_expansion: order must be >= 1");
}

}  // namespace

Checked<NspCertificate> certify_from_expansion(double theta2s, double delta, double d,
                                               std::size_t s) {
  check_expansion_inputs(theta2s, delta, d, s);
  const double gate = 6.0 * theta2s + 19.0 * delta;
  if (!(gate < 1.0)) return gate_refusal(gate);
  const double denom = 1.0 - 4.0 * theta2s - 13.0 * delta;
  NspCertificate cert;
  cert.order = s;
  cert.rho = (2.0 * theta2s + 6.0 * delta) / denom;
  cert.tau = 1.0 / (d * denom);
  cert.provenance = Provenance::expansion_derived;
  cert.source = ExpansionSource{theta2s, delta, d};
  return cert;
}

Checked<NspCertificate> certify_from_expansion(const Rational& theta2s, const Rational& delta,
                                               const Rational& d, std::size_t s) {
  check_expansion_inputs(boost::rational_cast<double>(theta2s), boost::rational_cast<double>(delta),
                         boost::rational_cast<double>(d), s);
  const Rational gate = Rational(6) * theta2s + Rational(19) * delta;
  if (gate >= Rational(1)) return gate_refusal(boost::rational_cast<double>(gate));
  const Rational denom = Rational(1) - Rational(4) * theta2s - Rational(13) * delta;
  NspCertificate cert;
  cert.order = s;
  cert.rho_exact = (Rational(2) * theta2s + Rational(6) * delta) / denom;
  cert.tau_exact = Rational(1) / (d * denom);
  cert.rho = boost::rational_cast<double>(*cert.rho_exact);
  cert.tau = boost::rational_cast<double>(*cert.tau_exact);
  cert.provenance = Provenance::expansion_derived;
  cert.source = ExpansionSource{boost::rational_cast<double>(theta2s),
                                boost::rational_cast<double>(delta),
                                boost::rational_cast<double>(d)};
  return cert;
}

Checked<NspCertificate> certify_from_profile(const ExpansionProfile& profile, std::size_t s) {
  if (s < 1 || profile.s_max() < 2 * s) {
    throw std::invalid_argument("certify_from_profile: profile must cover cardinality 2s");
  }
  const ThetaValue& theta = profile.at(2 * s);
  if (!theta.computed || !theta.exact) {
    throw std::invalid_argument("certify_from_profile: theta_2s must be exact");
  }
  const bool integral_d = std::abs(profile.d - std::round(profile.d)) < kExpansionSlack;
  if (theta.rational && profile.delta == 0.0 && integral_d) {
    return certify_from_expansion(*theta.rational, Rational(0),
                                  Rational(static_cast<std::int64_t>(std::llround(profile.d))), s);
  }
  return certify_from_expansion(theta.value, profile.delta, profile.d, s);
}

namespace {

// Variables: v (free, n), u_j >= |v_j| on S^c (if rho > 0), r_i >= |(A D v)_i| (if tau > 0).
LinearProgram build_support_lp(const SparseBinaryMatrix& a, const std::vector<double>& scale,
                               const VertexSet& support, const std::vector<double>& signs,
                               double rho, double tau) {
  const std::size_t n = a.cols();
  const std::size_t m = a.rows();
  std::vector<char> in_s(n, 0);
  for (auto j : support) in_s[j] = 1;
  const std::size_t nu = rho > 0.0 ? n - support.size() : 0;
  const std::size_t nr = tau > 0.0 ? m : 0;
  const std::size_t width = n + nu + nr;

  LinearProgram lp(width);
  for (std::size_t j = 0; j < n; ++j) lp.set_free(j);
  for (std::size_t k = 0; k < support.size(); ++k) lp.objective[support[k]] = signs[k];

  std::vector<double> budget(width, 0.0);
  if (nu > 0) {
    std::size_t u = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (in_s[j]) continue;
      for (double sign : {-1.0, 1.0}) {
        std::vector<double> row(width, 0.0);
        row[u] = 1.0;
        row[j] = sign;
        lp.add_constraint(std::move(row), Relation::greater_equal, 0.0);
      }
      budget[u] = rho;
      ++u;
    }
  }
  if (nr > 0) {
    const auto rows = a.row_supports();
    for (std::size_t i = 0; i < m; ++i) {
      for (double sign : {-1.0, 1.0}) {
        std::vector<double> row(width, 0.0);
        row[n + nu + i] = 1.0;
        for (auto j : rows[i]) row[j] = sign * scale[j];
        lp.add_constraint(std::move(row), Relation::greater_equal, 0.0);
      }
      budget[n + nu + i] = tau;
    }
  }
  lp.add_constraint(std::move(budget), Relation::less_equal, 1.0);
  return lp;
}

void evaluate(const SparseBinaryMatrix& a, const std::vector<double>& scale, const VertexSet& support,
              double rho, double tau, NspViolation& out) {
  std::vector<char> in_s(a.cols(), 0);
  for (auto j : support) in_s[j] = 1;
  double lhs = 0.0;
  double off = 0.0;
  std::vector<double> scaled(out.witness.size());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    (in_s[j] ? lhs : off) += std::abs(out.witness[j]);
    scaled[j] = scale[j] * out.witness[j];
  }
  double residual = 0.0;
  for (double v : matvec(a, scaled)) residual += std::abs(v);
  out.lhs = lhs;
  out.rhs = rho * off + tau * residual;
}

}  // namespace

std::variant<NspHolds, NspViolation> nsp_exact(const SparseBinaryMatrix& a, std::size_t s,
                                               double rho, double tau,
                                               const NspCheckOptions& options) {
  const std::size_t n = a.cols();
  if (s < 1 || s > n) throw std::invalid_argument("nsp_exact: order must lie in [1, n]");
  if (!(rho >= 0.0) || !(tau >= 0.0) || !std::isfinite(rho) || !std::isfinite(tau)) {
    throw std::invalid_argument("nsp_exact: rho and tau must be finite and non-negative");
  }
  if (n > options.max_n || s > options.max_s) {
    throw NspBudgetExceeded("nsp_exact: n = " + std::to_string(n) + ", s = " + std::to_string(s) +
                            " exceeds the budget (n <= " + std::to_string(options.max_n) +
                            ", s <= " + std::to_string(options.max_s) + ")");
  }
  std::vector<double> scale = options.column_scale;
  if (scale.empty()) scale.assign(n, 1.0);
  if (scale.size() != n) throw std::invalid_argument("nsp_exact: column_scale has wrong length");
  for (double v : scale) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("nsp_exact: column_scale must be positive");
  }

  NspHolds holds;
  std::optional<NspViolation> worst;
  double worst_value = -kInfinity;
  const double limit = 1.0 + options.tolerance;

  for (std::size_t k = options.all_orders ? 1 : s; k <= s; ++k) {
    VertexSet support(k);
    for (std::size_t t = 0; t < k; ++t) support[t] = t;
    for (;;) {
      for (std::size_t mask = 0; mask < (std::size_t{1} << (k - 1)); ++mask) {
        std::vector<double> signs(k, 1.0);
        for (std::size_t t = 1; t < k; ++t) signs[t] = (mask >> (t - 1)) & 1 ? -1.0 : 1.0;
        const LinearProgram lp = build_support_lp(a, scale, support, signs, rho, tau);
        const LpSolution sol = lp_solve(lp);
        ++holds.lp_count;
        if (sol.status == LpStatus::infeasible) {
          throw std::logic_error("nsp_exact: support program is always feasible at v = 0");
        }
        const bool unbounded = sol.status == LpStatus::unbounded;
        const double value = unbounded ? kInfinity : sol.objective_value;
        holds.worst_ratio = std::max(holds.worst_ratio, value);
        if (value > limit && value > worst_value) {
          worst_value = value;
          NspViolation v;
          v.support = support;
          v.from_ray = unbounded;
          const auto& src = unbounded ? sol.ray : sol.x;
          v.witness.assign(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(n));
          if (unbounded) {
            double mass = 0.0;
            for (auto j : support) mass += std::abs(v.witness[j]);
            if (mass > 0.0) {
              for (double& x : v.witness) x /= mass;
            }
          }
          for (double& x : v.witness) {
            if (std::abs(x) < 1e-14) x = 0.0;
          }
          evaluate(a, scale, support, rho, tau, v);
          worst = std::move(v);
        }
      }
      // Next k-combination in lexicographic order.
      std::size_t t = k;
      while (t > 0 && support[t - 1] == n - k + (t - 1)) --t;
      if (t == 0) break;
      ++support[t - 1];
      for (std::size_t u = t; u < k; ++u) support[u] = support[u - 1] + 1;
    }
  }
  if (worst) return *worst;
  return holds;
}

Checked<NspCertificate> certify_exact(const SparseBinaryMatrix& a, std::size_t s, double rho,
                                      double tau, const NspCheckOptions& options) {
  if (!(rho < 1.0)) throw std::invalid_argument("certify_exact: rho must be < 1");
  if (!(tau > 0.0)) throw std::invalid_argument("certify_exact: tau must be > 0");
  auto result = nsp_exact(a, s, rho, tau, options);
  if (auto* v = std::get_if<NspViolation>(&result)) {
    return Refusal{"null space property violated on a support of size " +
                       std::to_string(v->support.size()),
                   v->lhs - v->rhs};
  }
  NspCertificate cert;
  cert.order = s;
  cert.rho = rho;
  cert.tau = tau;
  cert.provenance = Provenance::exact_lp;
  return cert;
}

Checked<NspCertificate> rescale_certificate(const NspCertificate& cert, std::span<const double> w) {
  if (w.empty()) throw std::invalid_argument("rescale_certificate: empty weight vector");
  double lo = kInfinity;
  double hi = 0.0;
  for (double v : w) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("rescale_certificate: weights must be positive");
    }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double kappa = hi / lo;
  const double rho = kappa * cert.rho;
  if (!(rho < 1.0)) {
    return Refusal{"rescaled rho = kappa * rho = " + fmt9(rho) + " >= 1 (kappa = " + fmt9(kappa) + ")",
                   kappa};
  }
  NspCertificate out;
  out.order = cert.order;
  out.rho = rho;
  out.tau = hi * cert.tau;
  out.norm = cert.norm;
  out.provenance = Provenance::rescaled;
  return out;
}

double error_bound(const NspCertificate& cert, double sigma_s, double residual_l1, double gap) {
  if (!(cert.rho >= 0.0 && cert.rho < 1.0) || !(cert.tau > 0.0)) {
    throw std::invalid_argument("error_bound: certificate needs 0 <= rho < 1 and tau > 0");
  }
  if (!(sigma_s >= 0.0) || !(residual_l1 >= 0.0) || !(gap >= 0.0)) {
    throw std::invalid_argument("error_bound: inputs must be non-negative");
  }
  const double c = (1.0 + cert.rho) / (1.0 - cert.rho);
  const double d = 2.0 / (1.0 - cert.rho);
  return c * (2.0 * sigma_s + gap) + d * cert.tau * residual_l1;
}

std::string to_csv(const NspCertificate& cert) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu,%.9g,%.9g,", cert.order, cert.rho, cert.tau);
  return std::string(buf) + std::string(to_string(cert.provenance));
}

NspCertificate certificate_from_csv(const std::string& line) {
  std::stringstream in(line);
  std::string field;
  std::vector<std::string> fields;
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (fields.size() != 4) throw std::invalid_argument("certificate CSV needs 4 fields");
  NspCertificate cert;
  try {
    cert.order = std::stoul(fields[0]);
    cert.rho = std::stod(fields[1]);
    cert.tau = std::stod(fields[2]);
  } catch (const std::exception&) {
    throw std::invalid_argument("certificate CSV has a malformed number");
  }
  if (fields[3] == "expansion") {
    cert.provenance = Provenance::expansion_derived;
  } else if (fields[3] == "exact_lp") {
    cert.provenance = Provenance::exact_lp;
  } else if (fields[3] == "rescaled") {
    cert.provenance = Provenance::rescaled;
  } else {
    throw std::invalid_argument("certificate CSV has unknown provenance '" + fields[3] + "'");
  }
  return cert;
}

}  // namespace sparsecs
