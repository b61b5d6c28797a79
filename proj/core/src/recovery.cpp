#include "sparsecs/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sparsecs/decoders.hpp"

namespace sparsecs {

namespace {

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + " has a non-finite entry");
  }
}

double l1(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

double l2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

RecoveryProblem::RecoveryProblem(SparseBinaryMatrix a, std::vector<double> y)
    : a_(std::move(a)), y_(std::move(y)) {
  if (y_.size() != a_.rows()) {
    throw std::invalid_argument("RecoveryProblem: y has length " + std::to_string(y_.size()) +
                                ", matrix has " + std::to_string(a_.rows()) + " rows");
  }
  check_finite(y_, "y");
}

RecoveryProblem RecoveryProblem::planted(SparseBinaryMatrix a, std::vector<double> x,
                                         std::vector<double> e) {
  if (x.size() != a.cols()) throw std::invalid_argument("planted: x has wrong length");
  if (e.empty()) e.assign(a.rows(), 0.0);
  if (e.size() != a.rows()) throw std::invalid_argument("planted: e has wrong length");
  check_finite(x, "x");
  check_finite(e, "e");
  RecoveryProblem problem;
  problem.y_ = matvec(a, x);
  for (std::size_t i = 0; i < e.size(); ++i) problem.y_[i] += e[i];
  problem.a_ = std::move(a);
  problem.truth_ = Truth{std::move(x), std::move(e)};
  return problem;
}

RecoveryProblem RecoveryProblem::with_truth(SparseBinaryMatrix a, std::vector<double> y,
                                            std::vector<double> x) {
  RecoveryProblem problem(std::move(a), std::move(y));
  if (x.size() != problem.a_.cols()) throw std::invalid_argument("with_truth: x has wrong length");
  check_finite(x, "x");
  std::vector<double> e = matvec(problem.a_, x);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = problem.y_[i] - e[i];
  problem.truth_ = Truth{std::move(x), std::move(e)};
  return problem;
}

double sigma_s(std::span<const double> x, std::size_t s) {
  if (s > x.size()) throw std::invalid_argument("sigma_s: s exceeds the vector length");
  std::vector<double> mags(x.size());
  std::transform(x.begin(), x.end(), mags.begin(), [](double v) { return std::abs(v); });
  const auto drop = static_cast<std::ptrdiff_t>(x.size() - s);
  std::nth_element(mags.begin(), mags.begin() + drop, mags.end());
  // Sum in ascending order for a reproducible rounding pattern.
  std::sort(mags.begin(), mags.begin() + drop);
  return std::accumulate(mags.begin(), mags.begin() + drop, 0.0);
}

ScalingWitness positive_orthant_witness(const SparseBinaryMatrix& a, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("positive_orthant_witness: p must lie in (0, 1]");
  if (a.rows() == 0 || a.cols() == 0) throw std::invalid_argument("positive_orthant_witness: empty matrix");
  ScalingWitness out;
  out.t.assign(a.rows(), 1.0 / (p * static_cast<double>(a.rows())));
  out.w = adjoint_apply(a, out.t);
  const auto [lo, hi] = std::minmax_element(out.w.begin(), out.w.end());
  out.failed = *lo <= 0.0;
  out.kappa = out.failed ? 0.0 : *hi / *lo;
  out.band_ok = !out.failed && *lo >= 0.5 && *hi <= 1.5;
  return out;
}

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::qcbp_l1: return "qcbp_l1";
    case Method::nnlad: return "nnlad";
    case Method::nnls: return "nnls";
    case Method::bp_eq: return "bp_eq";
  }
  return "unknown";
}

Method method_from_string(std::string_view name) {
  for (Method m : {Method::qcbp_l1, Method::nnlad, Method::nnls, Method::bp_eq}) {
    if (name == to_string(m)) return m;
  }
  throw std::invalid_argument("unknown method '" + std::string(name) +
                              "' (expected qcbp_l1, nnlad, nnls or bp_eq)");
}

RecoveryReport recover(const RecoveryProblem& problem, Method method, const NspCertificate* cert) {
  const auto& a = problem.matrix();
  const auto& y = problem.y();
  const auto& truth = problem.truth();
  if (problem.s > a.cols()) throw std::invalid_argument("recover: s exceeds n");

  RecoveryReport report;
  report.method = method;
  report.s = problem.s;
  if (truth) {
    report.sigma_s = sigma_s(truth->x, problem.s);
    report.e_l1 = l1(truth->e);
    report.e_l2 = l2(truth->e);
  }

  const Eigen::MatrixXd dense = to_dense(a);
  if (method == Method::nnls) {
    report.xhat = nnls_solve(dense, y).x;
  } else {
    DecodeResult r;
    switch (method) {
      case Method::qcbp_l1:
        if (!problem.eta) throw std::invalid_argument("recover: qcbp_l1 needs eta");
        r = qcbp_l1(dense, y, *problem.eta, problem.nonneg);
        break;
      case Method::bp_eq: r = bp_equality(dense, y, problem.nonneg); break;
      default: r = nnlad(dense, y); break;
    }
    report.status = r.status;
    if (r.status != LpStatus::optimal) return report;
    report.xhat = std::move(r.z);
  }

  std::vector<double> residual = matvec(a, report.xhat);
  for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= y[i];
  report.residual_l1 = l1(residual);
  report.residual_l2 = l2(residual);
  if (!truth) {
    report.sigma_s = sigma_s(report.xhat, problem.s);
    return report;
  }

  std::vector<double> diff(report.xhat.size());
  for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = report.xhat[j] - truth->x[j];
  report.err_l1 = l1(diff);
  report.forward_err_l1 = l1(matvec(a, diff));
  if (cert) {
    if (cert->order > a.cols()) throw std::invalid_argument("recover: certificate order exceeds n");
    const double gap = std::max(0.0, l1(report.xhat) - l1(truth->x));
    report.bound_value = error_bound(*cert, sigma_s(truth->x, cert->order), *report.forward_err_l1, gap);
  }
  return report;
}

BoundCheck verify_bound(const RecoveryProblem& problem, const RecoveryReport& report,
                        const ScalingWitness& witness, double p, std::size_t m, double envelope,
                        const NspCertificate* cert) {
  const auto& truth = problem.truth();
  if (!truth) throw std::invalid_argument("verify_bound: the problem carries no truth");
  if (m != problem.matrix().rows() || m == 0) throw std::invalid_argument("verify_bound: m does not match A");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("verify_bound: p must lie in (0, 1]");
  if (!(envelope > 0.0)) throw std::invalid_argument("verify_bound: envelope must be positive");

  BoundCheck out;
  if (!report.err_l1) {
    out.ratio = kInfinity;
    out.slack = -kInfinity;
    return out;
  }
  const double err = *report.err_l1;
  const double md = static_cast<double>(m);
  const double noise = report.method == Method::nnls ? *report.e_l2 / (p * std::sqrt(md))
                                                     : *report.e_l1 / (p * md);
  out.denominator = report.sigma_s + noise;
  if (out.denominator == 0.0) {
    out.guarded = true;
    out.pass = err <= kExactTolerance;
    out.slack = kExactTolerance - err;
  } else {
    out.ratio = err / out.denominator;
    out.pass = out.ratio <= envelope;
    out.slack = envelope - out.ratio;
  }

  if (cert && !witness.failed && witness.w.size() == report.xhat.size()) {
    const bool nonneg = std::all_of(truth->x.begin(), truth->x.end(), [](double v) { return v >= 0.0; }) &&
                        std::all_of(report.xhat.begin(), report.xhat.end(), [](double v) { return v >= 0.0; });
    auto rescaled = rescale_certificate(*cert, witness.w);
    if (nonneg && std::holds_alternative<NspCertificate>(rescaled)) {
      const auto& c = std::get<NspCertificate>(rescaled);
      std::vector<double> wx(truth->x.size());
      std::vector<double> diff(truth->x.size());
      for (std::size_t j = 0; j < wx.size(); ++j) {
        wx[j] = witness.w[j] * truth->x[j];
        diff[j] = report.xhat[j] - truth->x[j];
      }
      const auto forward = matvec(problem.matrix(), diff);
      double gap = 0.0;
      for (std::size_t i = 0; i < forward.size(); ++i) gap += witness.t[i] * forward[i];
      const double min_w = *std::min_element(witness.w.begin(), witness.w.end());
      out.chain_bound =
          error_bound(c, sigma_s(wx, c.order), l1(forward), std::max(0.0, gap)) / min_w;
    }
  }
  return out;
}

}  // namespace sparsecs
