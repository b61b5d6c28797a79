#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "sparsecs/experiments.hpp"
#include "sparsecs/expander.hpp"
#include "sparsecs/matrix.hpp"
#include "sparsecs/nsp.hpp"
#include "sparsecs/recovery.hpp"

namespace sparsecs::cli {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// Thrown for bad input that passed flag parsing (unreadable files, bad numbers).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  return f;
}

SparseBinaryMatrix load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open matrix file '" + path + "'");
  try {
    return read_matrix(in);
  } catch (const MatrixParseError& e) {
    throw UsageError(path + ":" + std::to_string(e.line()) + ": " + e.what());
  }
}

std::vector<double> load_vector(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open vector file '" + path + "'");
  try {
    return read_vector(in);
  } catch (const MatrixParseError& e) {
    throw UsageError(path + ":" + std::to_string(e.line()) + ": " + e.what());
  }
}

// Routes text to --out when given, else to the command's stdout.
template <class F>
void emit(const std::string& path, std::ostream& out, F&& write) {
  if (path.empty()) {
    write(out);
  } else {
    auto f = open_out(path);
    write(f);
  }
}

struct GenArgs {
  std::size_t n = 0, m = 0;
  std::optional<double> p;
  std::optional<std::size_t> d;
  std::uint64_t seed = 0;
  std::string out;
};

int do_gen(const GenArgs& g, std::ostream& out) {
  const Seed seed{g.seed, 0};
  const auto a = g.p ? gen_bernoulli(g.n, g.m, *g.p, seed) : gen_left_regular(g.n, g.m, *g.d, seed);
  emit(g.out, out, [&](std::ostream& o) { write_matrix(a, o); });
  return kExitOk;
}

struct ExpanderArgs {
  std::string matrix;
  std::size_t smax = 1;
  std::optional<std::size_t> sample;
  std::optional<double> d;
  std::uint64_t seed = 0;
};

int do_expander_report(const ExpanderArgs& ex, std::ostream& out) {
  const auto a = load_matrix(ex.matrix);
  double d = 0.0;
  if (ex.d) {
    d = *ex.d;
  } else {
    d = static_cast<double>(a.nonzeros()) / static_cast<double>(a.cols());
  }
  const ExpansionProfile profile = ex.sample ? theta_sampled(a, ex.smax, *ex.sample, Seed{ex.seed, 0}, d)
                                             : theta_exact(a, ex.smax, d);
  out << "d=" << fmt(profile.d) << ",delta=" << fmt(profile.delta) << '\n';
  out << "k,theta_k,exact\n";
  for (std::size_t k = 1; k <= profile.s_max(); ++k) {
    const auto& t = profile.at(k);
    out << k << ',' << fmt(t.value) << ',' << (t.exact ? 1 : 0) << '\n';
  }
  return kExitOk;
}

struct CertifyArgs {
  std::string theta2s, delta, d;
  std::size_t s = 1;
};

double to_real(const std::string& text, const char* name) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw UsageError(std::string("--") + name + ": not a number: " + text);
  return v;
}

int report_checked(const Checked<NspCertificate>& result, std::ostream& out, std::ostream& err) {
  if (const auto* refusal = std::get_if<Refusal>(&result)) {
    out << "refused," << fmt(refusal->value) << '\n';
    err << "refused: " << refusal->reason << '\n';
    return kExitNegative;
  }
  out << to_csv(std::get<NspCertificate>(result)) << '\n';
  return kExitOk;
}

int do_nsp_certify(const CertifyArgs& c, std::ostream& out, std::ostream& err) {
  const auto rt = parse_rational(c.theta2s);
  const auto rdelta = parse_rational(c.delta);
  const auto rd = parse_rational(c.d);
  if (rt && rdelta && rd) return report_checked(certify_from_expansion(*rt, *rdelta, *rd, c.s), out, err);
  return report_checked(certify_from_expansion(to_real(c.theta2s, "theta2s"), to_real(c.delta, "delta"),
                                               to_real(c.d, "d"), c.s),
                        out, err);
}

struct CheckArgs {
  std::string matrix;
  std::size_t s = 1;
  double rho = 0.0, tau = 0.0;
  bool order_only = false;
};

int do_nsp_check(const CheckArgs& c, std::ostream& out) {
  const auto a = load_matrix(c.matrix);
  NspCheckOptions opts;
  opts.all_orders = !c.order_only;
  const auto result = nsp_exact(a, c.s, c.rho, c.tau, opts);
  if (const auto* holds = std::get_if<NspHolds>(&result)) {
    out << "status=holds,worst=" << fmt(holds->worst_ratio) << ",lp_count=" << holds->lp_count << '\n';
    NspCertificate cert;
    cert.order = c.s;
    cert.rho = c.rho;
    cert.tau = c.tau;
    cert.provenance = Provenance::exact_lp;
    out << to_csv(cert) << '\n';
    return kExitOk;
  }
  const auto& v = std::get<NspViolation>(result);
  out << "status=violated,lhs=" << fmt(v.lhs) << ",rhs=" << fmt(v.rhs) << ",from_ray=" << (v.from_ray ? 1 : 0)
      << '\n';
  out << "support=";
  for (std::size_t k = 0; k < v.support.size(); ++k) out << (k ? ";" : "") << v.support[k];
  out << "\nwitness=";
  for (std::size_t k = 0; k < v.witness.size(); ++k) out << (k ? ";" : "") << fmt(v.witness[k]);
  out << '\n';
  return kExitNegative;
}

struct RecoverArgs {
  std::string matrix, y, x, out;
  std::string method = "nnlad";
  std::optional<double> eta;
  bool nonneg = false;
  std::size_t s = 0;
};

int do_recover(const RecoverArgs& r, std::ostream& out) {
  auto a = load_matrix(r.matrix);
  auto y = load_vector(r.y);
  const Method method = method_from_string(r.method);
  std::optional<RecoveryProblem> problem;
  if (!r.x.empty()) {
    problem.emplace(RecoveryProblem::with_truth(std::move(a), std::move(y), load_vector(r.x)));
  } else {
    problem.emplace(std::move(a), std::move(y));
  }
  problem->eta = r.eta;
  problem->nonneg = r.nonneg;
  problem->s = r.s;
  const auto report = recover(*problem, method);
  if (report.status != LpStatus::optimal) {
    out << "method=" << to_string(method) << ",status=" << to_string(report.status) << '\n';
    return kExitNegative;
  }
  emit(r.out, out, [&](std::ostream& o) { write_vector(report.xhat, o); });
  out << "method=" << to_string(method) << ",status=optimal,residual_l1=" << fmt(report.residual_l1)
      << ",residual_l2=" << fmt(report.residual_l2) << ",sigma_s=" << fmt(report.sigma_s)
      << ",err_l1=" << (report.err_l1 ? fmt(*report.err_l1) : std::string("na")) << '\n';
  return kExitOk;
}

struct SweepArgs {
  std::string config, out, summary;
  std::size_t workers = 1;
  bool timing = false;
};

int do_sweep(const SweepArgs& sw, std::ostream& out, std::ostream& err) {
  SweepConfig config;
  try {
    config = read_sweep_config(sw.config);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  config.timing = sw.timing;
  const auto records = run_sweep(config, sw.workers, &err);
  emit(sw.out, out, [&](std::ostream& o) { write_sweep_csv(records, o); });
  if (!sw.summary.empty()) {
    auto f = open_out(sw.summary);
    f << "n,s,p,m_star,rate,half_width,isotonic_residual\n";
    for (const auto& t : transition_summary(records)) {
      f << t.n << ',' << t.s << ',' << fmt(t.p) << ',' << (t.m_star ? std::to_string(*t.m_star) : "undetermined")
        << ',' << fmt(t.rate_at_m_star) << ',' << fmt(t.half_width) << ',' << fmt(t.isotonic_residual) << '\n';
    }
  }
  return kExitOk;
}

struct LowerboundArgs {
  std::size_t n = 0, m = 0, trials = 20000;
  double p = 0.0;
  std::uint64_t seed = 0;
  double tol = 0.02;
};

int do_lowerbound(const LowerboundArgs& lb, std::ostream& out) {
  const double closed = zero_column_prob(lb.n, lb.m, lb.p);
  const double empirical = empirical_zero_column(lb.n, lb.m, lb.p, lb.trials, lb.seed);
  const double sigma = std::sqrt(closed * (1.0 - closed) / static_cast<double>(lb.trials));
  const double diff = std::abs(empirical - closed);
  const bool agree = diff <= lb.tol;
  out << "closed_form=" << fmt(closed) << ",empirical=" << fmt(empirical) << ",sigma=" << fmt(sigma)
      << ",abs_diff=" << fmt(diff) << ",tol=" << fmt(lb.tol) << ",agree=" << (agree ? 1 : 0) << '\n';
  return agree ? kExitOk : kExitNegative;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse binary compressed sensing toolkit", "sparsecs"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random sparse binary matrix (SBM format)");
  gen_cmd->add_option("--n", gen.n, "Columns")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--m", gen.m, "Rows")->required()->check(CLI::PositiveNumber);
  auto* p_opt = gen_cmd->add_option("--p", gen.p, "Bernoulli density")->check(CLI::Range(0.0, 1.0));
  auto* d_opt = gen_cmd->add_option("--d", gen.d, "Left degree (left-regular ensemble)");
  p_opt->excludes(d_opt);
  gen_cmd->add_option("--seed", gen.seed, "Master seed");
  gen_cmd->add_option("--out", gen.out, "Output file (default stdout)");

  ExpanderArgs ex;
  auto* ex_cmd = app.add_subcommand("expander", "Expansion analysis");
  ex_cmd->require_subcommand(1);
  auto* report_cmd = ex_cmd->add_subcommand("report", "Print theta_1..theta_smax and delta as CSV");
  report_cmd->add_option("--matrix", ex.matrix, "SBM file")->required();
  report_cmd->add_option("--smax", ex.smax, "Largest set size")->required()->check(CLI::PositiveNumber);
  report_cmd->add_option("--sample", ex.sample, "Random sets per size instead of enumeration")
      ->check(CLI::PositiveNumber);
  report_cmd->add_option("--d", ex.d, "Nominal degree (default: mean column degree)")->check(CLI::PositiveNumber);
  report_cmd->add_option("--seed", ex.seed, "Seed for --sample");

  auto* nsp_cmd = app.add_subcommand("nsp", "Null space property certificates");
  nsp_cmd->require_subcommand(1);
  CertifyArgs cert;
  auto* certify_cmd = nsp_cmd->add_subcommand("certify", "Certificate from expansion constants");
  certify_cmd->add_option("--theta2s", cert.theta2s, "theta_{2s} (decimal or a/b)")->required();
  certify_cmd->add_option("--delta", cert.delta, "Degree band half-width")->required();
  certify_cmd->add_option("--d", cert.d, "Nominal degree")->required();
  certify_cmd->add_option("--s", cert.s, "Order")->required()->check(CLI::PositiveNumber);
  CheckArgs check;
  auto* check_cmd = nsp_cmd->add_subcommand("check", "Exact LP check on a small matrix");
  check_cmd->add_option("--matrix", check.matrix, "SBM file")->required();
  check_cmd->add_option("--s", check.s, "Order")->required()->check(CLI::PositiveNumber);
  check_cmd->add_option("--rho", check.rho, "rho")->required()->check(CLI::NonNegativeNumber);
  check_cmd->add_option("--tau", check.tau, "tau")->required()->check(CLI::NonNegativeNumber);
  check_cmd->add_flag("--order-only", check.order_only, "Check |S| = s only");

  RecoverArgs rec;
  auto* rec_cmd = app.add_subcommand("recover", "Decode y = A x + e");
  rec_cmd->add_option("--matrix", rec.matrix, "SBM file")->required();
  rec_cmd->add_option("--y", rec.y, "Measurements, one per line")->required();
  rec_cmd->add_option("--method", rec.method, "qcbp_l1, nnlad, nnls or bp_eq");
  rec_cmd->add_option("--eta", rec.eta, "l1 noise level for qcbp_l1")->check(CLI::NonNegativeNumber);
  rec_cmd->add_flag("--nonneg", rec.nonneg, "Restrict qcbp_l1 and bp_eq to z >= 0");
  rec_cmd->add_option("--x", rec.x, "Known signal, enables err_l1");
  rec_cmd->add_option("--s", rec.s, "Order for sigma_s");
  rec_cmd->add_option("--out", rec.out, "Write xhat here instead of stdout");

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo recovery sweep");
  sweep_cmd->add_option("--config", sw.config, "Sweep config file")->required();
  sweep_cmd->add_option("--workers", sw.workers, "Worker threads")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--out", sw.out, "CSV output (default stdout)");
  sweep_cmd->add_option("--summary", sw.summary, "Write transition estimates as CSV");
  sweep_cmd->add_flag("--timing", sw.timing, "Fill the seconds column");

  LowerboundArgs lb;
  auto* lb_cmd = app.add_subcommand("lowerbound", "Zero-column probability: closed form vs Monte Carlo");
  lb_cmd->add_option("--n", lb.n, "Columns")->required()->check(CLI::PositiveNumber);
  lb_cmd->add_option("--m", lb.m, "Rows")->required()->check(CLI::PositiveNumber);
  lb_cmd->add_option("--p", lb.p, "Density")->required()->check(CLI::Range(0.0, 1.0));
  lb_cmd->add_option("--trials", lb.trials, "Sampled matrices")->check(CLI::PositiveNumber);
  lb_cmd->add_option("--seed", lb.seed, "Master seed");
  lb_cmd->add_option("--tol", lb.tol, "Allowed |empirical - closed form|")->check(CLI::NonNegativeNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) {
      if (!gen.p && !gen.d) throw UsageError("gen: one of --p or --d is required");
      return do_gen(gen, out);
    }
    if (report_cmd->parsed()) return do_expander_report(ex, out);
    if (certify_cmd->parsed()) return do_nsp_certify(cert, out, err);
    if (check_cmd->parsed()) return do_nsp_check(check, out);
    if (rec_cmd->parsed()) return do_recover(rec, out);
    if (sweep_cmd->parsed()) return do_sweep(sw, out, err);
    if (lb_cmd->parsed()) return do_lowerbound(lb, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace sparsecs::cli
