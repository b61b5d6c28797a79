#include "sparsecs/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace sparsecs {

double zero_column_prob(std::size_t n, std::size_t m, double p) {
  if (n == 0 || m == 0) throw std::invalid_argument("zero_column_prob: n and m must be positive");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("zero_column_prob: p outside [0,1]");
  // q = (1-p)^m is the zero probability of one column.
  const double q = std::exp(static_cast<double>(m) * std::log1p(-p));
  return -std::expm1(static_cast<double>(n) * std::log1p(-q));
}

double empirical_zero_column(std::size_t n, std::size_t m, double p, std::size_t trials,
                             std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("empirical_zero_column: trials must be positive");
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto a = gen_bernoulli(n, m, p, trial_seed(seed, 0, t));
    for (std::size_t j = 0; j < n; ++j) {
      if (a.degree(j) == 0) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

std::vector<double> plant_signal(std::size_t n, std::size_t s, const Seed& seed) {
  if (s > n) throw std::invalid_argument("plant_signal: s exceeds n");
  Engine support_engine = substream(seed, Purpose::signal_support);
  Engine value_engine = substream(seed, Purpose::signal_values);
  std::vector<double> x(n, 0.0);
  for (auto j : random_subset(support_engine, static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(s))) {
    x[j] = 1.0 + uniform_unit(value_engine);
  }
  return x;
}

std::vector<double> plant_noise(std::size_t m, double level, const Seed& seed) {
  if (!(level >= 0.0) || !std::isfinite(level)) throw std::invalid_argument("plant_noise: level must be >= 0");
  std::vector<double> e(m, 0.0);
  if (level == 0.0 || m == 0) return e;
  Engine engine = substream(seed, Purpose::noise);
  // Exponential weights normalise to a uniform point on the simplex.
  double total = 0.0;
  for (double& v : e) {
    v = -std::log1p(-uniform_unit(engine));
    total += v;
  }
  if (total == 0.0) {
    e.assign(m, 1.0);
    total = static_cast<double>(m);
  }
  for (double& v : e) {
    v *= level / total;
    if (uniform_index(engine, 2) == 1) v = -v;
  }
  return e;
}

void SweepConfig::validate() const {
  if (n.empty() || m.empty() || s.empty() || p.empty()) {
    throw std::invalid_argument("sweep config: n, m, s and p grids must be non-empty");
  }
  for (auto v : n) if (v == 0) throw std::invalid_argument("sweep config: n values must be positive");
  for (auto v : m) if (v == 0) throw std::invalid_argument("sweep config: m values must be positive");
  for (auto v : s) {
    if (v == 0) throw std::invalid_argument("sweep config: s values must be positive");
    for (auto nv : n) {
      if (v > nv) throw std::invalid_argument("sweep config: s exceeds n");
    }
  }
  for (double v : p) {
    const double hi = ensemble == Ensemble::identity ? 1.0 : 0.5;
    if (!(v > 0.0 && v <= hi)) {
      throw std::invalid_argument(ensemble == Ensemble::identity
                                      ? "sweep config: p must lie in (0, 1]"
                                      : "sweep config: p must lie in (0, 1/2]");
    }
  }
  if (ensemble == Ensemble::identity) {
    for (auto nv : n) {
      for (auto mv : m) {
        if (nv != mv) throw std::invalid_argument("sweep config: identity ensemble needs m = n");
      }
    }
  }
  if (trials == 0) throw std::invalid_argument("sweep config: trials must be positive");
  if (!(noise >= 0.0) || !std::isfinite(noise)) throw std::invalid_argument("sweep config: noise must be >= 0");
  if (!(tolerance > 0.0)) throw std::invalid_argument("sweep config: tol must be positive");
  if (!(envelope > 0.0)) throw std::invalid_argument("sweep config: envelope must be positive");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::size_t parse_count(const std::string& v, std::size_t line) {
  std::size_t used = 0;
  unsigned long long out = 0;
  try {
    if (v.empty() || v[0] == '-') throw std::invalid_argument(v);
    out = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) {
    throw std::invalid_argument("sweep config line " + std::to_string(line) + ": bad integer '" + v + "'");
  }
  return static_cast<std::size_t>(out);
}

double parse_real(const std::string& v, std::size_t line) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty() || !std::isfinite(out)) {
    throw std::invalid_argument("sweep config line " + std::to_string(line) + ": bad number '" + v + "'");
  }
  return out;
}

}  // namespace

SweepConfig parse_sweep_config(std::istream& in) {
  SweepConfig config;
  std::string raw;
  std::size_t line = 0;
  std::map<std::string, std::size_t> seen;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    raw = trim(raw);
    if (raw.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(raw);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(trim(f));
    if (raw.back() == ',') fields.emplace_back();
    const std::string key = fields.front();
    const std::vector<std::string> values(fields.begin() + 1, fields.end());
    const auto where = "sweep config line " + std::to_string(line) + ": ";
    if (values.empty()) throw std::invalid_argument(where + "key '" + key + "' has no value");
    if (seen.count(key)) {
      throw std::invalid_argument(where + "duplicate key '" + key + "' (first on line " +
                                  std::to_string(seen[key]) + ")");
    }
    seen[key] = line;
    auto single = [&]() -> const std::string& {
      if (values.size() != 1) throw std::invalid_argument(where + "key '" + key + "' takes one value");
      return values.front();
    };
    if (key == "n" || key == "m" || key == "s") {
      auto& grid = key == "n" ? config.n : key == "m" ? config.m : config.s;
      for (const auto& v : values) grid.push_back(parse_count(v, line));
    } else if (key == "p") {
      for (const auto& v : values) config.p.push_back(parse_real(v, line));
    } else if (key == "trials") {
      config.trials = parse_count(single(), line);
    } else if (key == "seed") {
      config.seed = parse_count(single(), line);
    } else if (key == "method") {
      try {
        config.method = method_from_string(single());
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(where + e.what());
      }
    } else if (key == "ensemble") {
      const auto& v = single();
      if (v == "bernoulli") {
        config.ensemble = Ensemble::bernoulli;
      } else if (v == "identity") {
        config.ensemble = Ensemble::identity;
      } else {
        throw std::invalid_argument(where + "unknown ensemble '" + v + "'");
      }
    } else if (key == "noise") {
      config.noise = parse_real(single(), line);
    } else if (key == "tol") {
      config.tolerance = parse_real(single(), line);
    } else if (key == "envelope") {
      config.envelope = parse_real(single(), line);
    } else {
      throw std::invalid_argument(where + "unknown key '" + key + "'");
    }
  }
  config.validate();
  return config;
}

SweepConfig read_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open sweep config '" + path + "'");
  return parse_sweep_config(in);
}

namespace {

struct Cell {
  std::size_t n, m, s;
  double p;
};

struct TrialOutcome {
  bool solved = false;
  bool success = false;
  double err = 0.0;
  double seconds = 0.0;
  std::string failure;
};

TrialOutcome run_trial(const SweepConfig& config, const Cell& cell, const Seed& seed) {
  TrialOutcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    SparseBinaryMatrix a = config.ensemble == Ensemble::identity
                               ? SparseBinaryMatrix::identity(cell.n)
                               : gen_bernoulli(cell.n, cell.m, cell.p, seed);
    auto x = plant_signal(cell.n, cell.s, seed);
    const double x_l1 = [&] {
      double t = 0.0;
      for (double v : x) t += v;
      return t;
    }();
    auto e = plant_noise(cell.m, config.noise, seed);
    auto problem = RecoveryProblem::planted(std::move(a), std::move(x), std::move(e));
    problem.s = cell.s;
    problem.nonneg = true;
    problem.eta = config.noise;
    const auto report = recover(problem, config.method);
    if (!report.err_l1) {
      out.failure = "decoder returned status " + std::string(to_string(report.status));
    } else {
      out.solved = true;
      out.err = *report.err_l1;
      if (config.noise == 0.0) {
        out.success = out.err <= config.tolerance * std::max(1.0, x_l1);
      } else {
        const auto witness = positive_orthant_witness(problem.matrix(), cell.p);
        out.success = verify_bound(problem, report, witness, cell.p, cell.m, config.envelope).pass;
      }
    }
  } catch (const std::exception& e) {
    out.failure = e.what();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace

std::vector<SweepRecord> run_sweep(const SweepConfig& config, std::size_t workers,
                                   std::ostream* log) {
  config.validate();
  std::vector<Cell> cells;
  for (auto n : config.n) {
    for (auto s : config.s) {
      for (double p : config.p) {
        for (auto m : config.m) cells.push_back({n, m, s, p});
      }
    }
  }
  const std::size_t trials = config.trials;
  const std::size_t total = cells.size() * trials;
  std::vector<TrialOutcome> outcomes(total);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t task = next++; task < total; task = next++) {
      const std::size_t c = task / trials;
      const std::size_t t = task % trials;
      outcomes[task] = run_trial(config, cells[c], trial_seed(config.seed, c, t));
    }
  };
  workers = std::max<std::size_t>(1, std::min(workers, total));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < workers; ++k) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  std::vector<SweepRecord> records;
  records.reserve(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    SweepRecord r;
    r.n = cells[c].n;
    r.m = cells[c].m;
    r.s = cells[c].s;
    r.p = cells[c].p;
    r.trials = trials;
    double sum = 0.0;
    std::size_t solved = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      const auto& o = outcomes[c * trials + t];
      if (o.success) ++r.successes;
      if (o.solved) {
        ++solved;
        sum += o.err;
        r.max_err_l1 = std::max(r.max_err_l1, o.err);
      } else {
        ++r.failures;
        if (log) {
          *log << "sweep: cell " << c << " (n=" << r.n << ", m=" << r.m << ", s=" << r.s
               << ", p=" << r.p << ") trial " << t << " failed: " << o.failure << '\n';
        }
      }
      if (config.timing) r.seconds += o.seconds;
    }
    r.mean_err_l1 = solved ? sum / static_cast<double>(solved) : std::numeric_limits<double>::quiet_NaN();
    if (!solved) r.max_err_l1 = std::numeric_limits<double>::quiet_NaN();
    records.push_back(r);
  }
  return records;
}

void write_sweep_csv(const std::vector<SweepRecord>& records, std::ostream& out) {
  out << "n,m,s,p,trials,successes,mean_err_l1,max_err_l1,seconds\n";
  char buf[256];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%zu,%.9g,%zu,%zu,%.9g,%.9g,%.9g\n", r.n, r.m, r.s, r.p,
                  r.trials, r.successes, r.mean_err_l1, r.max_err_l1, r.seconds);
    out << buf;
  }
}

std::vector<double> isotonic_fit(const std::vector<double>& values,
                                 const std::vector<double>& weights) {
  if (values.size() != weights.size()) throw std::invalid_argument("isotonic_fit: length mismatch");
  for (double w : weights) {
    if (!(w > 0.0)) throw std::invalid_argument("isotonic_fit: weights must be positive");
  }
  struct Block {
    double mean, weight;
    std::size_t count;
  };
  std::vector<Block> blocks;
  for (std::size_t k = 0; k < values.size(); ++k) {
    blocks.push_back({values[k], weights[k], 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean > blocks.back().mean) {
      const Block b = blocks.back();
      blocks.pop_back();
      Block& a = blocks.back();
      a.mean = (a.mean * a.weight + b.mean * b.weight) / (a.weight + b.weight);
      a.weight += b.weight;
      a.count += b.count;
    }
  }
  std::vector<double> fit;
  fit.reserve(values.size());
  for (const auto& b : blocks) fit.insert(fit.end(), b.count, b.mean);
  return fit;
}

double isotonic_residual(const std::vector<double>& values, const std::vector<double>& weights) {
  const auto fit = isotonic_fit(values, weights);
  double worst = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) worst = std::max(worst, std::abs(values[k] - fit[k]));
  return worst;
}

std::vector<TransitionEstimate> transition_summary(const std::vector<SweepRecord>& records,
                                                   double level) {
  std::vector<TransitionEstimate> out;
  std::vector<std::vector<const SweepRecord*>> groups;
  for (const auto& r : records) {
    auto it = std::find_if(out.begin(), out.end(), [&](const TransitionEstimate& t) {
      return t.n == r.n && t.s == r.s && t.p == r.p;
    });
    if (it == out.end()) {
      out.push_back({r.n, r.s, r.p, std::nullopt, 0.0, 0.0, 0.0});
      groups.emplace_back();
      it = out.end() - 1;
    }
    groups[static_cast<std::size_t>(it - out.begin())].push_back(&r);
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    auto& cells = groups[g];
    std::stable_sort(cells.begin(), cells.end(),
                     [](const SweepRecord* a, const SweepRecord* b) { return a->m < b->m; });
    std::vector<double> rates, weights;
    for (const auto* r : cells) {
      if (r->trials == 0) throw std::invalid_argument("transition_summary: cell without trials");
      rates.push_back(r->rate());
      weights.push_back(static_cast<double>(r->trials));
    }
    const auto fit = isotonic_fit(rates, weights);
    auto& est = out[g];
    for (std::size_t k = 0; k < rates.size(); ++k) {
      est.isotonic_residual = std::max(est.isotonic_residual, std::abs(rates[k] - fit[k]));
    }
    for (std::size_t k = 0; k < fit.size(); ++k) {
      if (fit[k] >= level) {
        const double r = rates[k];
        const double nt = weights[k];
        const double z = 1.96;
        est.m_star = cells[k]->m;
        est.rate_at_m_star = r;
        est.half_width = z / (1.0 + z * z / nt) * std::sqrt(r * (1.0 - r) / nt + z * z / (4.0 * nt * nt));
        break;
      }
    }
  }
  return out;
}

}  // namespace sparsecs
