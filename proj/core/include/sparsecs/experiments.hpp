#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sparsecs/random.hpp"
#include "sparsecs/recovery.hpp"

namespace sparsecs {

/// P(some column of a Bernoulli(p) m x n matrix is zero) = 1 - (1 - (1 - p)^m)^n.
double zero_column_prob(std::size_t n, std::size_t m, double p);

/// Fraction of `trials` sampled matrices with at least one zero column.
/// Trial t uses trial_seed(seed, 0, t).
double empirical_zero_column(std::size_t n, std::size_t m, double p, std::size_t trials,
                             std::uint64_t seed);

/// Planted nonnegative signal: support uniform among s-subsets, values U[1, 2].
std::vector<double> plant_signal(std::size_t n, std::size_t s, const Seed& seed);

/// Noise vector with ||e||_1 = level exactly (random signs and proportions).
std::vector<double> plant_noise(std::size_t m, double level, const Seed& seed);

enum class Ensemble { bernoulli, identity };

struct SweepConfig {
  std::vector<std::size_t> n;
  std::vector<std::size_t> m;
  std::vector<std::size_t> s;
  std::vector<double> p;
  std::size_t trials = 200;
  Method method = Method::nnlad;
  std::uint64_t seed = 0;
  Ensemble ensemble = Ensemble::bernoulli;
  double noise = 0.0;       // ||e||_1 per trial; 0 means noiseless
  double tolerance = 1e-6;  // noiseless success: err_l1 <= tolerance max(1, ||x||_1)
  double envelope = kDefaultEnvelope;
  bool timing = false;      // fill the seconds column (breaks byte determinism)

  /// Throws std::invalid_argument on empty grids or out-of-range values.
  void validate() const;
};

/**
 * Reads the line format
 *   key,value[,value...]
 * with keys n, m, s, p, trials, method, seed, ensemble, noise, tol, envelope.
 * Blank lines and text after '#' are ignored.
 */
SweepConfig parse_sweep_config(std::istream& in);
SweepConfig read_sweep_config(const std::string& path);

struct SweepRecord {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t s = 0;
  double p = 0.0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t failures = 0;  // trials whose decoder threw or returned no solution
  double mean_err_l1 = 0.0;  // over trials that produced a solution; NaN if none
  double max_err_l1 = 0.0;
  double seconds = 0.0;

  double rate() const noexcept {
    return trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
  }
};

/// Cells in order n, s, p, m (m fastest). Trial t of cell c uses
/// trial_seed(seed, c, t), so output is independent of `workers`.
/// Failed trials are reported on `log` when it is non-null.
std::vector<SweepRecord> run_sweep(const SweepConfig& config, std::size_t workers = 1,
                                   std::ostream* log = nullptr);

/// Header "n,m,s,p,trials,successes,mean_err_l1,max_err_l1,seconds", %.9g values.
void write_sweep_csv(const std::vector<SweepRecord>& records, std::ostream& out);

/// Weighted pool-adjacent-violators fit of a non-decreasing sequence.
std::vector<double> isotonic_fit(const std::vector<double>& values,
                                 const std::vector<double>& weights);

/// max_k |values_k - fit_k| for the isotonic fit with the given weights.
double isotonic_residual(const std::vector<double>& values, const std::vector<double>& weights);

struct TransitionEstimate {
  std::size_t n = 0;
  std::size_t s = 0;
  double p = 0.0;
  std::optional<std::size_t> m_star;  // undetermined when empty
  double rate_at_m_star = 0.0;        // raw success rate there
  double half_width = 0.0;            // 95% Wilson score half-width at m_star
  double isotonic_residual = 0.0;
};

/// Per (n, s, p): smallest m whose isotonic-fitted success rate reaches `level`.
std::vector<TransitionEstimate> transition_summary(const std::vector<SweepRecord>& records,
                                                   double level = 0.95);

}  // namespace sparsecs
