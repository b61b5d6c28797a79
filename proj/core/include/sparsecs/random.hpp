#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace sparsecs {

/// Reproducibility key. `master` identifies an experiment, `stream` a trial
/// inside it; generators derive one engine per (master, stream, purpose, index).
struct Seed {
  std::uint64_t master = 0;
  std::uint64_t stream = 0;

  friend bool operator==(const Seed&, const Seed&) = default;
};

/// Seed for trial `trial` of grid cell `cell`.
inline Seed trial_seed(std::uint64_t master, std::uint64_t cell, std::uint64_t trial) {
  return Seed{master, (cell << 32) ^ trial};
}

// mt19937_64 and seed_seq are bit-specified by the standard, so streams are
// portable across standard libraries. Distributions are implemented below
// instead of using <random>'s implementation-defined ones.
using Engine = std::mt19937_64;

enum class Purpose : std::uint32_t {
  matrix_column = 1,
  signal_support = 2,
  signal_values = 3,
  noise = 4,
  subset_sample = 5,
};

Engine substream(const Seed& seed, Purpose purpose, std::uint64_t index = 0);

/// Uniform integer in [0, bound). bound must be positive.
std::uint64_t uniform_index(Engine& engine, std::uint64_t bound);

/// Uniform double in [0, 1) with 53 random bits.
double uniform_unit(Engine& engine);

/// Binomial(trials, p) by CDF inversion; falls back to summing Bernoulli
/// draws when the zero-success mass underflows.
std::uint64_t binomial(Engine& engine, std::uint64_t trials, double p);

/// Uniformly random k-subset of [0, universe), sorted ascending.
std::vector<std::uint32_t> random_subset(Engine& engine, std::uint32_t universe,
                                         std::uint32_t k);

}  // namespace sparsecs
