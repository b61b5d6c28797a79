#include "sparsecs/random.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sparsecs {

namespace {

std::uint32_t low_word(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
std::uint32_t high_word(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

// Floyd's sampling; k is expected to be at most universe / 2.
std::vector<std::uint32_t> floyd_subset(Engine& engine, std::uint32_t universe,
                                        std::uint32_t k) {
  std::vector<std::uint32_t> chosen;
  chosen.reserve(k);
  for (std::uint32_t j = universe - k; j < universe; ++j) {
    const auto t = static_cast<std::uint32_t>(uniform_index(engine, std::uint64_t{j} + 1));
    auto pos = std::lower_bound(chosen.begin(), chosen.end(), t);
    if (pos != chosen.end() && *pos == t) {
      chosen.insert(std::lower_bound(chosen.begin(), chosen.end(), j), j);
    } else {
      chosen.insert(pos, t);
    }
  }
  return chosen;
}

}  // namespace

Engine substream(const Seed& seed, Purpose purpose, std::uint64_t index) {
  std::seed_seq seq{low_word(seed.master),  high_word(seed.master),
                    low_word(seed.stream),  high_word(seed.stream),
                    static_cast<std::uint32_t>(purpose),
                    low_word(index),        high_word(index)};
  return Engine(seq);
}

std::uint64_t uniform_index(Engine& engine, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_index: bound must be positive");
  // Reject the low residue class so every value is equally likely.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = engine();
    if (r >= threshold) return r % bound;
  }
}

double uniform_unit(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

std::uint64_t binomial(Engine& engine, std::uint64_t trials, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binomial: p outside [0,1]");
  if (trials == 0 || p == 0.0) return 0;
  if (p == 1.0) return trials;
  if (p > 0.5) return trials - binomial(engine, trials, 1.0 - p);

  const double log_p0 = static_cast<double>(trials) * std::log1p(-p);
  if (log_p0 < -600.0) {
    std::uint64_t count = 0;
    for (std::uint64_t i = 0; i < trials; ++i) count += uniform_unit(engine) < p ? 1 : 0;
    return count;
  }

  const double odds = p / (1.0 - p);
  const double u = uniform_unit(engine);
  double pmf = std::exp(log_p0);
  double cdf = pmf;
  std::uint64_t k = 0;
  while (u >= cdf && k < trials) {
    pmf *= odds * static_cast<double>(trials - k) / static_cast<double>(k + 1);
    ++k;
    cdf += pmf;
  }
  return k;
}

std::vector<std::uint32_t> random_subset(Engine& engine, std::uint32_t universe,
                                         std::uint32_t k) {
  if (k > universe) throw std::invalid_argument("random_subset: k exceeds universe");
  if (2 * std::uint64_t{k} <= universe) return floyd_subset(engine, universe, k);

  const auto excluded = floyd_subset(engine, universe, universe - k);
  std::vector<std::uint32_t> chosen;
  chosen.reserve(k);
  auto it = excluded.begin();
  for (std::uint32_t i = 0; i < universe; ++i) {
    if (it != excluded.end() && *it == i) {
      ++it;
    } else {
      chosen.push_back(i);
    }
  }
  return chosen;
}

}  // namespace sparsecs
