#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

#include "sparsecs/matrix.hpp"
#include "sparsecs/random.hpp"

namespace sparsecs {

using Rational = boost::rational<std::int64_t>;

/// Parses "a/b" or a finite decimal such as "-0.125" exactly; empty on
/// malformed input or int64 overflow.
std::optional<Rational> parse_rational(std::string_view text);

/// Sorted list of left vertices (column indices).
using VertexSet = std::vector<std::size_t>;

/// Comparison slack for floating-point expansion quantities.
inline constexpr double kExpansionSlack = 1e-12;

/// Exact enumeration refuses above this many subsets.
inline constexpr std::uint64_t kEnumerationBudget = 10'000'000;

/// R(J): the rows hit by at least one column of J, ascending.
std::vector<SparseBinaryMatrix::Index> neighborhood(const SparseBinaryMatrix& a,
                                                    std::span<const std::size_t> left);

struct DegreeBandReport {
  bool pass = true;
  std::vector<std::size_t> violators;
};

/// Checks every column degree against [(1 - delta) d, (1 + delta) d].
DegreeBandReport degree_band(const SparseBinaryMatrix& a, double d, double delta);

/// Smallest delta for which degree_band(a, d, delta) passes.
double band_half_width(const SparseBinaryMatrix& a, double d);

struct ThetaValue {
  double value = 0.0;
  bool computed = false;
  bool exact = false;
  std::optional<Rational> rational;  // set when enumerated with integral d
  VertexSet witness;                 // a set attaining the value
};

/**
 * Expansion constants theta_1..theta_smax of a bipartite graph relative to a
 * nominal degree d, together with the degree band half-width delta.
 *
 * theta_k is the smallest theta such that |R(J)| >= (1 - theta) d |J| for all
 * |J| <= k, clamped to [0, 1]. Exact profiles come from full enumeration;
 * sampled profiles only carry lower bounds.
 */
struct ExpansionProfile {
  double d = 0.0;
  double delta = 0.0;
  std::vector<ThetaValue> theta;  // theta[k - 1] holds theta_k

  std::size_t s_max() const noexcept { return theta.size(); }
  /// Throws std::out_of_range unless 1 <= k <= s_max.
  const ThetaValue& at(std::size_t k) const;
};

class EnumerationBudgetExceeded : public std::runtime_error {
 public:
  EnumerationBudgetExceeded(std::uint64_t required, std::uint64_t budget);
  std::uint64_t required() const noexcept { return required_; }

 private:
  std::uint64_t required_;
};

/// Number of nonempty subsets of size <= s_max, saturating at UINT64_MAX.
std::uint64_t subsets_up_to(std::size_t n, std::size_t s_max);

ExpansionProfile theta_exact(const SparseBinaryMatrix& a, std::size_t s_max, double d,
                             std::uint64_t budget = kEnumerationBudget);

/// Monte Carlo lower bounds on theta_k from `trials` random sets per size.
ExpansionProfile theta_sampled(const SparseBinaryMatrix& a, std::size_t s_max,
                               std::size_t trials, const Seed& seed, double d);

/// (s, d, delta, theta) quasi-regular lossless expander predicate, decided exactly.
bool is_quasi_regular_expander(const SparseBinaryMatrix& a, std::size_t s, double d,
                               double delta, double theta);

// Random-construction thresholds.

/// ceil((C / delta^2) ln(n) / p). Requires 0 < p <= 1/2.
std::size_t required_m(std::size_t n, double p, double delta, double c);

/// p s <= 2 theta / (2 - theta), for 0 < theta < 2/3.
bool sparsity_gate(double p, std::size_t s, double theta);

/// Union bound 2 n exp(-delta^2 m p / 3) on some column leaving the degree band.
double degree_deviation_bound(std::size_t n, std::size_t m, double p, double delta);

/// Union bound sum_k C(n,k) exp(-eps^2 m q_k / 2), eps = theta / 2,
/// q_k = 1 - (1 - p)^k, on some k-set (k <= s) expanding too little.
double expansion_failure_bound(std::size_t n, std::size_t m, double p, std::size_t s,
                               double theta);

/// (1 - theta/2)(1 - (1 - p)^k) >= (1 - theta) p k: the mean neighbourhood of a
/// k-set clears the expansion target with margin theta/2.
bool expected_expansion_margin(double p, std::size_t k, double theta);

// Edge-counting quantities used to bound collisions in quasi-regular expanders.

/// l(i) for every right vertex i in R(S); -1 elsewhere.
struct FirstArrival {
  static constexpr std::ptrdiff_t kUnassigned = -1;
  std::vector<std::ptrdiff_t> left_of;
};

/// l(i) = earliest vertex of `order` adjacent to i.
FirstArrival first_arrival(const SparseBinaryMatrix& a, std::span<const std::size_t> order);

/// Orders supp(w) by non-increasing |w_j| (ties by ascending j) and assigns
/// first arrivals under that order.
FirstArrival first_arrival_by_magnitude(const SparseBinaryMatrix& a, std::span<const double> w);

/// |E(J;K)|: edges leaving K that land in R(J). J and K must be disjoint.
std::size_t collision_count(const SparseBinaryMatrix& a, std::span<const std::size_t> j_set,
                            std::span<const std::size_t> k_set);

/// |E*(S)|: edges leaving S whose left endpoint is not l(i).
std::size_t first_arrival_count(const SparseBinaryMatrix& a, std::span<const std::size_t> s_set,
                                const FirstArrival& fa);

/// ||(A x_S)_{R(T)}||_1 for disjoint S, T.
double cross_mass(const SparseBinaryMatrix& a, std::span<const double> x,
                  std::span<const std::size_t> s_set, std::span<const std::size_t> t_set);

/// ||A w - w*||_1 with w*_i = w_{l(i)} on R(supp w) and 0 elsewhere.
double first_arrival_defect(const SparseBinaryMatrix& a, std::span<const double> w,
                            const FirstArrival& fa);

}  // namespace sparsecs
