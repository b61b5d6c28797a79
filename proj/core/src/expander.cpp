#include "sparsecs/expander.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace sparsecs {

std::optional<Rational> parse_rational(std::string_view text) {
  using I = std::int64_t;
  auto parse_int = [](std::string_view t, I& out) {
    if (t.empty()) return false;
    const auto r = std::from_chars(t.data(), t.data() + t.size(), out);
    return r.ec == std::errc() && r.ptr == t.data() + t.size();
  };
  try {
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
      I num = 0;
      I den = 0;
      if (!parse_int(text.substr(0, slash), num) || !parse_int(text.substr(slash + 1), den) || den == 0) {
        return std::nullopt;
      }
      return Rational(num, den);
    }
    bool negative = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
      negative = text.front() == '-';
      text.remove_prefix(1);
    }
    const auto dot = text.find('.');
    const std::string_view whole = text.substr(0, dot);
    const std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (whole.empty() && frac.empty()) return std::nullopt;
    for (char c : whole) if (c < '0' || c > '9') return std::nullopt;
    for (char c : frac) if (c < '0' || c > '9') return std::nullopt;
    if (frac.size() > 18) return std::nullopt;
    I w = 0;
    if (!whole.empty() && !parse_int(whole, w)) return std::nullopt;
    I f = 0;
    if (!frac.empty() && !parse_int(frac, f)) return std::nullopt;
    I scale = 1;
    for (std::size_t k = 0; k < frac.size(); ++k) scale *= 10;
    if (w > (std::numeric_limits<I>::max() - f) / scale) return std::nullopt;
    Rational r(w * scale + f, scale);
    return negative ? -r : r;
  } catch (const boost::bad_rational&) {
    return std::nullopt;
  }
}

namespace {

void check_left_set(const SparseBinaryMatrix& a, std::span<const std::size_t> set,
                    const char* what) {
  for (std::size_t j : set) {
    if (j >= a.cols()) {
      throw std::out_of_range(std::string(what) + ": left vertex " + std::to_string(j) +
                              " outside [0, " + std::to_string(a.cols()) + ")");
    }
  }
}

std::vector<char> membership(std::size_t n, std::span<const std::size_t> set) {
  std::vector<char> in(n, 0);
  for (std::size_t j : set) in[j] = 1;
  return in;
}

void check_disjoint(const SparseBinaryMatrix& a, std::span<const std::size_t> first,
                    std::span<const std::size_t> second, const char* what) {
  check_left_set(a, first, what);
  check_left_set(a, second, what);
  const auto in_first = membership(a.cols(), first);
  for (std::size_t j : second) {
    if (in_first[j]) {
      throw std::invalid_argument(std::string(what) + ": sets share vertex " + std::to_string(j));
    }
  }
}

void check_assignment(const SparseBinaryMatrix& a, std::span<const std::size_t> s_set,
                      const FirstArrival& fa, const char* what) {
  if (fa.left_of.size() != a.rows()) {
    throw std::invalid_argument(std::string(what) + ": assignment has wrong length");
  }
  const auto in_s = membership(a.cols(), s_set);
  const auto covered = neighborhood(a, s_set);
  std::vector<char> in_r(a.rows(), 0);
  for (auto i : covered) in_r[i] = 1;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto l = fa.left_of[i];
    if (!in_r[i]) {
      if (l != FirstArrival::kUnassigned) {
        throw std::invalid_argument(std::string(what) + ": row " + std::to_string(i) +
                                    " is assigned but not in R(S)");
      }
      continue;
    }
    if (l == FirstArrival::kUnassigned) {
      throw std::invalid_argument(std::string(what) + ": row " + std::to_string(i) +
                                  " of R(S) has no assignment");
    }
    const auto j = static_cast<std::size_t>(l);
    if (j >= a.cols() || !in_s[j] || !a.contains(i, j)) {
      throw std::invalid_argument(std::string(what) + ": row " + std::to_string(i) +
                                  " is assigned to a non-neighbour outside S");
    }
  }
}

bool is_integral(double d) {
  return d >= 1.0 && d < 1e9 && std::abs(d - std::round(d)) < kExpansionSlack;
}

// Candidate theta for sets of exactly size j with smallest neighbourhood min_cover.
ThetaValue theta_from_cover(double d, std::size_t j, std::size_t min_cover, bool exact) {
  ThetaValue out;
  out.computed = true;
  out.exact = exact;
  if (exact && is_integral(d)) {
    const auto target = static_cast<std::int64_t>(std::llround(d)) * static_cast<std::int64_t>(j);
    const auto deficit = target - static_cast<std::int64_t>(min_cover);
    out.rational = deficit > 0 ? Rational(deficit, target) : Rational(0);
    out.value = boost::rational_cast<double>(*out.rational);
  } else {
    const double v = 1.0 - static_cast<double>(min_cover) / (d * static_cast<double>(j));
    out.value = std::clamp(v, 0.0, 1.0);
  }
  return out;
}

bool greater(const ThetaValue& lhs, const ThetaValue& rhs) {
  if (lhs.rational && rhs.rational) return *lhs.rational > *rhs.rational;
  return lhs.value > rhs.value;
}

// Fills profile.theta from min neighbourhood sizes per exact cardinality.
void accumulate(ExpansionProfile& profile, const std::vector<std::size_t>& min_cover,
                const std::vector<VertexSet>& witnesses, bool exact) {
  profile.theta.clear();
  for (std::size_t j = 1; j < min_cover.size(); ++j) {
    ThetaValue candidate = theta_from_cover(profile.d, j, min_cover[j], exact);
    candidate.witness = witnesses[j];
    if (!profile.theta.empty() && !greater(candidate, profile.theta.back())) {
      ThetaValue carried = profile.theta.back();
      carried.exact = exact;
      profile.theta.push_back(std::move(carried));
    } else {
      profile.theta.push_back(std::move(candidate));
    }
  }
}

class SubsetEnumerator {
 public:
  SubsetEnumerator(const SparseBinaryMatrix& a, std::size_t s_max)
      : a_(a), s_max_(s_max), counts_(a.rows(), 0),
        min_cover_(s_max + 1, std::numeric_limits<std::size_t>::max()),
        witnesses_(s_max + 1) {}

  void run() { visit(0); }
  const std::vector<std::size_t>& min_cover() const { return min_cover_; }
  const std::vector<VertexSet>& witnesses() const { return witnesses_; }

 private:
  void visit(std::size_t start) {
    for (std::size_t c = start; c < a_.cols(); ++c) {
      add(c);
      const std::size_t depth = chosen_.size();
      if (covered_ < min_cover_[depth]) {
        min_cover_[depth] = covered_;
        witnesses_[depth] = chosen_;
      }
      if (depth < s_max_) visit(c + 1);
      remove(c);
    }
  }

  void add(std::size_t c) {
    chosen_.push_back(c);
    for (auto i : a_.column(c)) covered_ += (counts_[i]++ == 0) ? 1 : 0;
  }

  void remove(std::size_t c) {
    chosen_.pop_back();
    for (auto i : a_.column(c)) covered_ -= (--counts_[i] == 0) ? 1 : 0;
  }

  const SparseBinaryMatrix& a_;
  std::size_t s_max_;
  std::vector<std::uint32_t> counts_;
  std::size_t covered_ = 0;
  VertexSet chosen_;
  std::vector<std::size_t> min_cover_;
  std::vector<VertexSet> witnesses_;
};

void check_profile_args(const SparseBinaryMatrix& a, std::size_t s_max, double d) {
  if (!(d > 0.0) || !std::isfinite(d)) throw std::invalid_argument("nominal degree d must be positive");
  if (s_max < 1 || s_max > a.cols()) {
    throw std::invalid_argument("s_max must lie in [1, n]");
  }
}

}  // namespace

std::vector<SparseBinaryMatrix::Index> neighborhood(const SparseBinaryMatrix& a,
                                                    std::span<const std::size_t> left) {
  check_left_set(a, left, "neighborhood");
  std::vector<char> hit(a.rows(), 0);
  for (std::size_t j : left) {
    for (auto i : a.column(j)) hit[i] = 1;
  }
  std::vector<SparseBinaryMatrix::Index> out;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (hit[i]) out.push_back(static_cast<SparseBinaryMatrix::Index>(i));
  }
  return out;
}

DegreeBandReport degree_band(const SparseBinaryMatrix& a, double d, double delta) {
  if (!(d > 0.0)) throw std::invalid_argument("degree_band: d must be positive");
  if (!(delta >= 0.0)) throw std::invalid_argument("degree_band: delta must be non-negative");
  const double lo = (1.0 - delta) * d;
  const double hi = (1.0 + delta) * d;
  const double slack = kExpansionSlack * std::max(1.0, d);
  DegreeBandReport report;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const auto deg = static_cast<double>(a.degree(j));
    if (deg < lo - slack || deg > hi + slack) report.violators.push_back(j);
  }
  report.pass = report.violators.empty();
  return report;
}

double band_half_width(const SparseBinaryMatrix& a, double d) {
  if (!(d > 0.0)) throw std::invalid_argument("band_half_width: d must be positive");
  double delta = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    delta = std::max(delta, std::abs(static_cast<double>(a.degree(j)) - d) / d);
  }
  return delta;
}

const ThetaValue& ExpansionProfile::at(std::size_t k) const {
  if (k < 1 || k > theta.size()) {
    throw std::out_of_range("theta_k requested for k = " + std::to_string(k) +
                            " outside [1, " + std::to_string(theta.size()) + "]");
  }
  return theta[k - 1];
}

EnumerationBudgetExceeded::EnumerationBudgetExceeded(std::uint64_t required, std::uint64_t budget)
    : std::runtime_error("exact expansion needs " + std::to_string(required) +
                         " subsets, budget is " + std::to_string(budget) +
                         "; use theta_sampled instead"),
      required_(required) {}

std::uint64_t subsets_up_to(std::size_t n, std::size_t s_max) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 0;
  std::uint64_t binom = 1;
  for (std::size_t k = 1; k <= s_max && k <= n; ++k) {
    // binom = C(n, k) computed incrementally; exact while it fits.
    const std::uint64_t factor = n - k + 1;
    if (binom > kMax / factor) return kMax;
    binom = binom * factor / k;
    if (total > kMax - binom) return kMax;
    total += binom;
  }
  return total;
}

ExpansionProfile theta_exact(const SparseBinaryMatrix& a, std::size_t s_max, double d,
                             std::uint64_t budget) {
  check_profile_args(a, s_max, d);
  const auto required = subsets_up_to(a.cols(), s_max);
  if (required > budget) throw EnumerationBudgetExceeded(required, budget);

  SubsetEnumerator enumerator(a, s_max);
  enumerator.run();

  ExpansionProfile profile;
  profile.d = d;
  profile.delta = band_half_width(a, d);
  accumulate(profile, enumerator.min_cover(), enumerator.witnesses(), true);
  return profile;
}

ExpansionProfile theta_sampled(const SparseBinaryMatrix& a, std::size_t s_max,
                               std::size_t trials, const Seed& seed, double d) {
  check_profile_args(a, s_max, d);
  if (trials < 1) throw std::invalid_argument("theta_sampled: trials must be positive");

  std::vector<std::size_t> min_cover(s_max + 1, std::numeric_limits<std::size_t>::max());
  std::vector<VertexSet> witnesses(s_max + 1);
  std::vector<std::uint32_t> counts(a.rows(), 0);
  for (std::size_t k = 1; k <= s_max; ++k) {
    Engine engine = substream(seed, Purpose::subset_sample, k);
    for (std::size_t t = 0; t < trials; ++t) {
      const auto picked = random_subset(engine, static_cast<std::uint32_t>(a.cols()),
                                        static_cast<std::uint32_t>(k));
      std::size_t covered = 0;
      for (auto j : picked) {
        for (auto i : a.column(j)) covered += (counts[i]++ == 0) ? 1 : 0;
      }
      for (auto j : picked) {
        for (auto i : a.column(j)) counts[i] = 0;
      }
      if (covered < min_cover[k]) {
        min_cover[k] = covered;
        witnesses[k].assign(picked.begin(), picked.end());
      }
    }
  }

  ExpansionProfile profile;
  profile.d = d;
  profile.delta = band_half_width(a, d);
  accumulate(profile, min_cover, witnesses, false);
  return profile;
}

bool is_quasi_regular_expander(const SparseBinaryMatrix& a, std::size_t s, double d,
                               double delta, double theta) {
  if (!degree_band(a, d, delta).pass) return false;
  const auto profile = theta_exact(a, s, d);
  return profile.at(s).value <= theta + kExpansionSlack;
}

std::size_t required_m(std::size_t n, double p, double delta, double c) {
  if (!(p > 0.0 && p <= 0.5)) throw std::invalid_argument("required_m: p must lie in (0, 1/2]");
  if (!(delta > 0.0)) throw std::invalid_argument("required_m: delta must be positive");
  if (!(c > 0.0)) throw std::invalid_argument("required_m: C must be positive");
  if (n < 1) throw std::invalid_argument("required_m: n must be positive");
  const double value = (c / (delta * delta)) * std::log(static_cast<double>(n)) / p;
  return static_cast<std::size_t>(std::ceil(value));
}

bool sparsity_gate(double p, std::size_t s, double theta) {
  if (!(theta > 0.0 && theta < 2.0 / 3.0)) {
    throw std::invalid_argument("sparsity_gate: theta must lie in (0, 2/3)");
  }
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sparsity_gate: p outside [0,1]");
  const double limit = 2.0 * theta / (2.0 - theta);
  return p * static_cast<double>(s) <= limit * (1.0 + kExpansionSlack);
}

double degree_deviation_bound(std::size_t n, std::size_t m, double p, double delta) {
  const double mean = static_cast<double>(m) * p;
  const double bound = 2.0 * static_cast<double>(n) * std::exp(-delta * delta * mean / 3.0);
  return std::min(1.0, bound);
}

double expansion_failure_bound(std::size_t n, std::size_t m, double p, std::size_t s,
                               double theta) {
  const double eps = theta / 2.0;
  double total = 0.0;
  double log_binom = 0.0;
  for (std::size_t k = 1; k <= s && k <= n; ++k) {
    log_binom += std::log(static_cast<double>(n - k + 1)) - std::log(static_cast<double>(k));
    const double q = -std::expm1(static_cast<double>(k) * std::log1p(-p));
    total += std::exp(log_binom - eps * eps * static_cast<double>(m) * q / 2.0);
  }
  return std::min(1.0, total);
}

bool expected_expansion_margin(double p, std::size_t k, double theta) {
  const double q = -std::expm1(static_cast<double>(k) * std::log1p(-p));
  const double lhs = (1.0 - theta / 2.0) * q;
  const double rhs = (1.0 - theta) * p * static_cast<double>(k);
  return lhs >= rhs - kExpansionSlack;
}

FirstArrival first_arrival(const SparseBinaryMatrix& a, std::span<const std::size_t> order) {
  check_left_set(a, order, "first_arrival");
  FirstArrival fa;
  fa.left_of.assign(a.rows(), FirstArrival::kUnassigned);
  for (std::size_t j : order) {
    for (auto i : a.column(j)) {
      if (fa.left_of[i] == FirstArrival::kUnassigned) fa.left_of[i] = static_cast<std::ptrdiff_t>(j);
    }
  }
  return fa;
}

FirstArrival first_arrival_by_magnitude(const SparseBinaryMatrix& a, std::span<const double> w) {
  if (w.size() != a.cols()) throw std::invalid_argument("first_arrival_by_magnitude: length mismatch");
  VertexSet order;
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (w[j] != 0.0) order.push_back(j);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t lhs, std::size_t rhs) {
    return std::abs(w[lhs]) > std::abs(w[rhs]);
  });
  return first_arrival(a, order);
}

std::size_t collision_count(const SparseBinaryMatrix& a, std::span<const std::size_t> j_set,
                            std::span<const std::size_t> k_set) {
  check_disjoint(a, j_set, k_set, "collision_count");
  std::vector<char> in_rj(a.rows(), 0);
  for (auto i : neighborhood(a, j_set)) in_rj[i] = 1;
  std::size_t count = 0;
  for (std::size_t k : k_set) {
    for (auto i : a.column(k)) count += in_rj[i] ? 1 : 0;
  }
  return count;
}

std::size_t first_arrival_count(const SparseBinaryMatrix& a, std::span<const std::size_t> s_set,
                                const FirstArrival& fa) {
  check_left_set(a, s_set, "first_arrival_count");
  check_assignment(a, s_set, fa, "first_arrival_count");
  std::size_t count = 0;
  for (std::size_t j : s_set) {
    for (auto i : a.column(j)) {
      count += (fa.left_of[i] != static_cast<std::ptrdiff_t>(j)) ? 1 : 0;
    }
  }
  return count;
}

double cross_mass(const SparseBinaryMatrix& a, std::span<const double> x,
                  std::span<const std::size_t> s_set, std::span<const std::size_t> t_set) {
  if (x.size() != a.cols()) throw std::invalid_argument("cross_mass: length mismatch");
  check_disjoint(a, s_set, t_set, "cross_mass");
  std::vector<double> ax(a.rows(), 0.0);
  for (std::size_t j : s_set) {
    for (auto i : a.column(j)) ax[i] += x[j];
  }
  double total = 0.0;
  for (auto i : neighborhood(a, t_set)) total += std::abs(ax[i]);
  return total;
}

double first_arrival_defect(const SparseBinaryMatrix& a, std::span<const double> w,
                            const FirstArrival& fa) {
  if (w.size() != a.cols()) throw std::invalid_argument("first_arrival_defect: length mismatch");
  VertexSet support;
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (w[j] != 0.0) support.push_back(j);
  }
  check_assignment(a, support, fa, "first_arrival_defect");
  const auto aw = matvec(a, w);
  double total = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto l = fa.left_of[i];
    const double star = (l == FirstArrival::kUnassigned) ? 0.0 : w[static_cast<std::size_t>(l)];
    total += std::abs(aw[i] - star);
  }
  return total;
}

}  // namespace sparsecs
