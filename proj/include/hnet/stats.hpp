#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hnet/error.hpp"
#include "hnet/ingest.hpp"

namespace hnet {

/// A p-value held as log10(p). Stays finite far below the double underflow
/// point of p itself.
struct LogP {
  double log10_p = 0.0;

  double p() const { return std::pow(10.0, log10_p); }
  double weight() const { return -log10_p; }

  static LogP from_p(double p) { return LogP{std::log10(p)}; }

  friend auto operator<=>(const LogP&, const LogP&) = default;
};

/// Counts of one hypergeometric draw: population N with K successes, n draws,
/// x observed successes among the draws.
struct PairCounts {
  std::uint64_t N = 0;
  std::uint64_t K = 0;
  std::uint64_t n = 0;
  std::uint64_t x = 0;

  bool valid() const {
    return K <= N && n <= N && x <= std::min(K, n) && x + N >= K + n;
  }

  friend bool operator==(const PairCounts&, const PairCounts&) = default;
};

namespace detail {

// std::lgamma writes the global signgam on glibc; the reentrant variant keeps
// concurrent pair tests race-free.
inline double log_gamma(double v) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(v, &sign);
#else
  return std::lgamma(v);
#endif
}

}  // namespace detail

/// log10 P(X >= x) for X ~ Hypergeometric(N, K, n).
///
/// The tail is summed directly rather than as 1 - CDF, which would cancel to
/// zero for the tiny p-values that strong associations produce. Terms are
/// accumulated relative to the largest term in the tail (the mode, or x if x
/// lies above it) using the PMF ratio recurrence in both directions, so the
/// partial sums never overflow and stop once the remaining terms are below
/// double resolution.
inline LogP hypergeom_sf(const PairCounts& c) {
  if (!c.valid()) {
    throw Error(ErrorCode::InvalidCounts, "N=" + std::to_string(c.N) + " K=" + std::to_string(c.K) +
                                              " n=" + std::to_string(c.n) + " x=" + std::to_string(c.x));
  }
  const double N = static_cast<double>(c.N);
  const double K = static_cast<double>(c.K);
  const double n = static_cast<double>(c.n);
  const std::uint64_t lo_support = c.K + c.n > c.N ? c.K + c.n - c.N : 0;
  const std::uint64_t hi = std::min(c.K, c.n);
  if (c.x <= lo_support) return LogP{0.0};

  const auto mode_raw = static_cast<std::uint64_t>(std::floor((n + 1.0) * (K + 1.0) / (N + 2.0)));
  const std::uint64_t start = std::clamp(mode_raw, c.x, hi);
  const double s = static_cast<double>(start);
  // PMF at s written so that every lgamma pairs K with n; swapping them
  // then gives the bitwise-identical result.
  using detail::log_gamma;
  const double log_peak = (log_gamma(K + 1.0) + log_gamma(n + 1.0)) + (log_gamma(N - K + 1.0) + log_gamma(N - n + 1.0)) -
                          (log_gamma(K - s + 1.0) + log_gamma(n - s + 1.0)) - log_gamma(s + 1.0) -
                          log_gamma(N - K - n + s + 1.0) - log_gamma(N + 1.0);

  constexpr double kNegligible = 1e-18;
  double sum = 1.0;
  double term = 1.0;
  for (std::uint64_t i = start; i < hi; ++i) {
    const double d = static_cast<double>(i);
    term *= (K - d) * (n - d) / ((d + 1.0) * (N - K - n + d + 1.0));
    sum += term;
    if (term < kNegligible * sum) break;
  }
  term = 1.0;
  for (std::uint64_t i = start; i > c.x; --i) {
    const double d = static_cast<double>(i);
    term *= d * (N - K - n + d) / ((K - d + 1.0) * (n - d + 1.0));
    sum += term;
    if (term < kNegligible * sum) break;
  }
  const double log10_p = (log_peak + std::log(sum)) / std::numbers::ln10;
  return LogP{std::min(0.0, log10_p)};
}

/// Pairwise-complete counts for testing `response` against `candidate`:
/// the population is the rows where both columns' features are observed.
inline PairCounts pair_counts(const CategoryColumn& response, const CategoryColumn& candidate) {
  if (response.bits.size() != candidate.bits.size()) {
    throw Error(ErrorCode::DimensionMismatch, "columns differ in row count");
  }
  if (response.shares_feature_with(candidate)) {
    throw Error(ErrorCode::SameFeaturePair, response.id() + " vs " + candidate.id());
  }
  PairCounts c;
  c.N = BitVector::count_and(response.observed, candidate.observed);
  c.K = BitVector::count_and(candidate.bits, response.observed);
  c.n = BitVector::count_and(response.bits, candidate.observed);
  c.x = BitVector::count_and(response.bits, candidate.bits);
  return c;
}

namespace detail {

/// ln erfc(x) for x >= 0, finite for arbitrarily large x.
inline double log_erfc(double x) {
  if (x < 26.0) return std::log(std::erfc(x));
  const double inv2 = 1.0 / (x * x);
  const double series = 1.0 - 0.5 * inv2 + 0.75 * inv2 * inv2 - 1.875 * inv2 * inv2 * inv2;
  return -x * x - std::log(x * std::sqrt(std::numbers::pi)) + std::log(series);
}

inline double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace detail

/// log10 of the two-sided upper normal tail 2 * Q(z) for z >= 0.
inline LogP normal_two_sided(double z) {
  z = std::max(0.0, z);
  return LogP{std::min(0.0, detail::log_erfc(z / std::numbers::sqrt2) / std::numbers::ln10)};
}

enum class Direction { Higher, Lower };

inline std::string_view to_string(Direction d) { return d == Direction::Higher ? "higher" : "lower"; }

struct MannWhitneyResult {
  LogP p;
  Direction direction = Direction::Higher;
  double u = 0.0;  // U of the split-true group
  double z = 0.0;
  std::size_t n_in = 0;
  std::size_t n_out = 0;
};

/// Wilcoxon-Mann-Whitney rank-sum test of `values` split on `split` versus
/// its complement, using the tie-corrected normal approximation with a 0.5
/// continuity correction. Only rows where the value is present and the split
/// feature is observed take part.
inline MannWhitneyResult mann_whitney(std::span<const std::optional<double>> values, const CategoryColumn& split) {
  if (values.size() != split.bits.size()) throw Error(ErrorCode::DimensionMismatch, "numeric vector length differs");

  std::vector<std::pair<double, bool>> obs;
  obs.reserve(values.size());
  for (std::size_t r = 0; r < values.size(); ++r) {
    if (!values[r] || !split.observed.test(r)) continue;
    obs.emplace_back(*values[r], split.bits.test(r));
  }
  std::vector<double> in, out;
  for (const auto& [v, member] : obs) (member ? in : out).push_back(v);
  if (in.size() < 2 || out.size() < 2) {
    throw Error(ErrorCode::DegenerateSplit, split.id() + " splits into groups of " + std::to_string(in.size()) +
                                                " and " + std::to_string(out.size()));
  }

  MannWhitneyResult res;
  res.n_in = in.size();
  res.n_out = out.size();
  res.direction = detail::median(in) >= detail::median(out) ? Direction::Higher : Direction::Lower;

  std::sort(obs.begin(), obs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  const double total = static_cast<double>(obs.size());
  double rank_sum_in = 0.0;
  double tie_term = 0.0;
  for (std::size_t i = 0; i < obs.size();) {
    std::size_t j = i;
    while (j < obs.size() && obs[j].first == obs[i].first) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    for (std::size_t k = i; k < j; ++k) {
      if (obs[k].second) rank_sum_in += avg_rank;
    }
    i = j;
  }

  const double n1 = static_cast<double>(in.size());
  const double n2 = static_cast<double>(out.size());
  res.u = rank_sum_in - n1 * (n1 + 1.0) / 2.0;
  const double variance = n1 * n2 / 12.0 * ((total + 1.0) - tie_term / (total * (total - 1.0)));
  if (variance <= 0.0) {
    // Every value identical: no evidence either way.
    res.p = LogP{0.0};
    return res;
  }
  const double deviation = std::max(0.0, std::abs(res.u - n1 * n2 / 2.0) - 0.5);
  res.z = deviation / std::sqrt(variance);
  res.p = normal_two_sided(res.z);
  return res;
}

}  // namespace hnet
