#pragma once

// Independent reference implementations used only by the tests.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

// Pascal's triangle; every entry up to row 50 fits well inside 2^53.
struct Binomials {
  std::array<std::array<std::uint64_t, 51>, 51> c{};
  Binomials() {
    for (int n = 0; n <= 50; ++n) {
      c[n][0] = 1;
      for (int k = 1; k <= n; ++k) c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0);
    }
  }
  std::uint64_t operator()(std::uint64_t n, std::uint64_t k) const { return k > n ? 0 : c[n][k]; }
};

// P(X >= x) as an exact ratio of integers, converted once.
inline long double hypergeom_sf_small(std::uint64_t N, std::uint64_t K, std::uint64_t n, std::uint64_t x) {
  static const Binomials C;
  std::uint64_t num = 0;
  for (std::uint64_t i = x; i <= std::min(K, n); ++i) {
    if (n - i > N - K) continue;
    num += C(K, i) * C(N - K, n - i);
  }
  return static_cast<long double>(num) / static_cast<long double>(C(N, n));
}

inline boost::multiprecision::cpp_int big_choose(unsigned n, unsigned k) {
  boost::multiprecision::cpp_int r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

// log10 P(X >= x) in 50-digit arithmetic, for arbitrary sizes.
inline double hypergeom_log10_sf_big(unsigned N, unsigned K, unsigned n, unsigned x) {
  using boost::multiprecision::cpp_bin_float_50;
  boost::multiprecision::cpp_int num = 0;
  for (unsigned i = x; i <= std::min(K, n); ++i) {
    if (n - i > N - K) continue;
    num += big_choose(K, i) * big_choose(N - K, n - i);
  }
  const cpp_bin_float_50 ratio = cpp_bin_float_50(num) / cpp_bin_float_50(big_choose(N, n));
  return static_cast<double>(log10(ratio));
}

// Exact two-sided Mann-Whitney p by enumerating every assignment of the
// pooled values to a group of size n1. Values must be distinct.
inline double mann_whitney_exact(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::size_t total = pooled.size();
  std::vector<std::size_t> rank(total);
  {
    std::vector<std::size_t> idx(total);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return pooled[i] < pooled[j]; });
    for (std::size_t r = 0; r < total; ++r) rank[idx[r]] = r + 1;
  }
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  auto u_of = [&](std::uint32_t mask) {
    double s = 0;
    for (std::size_t i = 0; i < total; ++i) {
      if (mask >> i & 1u) s += static_cast<double>(rank[i]);
    }
    return s - n1 * (n1 + 1) / 2;
  };
  const double centre = n1 * n2 / 2;
  const double observed = std::abs(u_of((1u << a.size()) - 1) - centre);
  std::size_t hits = 0, all = 0;
  for (std::uint32_t mask = 0; mask < (1u << total); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != a.size()) continue;
    ++all;
    if (std::abs(u_of(mask) - centre) >= observed - 1e-9) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(all);
}

// Literal textbook corrections in linear space, O(m^2).
inline std::vector<std::size_t> ascending(const std::vector<double>& p) {
  std::vector<std::size_t> idx(p.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return p[i] < p[j]; });
  return idx;
}

inline std::vector<double> bonferroni(const std::vector<double>& p) {
  std::vector<double> out;
  for (double v : p) out.push_back(std::min(1.0, static_cast<double>(p.size()) * v));
  return out;
}

inline std::vector<double> holm(const std::vector<double>& p) {
  const auto idx = ascending(p);
  const double m = static_cast<double>(p.size());
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    double best = 0.0;
    for (std::size_t j = 0; j <= i; ++j) best = std::max(best, std::min(1.0, (m - static_cast<double>(j)) * p[idx[j]]));
    out[idx[i]] = best;
  }
  return out;
}

inline std::vector<double> benjamini_hochberg(const std::vector<double>& p) {
  const auto idx = ascending(p);
  const double m = static_cast<double>(p.size());
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    double best = 1.0;
    for (std::size_t j = i; j < idx.size(); ++j) {
      best = std::min(best, std::min(1.0, m * p[idx[j]] / static_cast<double>(j + 1)));
    }
    out[idx[i]] = best;
  }
  return out;
}

// Matthews correlation straight from the 2x2 definition.
inline double mcc(double tp, double fp, double fn, double tn) {
  const double d = std::sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn));
  return d == 0 ? 0.0 : (tp * tn - fp * fn) / d;
}

}  // namespace oracle
