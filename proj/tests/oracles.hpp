#pragma once

// Reference computations used by the tests. They deliberately avoid the
// library's algorithms: plain loops, fixed-width or long double arithmetic.

#include "conic/numerics.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using conic::BigInt;
using conic::Rational;

/// Smallest n <= nmax with b n^2 + 1 a perfect square, returned as (m, n).
inline std::optional<std::pair<std::uint64_t, std::uint64_t>> pell_by_search(std::uint64_t b, std::uint64_t nmax) {
  for (std::uint64_t n = 1; n <= nmax; ++n) {
    unsigned __int128 v = static_cast<unsigned __int128>(b) * n * n + 1;
    auto m = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(v)));
    for (std::uint64_t k = (m > 2 ? m - 2 : 0); k <= m + 2; ++k) {
      if (static_cast<unsigned __int128>(k) * k == v) return std::make_pair(k, n);
    }
  }
  return std::nullopt;
}

/// num / den as a long double, via 96 extra bits of integer division.
inline long double ratio(const BigInt &num, const BigInt &den) {
  BigInt q = (num << 96) / den;
  return std::ldexp(std::strtold(q.str().c_str(), nullptr), -96);
}

struct BruteRecords {
  std::vector<std::array<long long, 3>> points;
  long double closest_gap = 1;  // smallest |L - best| seen among non-records
};

/// Strict records of L(x) = max(|x0 xi1 - x1|, |x0 xi2 - x2|) over every
/// x0 = 1..xmax and every |x1| <= bound1, |x2| <= bound2.
///
/// For fixed x0 the max of two independent terms is minimised by minimising
/// each term over its own coordinate, so the double loop splits into two
/// single loops with no loss of coverage.
inline BruteRecords minimal_points_by_search(long double xi1, long double xi2, long long xmax) {
  const long long bound1 = static_cast<long long>(std::fabs(xi1) * xmax) + 2;
  const long long bound2 = static_cast<long long>(std::fabs(xi2) * xmax) + 2;
  BruteRecords out;
  long double best = 1e30L;
  for (long long x0 = 1; x0 <= xmax; ++x0) {
    long double p1 = xi1 * x0, p2 = xi2 * x0;
    long double m1 = 1e30L, m2 = 1e30L;
    long long a1 = 0, a2 = 0;
    for (long long x1 = -bound1; x1 <= bound1; ++x1) {
      long double d = std::fabs(p1 - x1);
      if (d < m1) {
        m1 = d;
        a1 = x1;
      }
    }
    for (long long x2 = -bound2; x2 <= bound2; ++x2) {
      long double d = std::fabs(p2 - x2);
      if (d < m2) {
        m2 = d;
        a2 = x2;
      }
    }
    long double L = std::max(m1, m2);
    if (L < best) {
      if (!out.points.empty()) out.closest_gap = std::min(out.closest_gap, best - L);
      best = L;
      out.points.push_back({x0, a1, a2});
    } else {
      out.closest_gap = std::min(out.closest_gap, L - best);
    }
  }
  return out;
}

/// Value of a0 x0^2 + a1 x1^2 + a2 x2^2 + a01 x0 x1 + a02 x0 x2 + a12 x1 x2.
inline Rational poly(const std::array<Rational, 6> &a, const std::array<Rational, 3> &x) {
  return a[0] * x[0] * x[0] + a[1] * x[1] * x[1] + a[2] * x[2] * x[2] + a[3] * x[0] * x[1] + a[4] * x[0] * x[2] +
         a[5] * x[1] * x[2];
}

/// Coefficients of the quadratic polynomial q recovered from its values at
/// e_i and e_i + e_j.
template <typename F>
std::array<Rational, 6> coefficients_of(F q) {
  auto e = [](int i) {
    std::array<Rational, 3> v{0, 0, 0};
    v[i] = 1;
    return v;
  };
  auto sum = [&](int i, int j) {
    auto v = e(i);
    v[j] += 1;
    return v;
  };
  std::array<Rational, 6> c;
  for (int i = 0; i < 3; ++i) c[i] = q(e(i));
  c[3] = q(sum(0, 1)) - c[0] - c[1];
  c[4] = q(sum(0, 2)) - c[0] - c[2];
  c[5] = q(sum(1, 2)) - c[1] - c[2];
  return c;
}

inline std::mt19937_64 &rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng()); }

}  // namespace oracle
