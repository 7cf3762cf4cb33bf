#pragma once

#include "conic/numerics.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace conic {

/// Positive solution of m^2 - b n^2 = 1.
struct PellSolution {
  BigInt m;
  BigInt n;
  BigInt b;

  bool valid() const { return m > 0 && n > 0 && m * m - b * n * n == 1; }
  friend bool operator==(const PellSolution &, const PellSolution &) = default;
};

/// First `terms` partial quotients [a0; a1, a2, ...] of sqrt(b).
/// Throws InputError unless b >= 2 is not a perfect square.
std::vector<BigInt> cf_expansion(const BigInt &b, std::size_t terms);

/// Partial quotients of one full period of sqrt(b), excluding a0.
std::vector<BigInt> cf_period(const BigInt &b);

/// Minimal positive solution, read off the continued fraction convergents.
PellSolution fundamental_solution(const BigInt &b);

/// (m + n sqrt b)(m1 + n1 sqrt b) with (m1, n1) the fundamental solution.
PellSolution next_solution(const PellSolution &s);

/// Fundamental solution (m, n) paired with the first later solution (m', n')
/// satisfying m < m m' - b n n' < m'.
std::pair<PellSolution, PellSolution> find_seed_pair(const BigInt &b);

}  // namespace conic
