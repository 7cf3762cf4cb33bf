#include "conic/pell.hpp"

namespace conic {

namespace {

void require_nonsquare(const BigInt &b) {
  if (b < 2) throw InputError("Pell parameter must be >= 2, got " + to_string(b));
  if (is_perfect_square(b)) throw InputError("Pell parameter must not be a perfect square, got " + to_string(b));
}

// State of the standard recurrence for the expansion of (P + sqrt b) / Q.
struct QuadraticSurd {
  BigInt P = 0;
  BigInt Q = 1;
  BigInt a;
};

}  // namespace

std::vector<BigInt> cf_expansion(const BigInt &b, std::size_t terms) {
  require_nonsquare(b);
  const BigInt a0 = isqrt(b);
  std::vector<BigInt> out;
  QuadraticSurd s{0, 1, a0};
  for (std::size_t k = 0; k < terms; ++k) {
    out.push_back(s.a);
    s.P = s.a * s.Q - s.P;
    s.Q = (b - s.P * s.P) / s.Q;
    s.a = (a0 + s.P) / s.Q;
  }
  return out;
}

std::vector<BigInt> cf_period(const BigInt &b) {
  require_nonsquare(b);
  const BigInt a0 = isqrt(b);
  std::vector<BigInt> period;
  QuadraticSurd s{0, 1, a0};
  // The period ends at the first partial quotient equal to 2 a0.
  do {
    s.P = s.a * s.Q - s.P;
    s.Q = (b - s.P * s.P) / s.Q;
    s.a = (a0 + s.P) / s.Q;
    period.push_back(s.a);
  } while (s.a != 2 * a0);
  return period;
}

PellSolution fundamental_solution(const BigInt &b) {
  require_nonsquare(b);
  const BigInt a0 = isqrt(b);
  QuadraticSurd s{0, 1, a0};
  // Convergents p/q with p_{-1} = 1, q_{-1} = 0.
  BigInt p_prev = 1, q_prev = 0;
  BigInt p = a0, q = 1;
  while (p * p - b * q * q != 1) {
    s.P = s.a * s.Q - s.P;
    s.Q = (b - s.P * s.P) / s.Q;
    s.a = (a0 + s.P) / s.Q;
    BigInt p_next = s.a * p + p_prev;
    BigInt q_next = s.a * q + q_prev;
    p_prev = std::move(p);
    q_prev = std::move(q);
    p = std::move(p_next);
    q = std::move(q_next);
  }
  return {p, q, b};
}

PellSolution next_solution(const PellSolution &s) {
  if (!s.valid()) throw InputError("next_solution: not a Pell solution");
  PellSolution f = fundamental_solution(s.b);
  return {s.m * f.m + s.b * s.n * f.n, s.m * f.n + s.n * f.m, s.b};
}

std::pair<PellSolution, PellSolution> find_seed_pair(const BigInt &b) {
  PellSolution first = fundamental_solution(b);
  PellSolution later = first;
  for (;;) {
    later = next_solution(later);
    BigInt mixed = first.m * later.m - b * first.n * later.n;
    if (first.m < mixed && mixed < later.m) return {first, later};
  }
}

}  // namespace conic
