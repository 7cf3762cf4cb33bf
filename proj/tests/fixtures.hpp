#pragma once

#include "conic/quadform.hpp"
#include "oracles.hpp"

#include <vector>

namespace fixture {

using namespace conic;

/// Random invertible matrix with small rational entries.
inline RationalMat3 random_gl3() {
  for (;;) {
    RationalMat3 T;
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) T(i, k) = Rational(oracle::uniform(-3, 3), oracle::uniform(1, 3));
    if (T.determinant() != 0) return T;
  }
}

inline Rational random_scalar() {
  long num = 0;
  while (num == 0) num = oracle::uniform(-5, 5);
  return Rational(num, oracle::uniform(1, 4));
}

inline TernaryQuadraticForm random_form(long bound) {
  for (;;) {
    std::array<BigInt, 6> a;
    bool nonzero = false;
    for (auto &v : a) {
      v = oracle::uniform(-bound, bound);
      nonzero = nonzero || v != 0;
    }
    if (nonzero) return TernaryQuadraticForm(a[0], a[1], a[2], a[3], a[4], a[5]);
  }
}

inline IntegerVec3 random_vec(long bound) {
  return make_vec(oracle::uniform(-bound, bound), oracle::uniform(-bound, bound), oracle::uniform(-bound, bound));
}

/// The form proportional to s * (base o T), with integer coefficients.
inline TernaryQuadraticForm transform(const RationalMat3 &base_gram, const RationalMat3 &T, const Rational &s) {
  return TernaryQuadraticForm::from_gram(RationalMat3(s * (T.transpose() * base_gram * T)));
}

/// Gram matrix (diagonal 2 a_ii) of a diagonal form a0 x0^2 + a1 x1^2 + a2 x2^2.
inline RationalMat3 diagonal_gram(long a0, long a1, long a2) {
  RationalMat3 g = RationalMat3::Zero();
  g(0, 0) = 2 * a0;
  g(1, 1) = 2 * a1;
  g(2, 2) = 2 * a2;
  return g;
}

/// Coefficients of mu * phi(T x), read off from point values.
inline std::array<Rational, 6> transformed_coefficients(const TernaryQuadraticForm &phi, const RationalMat3 &T,
                                                        const Rational &mu) {
  std::array<Rational, 6> a;
  for (int k = 0; k < 6; ++k) a[k] = Rational(phi.coefficients()[k]);
  return oracle::coefficients_of([&](const std::array<Rational, 3> &x) {
    std::array<Rational, 3> y{0, 0, 0};
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) y[i] += T(i, k) * x[k];
    return mu * oracle::poly(a, y);
  });
}

/// Coefficients (a00, a11, a22, a01, a02, a12) of the canonical polynomials.
inline std::array<Rational, 6> canonical_coefficients(ReductionCase kind, const BigInt &b, const BigInt &c) {
  switch (kind) {
    case ReductionCase::Parabola:
      return {0, -1, 0, 0, 1, 0};
    case ReductionCase::PairOfLines:
      return {1, Rational(-b), 0, 0, 0, 0};
    case ReductionCase::Anisotropic:
      return {1, Rational(-b), Rational(-c), 0, 0, 0};
  }
  return {};
}

}  // namespace fixture
