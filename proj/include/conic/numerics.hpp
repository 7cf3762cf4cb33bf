#pragma once

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace conic {

namespace mp = boost::multiprecision;

/// Arbitrary precision signed integer (GMP backed, no expression templates so
/// that it composes with Eigen expressions).
using BigInt = mp::number<mp::gmp_int, mp::et_off>;

/// Exact rational, always in lowest terms with a positive denominator.
using Rational = mp::number<mp::gmp_rational, mp::et_off>;

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
using Mat3 = Eigen::Matrix<Scalar, 3, 3>;

using IntegerVec3 = Vec3<BigInt>;
using RationalVec3 = Vec3<Rational>;
using RationalMat3 = Mat3<Rational>;

// Error taxonomy. The CLI maps each family onto an exit code.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// Malformed or out-of-range user input.
struct InputError : Error {
  using Error::Error;
};
/// A mathematically well-formed input that the construction must refuse
/// (reducible or definite form, rational target, ...).
struct MathRejection : Error {
  using Error::Error;
};
/// Argument outside the domain of a numeric operation.
struct DomainError : Error {
  using Error::Error;
};
/// An identity that must hold exactly did not.
struct InvariantFailure : Error {
  using Error::Error;
};
/// Interval refinement hit the configured precision cap.
struct PrecisionCapError : Error {
  using Error::Error;
};

inline IntegerVec3 make_vec(long x0, long x1, long x2) {
  return IntegerVec3(BigInt(x0), BigInt(x1), BigInt(x2));
}

BigInt parse_bigint(std::string_view text);
std::string to_string(const BigInt &value);
std::string to_string(const Rational &value);
Rational parse_rational(std::string_view text);

inline BigInt floor_div(const BigInt &a, const BigInt &b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

BigInt isqrt(const BigInt &n);
bool is_perfect_square(const BigInt &n);

/// n = core * root^2 with core square-free; the sign of n stays on core.
struct SquareFreeSplit {
  BigInt core;
  BigInt root;
};
SquareFreeSplit square_free_split(const BigInt &n);
bool is_square_free(const BigInt &n);

/// Distinct prime divisors of |n| by trial division.
std::vector<BigInt> prime_divisors(BigInt n);

BigInt floor(const Rational &q);

/// gcd of the absolute values of the coordinates (0 for the zero vector).
BigInt content(const IntegerVec3 &v);
inline bool is_primitive(const IntegerVec3 &v) { return content(v) == 1; }

/// Primitive vector on the same line, first nonzero coordinate positive.
IntegerVec3 primitive_part(const IntegerVec3 &v);

/// Primitive integer vector proportional to a nonzero rational vector.
IntegerVec3 primitive_part(const RationalVec3 &v);

template <typename Scalar>
Scalar max_norm(const Vec3<Scalar> &v) {
  using std::abs;
  Scalar best = abs(v(0));
  for (int k = 1; k < 3; ++k) {
    Scalar a = abs(v(k));
    if (a > best) best = a;
  }
  return best;
}

template <typename Scalar>
Scalar det3(const Vec3<Scalar> &a, const Vec3<Scalar> &b, const Vec3<Scalar> &c) {
  return a.dot(b.cross(c));
}

/// True when a = q * b for some integer q (the zero vector is 0 * b).
bool is_integer_multiple(const IntegerVec3 &a, const IntegerVec3 &b, BigInt *factor = nullptr);

/// True when a and b are equal up to sign.
inline bool equal_up_to_sign(const IntegerVec3 &a, const IntegerVec3 &b) {
  return a == b || a == IntegerVec3(-b);
}

}  // namespace conic
