#pragma once

#include "conic/certified.hpp"
#include "conic/numerics.hpp"

#include <array>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

namespace conic {

/// Integer ternary quadratic form
///   phi(x) = a00 x0^2 + a11 x1^2 + a22 x2^2 + a01 x0 x1 + a02 x0 x2 + a12 x1 x2
/// together with its symmetric bilinear form Phi, normalised by Phi(x, x) = 2 phi(x).
class TernaryQuadraticForm {
 public:
  TernaryQuadraticForm(BigInt a00, BigInt a11, BigInt a22, BigInt a01, BigInt a02, BigInt a12);

  /// x0^2 - b x1^2 - c x2^2.
  static TernaryQuadraticForm diagonal(const BigInt &b, const BigInt &c);

  /// Integer form proportional to the quadratic form with rational Gram
  /// matrix `gram` (phi(x) = x^T gram x / 2), scaled to content 1 and a
  /// positive leading nonzero coefficient ratio preserved.
  static TernaryQuadraticForm from_gram(const RationalMat3 &gram);

  const BigInt &a00() const { return coeffs_[0]; }
  const BigInt &a11() const { return coeffs_[1]; }
  const BigInt &a22() const { return coeffs_[2]; }
  const BigInt &a01() const { return coeffs_[3]; }
  const BigInt &a02() const { return coeffs_[4]; }
  const BigInt &a12() const { return coeffs_[5]; }
  const std::array<BigInt, 6> &coefficients() const { return coeffs_; }
  const BigInt &content() const { return content_; }

  /// Matrix G of Phi: Phi(x, y) = x^T G y, so the diagonal holds 2 a_ii.
  Mat3<BigInt> gram() const;

  std::string to_string() const;

  friend bool operator==(const TernaryQuadraticForm &, const TernaryQuadraticForm &) = default;

 private:
  std::array<BigInt, 6> coeffs_;
  BigInt content_;
};

namespace detail {
template <typename Scalar>
Scalar lift(const BigInt &value, const Scalar &like) {
  if constexpr (std::is_same_v<Scalar, CertifiedReal>)
    return CertifiedReal::from_integer(value, like.precision());
  else
    return Scalar(value);
}
}  // namespace detail

/// phi(x), exact for integer and rational scalars, an enclosure for intervals.
template <typename Scalar>
Scalar eval_form(const TernaryQuadraticForm &phi, const Vec3<Scalar> &x) {
  Scalar sum = detail::lift(BigInt(0), x(0));
  // Zero coefficients are skipped; diagonal forms are the common case.
  auto add = [&](const BigInt &k, auto &&term) {
    if (k != 0) sum = sum + detail::lift(k, x(0)) * term();
  };
  add(phi.a00(), [&] { return x(0) * x(0); });
  add(phi.a11(), [&] { return x(1) * x(1); });
  add(phi.a22(), [&] { return x(2) * x(2); });
  add(phi.a01(), [&] { return x(0) * x(1); });
  add(phi.a02(), [&] { return x(0) * x(2); });
  add(phi.a12(), [&] { return x(1) * x(2); });
  return sum;
}

/// Phi(x, y), symmetric, Phi(x, x) = 2 phi(x).
template <typename Scalar>
Scalar bilinear(const TernaryQuadraticForm &phi, const Vec3<Scalar> &x, const Vec3<Scalar> &y) {
  Scalar sum = detail::lift(BigInt(0), x(0));
  auto add = [&](const BigInt &k, auto &&term) {
    if (k != 0) sum = sum + detail::lift(k, x(0)) * term();
  };
  add(2 * phi.a00(), [&] { return x(0) * y(0); });
  add(2 * phi.a11(), [&] { return x(1) * y(1); });
  add(2 * phi.a22(), [&] { return x(2) * y(2); });
  add(phi.a01(), [&] { return x(0) * y(1) + x(1) * y(0); });
  add(phi.a02(), [&] { return x(0) * y(2) + x(2) * y(0); });
  add(phi.a12(), [&] { return x(1) * y(2) + x(2) * y(1); });
  return sum;
}

/// psi(x, y) = Phi(x, y) x - phi(x) y. Satisfies phi(psi(x, y)) = phi(x)^2 phi(y)
/// and psi(x, psi(x, y)) = phi(x)^2 y.
IntegerVec3 psi(const TernaryQuadraticForm &phi, const IntegerVec3 &x, const IntegerVec3 &y);

/// Primitive integer basis of {v : Phi(v, w) = 0 for all w}.
std::vector<IntegerVec3> kernel(const TernaryQuadraticForm &phi);

/// A Phi-orthogonal basis (columns) with the values phi takes on it. Columns
/// with value 0 span the kernel.
struct Diagonalization {
  RationalMat3 basis;
  std::array<Rational, 3> values;
};
Diagonalization diagonalize(const TernaryQuadraticForm &phi);

enum class ReductionCase { Parabola, PairOfLines, Anisotropic };
std::string to_string(ReductionCase kind);

/// mu * (phi o T) equals the canonical polynomial of `kind`:
///   Parabola     x0 x2 - x1^2
///   PairOfLines  x0^2 - b x1^2            (c = 0)
///   Anisotropic  x0^2 - b x1^2 - c x2^2
struct CanonicalReduction {
  ReductionCase kind;
  RationalMat3 T;
  Rational mu;
  BigInt b;
  BigInt c;
};

/// Gram matrix of the canonical polynomial for a reduction case.
RationalMat3 canonical_gram(ReductionCase kind, const BigInt &b, const BigInt &c);

/// Gram matrix of mu * (phi o T), i.e. mu * T^T G T.
RationalMat3 transformed_gram(const TernaryQuadraticForm &phi, const RationalMat3 &T,
                              const Rational &mu = Rational(1));

/// Exact coefficient comparison of mu * (phi o T) against the canonical form.
bool reduction_holds(const TernaryQuadraticForm &phi, const CanonicalReduction &reduction);

/// Brings an irreducible form with at least two real projective zeros to
/// canonical shape. Throws MathRejection for reducible, degenerate or
/// definite forms.
CanonicalReduction reduce_form(const TernaryQuadraticForm &phi);

/// A primitive isotropic integer vector when phi has a rational projective
/// zero, std::nullopt otherwise.
std::optional<IntegerVec3> rational_zero(const TernaryQuadraticForm &phi);

/// Primitive integer vector proportional to T x (first nonzero coordinate
/// positive). Throws DomainError when T is singular or x = 0.
IntegerVec3 apply_gl3(const RationalMat3 &T, const IntegerVec3 &x);

}  // namespace conic
