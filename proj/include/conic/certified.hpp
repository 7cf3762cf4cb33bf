#pragma once

#include "conic/numerics.hpp"

#include <mpfr.h>

#include <optional>
#include <string>

namespace conic {

/// Closed interval [lo, hi] with dyadic endpoints (MPFR floats) that encloses
/// one real number. Every operation rounds its endpoints outward, so the exact
/// result of the same computation on any point of the inputs lies inside the
/// returned interval. Results carry the larger working precision of their
/// operands.
class CertifiedReal {
 public:
  static constexpr long kDefaultPrecision = 128;

  /// The point interval [0, 0].
  CertifiedReal() : CertifiedReal(kDefaultPrecision) {}
  explicit CertifiedReal(long precision);
  CertifiedReal(const CertifiedReal &other);
  CertifiedReal(CertifiedReal &&other) noexcept;
  CertifiedReal &operator=(const CertifiedReal &other);
  CertifiedReal &operator=(CertifiedReal &&other) noexcept;
  ~CertifiedReal();

  static CertifiedReal from_integer(const BigInt &value, long precision = kDefaultPrecision);
  static CertifiedReal from_rational(const Rational &value, long precision = kDefaultPrecision);
  /// Interval [lo, hi] rounded outward; throws DomainError when lo > hi.
  static CertifiedReal from_bounds(const Rational &lo, const Rational &hi,
                                   long precision = kDefaultPrecision);
  /// Enclosure built from raw MPFR endpoints, copied with outward rounding.
  static CertifiedReal from_mpfr(mpfr_srcptr lo, mpfr_srcptr hi, long precision);

  long precision() const { return static_cast<long>(mpfr_get_prec(lo_)); }

  Rational lower() const;
  Rational upper() const;
  mpfr_srcptr lo() const { return lo_; }
  mpfr_srcptr hi() const { return hi_; }
  double lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
  double hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }
  double mid_double() const;

  /// Upper bound on hi - lo.
  CertifiedReal width() const;
  bool is_point() const { return mpfr_equal_p(lo_, hi_) != 0; }
  bool contains(const Rational &q) const;
  bool contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
  bool certainly_positive() const { return mpfr_sgn(lo_) > 0; }
  bool certainly_negative() const { return mpfr_sgn(hi_) < 0; }
  /// Every point of *this is strictly below every point of other.
  bool certainly_less(const CertifiedReal &other) const { return mpfr_less_p(hi_, other.lo_) != 0; }
  bool subset_of(const CertifiedReal &other) const {
    return mpfr_greaterequal_p(lo_, other.lo_) && mpfr_lessequal_p(hi_, other.hi_);
  }

  /// Same interval converted (outward) to another precision.
  CertifiedReal with_precision(long precision) const;

  friend CertifiedReal operator+(const CertifiedReal &a, const CertifiedReal &b);
  friend CertifiedReal operator-(const CertifiedReal &a, const CertifiedReal &b);
  friend CertifiedReal operator*(const CertifiedReal &a, const CertifiedReal &b);
  friend CertifiedReal operator/(const CertifiedReal &a, const CertifiedReal &b);
  friend CertifiedReal operator-(const CertifiedReal &a);
  friend CertifiedReal operator*(const BigInt &k, const CertifiedReal &a);
  CertifiedReal &operator+=(const CertifiedReal &b) { return *this = *this + b; }
  CertifiedReal &operator-=(const CertifiedReal &b) { return *this = *this - b; }
  CertifiedReal &operator*=(const CertifiedReal &b) { return *this = *this * b; }
  CertifiedReal &operator/=(const CertifiedReal &b) { return *this = *this / b; }

  friend CertifiedReal abs(const CertifiedReal &a);
  friend CertifiedReal max(const CertifiedReal &a, const CertifiedReal &b);
  friend CertifiedReal min(const CertifiedReal &a, const CertifiedReal &b);
  /// Natural logarithm; throws DomainError unless the interval is positive.
  friend CertifiedReal log(const CertifiedReal &a);
  friend CertifiedReal exp(const CertifiedReal &a);

  /// Interval hull.
  friend CertifiedReal hull(const CertifiedReal &a, const CertifiedReal &b);

  /// "[lo, hi]" with roughly `digits` significant decimal digits per end.
  std::string to_string(int digits = 20) const;

 private:
  mpfr_t lo_;
  mpfr_t hi_;
};

/// Enclosure of the square root of every point of x. Throws DomainError when
/// x.lo < 0.
CertifiedReal interval_sqrt(const CertifiedReal &x);

/// Enclosure of sqrt(n) for a nonnegative integer n.
CertifiedReal sqrt_of_integer(const BigInt &n, long precision);

/// The golden ratio (1 + sqrt 5) / 2 and its inverse.
CertifiedReal golden_ratio(long precision = CertifiedReal::kDefaultPrecision);
CertifiedReal inverse_golden_ratio(long precision = CertifiedReal::kDefaultPrecision);

/// Nearest integer to x0 * xi when the enclosure decides it, std::nullopt
/// ("needs refinement") when the enclosure of x0 * xi meets a half-integer
/// without being exactly that half-integer. An exact half-integer rounds to
/// the even neighbour.
std::optional<BigInt> certified_round(const BigInt &x0, const CertifiedReal &xi);

/// Exact dyadic text form "<mantissa>p<exponent>" (value = mantissa * 2^exponent).
std::string dyadic_string(mpfr_srcptr x);
Rational parse_dyadic(std::string_view text);

/// Max-norm of a vector of intervals.
CertifiedReal max_norm(const Vec3<CertifiedReal> &v);

/// Default upper limit on working precision; CONIC_APPROX_MAX_BITS overrides it.
long precision_cap();

}  // namespace conic

namespace Eigen {
template <>
struct NumTraits<conic::CertifiedReal> : GenericNumTraits<conic::CertifiedReal> {
  using Real = conic::CertifiedReal;
  using NonInteger = conic::CertifiedReal;
  using Nested = conic::CertifiedReal;
  using Literal = conic::CertifiedReal;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 8,
    MulCost = 16
  };
};
}  // namespace Eigen
