#include "conic/certified.hpp"

#include <algorithm>
#include <cstdlib>
#include <utility>

namespace conic {

namespace {

mpz_srcptr z(const BigInt &v) { return v.backend().data(); }
mpq_srcptr q(const Rational &v) { return v.backend().data(); }

Rational exact_value(mpfr_srcptr x) {
  if (mpfr_zero_p(x)) return Rational(0);
  if (!mpfr_number_p(x)) throw InvariantFailure("non-finite interval endpoint");
  BigInt mant;
  mpfr_exp_t e = mpfr_get_z_2exp(mant.backend().data(), x);
  if (e >= 0) return Rational(mant << static_cast<unsigned>(e));
  BigInt den = BigInt(1) << static_cast<unsigned>(-e);
  return Rational(mant, den);
}

long joint_precision(const CertifiedReal &a, const CertifiedReal &b) {
  return std::max(a.precision(), b.precision());
}

// Scratch float initialised at a given precision, released on scope exit.
class Scratch {
 public:
  explicit Scratch(long precision) { mpfr_init2(v_, precision); }
  ~Scratch() { mpfr_clear(v_); }
  Scratch(const Scratch &) = delete;
  Scratch &operator=(const Scratch &) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

// Nearest-integer data for a single dyadic endpoint.
struct EndpointRounding {
  BigInt nearest;
  BigInt floor;
  bool half = false;
};

EndpointRounding round_endpoint(mpfr_srcptr v) {
  EndpointRounding out;
  mpfr_get_z(out.floor.backend().data(), v, MPFR_RNDD);
  Scratch frac(std::max<long>(mpfr_get_prec(v), 2));
  // Exact: v and floor(v) share every bit above the binary point.
  mpfr_sub_z(frac.get(), v, z(out.floor), MPFR_RNDN);
  int cmp = mpfr_cmp_ui_2exp(frac.get(), 1, -1);
  out.half = (cmp == 0);
  out.nearest = out.floor + (cmp > 0 ? 1 : 0);
  return out;
}

}  // namespace

CertifiedReal::CertifiedReal(long precision) {
  if (precision < MPFR_PREC_MIN) precision = MPFR_PREC_MIN;
  mpfr_init2(lo_, precision);
  mpfr_init2(hi_, precision);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

CertifiedReal::CertifiedReal(const CertifiedReal &other) {
  mpfr_init2(lo_, mpfr_get_prec(other.lo_));
  mpfr_init2(hi_, mpfr_get_prec(other.hi_));
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

CertifiedReal::CertifiedReal(CertifiedReal &&other) noexcept : CertifiedReal(MPFR_PREC_MIN) {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

CertifiedReal &CertifiedReal::operator=(const CertifiedReal &other) {
  if (this != &other) {
    mpfr_set_prec(lo_, mpfr_get_prec(other.lo_));
    mpfr_set_prec(hi_, mpfr_get_prec(other.hi_));
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }
  return *this;
}

CertifiedReal &CertifiedReal::operator=(CertifiedReal &&other) noexcept {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
  return *this;
}

CertifiedReal::~CertifiedReal() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

CertifiedReal CertifiedReal::from_integer(const BigInt &value, long precision) {
  CertifiedReal r(precision);
  mpfr_set_z(r.lo_, z(value), MPFR_RNDD);
  mpfr_set_z(r.hi_, z(value), MPFR_RNDU);
  return r;
}

CertifiedReal CertifiedReal::from_rational(const Rational &value, long precision) {
  CertifiedReal r(precision);
  mpfr_set_q(r.lo_, q(value), MPFR_RNDD);
  mpfr_set_q(r.hi_, q(value), MPFR_RNDU);
  return r;
}

CertifiedReal CertifiedReal::from_bounds(const Rational &lo, const Rational &hi, long precision) {
  if (lo > hi) throw DomainError("interval with lo > hi");
  CertifiedReal r(precision);
  mpfr_set_q(r.lo_, q(lo), MPFR_RNDD);
  mpfr_set_q(r.hi_, q(hi), MPFR_RNDU);
  return r;
}

CertifiedReal CertifiedReal::from_mpfr(mpfr_srcptr lo, mpfr_srcptr hi, long precision) {
  if (mpfr_greater_p(lo, hi)) throw DomainError("interval with lo > hi");
  CertifiedReal r(precision);
  mpfr_set(r.lo_, lo, MPFR_RNDD);
  mpfr_set(r.hi_, hi, MPFR_RNDU);
  return r;
}

Rational CertifiedReal::lower() const { return exact_value(lo_); }
Rational CertifiedReal::upper() const { return exact_value(hi_); }

double CertifiedReal::mid_double() const {
  Scratch m(precision() + 1);
  mpfr_add(m.get(), lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
  return mpfr_get_d(m.get(), MPFR_RNDN);
}

CertifiedReal CertifiedReal::width() const {
  CertifiedReal r(precision());
  mpfr_sub(r.lo_, hi_, lo_, MPFR_RNDD);
  mpfr_sub(r.hi_, hi_, lo_, MPFR_RNDU);
  return r;
}

bool CertifiedReal::contains(const Rational &value) const {
  return mpfr_cmp_q(lo_, q(value)) <= 0 && mpfr_cmp_q(hi_, q(value)) >= 0;
}

CertifiedReal CertifiedReal::with_precision(long precision) const {
  return from_mpfr(lo_, hi_, precision);
}

CertifiedReal operator+(const CertifiedReal &a, const CertifiedReal &b) {
  CertifiedReal r(joint_precision(a, b));
  mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

CertifiedReal operator-(const CertifiedReal &a, const CertifiedReal &b) {
  CertifiedReal r(joint_precision(a, b));
  mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
  mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
  return r;
}

CertifiedReal operator-(const CertifiedReal &a) {
  CertifiedReal r(a.precision());
  mpfr_neg(r.lo_, a.hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
  return r;
}

CertifiedReal operator*(const CertifiedReal &a, const CertifiedReal &b) {
  long p = joint_precision(a, b);
  CertifiedReal r(p);
  Scratch t(p);
  mpfr_srcptr xs[2] = {a.lo_, a.hi_};
  mpfr_srcptr ys[2] = {b.lo_, b.hi_};
  bool first = true;
  for (mpfr_srcptr x : xs) {
    for (mpfr_srcptr y : ys) {
      mpfr_mul(t.get(), x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t.get(), r.lo_)) mpfr_set(r.lo_, t.get(), MPFR_RNDD);
      mpfr_mul(t.get(), x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t.get(), r.hi_)) mpfr_set(r.hi_, t.get(), MPFR_RNDU);
      first = false;
    }
  }
  return r;
}

CertifiedReal operator*(const BigInt &k, const CertifiedReal &a) {
  CertifiedReal r(a.precision());
  if (k >= 0) {
    mpfr_mul_z(r.lo_, a.lo_, z(k), MPFR_RNDD);
    mpfr_mul_z(r.hi_, a.hi_, z(k), MPFR_RNDU);
  } else {
    mpfr_mul_z(r.lo_, a.hi_, z(k), MPFR_RNDD);
    mpfr_mul_z(r.hi_, a.lo_, z(k), MPFR_RNDU);
  }
  return r;
}

CertifiedReal operator/(const CertifiedReal &a, const CertifiedReal &b) {
  if (b.contains_zero()) throw DomainError("interval division by an interval containing zero");
  long p = joint_precision(a, b);
  CertifiedReal r(p);
  Scratch t(p);
  mpfr_srcptr xs[2] = {a.lo_, a.hi_};
  mpfr_srcptr ys[2] = {b.lo_, b.hi_};
  bool first = true;
  for (mpfr_srcptr x : xs) {
    for (mpfr_srcptr y : ys) {
      mpfr_div(t.get(), x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t.get(), r.lo_)) mpfr_set(r.lo_, t.get(), MPFR_RNDD);
      mpfr_div(t.get(), x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t.get(), r.hi_)) mpfr_set(r.hi_, t.get(), MPFR_RNDU);
      first = false;
    }
  }
  return r;
}

CertifiedReal abs(const CertifiedReal &a) {
  if (mpfr_sgn(a.lo_) >= 0) return a;
  if (mpfr_sgn(a.hi_) <= 0) return -a;
  CertifiedReal r(a.precision());
  mpfr_set_zero(r.lo_, 1);
  if (mpfr_cmpabs(a.lo_, a.hi_) > 0)
    mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
  else
    mpfr_set(r.hi_, a.hi_, MPFR_RNDU);
  return r;
}

CertifiedReal max(const CertifiedReal &a, const CertifiedReal &b) {
  CertifiedReal r(joint_precision(a, b));
  mpfr_max(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

CertifiedReal min(const CertifiedReal &a, const CertifiedReal &b) {
  CertifiedReal r(joint_precision(a, b));
  mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_min(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

CertifiedReal hull(const CertifiedReal &a, const CertifiedReal &b) {
  CertifiedReal r(joint_precision(a, b));
  mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

CertifiedReal log(const CertifiedReal &a) {
  if (!a.certainly_positive()) throw DomainError("log of an interval that is not positive");
  CertifiedReal r(a.precision());
  mpfr_log(r.lo_, a.lo_, MPFR_RNDD);
  mpfr_log(r.hi_, a.hi_, MPFR_RNDU);
  return r;
}

CertifiedReal exp(const CertifiedReal &a) {
  CertifiedReal r(a.precision());
  mpfr_exp(r.lo_, a.lo_, MPFR_RNDD);
  mpfr_exp(r.hi_, a.hi_, MPFR_RNDU);
  return r;
}

std::string CertifiedReal::to_string(int digits) const {
  char *lo_text = nullptr;
  char *hi_text = nullptr;
  mpfr_asprintf(&lo_text, "%.*RDe", digits, lo_);
  mpfr_asprintf(&hi_text, "%.*RUe", digits, hi_);
  std::string out = std::string("[") + lo_text + ", " + hi_text + "]";
  mpfr_free_str(lo_text);
  mpfr_free_str(hi_text);
  return out;
}

CertifiedReal interval_sqrt(const CertifiedReal &x) {
  if (x.certainly_negative() || mpfr_sgn(x.lo()) < 0)
    throw DomainError("interval_sqrt of an interval with negative lower end");
  CertifiedReal r(x.precision());
  Scratch lo(x.precision());
  Scratch hi(x.precision());
  mpfr_sqrt(lo.get(), x.lo(), MPFR_RNDD);
  mpfr_sqrt(hi.get(), x.hi(), MPFR_RNDU);
  return CertifiedReal::from_mpfr(lo.get(), hi.get(), x.precision());
}

CertifiedReal sqrt_of_integer(const BigInt &n, long precision) {
  // Wide enough that converting n itself is exact.
  long exact_bits = std::max<long>(precision, static_cast<long>(n == 0 ? 1 : mp::msb(abs(n)) + 1));
  auto root = interval_sqrt(CertifiedReal::from_integer(n, exact_bits));
  return root.with_precision(precision);
}

CertifiedReal golden_ratio(long precision) {
  auto one = CertifiedReal::from_integer(BigInt(1), precision);
  auto two = CertifiedReal::from_integer(BigInt(2), precision);
  return (one + sqrt_of_integer(BigInt(5), precision)) / two;
}

CertifiedReal inverse_golden_ratio(long precision) {
  return golden_ratio(precision) - CertifiedReal::from_integer(BigInt(1), precision);
}

std::optional<BigInt> certified_round(const BigInt &x0, const CertifiedReal &xi) {
  if (x0 == 0) return BigInt(0);
  // Enough bits that the product is exact.
  long p = xi.precision() + static_cast<long>(mp::msb(abs(x0))) + 2;
  Scratch lo(p);
  Scratch hi(p);
  if (x0 > 0) {
    mpfr_mul_z(lo.get(), xi.lo(), z(x0), MPFR_RNDD);
    mpfr_mul_z(hi.get(), xi.hi(), z(x0), MPFR_RNDU);
  } else {
    mpfr_mul_z(lo.get(), xi.hi(), z(x0), MPFR_RNDD);
    mpfr_mul_z(hi.get(), xi.lo(), z(x0), MPFR_RNDU);
  }
  EndpointRounding a = round_endpoint(lo.get());
  if (mpfr_equal_p(lo.get(), hi.get())) {
    if (!a.half) return a.nearest;
    return (a.floor % 2 == 0) ? a.floor : BigInt(a.floor + 1);
  }
  EndpointRounding b = round_endpoint(hi.get());
  if (a.half || b.half || a.nearest != b.nearest) return std::nullopt;
  return a.nearest;
}

std::string dyadic_string(mpfr_srcptr x) {
  if (mpfr_zero_p(x)) return "0p0";
  BigInt mant;
  mpfr_exp_t e = mpfr_get_z_2exp(mant.backend().data(), x);
  // Strip trailing zero bits so the text is canonical.
  while (mant != 0 && (mant & 1) == 0) {
    mant >>= 1;
    ++e;
  }
  return mant.str() + "p" + std::to_string(static_cast<long>(e));
}

Rational parse_dyadic(std::string_view text) {
  auto p = text.find('p');
  if (p == std::string_view::npos) throw InputError("dyadic value must look like <mantissa>p<exponent>");
  BigInt mant = parse_bigint(text.substr(0, p));
  std::string exp_text(text.substr(p + 1));
  char *end = nullptr;
  long e = std::strtol(exp_text.c_str(), &end, 10);
  if (exp_text.empty() || *end != '\0') throw InputError("bad dyadic exponent in '" + std::string(text) + "'");
  if (e >= 0) return Rational(mant << static_cast<unsigned>(e));
  return Rational(mant, BigInt(1) << static_cast<unsigned>(-e));
}

CertifiedReal max_norm(const Vec3<CertifiedReal> &v) {
  return max(max(abs(v(0)), abs(v(1))), abs(v(2)));
}

long precision_cap() {
  if (const char *env = std::getenv("CONIC_APPROX_MAX_BITS")) {
    char *end = nullptr;
    long bits = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && bits >= 64) return bits;
  }
  return 4096;
}

}  // namespace conic
