#include "conic/numerics.hpp"

#include <cctype>

namespace conic {

BigInt parse_bigint(std::string_view text) {
  std::size_t pos = 0;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
  if (pos == text.size()) throw InputError("not an integer: '" + std::string(text) + "'");
  for (std::size_t k = pos; k < text.size(); ++k) {
    if (!std::isdigit(static_cast<unsigned char>(text[k])))
      throw InputError("not an integer: '" + std::string(text) + "'");
  }
  std::string digits(text[0] == '+' ? text.substr(1) : text);
  return BigInt(digits);
}

std::string to_string(const BigInt &value) { return value.str(); }

std::string to_string(const Rational &value) {
  if (mp::denominator(value) == 1) return mp::numerator(value).str();
  return mp::numerator(value).str() + "/" + mp::denominator(value).str();
}

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_bigint(text));
  BigInt num = parse_bigint(text.substr(0, slash));
  BigInt den = parse_bigint(text.substr(slash + 1));
  if (den == 0) throw InputError("zero denominator: '" + std::string(text) + "'");
  return Rational(num, den);
}

BigInt isqrt(const BigInt &n) {
  if (n < 0) throw DomainError("isqrt of a negative integer");
  return mp::sqrt(n);
}

bool is_perfect_square(const BigInt &n) {
  if (n < 0) return false;
  BigInt r = mp::sqrt(n);
  return r * r == n;
}

std::vector<BigInt> prime_divisors(BigInt n) {
  std::vector<BigInt> primes;
  n = abs(n);
  if (n < 2) return primes;
  if (n % 2 == 0) {
    primes.emplace_back(2);
    while (n % 2 == 0) n /= 2;
  }
  for (BigInt p = 3; p * p <= n; p += 2) {
    if (n % p == 0) {
      primes.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) primes.push_back(n);
  return primes;
}

SquareFreeSplit square_free_split(const BigInt &n) {
  if (n == 0) return {BigInt(0), BigInt(1)};
  BigInt rest = abs(n);
  BigInt core = 1;
  BigInt root = 1;
  auto take = [&](const BigInt &p) {
    unsigned e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    for (unsigned k = 0; k < e / 2; ++k) root *= p;
    if (e % 2) core *= p;
  };
  take(BigInt(2));
  for (BigInt p = 3; p * p <= rest; p += 2) {
    if (rest % p == 0) take(p);
  }
  if (rest > 1) core *= rest;
  if (n < 0) core = -core;
  return {core, root};
}

bool is_square_free(const BigInt &n) { return n != 0 && square_free_split(n).root == 1; }

BigInt floor(const Rational &q) {
  return floor_div(mp::numerator(q), mp::denominator(q));
}

BigInt content(const IntegerVec3 &v) {
  BigInt g = mp::gcd(abs(v(0)), abs(v(1)));
  return mp::gcd(g, abs(v(2)));
}

IntegerVec3 primitive_part(const IntegerVec3 &v) {
  BigInt g = content(v);
  if (g == 0) throw DomainError("primitive part of the zero vector");
  IntegerVec3 out = v;
  for (int k = 0; k < 3; ++k) out(k) /= g;
  for (int k = 0; k < 3; ++k) {
    if (out(k) != 0) {
      if (out(k) < 0) out = -out;
      break;
    }
  }
  return out;
}

IntegerVec3 primitive_part(const RationalVec3 &v) {
  BigInt l = 1;
  for (int k = 0; k < 3; ++k) l = mp::lcm(l, mp::denominator(v(k)));
  IntegerVec3 scaled;
  for (int k = 0; k < 3; ++k) scaled(k) = mp::numerator(v(k)) * (l / mp::denominator(v(k)));
  return primitive_part(scaled);
}

bool is_integer_multiple(const IntegerVec3 &a, const IntegerVec3 &b, BigInt *factor) {
  if (b.isZero()) {
    if (factor) *factor = 0;
    return a.isZero();
  }
  int pivot = 0;
  while (b(pivot) == 0) ++pivot;
  if (a(pivot) % b(pivot) != 0) return false;
  BigInt q = a(pivot) / b(pivot);
  for (int k = 0; k < 3; ++k) {
    if (a(k) != q * b(k)) return false;
  }
  if (factor) *factor = q;
  return true;
}

}  // namespace conic
