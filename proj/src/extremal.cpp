#include "conic/extremal.hpp"

#include <algorithm>
#include <map>

namespace conic {

namespace {

std::string index_tag(long i) { return " (index " + std::to_string(i) + ")"; }

// Records the first failure of every named identity in insertion order.
class ResultTable {
 public:
  void declare(const std::string &name) {
    if (slot_.count(name)) return;
    slot_[name] = rows_.size();
    rows_.push_back({name, true, std::nullopt});
  }
  void check(const std::string &name, bool ok, long index) {
    declare(name);
    auto &row = rows_[slot_[name]];
    if (!ok && row.passed) {
      row.passed = false;
      row.failed_index = index;
    }
  }
  const std::vector<InvariantResult> &rows() const { return rows_; }

 private:
  std::vector<InvariantResult> rows_;
  std::map<std::string, std::size_t> slot_;
};

const char *kPhiOne = "phi(y_i) = 1";
const char *kDet = "det(y_i, y_{i-1}, y_{i-2}) = (-1)^(i-1) det(y_1, y_0, y_{-1})";
const char *kTNext = "t_i = Phi(y_{i+1}, y_i)";
const char *kTBack = "t_i = Phi(y_i, y_{i-2})";
const char *kYRec = "y_{i+1} = t_i y_i - y_{i-2}";
const char *kPsi = "y_{i+1} = psi(y_i, y_{i-2})";
const char *kTRec = "t_{i+1} = t_i t_{i-1} - t_{i-2}";
const char *kTGrowth = "(t_i - 1) t_{i-1} < t_{i+1} < t_i t_{i-1}";
const char *kNormGrowth = "(t_i - 1) |y_i| < |y_{i+1}| < (t_i + 1) |y_i|";
const char *kWedge = "z_i = t_{i-1} z_{i-2} + z_{i-3}";
const char *kSeed = "seed: 1 <= t_{-1} < t_0 < t_1 and 1 <= |y_{-1}| < |y_0| < |y_1|";

// Identities whose largest y index is `top` (vector position top + 1).
void check_top(ResultTable &table, const TernaryQuadraticForm &phi, const std::vector<IntegerVec3> &ys,
               const std::vector<BigInt> &ts, long top) {
  auto y = [&](long i) -> const IntegerVec3 & { return ys[static_cast<std::size_t>(i + 1)]; };
  auto has_t = [&](long i) { return i + 1 < static_cast<long>(ts.size()); };
  auto t = [&](long i) -> const BigInt & { return ts[static_cast<std::size_t>(i + 1)]; };

  table.check(kPhiOne, eval_form(phi, y(top)) == 1, top);

  if (top == 1) {
    bool ok = has_t(1) && 1 <= t(-1) && t(-1) < t(0) && t(0) < t(1);
    ok = ok && 1 <= max_norm(y(-1)) && max_norm(y(-1)) < max_norm(y(0)) && max_norm(y(0)) < max_norm(y(1));
    table.check(kSeed, ok, 1);
  }
  if (top >= 1) {
    BigInt det0 = det3(y(1), y(0), y(-1));
    BigInt d = det3(y(top), y(top - 1), y(top - 2));
    table.check(kDet, det0 != 0 && d == ((top - 1) % 2 == 0 ? det0 : BigInt(-det0)), top);
  }
  if (top >= 0 && has_t(top - 1)) table.check(kTNext, t(top - 1) == bilinear(phi, y(top), y(top - 1)), top - 1);
  if (top >= 1 && has_t(top)) table.check(kTBack, t(top) == bilinear(phi, y(top), y(top - 2)), top);
  if (top >= 2) {
    long i = top - 1;
    if (has_t(i)) table.check(kYRec, y(top) == IntegerVec3(t(i) * y(i) - y(i - 2)), i);
    table.check(kPsi, y(top) == psi(phi, y(i), y(i - 2)), i);
    if (has_t(i + 1)) {
      BigInt tt = t(i) * t(i - 1);
      table.check(kTRec, t(i + 1) == tt - t(i - 2), i);
      table.check(kTGrowth, tt - t(i - 1) < t(i + 1) && t(i + 1) < tt, i);
    }
    if (has_t(i)) {
      BigInt ni = max_norm(y(i));
      BigInt nj = max_norm(y(top));
      table.check(kNormGrowth, (t(i) - 1) * ni < nj && nj < (t(i) + 1) * ni, i);
    }
  }
  if (top >= 3) {
    long i = top - 1;
    IntegerVec3 zi = y(i).cross(y(i + 1));
    IntegerVec3 zi2 = y(i - 2).cross(y(i - 1));
    IntegerVec3 zi3 = y(i - 3).cross(y(i - 2));
    bool ok = has_t(i - 1) && zi == IntegerVec3(t(i - 1) * zi2 + zi3);
    table.check(kWedge, ok, i);
  }
}

void require_square_free_parameter(const BigInt &v, const char *name) {
  if (v <= 1 || !is_square_free(v))
    throw InputError(std::string(name) + " must be a square-free integer > 1, got " + to_string(v));
}

}  // namespace

SeedTriple seed_triple(const SeedData &s) {
  require_square_free_parameter(s.b, "b");
  if (s.c != 0) require_square_free_parameter(s.c, "c");
  if (s.m * s.m - s.b * s.n * s.n != 1 || s.m <= 0 || s.n <= 0)
    throw InputError("(m, n) is not a positive solution of m^2 - b n^2 = 1");
  if (s.m2 * s.m2 - s.b * s.n2 * s.n2 != 1 || s.m2 <= 0 || s.n2 <= 0)
    throw InputError("(m', n') is not a positive solution of m'^2 - b n'^2 = 1");
  if (s.r * s.r - s.c * s.t * s.t != 1 || s.r <= 0 || s.t <= 0)
    throw InputError("(r, t) is not a positive solution of r^2 - c t^2 = 1");
  BigInt mixed = s.m * s.m2 - s.b * s.n * s.n2;
  if (!(s.m < mixed && mixed < s.m2)) throw InputError("seed violates m < m m' - b n n' < m'");

  TernaryQuadraticForm phi = TernaryQuadraticForm::diagonal(s.b, s.c);
  SeedTriple out{s, {}, {}};
  out.y[0] = make_vec(1, 0, 0);
  out.y[1] = IntegerVec3(s.m, s.n, BigInt(0));
  out.y[2] = IntegerVec3(s.r * s.m2, s.r * s.n2, s.t);
  out.t[0] = bilinear(phi, out.y[1], out.y[0]);
  out.t[1] = bilinear(phi, out.y[2], out.y[1]);
  out.t[2] = bilinear(phi, out.y[2], out.y[0]);
  return out;
}

SeedTriple seed_triple(const BigInt &b, const BigInt &c) {
  require_square_free_parameter(b, "b");
  if (c != 0) require_square_free_parameter(c, "c");
  auto [first, later] = find_seed_pair(b);
  SeedData s{b, c, first.m, first.n, later.m, later.n, BigInt(1), BigInt(1)};
  if (c != 0) {
    PellSolution rt = fundamental_solution(c);
    s.r = rt.m;
    s.t = rt.n;
  }
  return seed_triple(s);
}

ExtremalSequence::ExtremalSequence(const SeedTriple &seed)
    : phi_(TernaryQuadraticForm::diagonal(seed.seed.b, seed.seed.c)), seed_(seed.seed) {
  ys_.assign(seed.y.begin(), seed.y.end());
  ts_.assign(seed.t.begin(), seed.t.end());
  det0_ = det3(y(1), y(0), y(-1));
  ResultTable table;
  for (long top = -1; top <= 1; ++top) check_top(table, phi_, ys_, ts_, top);
  for (const auto &row : table.rows()) {
    if (!row.passed) throw InvariantFailure("seed violates " + row.name + index_tag(*row.failed_index));
  }
}

void ExtremalSequence::grow_to(long upto) {
  while (last_index() < upto) {
    long i = last_index();
    // check_top confirms this equals psi(y_i, y_{i-2}).
    ys_.push_back(IntegerVec3(t(i) * y(i) - y(i - 2)));
    ts_.push_back(t(i) * t(i - 1) - t(i - 2));
    ResultTable table;
    check_top(table, phi_, ys_, ts_, i + 1);
    for (const auto &row : table.rows()) {
      if (!row.passed) throw InvariantFailure("identity " + row.name + " fails" + index_tag(*row.failed_index));
    }
  }
}

ExtremalSequence extend(ExtremalSequence seq, long upto) {
  seq.grow_to(upto);
  return seq;
}

std::vector<InvariantResult> check_sequence(const TernaryQuadraticForm &phi, const std::vector<IntegerVec3> &ys,
                                            const std::vector<BigInt> &ts) {
  ResultTable table;
  for (const char *name : {kPhiOne, kSeed, kDet, kTNext, kTBack, kYRec, kPsi, kTRec, kTGrowth, kNormGrowth, kWedge})
    table.declare(name);
  if (ys.size() < 3) {
    table.check(kSeed, false, -1);
    return table.rows();
  }
  for (long top = -1; top + 1 < static_cast<long>(ys.size()); ++top) check_top(table, phi, ys, ts, top);
  return table.rows();
}

CertifiedReal projective_distance(const Vec3<CertifiedReal> &x, const Vec3<CertifiedReal> &y) {
  Vec3<CertifiedReal> w = x.cross(y);
  return max_norm(w) / (max_norm(x) * max_norm(y));
}

CertifiedReal projective_distance(const IntegerVec3 &x, const IntegerVec3 &y, long precision) {
  if (x.isZero() || y.isZero()) throw DomainError("projective distance of a zero vector");
  IntegerVec3 w = x.cross(y);
  auto num = CertifiedReal::from_integer(max_norm(w), precision);
  auto den = CertifiedReal::from_integer(max_norm(x), precision) * CertifiedReal::from_integer(max_norm(y), precision);
  return num / den;
}

CertifiedVec3 limit_point(const ExtremalSequence &seq, long bits) {
  if (bits <= 0) throw DomainError("limit_point: target width must be below 1");
  if (bits > precision_cap()) throw PrecisionCapError("limit_point: requested " + std::to_string(bits) +
                                                      " bits exceeds the precision cap");
  const long prec = bits + 64;
  ExtremalSequence s = seq;
  const auto target = CertifiedReal::from_rational(Rational(1, BigInt(1) << static_cast<unsigned>(bits)), prec);
  const auto quarter_target = CertifiedReal::from_rational(Rational(1, BigInt(1) << static_cast<unsigned>(bits + 2)), prec);
  const auto one = CertifiedReal::from_integer(BigInt(1), prec);
  const auto half = CertifiedReal::from_rational(Rational(1, 2), prec);

  // Consecutive projective distances decay like |y_N|^-2; start where that
  // is already near the target.
  long N = 1;
  s.grow_to(N + 1);
  while (2 * static_cast<long>(mp::msb(max_norm(s.y(N)))) < bits + 8) {
    ++N;
    s.grow_to(N + 1);
  }

  for (;; ++N) {
    // dist([y_N], Xi) <= sum_k 2^k d_{N+k}, d_j = dist([y_j], [y_{j+1}]).
    CertifiedReal sum(prec);
    CertifiedReal previous_term(prec);
    CertifiedReal remainder(prec);
    BigInt weight = 1;
    for (long k = 0;; ++k) {
      s.grow_to(N + k + 1);
      CertifiedReal term = weight * projective_distance(s.y(N + k), s.y(N + k + 1), prec);
      sum += term;
      if (k >= 1) {
        CertifiedReal ratio = term / previous_term;
        if (ratio.certainly_less(half)) {
          remainder = term * ratio / (one - ratio);
          if (remainder.certainly_less(quarter_target)) break;
        }
      }
      previous_term = term;
      weight *= 2;
      if (k > 64) throw InvariantFailure("limit_point: projective distances are not decaying");
    }
    CertifiedReal tail = sum + remainder;
    if (!tail.certainly_less(one)) continue;

    const IntegerVec3 &yN = s.y(N);
    if (yN(0) == 0) continue;
    auto norm_y = CertifiedReal::from_integer(max_norm(yN), prec);
    auto y0 = abs(CertifiedReal::from_integer(yN(0), prec));
    // ||Xi|| <= max(1, ||y|| / (|y0| (1 - D))).
    CertifiedReal xi_norm = max(one, norm_y / (y0 * (one - tail)));
    CertifiedReal delta = tail * norm_y * xi_norm / y0;
    mpfr_t radius;
    mpfr_init2(radius, prec);
    mpfr_set(radius, delta.hi(), MPFR_RNDU);
    auto widen = [&](const CertifiedReal &center) {
      mpfr_t lo, hi;
      mpfr_init2(lo, prec);
      mpfr_init2(hi, prec);
      mpfr_sub(lo, center.lo(), radius, MPFR_RNDD);
      mpfr_add(hi, center.hi(), radius, MPFR_RNDU);
      auto out = CertifiedReal::from_mpfr(lo, hi, prec);
      mpfr_clear(lo);
      mpfr_clear(hi);
      return out;
    };
    CertifiedVec3 xi;
    xi.coords(0) = one;
    xi.coords(1) = widen(CertifiedReal::from_rational(Rational(yN(1), yN(0)), prec));
    xi.coords(2) = widen(CertifiedReal::from_rational(Rational(yN(2), yN(0)), prec));
    mpfr_clear(radius);
    xi.tail_bound = tail;
    xi.last_index = N;
    bool narrow = xi.coords(1).width().certainly_less(target) || xi.coords(1).width().hi() == target.lo();
    narrow = narrow && (xi.coords(2).width().certainly_less(target) || xi.coords(2).width().hi() == target.lo());
    if (!narrow) continue;
    if (!eval_form(s.form(), xi.coords).contains_zero())
      throw InvariantFailure("limit_point: enclosure of phi(Xi) excludes 0");
    return xi;
  }
}

CertifiedVec3 limit_point(const ExtremalSequence &seq, const CertifiedReal &target_width) {
  if (!target_width.certainly_positive()) throw DomainError("limit_point: target width must be positive");
  Rational w = target_width.lower();
  BigInt inv = floor(1 / w) + 1;
  long bits = static_cast<long>(mp::msb(inv)) + 1;
  return limit_point(seq, bits);
}

std::optional<long> tails_equal(const ExtremalSequence &seqA, const ExtremalSequence &seqB) {
  auto overlap_matches = [&](long a) -> bool {
    long from = std::max(-1L, -1 - a);
    long to = std::min(seqB.last_index(), seqA.last_index() - a);
    if (to - from + 1 < 3) return false;
    for (long i = from; i <= to; ++i) {
      if (!equal_up_to_sign(seqB.y(i), seqA.y(i + a))) return false;
    }
    return true;
  };
  for (long j = -1; j <= seqA.last_index(); ++j) {
    if (equal_up_to_sign(seqA.y(j), seqB.y(-1)) && overlap_matches(j + 1)) return j + 1;
  }
  for (long k = 0; k <= seqB.last_index(); ++k) {
    if (equal_up_to_sign(seqB.y(k), seqA.y(-1)) && overlap_matches(-1 - k)) return -1 - k;
  }
  return std::nullopt;
}

namespace {

using LatticeVec = Eigen::Matrix<BigInt, 4, 1>;
using RationalVec4 = Eigen::Matrix<Rational, 4, 1>;

struct GramSchmidt {
  std::array<RationalVec4, 3> star;
  std::array<Rational, 3> norm2;
  Rational mu[3][3];
};

GramSchmidt gram_schmidt(const std::array<LatticeVec, 3> &basis) {
  GramSchmidt g;
  for (int i = 0; i < 3; ++i) {
    RationalVec4 v = basis[i].cast<Rational>();
    g.star[i] = v;
    for (int j = 0; j < i; ++j) {
      g.mu[i][j] = v.dot(g.star[j]) / g.norm2[j];
      g.star[i] -= g.mu[i][j] * g.star[j];
    }
    g.norm2[i] = g.star[i].squaredNorm();
  }
  return g;
}

BigInt nearest(const Rational &q) { return floor(q + Rational(1, 2)); }

void lll_reduce(std::array<LatticeVec, 3> &basis) {
  const Rational delta(3, 4);
  int k = 1;
  while (k < 3) {
    for (int j = k - 1; j >= 0; --j) {
      GramSchmidt g = gram_schmidt(basis);
      BigInt q = nearest(g.mu[k][j]);
      if (q != 0) basis[k] -= q * basis[j];
    }
    GramSchmidt g = gram_schmidt(basis);
    if (g.norm2[k] >= (delta - g.mu[k][k - 1] * g.mu[k][k - 1]) * g.norm2[k - 1]) {
      ++k;
    } else {
      std::swap(basis[k], basis[k - 1]);
      k = std::max(k - 1, 1);
    }
  }
}

}  // namespace

RelationSearch search_small_relation(const CertifiedVec3 &xi, const BigInt &bound) {
  RelationSearch out;
  if (bound <= 0) throw DomainError("search_small_relation: bound must be positive");
  const unsigned kbits = 3 * (static_cast<unsigned>(mp::msb(bound)) + 1) + 16;
  const BigInt K = BigInt(1) << kbits;
  Rational width = std::max(xi.xi1().upper() - xi.xi1().lower(), xi.xi2().upper() - xi.xi2().lower());
  if (width * Rational(K) > 1) return out;  // enclosure too wide to say anything

  auto scaled = [&](const CertifiedReal &x) { return nearest(Rational(K) * (x.lower() + x.upper()) / 2); };
  std::array<LatticeVec, 3> basis;
  basis[0] << BigInt(1), BigInt(0), BigInt(0), K;
  basis[1] << BigInt(0), BigInt(1), BigInt(0), scaled(xi.xi1());
  basis[2] << BigInt(0), BigInt(0), BigInt(1), scaled(xi.xi2());
  lll_reduce(basis);

  GramSchmidt g = gram_schmidt(basis);
  Rational shortest = std::min({g.norm2[0], g.norm2[1], g.norm2[2]});
  // A relation u with max|u_k| <= bound gives a lattice vector of squared
  // length at most 3 bound^2 + (bound (1 + 2 K width))^2.
  Rational B(bound);
  Rational last = B * (1 + 2 * Rational(K) * width);
  if (shortest > 3 * B * B + last * last) {
    out.status = RelationSearch::Status::NoneBelowBound;
    return out;
  }
  for (const auto &v : basis) {
    IntegerVec3 u(v(0), v(1), v(2));
    if (u.isZero() || max_norm(u) > bound) continue;
    Vec3<CertifiedReal> uc;
    for (int k = 0; k < 3; ++k) uc(k) = CertifiedReal::from_integer(u(k), xi.xi1().precision());
    if ((uc(0) * xi.coords(0) + uc(1) * xi.coords(1) + uc(2) * xi.coords(2)).contains_zero()) {
      out.status = RelationSearch::Status::Candidate;
      out.candidate = u;
      return out;
    }
  }
  return out;
}

}  // namespace conic
