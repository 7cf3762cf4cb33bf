#include "conic/quadform.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace conic {

namespace {

RationalMat3 rational_gram(const TernaryQuadraticForm &phi) {
  return phi.gram().cast<Rational>();
}

Rational phi_at(const RationalMat3 &gram, const RationalVec3 &v) {
  return v.dot(gram * v) / 2;
}

Rational pairing(const RationalMat3 &gram, const RationalVec3 &v, const RationalVec3 &w) {
  return v.dot(gram * w);
}

// Null space of a rational matrix by reduced row echelon form.
std::vector<RationalVec3> null_space(RationalMat3 m) {
  std::array<int, 3> pivot_col{-1, -1, -1};
  int row = 0;
  for (int col = 0; col < 3 && row < 3; ++col) {
    int sel = -1;
    for (int r = row; r < 3; ++r) {
      if (m(r, col) != 0) {
        sel = r;
        break;
      }
    }
    if (sel < 0) continue;
    m.row(row).swap(m.row(sel));
    Rational inv = 1 / m(row, col);
    for (int k = 0; k < 3; ++k) m(row, k) *= inv;
    for (int r = 0; r < 3; ++r) {
      if (r == row || m(r, col) == 0) continue;
      Rational f = m(r, col);
      for (int k = 0; k < 3; ++k) m(r, k) -= f * m(row, k);
    }
    pivot_col[row] = col;
    ++row;
  }
  std::vector<RationalVec3> basis;
  for (int free_col = 0; free_col < 3; ++free_col) {
    bool is_pivot = false;
    for (int r = 0; r < row; ++r) is_pivot = is_pivot || pivot_col[r] == free_col;
    if (is_pivot) continue;
    RationalVec3 v = RationalVec3::Zero();
    v(free_col) = 1;
    for (int r = 0; r < row; ++r) v(pivot_col[r]) = -m(r, free_col);
    basis.push_back(v);
  }
  return basis;
}

// n = core * root^2 for a positive rational, expressed as q = core * s^2 with
// core a square-free positive integer and s rational.
struct RationalSquareSplit {
  BigInt core;
  Rational scale;  // q = core * scale^2
};

RationalSquareSplit split_positive_rational(const Rational &q) {
  BigInt num = mp::numerator(q);
  BigInt den = mp::denominator(q);
  auto split = square_free_split(num * den);
  // q = num * den / den^2 = core * (root / den)^2
  return {split.core, Rational(split.root, den)};
}

// Legendre symbol test: is a a nonzero quadratic residue modulo odd prime p.
bool is_qr_mod_prime(const BigInt &a, const BigInt &p) {
  BigInt r = a % p;
  if (r < 0) r += p;
  if (r == 0) return false;
  return mp::powm(r, (p - 1) / 2, p) == 1;
}

bool is_qr_mod(const BigInt &a, const BigInt &modulus) {
  for (const auto &p : prime_divisors(modulus)) {
    if (p == 2) continue;
    if (!is_qr_mod_prime(a, p)) return false;
  }
  return true;
}

// Smallest nontrivial integer solution of a x^2 + b y^2 + c z^2 = 0 inside
// Holzer's box x^2 <= |bc|, y^2 <= |ac|, z^2 <= |ab|.
std::optional<std::array<BigInt, 3>> holzer_search(const std::array<BigInt, 3> &coef) {
  std::array<BigInt, 3> bound;
  for (int i = 0; i < 3; ++i) bound[i] = isqrt(abs(coef[(i + 1) % 3] * coef[(i + 2) % 3]));
  // Solve for the coordinate with the largest bound, loop over the other two.
  int solve = static_cast<int>(std::max_element(bound.begin(), bound.end()) - bound.begin());
  int u = (solve + 1) % 3;
  int v = (solve + 2) % 3;
  for (BigInt xu = 0; xu <= bound[u]; ++xu) {
    for (BigInt xv = 0; xv <= bound[v]; ++xv) {
      if (xu == 0 && xv == 0) continue;
      BigInt rest = -(coef[u] * xu * xu + coef[v] * xv * xv);
      if (rest % coef[solve] != 0) continue;
      BigInt sq = rest / coef[solve];
      if (sq < 0 || !is_perfect_square(sq)) continue;
      std::array<BigInt, 3> sol;
      sol[u] = xu;
      sol[v] = xv;
      sol[solve] = isqrt(sq);
      return sol;
    }
  }
  return std::nullopt;
}

}  // namespace

TernaryQuadraticForm::TernaryQuadraticForm(BigInt a00, BigInt a11, BigInt a22, BigInt a01, BigInt a02,
                                           BigInt a12)
    : coeffs_{std::move(a00), std::move(a11), std::move(a22), std::move(a01), std::move(a02), std::move(a12)} {
  BigInt g = 0;
  for (const auto &k : coeffs_) g = mp::gcd(g, abs(k));
  if (g == 0) throw InputError("quadratic form is identically zero");
  content_ = g;
}

TernaryQuadraticForm TernaryQuadraticForm::diagonal(const BigInt &b, const BigInt &c) {
  return TernaryQuadraticForm(BigInt(1), -b, -c, BigInt(0), BigInt(0), BigInt(0));
}

TernaryQuadraticForm TernaryQuadraticForm::from_gram(const RationalMat3 &gram) {
  std::array<Rational, 6> q{gram(0, 0) / 2, gram(1, 1) / 2, gram(2, 2) / 2, gram(0, 1), gram(0, 2), gram(1, 2)};
  BigInt l = 1;
  for (const auto &v : q) l = mp::lcm(l, mp::denominator(v));
  std::array<BigInt, 6> n;
  BigInt g = 0;
  for (int k = 0; k < 6; ++k) {
    n[k] = mp::numerator(q[k]) * (l / mp::denominator(q[k]));
    g = mp::gcd(g, abs(n[k]));
  }
  if (g == 0) throw InputError("quadratic form is identically zero");
  for (auto &v : n) v /= g;
  return TernaryQuadraticForm(n[0], n[1], n[2], n[3], n[4], n[5]);
}

Mat3<BigInt> TernaryQuadraticForm::gram() const {
  Mat3<BigInt> g;
  g << 2 * a00(), a01(), a02(),
       a01(), 2 * a11(), a12(),
       a02(), a12(), 2 * a22();
  return g;
}

std::string TernaryQuadraticForm::to_string() const {
  static const char *monomials[6] = {"x0^2", "x1^2", "x2^2", "x0*x1", "x0*x2", "x1*x2"};
  std::ostringstream out;
  bool first = true;
  for (int k = 0; k < 6; ++k) {
    const BigInt &a = coeffs_[k];
    if (a == 0) continue;
    BigInt mag = abs(a);
    if (first)
      out << (a < 0 ? "-" : "");
    else
      out << (a < 0 ? " - " : " + ");
    if (mag != 1) out << mag << "*";
    out << monomials[k];
    first = false;
  }
  return out.str();
}

IntegerVec3 psi(const TernaryQuadraticForm &phi, const IntegerVec3 &x, const IntegerVec3 &y) {
  BigInt pxy = bilinear(phi, x, y);
  BigInt px = eval_form(phi, x);
  return IntegerVec3(pxy * x - px * y);
}

std::vector<IntegerVec3> kernel(const TernaryQuadraticForm &phi) {
  std::vector<IntegerVec3> out;
  for (const auto &v : null_space(rational_gram(phi))) out.push_back(primitive_part(v));
  return out;
}

Diagonalization diagonalize(const TernaryQuadraticForm &phi) {
  RationalMat3 gram = rational_gram(phi);
  std::vector<RationalVec3> work{RationalVec3::Unit(0), RationalVec3::Unit(1), RationalVec3::Unit(2)};
  Diagonalization out;
  int filled = 0;
  while (!work.empty()) {
    int pick = -1;
    for (int k = 0; k < static_cast<int>(work.size()) && pick < 0; ++k) {
      if (phi_at(gram, work[k]) != 0) pick = k;
    }
    if (pick < 0) {
      // All remaining vectors are isotropic; a non-orthogonal pair has an
      // anisotropic sum.
      for (int i = 0; i < static_cast<int>(work.size()) && pick < 0; ++i) {
        for (int j = i + 1; j < static_cast<int>(work.size()) && pick < 0; ++j) {
          if (pairing(gram, work[i], work[j]) != 0) {
            work[i] = RationalVec3(work[i] + work[j]);
            pick = i;
          }
        }
      }
    }
    if (pick < 0) break;
    RationalVec3 v = work[pick];
    Rational pv = phi_at(gram, v);
    work.erase(work.begin() + pick);
    for (auto &w : work) w = RationalVec3(w - (pairing(gram, w, v) / (2 * pv)) * v);
    out.basis.col(filled) = v;
    out.values[filled] = pv;
    ++filled;
  }
  for (const auto &w : work) {
    out.basis.col(filled) = w;
    out.values[filled] = 0;
    ++filled;
  }
  return out;
}

std::string to_string(ReductionCase kind) {
  switch (kind) {
    case ReductionCase::Parabola:
      return "parabola";
    case ReductionCase::PairOfLines:
      return "pair-of-lines";
    case ReductionCase::Anisotropic:
      return "anisotropic";
  }
  return "unknown";
}

RationalMat3 canonical_gram(ReductionCase kind, const BigInt &b, const BigInt &c) {
  RationalMat3 g = RationalMat3::Zero();
  switch (kind) {
    case ReductionCase::Parabola:
      g(0, 2) = g(2, 0) = 1;
      g(1, 1) = -2;
      break;
    case ReductionCase::PairOfLines:
      g(0, 0) = 2;
      g(1, 1) = Rational(-2 * b);
      break;
    case ReductionCase::Anisotropic:
      g(0, 0) = 2;
      g(1, 1) = Rational(-2 * b);
      g(2, 2) = Rational(-2 * c);
      break;
  }
  return g;
}

RationalMat3 transformed_gram(const TernaryQuadraticForm &phi, const RationalMat3 &T, const Rational &mu) {
  RationalMat3 g = T.transpose() * rational_gram(phi) * T;
  return RationalMat3(mu * g);
}

bool reduction_holds(const TernaryQuadraticForm &phi, const CanonicalReduction &r) {
  if (r.mu == 0 || r.T.determinant() == 0) return false;
  return transformed_gram(phi, r.T, r.mu) == canonical_gram(r.kind, r.b, r.c);
}

std::optional<IntegerVec3> rational_zero(const TernaryQuadraticForm &phi) {
  auto ker = kernel(phi);
  if (!ker.empty()) return ker.front();

  Diagonalization d = diagonalize(phi);
  // Rescale the orthogonal basis so that phi takes square-free integer values.
  std::array<RationalVec3, 3> w;
  std::array<BigInt, 3> coef;
  for (int i = 0; i < 3; ++i) {
    const Rational &val = d.values[i];
    auto split = split_positive_rational(abs(val));
    coef[i] = val < 0 ? BigInt(-split.core) : split.core;
    w[i] = RationalVec3(d.basis.col(i) / split.scale);
  }
  if ((coef[0] > 0) == (coef[1] > 0) && (coef[1] > 0) == (coef[2] > 0)) return std::nullopt;

  // Make the coefficients pairwise coprime. Each step divides |abc| by g f^2.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < 3 && !changed; ++i) {
      for (int j = i + 1; j < 3 && !changed; ++j) {
        BigInt g = mp::gcd(abs(coef[i]), abs(coef[j]));
        if (g == 1) continue;
        int k = 3 - i - j;
        coef[i] /= g;
        coef[j] /= g;
        w[i] = RationalVec3(w[i] / Rational(g));
        w[j] = RationalVec3(w[j] / Rational(g));
        auto split = square_free_split(coef[k] * g);
        coef[k] = split.core;
        w[k] = RationalVec3(w[k] / Rational(split.root));
        changed = true;
      }
    }
  }

  const BigInt &a = coef[0];
  const BigInt &b = coef[1];
  const BigInt &c = coef[2];
  bool solvable = is_qr_mod(-b * c, a) && is_qr_mod(-a * c, b) && is_qr_mod(-a * b, c);
  if (!solvable) return std::nullopt;

  auto sol = holzer_search(coef);
  if (!sol) throw InvariantFailure("local conditions hold but no zero inside Holzer's bound");
  RationalVec3 x = RationalVec3::Zero();
  for (int i = 0; i < 3; ++i) x += Rational((*sol)[i]) * w[i];
  IntegerVec3 v = primitive_part(x);
  if (eval_form(phi, v) != 0) throw InvariantFailure("rational_zero produced a non-isotropic vector");
  return v;
}

CanonicalReduction reduce_form(const TernaryQuadraticForm &phi) {
  auto ker = kernel(phi);
  if (ker.size() >= 2) throw MathRejection("form has rank <= 1 and is a multiple of a square (reducible over Q)");

  Diagonalization d = diagonalize(phi);
  RationalMat3 gram = rational_gram(phi);
  CanonicalReduction out;

  if (ker.size() == 1) {
    // values[0], values[1] nonzero, column 2 spans the kernel.
    const Rational &r = d.values[0];
    const Rational &s = d.values[1];
    if (r * s > 0) throw MathRejection("form is semi-definite: its only real zero is the kernel point");
    auto split = split_positive_rational(-s / r);
    if (split.core == 1) throw MathRejection("form factors into rational linear forms (reducible over Q)");
    out.kind = ReductionCase::PairOfLines;
    out.mu = 1 / r;
    out.b = split.core;
    out.c = 0;
    out.T.col(0) = d.basis.col(0);
    out.T.col(1) = d.basis.col(1) / split.scale;
    out.T.col(2) = d.basis.col(2);
  } else {
    int positive = 0;
    for (const auto &v : d.values) positive += v > 0 ? 1 : 0;
    if (positive == 0 || positive == 3) throw MathRejection("form is definite: no real zeros");

    if (auto zero = rational_zero(phi)) {
      RationalVec3 v0 = zero->cast<Rational>();
      RationalVec3 g0 = gram * v0;
      RationalVec3 w = RationalVec3::Zero();
      for (int k = 0; k < 3; ++k) {
        if (g0(k) != 0) {
          w = RationalVec3::Unit(k);
          break;
        }
      }
      Rational pw = pairing(gram, v0, w);
      RationalVec3 v2 = w - (phi_at(gram, w) / pw) * v0;
      RationalVec3 v1 = primitive_part(RationalVec3(g0.cross(gram * v2))).cast<Rational>();
      Rational p1 = phi_at(gram, v1);
      v2 *= -p1 / pairing(gram, v0, v2);
      out.kind = ReductionCase::Parabola;
      out.mu = -1 / p1;
      out.b = 0;
      out.c = 0;
      out.T.col(0) = v0;
      out.T.col(1) = v1;
      out.T.col(2) = v2;
    } else {
      int lone = 0;
      for (int k = 0; k < 3; ++k) {
        if ((d.values[k] > 0) == (positive == 1)) lone = k;
      }
      out.kind = ReductionCase::Anisotropic;
      out.mu = 1 / d.values[lone];
      out.T.col(0) = d.basis.col(lone);
      int slot = 1;
      for (int k = 0; k < 3; ++k) {
        if (k == lone) continue;
        auto split = split_positive_rational(-out.mu * d.values[k]);
        out.T.col(slot) = d.basis.col(k) / split.scale;
        (slot == 1 ? out.b : out.c) = split.core;
        ++slot;
      }
    }
  }

  if (!reduction_holds(phi, out)) throw InvariantFailure("reduce_form: mu * (phi o T) is not canonical");
  return out;
}

IntegerVec3 apply_gl3(const RationalMat3 &T, const IntegerVec3 &x) {
  if (T.determinant() == 0) throw DomainError("apply_gl3: singular matrix");
  if (x.isZero()) throw DomainError("apply_gl3: zero vector");
  return primitive_part(RationalVec3(T * x.cast<Rational>()));
}

}  // namespace conic
