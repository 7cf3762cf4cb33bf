#pragma once

#include "conic/certified.hpp"
#include "conic/pell.hpp"
#include "conic/quadform.hpp"

#include <optional>
#include <string>
#include <vector>

namespace conic {

/// Pell data behind a seed: m^2 - b n^2 = 1, m'^2 - b n'^2 = 1, r^2 - c t^2 = 1.
struct SeedData {
  BigInt b, c;
  BigInt m, n;
  BigInt m2, n2;
  BigInt r, t;
};

/// The starting triple y_{-1}, y_0, y_1 and t_{-1}, t_0, t_1.
struct SeedTriple {
  SeedData seed;
  std::array<IntegerVec3, 3> y;
  std::array<BigInt, 3> t;
};

/// Seed for x0^2 - b x1^2 - c x2^2 from the fundamental Pell solutions.
/// c = 0 selects the pair-of-lines form x0^2 - b x1^2 (then r = t = 1).
SeedTriple seed_triple(const BigInt &b, const BigInt &c);

/// Seed from explicit Pell data; validates every hypothesis of the construction.
SeedTriple seed_triple(const SeedData &seed);

/// Outcome of one exact identity over a range of indices.
struct InvariantResult {
  std::string name;
  bool passed = true;
  std::optional<long> failed_index;
};

/// Sequence y_{-1}, y_0, ... with y_{i+1} = psi(y_i, y_{i-2}) and
/// t_i = Phi(y_{i+1}, y_i). Every stored index has passed the exact checks of
/// check_sequence().
class ExtremalSequence {
 public:
  explicit ExtremalSequence(const SeedTriple &seed);

  const TernaryQuadraticForm &form() const { return phi_; }
  const SeedData &seed() const { return seed_; }
  /// y_i for -1 <= i <= last_index().
  const IntegerVec3 &y(long i) const { return ys_.at(static_cast<std::size_t>(i + 1)); }
  /// t_i for -1 <= i <= last_index(), using t_i = Phi(y_i, y_{i-2}) at the top.
  const BigInt &t(long i) const { return ts_.at(static_cast<std::size_t>(i + 1)); }
  long last_index() const { return static_cast<long>(ys_.size()) - 2; }
  /// det(y_1, y_0, y_{-1}).
  const BigInt &det0() const { return det0_; }
  const std::vector<IntegerVec3> &ys() const { return ys_; }
  const std::vector<BigInt> &ts() const { return ts_; }

  /// Extends through index `upto`, checking every identity on each new index.
  /// Throws InvariantFailure naming the identity and index on a violation.
  void grow_to(long upto);

 private:
  TernaryQuadraticForm phi_;
  SeedData seed_;
  std::vector<IntegerVec3> ys_;
  std::vector<BigInt> ts_;
  BigInt det0_;
};

ExtremalSequence extend(ExtremalSequence seq, long upto);

/// Exact checks of the recurrence identities on y_{-1..N}, t_{-1..N}. `ts` may
/// be shorter than `ys`; checks involving missing t values are skipped.
std::vector<InvariantResult> check_sequence(const TernaryQuadraticForm &phi, const std::vector<IntegerVec3> &ys,
                                            const std::vector<BigInt> &ts);

/// Enclosure of the limit point Xi = (1, xi1, xi2) together with a bound on the
/// projective distance from the last used y_N to Xi.
struct CertifiedVec3 {
  Vec3<CertifiedReal> coords;
  CertifiedReal tail_bound;
  long last_index = 0;

  const CertifiedReal &xi1() const { return coords(1); }
  const CertifiedReal &xi2() const { return coords(2); }
};

/// Extends `seq` as needed and encloses its projective limit with both
/// coordinate widths at most 2^-bits.
CertifiedVec3 limit_point(const ExtremalSequence &seq, long bits);
CertifiedVec3 limit_point(const ExtremalSequence &seq, const CertifiedReal &target_width);

/// Projective distance ||x ^ y|| / (||x|| ||y||) with the max norm.
CertifiedReal projective_distance(const Vec3<CertifiedReal> &x, const Vec3<CertifiedReal> &y);
CertifiedReal projective_distance(const IntegerVec3 &x, const IntegerVec3 &y,
                                  long precision = CertifiedReal::kDefaultPrecision);

/// Shift a with seqB.y(i) = +-seqA.y(i + a) on all overlapping indices (at
/// least three), or std::nullopt when no such shift exists.
std::optional<long> tails_equal(const ExtremalSequence &seqA, const ExtremalSequence &seqB);

/// Certified search for integer relations u0 + u1 xi1 + u2 xi2 = 0 with
/// max |u_k| <= bound, by lattice reduction.
struct RelationSearch {
  enum class Status { NoneBelowBound, Candidate, Inconclusive };
  Status status = Status::Inconclusive;
  std::optional<IntegerVec3> candidate;
};
RelationSearch search_small_relation(const CertifiedVec3 &xi, const BigInt &bound);

}  // namespace conic
