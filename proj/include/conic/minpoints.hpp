#pragma once

#include "conic/certified.hpp"
#include "conic/extremal.hpp"
#include "conic/quadform.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace conic {

/// A point Xi = (1, xi1, xi2) that can be enclosed to any requested width.
struct Target {
  std::string name;
  /// Enclosure with both coordinate widths at most 2^-bits.
  std::function<CertifiedVec3(long bits)> enclose;
  /// Set for rational targets, which are scanned exactly.
  std::optional<std::array<Rational, 2>> exact;
  /// False when enclose() ignores `bits` (a stored enclosure).
  bool refinable = true;
};

/// (1, sqrt p, sqrt q).
Target sqrt_target(const BigInt &p, const BigInt &q);
/// (1, xi1, xi2) with rational coordinates.
Target rational_target(const Rational &xi1, const Rational &xi2);
/// Limit point of the extremal sequence for x0^2 - b x1^2 - c x2^2.
Target extremal_target(const BigInt &b, const BigInt &c);
/// A fixed enclosure, e.g. one read back from disk.
Target fixed_target(const CertifiedVec3 &xi, std::string name);

/// Minimal point x with X = x0 and L = max(|x0 xi1 - x1|, |x0 xi2 - x2|).
/// delta holds x_j - x0 xi_j for j = 1, 2.
struct MinimalPointRecord {
  IntegerVec3 x;
  BigInt X;
  CertifiedReal L;
  std::array<CertifiedReal, 2> delta;
};

/// Strict records of L over x0 = 1..xmax, taking for each x0 the nearest
/// integers to x0 xi1 and x0 xi2. Ambiguous roundings or comparisons trigger
/// re-enclosure at doubled precision.
///
/// Throws MathRejection when L vanishes (rational target), PrecisionCapError
/// when the required precision exceeds precision_cap(), InputError for xmax < 1.
std::vector<MinimalPointRecord> enumerate_minimal(const Target &target, const BigInt &xmax, long initial_bits = 128);

/// Records built directly from the members y_i (0 <= i <= upto) of an
/// extremal sequence, with L evaluated against `xi`.
std::vector<MinimalPointRecord> records_from_sequence(const ExtremalSequence &seq, const CertifiedVec3 &xi, long upto);

/// Post-hoc check of X strictly increasing, L strictly decreasing, and
/// primitivity with positive first coordinate.
std::vector<InvariantResult> check_records(const std::vector<MinimalPointRecord> &records);

struct LambdaHat {
  long i;  // 1-based record index
  CertifiedReal value;
};

struct ExponentReport {
  /// -log L_i / log X_{i+1}, i = 1..k-1.
  std::vector<LambdaHat> lambda_hats;
  /// Minimum over the last ceil(n/3) values of lambda_hats.
  CertifiedReal summary;
  /// (2 lambda - 1) / (1 - lambda) and (1 - lambda) / lambda at the summary.
  std::optional<CertifiedReal> alpha;
  std::optional<CertifiedReal> theta;
  std::vector<long> independence_set;
  /// Running max of L_i X_{i+1}^lambda with lambda the lower end of summary.
  std::vector<CertifiedReal> c_lower;
};

/// Throws InputError with fewer than two records.
ExponentReport estimate_lambda(const std::vector<MinimalPointRecord> &records);

/// 1-based indices i with det(x_{i-1}, x_i, x_{i+1}) != 0.
std::vector<long> independence_indices(const std::vector<MinimalPointRecord> &records);

struct DeterminantCheck {
  long i;
  BigInt det;
  /// 6 X_{i+1} L_i^hi L_{i-1}^hi, exact.
  Rational bound;
  bool holds;
};
/// |det(x_{i-1}, x_i, x_{i+1})| <= 6 X_{i+1} L_i L_{i-1} at every independence index.
std::vector<DeterminantCheck> determinant_bound_checks(const std::vector<MinimalPointRecord> &records);

struct RigidityStep {
  long k;             // position in the independence set, 1-based
  long record_index;  // record behind y_k
  bool integer_multiple;
  BigInt factor;     // psi(y_k, y_{k-2}) = factor * y_{k+1} when integer_multiple
  BigInt phi_value;  // phi(y_k)
};

struct RigidityReport {
  bool sufficient_data = false;
  std::vector<long> independence_set;
  std::vector<RigidityStep> steps;
  /// Smallest k from which every later step passes.
  std::optional<long> holds_from;
  std::vector<long> failures;
  BigInt max_abs_phi;
};

/// With y_k the records at consecutive independence indices, tests whether
/// psi(y_k, y_{k-2}) is an integer multiple of y_{k+1}.
RigidityReport rigidity_check(const TernaryQuadraticForm &phi, const std::vector<MinimalPointRecord> &records);

}  // namespace conic
