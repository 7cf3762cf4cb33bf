#pragma once

#include "conic/extremal.hpp"
#include "conic/minpoints.hpp"
#include "conic/pell.hpp"
#include "conic/quadform.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace conic::io {

using Json = nlohmann::ordered_json;

/// Decimal rendering of an MPFR value rounded down or up, `digits` significant digits.
std::string decimal_down(mpfr_srcptr x, int digits = 17);
std::string decimal_up(mpfr_srcptr x, int digits = 17);

/// {"lo": decimal, "hi": decimal} of an enclosure.
Json interval_json(const CertifiedReal &x, int digits = 17);

/// Integer accepted either as a JSON string of decimal digits or a JSON integer.
BigInt json_bigint(const Json &value, const std::string &what);

/// Form file: {"a00": "1", "a11": "-2", ...}; missing coefficients are 0.
TernaryQuadraticForm form_from_json(const Json &j);
Json form_to_json(const TernaryQuadraticForm &phi);
Json reduction_to_json(const TernaryQuadraticForm &phi, const CanonicalReduction &r);
Json pell_to_json(const BigInt &b);

/// Sequence JSONL: a header line {"b", "c", "depth"} followed by one line
/// {"i", "y", "t", "phi"} per index -1..depth.
void write_sequence(std::ostream &out, const ExtremalSequence &seq, long depth);

struct SequenceFile {
  std::optional<BigInt> b, c;
  std::vector<IntegerVec3> ys;
  std::vector<BigInt> ts;
};
/// Throws InputError on malformed or empty input.
SequenceFile read_sequence(std::istream &in);

/// Limit point enclosure with exact dyadic endpoints and decimal previews.
Json xi_to_json(const SeedData &seed, long depth, long precision, const CertifiedVec3 &xi);
CertifiedVec3 xi_from_json(const Json &j);

/// CSV with columns i,X_i,x1,x2,L_i_lo,L_i_hi,lambda_hat_i.
void write_records_csv(std::ostream &out, const std::vector<MinimalPointRecord> &records, const ExponentReport *report);
Json records_json(const std::vector<MinimalPointRecord> &records, const ExponentReport *report);

Json report_json(const Target &target, const BigInt &xmax, const std::vector<MinimalPointRecord> &records,
                 const ExponentReport *report, const std::optional<TernaryQuadraticForm> &rigidity_form);

}  // namespace conic::io
