#include "conic/io.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>

namespace conic::io {

namespace {

std::string mpfr_format(const char *fmt, int digits, mpfr_srcptr x) {
  char *buf = nullptr;
  if (mpfr_asprintf(&buf, fmt, digits - 1, x) < 0) throw InvariantFailure("mpfr_asprintf failed");
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

Json vec_json(const IntegerVec3 &v) { return Json::array({to_string(v(0)), to_string(v(1)), to_string(v(2))}); }

IntegerVec3 vec_from_json(const Json &j, const std::string &what) {
  if (!j.is_array() || j.size() != 3) throw InputError(what + ": expected an array of three integers");
  return IntegerVec3(json_bigint(j[0], what), json_bigint(j[1], what), json_bigint(j[2], what));
}

Json dyadic_json(const CertifiedReal &x) {
  Json j;
  j["lo"] = dyadic_string(x.lo());
  j["hi"] = dyadic_string(x.hi());
  j["decimal"] = mpfr_format("%.*RNe", 40, x.lo());
  return j;
}

CertifiedReal dyadic_from_json(const Json &j, long precision, const std::string &what) {
  if (!j.is_object() || !j.contains("lo") || !j.contains("hi") || !j["lo"].is_string() || !j["hi"].is_string())
    throw InputError(what + ": expected {\"lo\": dyadic, \"hi\": dyadic}");
  Rational lo = parse_dyadic(j["lo"].get<std::string>());
  Rational hi = parse_dyadic(j["hi"].get<std::string>());
  if (lo > hi) throw InputError(what + ": lo > hi");
  return CertifiedReal::from_bounds(lo, hi, precision);
}

Json rational_matrix_json(const RationalMat3 &m) {
  Json rows = Json::array();
  for (int i = 0; i < 3; ++i) {
    Json row = Json::array();
    for (int k = 0; k < 3; ++k) row.push_back(to_string(m(i, k)));
    rows.push_back(row);
  }
  return rows;
}

Json optional_interval(const std::optional<CertifiedReal> &x) {
  return x ? interval_json(*x, 10) : Json(nullptr);
}

}  // namespace

std::string decimal_down(mpfr_srcptr x, int digits) { return mpfr_format("%.*RDe", digits, x); }
std::string decimal_up(mpfr_srcptr x, int digits) { return mpfr_format("%.*RUe", digits, x); }

Json interval_json(const CertifiedReal &x, int digits) {
  Json j;
  j["lo"] = decimal_down(x.lo(), digits);
  j["hi"] = decimal_up(x.hi(), digits);
  return j;
}

BigInt json_bigint(const Json &value, const std::string &what) {
  if (value.is_string()) return parse_bigint(value.get<std::string>());
  if (value.is_number_integer()) return BigInt(value.dump());
  throw InputError(what + ": expected an integer (decimal string or JSON integer)");
}

TernaryQuadraticForm form_from_json(const Json &j) {
  if (!j.is_object()) throw InputError("form: expected a JSON object with keys a00, a11, a22, a01, a02, a12");
  static const char *keys[] = {"a00", "a11", "a22", "a01", "a02", "a12"};
  std::array<BigInt, 6> a;
  bool any = false;
  for (int k = 0; k < 6; ++k) {
    a[k] = 0;
    if (j.contains(keys[k])) {
      a[k] = json_bigint(j[keys[k]], std::string("form.") + keys[k]);
      any = true;
    }
  }
  for (const auto &item : j.items()) {
    if (std::find(std::begin(keys), std::end(keys), item.key()) == std::end(keys))
      throw InputError("form: unknown key '" + item.key() + "'");
  }
  if (!any) throw InputError("form: no coefficients given");
  return TernaryQuadraticForm(a[0], a[1], a[2], a[3], a[4], a[5]);
}

Json form_to_json(const TernaryQuadraticForm &phi) {
  Json j;
  j["a00"] = to_string(phi.a00());
  j["a11"] = to_string(phi.a11());
  j["a22"] = to_string(phi.a22());
  j["a01"] = to_string(phi.a01());
  j["a02"] = to_string(phi.a02());
  j["a12"] = to_string(phi.a12());
  return j;
}

Json reduction_to_json(const TernaryQuadraticForm &phi, const CanonicalReduction &r) {
  Json j;
  j["form"] = form_to_json(phi);
  j["case"] = to_string(r.kind);
  j["mu"] = to_string(r.mu);
  j["T"] = rational_matrix_json(r.T);
  j["b"] = to_string(r.b);
  j["c"] = to_string(r.c);
  j["identity_verified"] = reduction_holds(phi, r);
  return j;
}

Json pell_to_json(const BigInt &b) {
  PellSolution f = fundamental_solution(b);
  auto [first, later] = find_seed_pair(b);
  Json j;
  j["b"] = to_string(b);
  j["m"] = to_string(f.m);
  j["n"] = to_string(f.n);
  Json period = Json::array();
  for (const auto &a : cf_period(b)) period.push_back(to_string(a));
  j["a0"] = to_string(isqrt(b));
  j["period"] = period;
  j["seed_pair"] = {{"m", to_string(first.m)},
                    {"n", to_string(first.n)},
                    {"m2", to_string(later.m)},
                    {"n2", to_string(later.n)}};
  return j;
}

void write_sequence(std::ostream &out, const ExtremalSequence &seq, long depth) {
  Json header;
  header["b"] = to_string(seq.seed().b);
  header["c"] = to_string(seq.seed().c);
  header["depth"] = depth;
  out << header.dump() << '\n';
  for (long i = -1; i <= depth; ++i) {
    Json line;
    line["i"] = i;
    line["y"] = vec_json(seq.y(i));
    line["t"] = to_string(seq.t(i));
    line["phi"] = to_string(eval_form(seq.form(), seq.y(i)));
    out << line.dump() << '\n';
  }
}

SequenceFile read_sequence(std::istream &in) {
  SequenceFile file;
  std::string text;
  long lineno = 0;
  long expected = -1;
  bool header_seen = false;
  while (std::getline(in, text)) {
    ++lineno;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error &e) {
      throw InputError("line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!j.is_object()) throw InputError("line " + std::to_string(lineno) + ": expected a JSON object");
    if (!j.contains("y")) {
      if (header_seen || !file.ys.empty()) throw InputError("line " + std::to_string(lineno) + ": unexpected header");
      header_seen = true;
      if (j.contains("b")) file.b = json_bigint(j["b"], "header.b");
      if (j.contains("c")) file.c = json_bigint(j["c"], "header.c");
      continue;
    }
    std::string where = "line " + std::to_string(lineno);
    if (!j.contains("i") || !j["i"].is_number_integer() || j["i"].get<long>() != expected)
      throw InputError(where + ": expected index " + std::to_string(expected));
    file.ys.push_back(vec_from_json(j["y"], where + " y"));
    if (j.contains("t")) {
      if (file.ts.size() + 1 != file.ys.size()) throw InputError(where + ": t given after a line without t");
      file.ts.push_back(json_bigint(j["t"], where + " t"));
    }
    ++expected;
  }
  if (file.ys.empty()) throw InputError("sequence file holds no vectors");
  return file;
}

Json xi_to_json(const SeedData &seed, long depth, long precision, const CertifiedVec3 &xi) {
  Json j;
  j["b"] = to_string(seed.b);
  j["c"] = to_string(seed.c);
  j["seed"] = {{"m", to_string(seed.m)},   {"n", to_string(seed.n)}, {"m2", to_string(seed.m2)},
               {"n2", to_string(seed.n2)}, {"r", to_string(seed.r)}, {"t", to_string(seed.t)}};
  j["depth"] = depth;
  j["precision"] = precision;
  j["last_index"] = xi.last_index;
  j["xi1"] = dyadic_json(xi.xi1());
  j["xi2"] = dyadic_json(xi.xi2());
  j["tail_bound"] = dyadic_json(xi.tail_bound);
  return j;
}

CertifiedVec3 xi_from_json(const Json &j) {
  if (!j.is_object()) throw InputError("xi file: expected a JSON object");
  long precision = CertifiedReal::kDefaultPrecision;
  if (j.contains("precision")) {
    if (!j["precision"].is_number_integer() || j["precision"].get<long>() <= 0)
      throw InputError("xi file: precision must be a positive integer");
    precision = j["precision"].get<long>() + 64;
  }
  if (!j.contains("xi1") || !j.contains("xi2")) throw InputError("xi file: missing xi1 or xi2");
  CertifiedVec3 xi;
  xi.coords(0) = CertifiedReal::from_integer(BigInt(1), precision);
  xi.coords(1) = dyadic_from_json(j["xi1"], precision, "xi1");
  xi.coords(2) = dyadic_from_json(j["xi2"], precision, "xi2");
  xi.tail_bound = j.contains("tail_bound") ? dyadic_from_json(j["tail_bound"], precision, "tail_bound")
                                           : CertifiedReal(precision);
  if (j.contains("last_index") && j["last_index"].is_number_integer()) xi.last_index = j["last_index"].get<long>();
  return xi;
}

void write_records_csv(std::ostream &out, const std::vector<MinimalPointRecord> &records,
                       const ExponentReport *report) {
  out << "i,X_i,x1,x2,L_i_lo,L_i_hi,lambda_hat_i\n";
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto &r = records[k];
    out << k + 1 << ',' << to_string(r.X) << ',' << to_string(r.x(1)) << ',' << to_string(r.x(2)) << ','
        << decimal_down(r.L.lo()) << ',' << decimal_up(r.L.hi()) << ',';
    if (report && k < report->lambda_hats.size()) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.10f", report->lambda_hats[k].value.mid_double());
      out << buf;
    }
    out << '\n';
  }
}

Json records_json(const std::vector<MinimalPointRecord> &records, const ExponentReport *report) {
  Json arr = Json::array();
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto &r = records[k];
    Json j;
    j["i"] = k + 1;
    j["x"] = vec_json(r.x);
    j["X"] = to_string(r.X);
    j["L"] = interval_json(r.L);
    j["delta"] = Json::array({interval_json(r.delta[0]), interval_json(r.delta[1])});
    j["lambda_hat"] = (report && k < report->lambda_hats.size()) ? interval_json(report->lambda_hats[k].value, 10)
                                                                 : Json(nullptr);
    arr.push_back(j);
  }
  return arr;
}

Json report_json(const Target &target, const BigInt &xmax, const std::vector<MinimalPointRecord> &records,
                 const ExponentReport *report, const std::optional<TernaryQuadraticForm> &rigidity_form) {
  Json j;
  j["target"] = target.name;
  j["xmax"] = to_string(xmax);
  j["record_count"] = records.size();

  Json checks = Json::array();
  for (const auto &c : check_records(records))
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"failed_index", c.failed_index ? Json(*c.failed_index) : Json(nullptr)}});
  j["record_checks"] = checks;

  if (report) {
    Json hats = Json::array();
    for (const auto &h : report->lambda_hats) {
      Json e = interval_json(h.value, 10);
      e["i"] = h.i;
      hats.push_back(e);
    }
    j["lambda_hats"] = hats;
    j["summary"] = interval_json(report->summary, 10);
    j["alpha"] = optional_interval(report->alpha);
    j["theta"] = optional_interval(report->theta);
    Json clow = Json::array();
    for (const auto &c : report->c_lower) clow.push_back(interval_json(c, 10));
    j["c_lower"] = clow;
  } else {
    j["lambda_hats"] = Json::array();
    j["summary"] = nullptr;
  }
  j["independence_set"] = independence_indices(records);

  Json dets = Json::array();
  for (const auto &d : determinant_bound_checks(records)) {
    CertifiedReal bound = CertifiedReal::from_rational(d.bound);
    dets.push_back({{"i", d.i}, {"det", to_string(d.det)}, {"bound", decimal_up(bound.hi(), 10)}, {"holds", d.holds}});
  }
  j["determinant_checks"] = dets;

  if (rigidity_form) {
    RigidityReport rig = rigidity_check(*rigidity_form, records);
    Json r;
    r["form"] = form_to_json(*rigidity_form);
    r["sufficient_data"] = rig.sufficient_data;
    Json steps = Json::array();
    for (const auto &s : rig.steps) {
      steps.push_back({{"k", s.k},
                       {"record", s.record_index},
                       {"integer_multiple", s.integer_multiple},
                       {"factor", to_string(s.factor)},
                       {"phi", to_string(s.phi_value)}});
    }
    r["steps"] = steps;
    r["holds_from"] = rig.holds_from ? Json(*rig.holds_from) : Json(nullptr);
    r["failures"] = rig.failures;
    r["max_abs_phi"] = to_string(rig.max_abs_phi);
    j["rigidity"] = r;
  } else {
    j["rigidity"] = nullptr;
  }
  return j;
}

}  // namespace conic::io
