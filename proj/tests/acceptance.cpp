// End-to-end acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--expect-red LIST]
//
// Exit status is 0 when every failing criterion is listed in --expect-red.

#include "conic/minpoints.hpp"
#include "conic/pell.hpp"
#include "fixtures.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>

using namespace conic;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char *f, double v) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

TernaryQuadraticForm form(long a00, long a11, long a22, long a01 = 0, long a02 = 0, long a12 = 0) {
  return TernaryQuadraticForm(BigInt(a00), BigInt(a11), BigInt(a22), BigInt(a01), BigInt(a02), BigInt(a12));
}

RationalMat3 gram_of(const TernaryQuadraticForm &phi) {
  const auto &a = phi.coefficients();
  RationalMat3 g;
  g << 2 * Rational(a[0]), Rational(a[3]), Rational(a[4]),  //
      Rational(a[3]), 2 * Rational(a[1]), Rational(a[5]),   //
      Rational(a[4]), Rational(a[5]), 2 * Rational(a[2]);
  return g;
}

double log_norm(const IntegerVec3 &y) { return log(CertifiedReal::from_integer(max_norm(y))).mid_double(); }

Verdict psi_identities() {
  auto start = std::chrono::steady_clock::now();
  long checked = 0, failed = 0;
  for (int f = 0; f < 20; ++f) {
    auto phi = fixture::random_form(20);
    for (int k = 0; k < 10000; ++k) {
      auto x = fixture::random_vec(1000000), y = fixture::random_vec(1000000);
      BigInt px = eval_form(phi, x);
      IntegerVec3 w = psi(phi, x, y);
      if (eval_form(phi, w) != px * px * eval_form(phi, y)) ++failed;
      if (psi(phi, x, w) != IntegerVec3(px * px * y)) ++failed;
      checked += 2;
    }
  }
  double t = seconds_since(start);
  return {failed == 0 && t < 10,
          std::to_string(checked) + " identities on 20 forms, " + std::to_string(failed) + " failures, " +
              fmt("%.2f s (limit 10 s)", t)};
}

Verdict sequence_invariants() {
  auto start = std::chrono::steady_clock::now();
  const long depth = 25;
  std::vector<std::string> problems;
  for (auto [b, c] : std::vector<std::pair<long, long>>{{2, 3}, {3, 2}, {2, 5}, {5, 2}, {6, 7}}) {
    ExtremalSequence s(seed_triple(BigInt(b), BigInt(c)));
    s.grow_to(depth);
    const auto &phi = s.form();
    std::string tag = "(" + std::to_string(b) + "," + std::to_string(c) + ")";
    BigInt det0 = abs(det3(s.y(1), s.y(0), s.y(-1)));
    for (long i = -1; i <= depth; ++i) {
      if (eval_form(phi, s.y(i)) != 1) problems.push_back(tag + " phi at " + std::to_string(i));
      if (i >= 1) {
        if (abs(det3(s.y(i), s.y(i - 1), s.y(i - 2))) != det0) problems.push_back(tag + " det at " + std::to_string(i));
      }
      if (i >= 1 && i + 1 <= depth) {
        if (s.t(i + 1) != s.t(i) * s.t(i - 1) - s.t(i - 2)) problems.push_back(tag + " t at " + std::to_string(i));
        if (!((s.t(i) - 1) * s.t(i - 1) < s.t(i + 1) && s.t(i + 1) < s.t(i) * s.t(i - 1)))
          problems.push_back(tag + " t bounds at " + std::to_string(i));
        BigInt ny = max_norm(s.y(i)), next = max_norm(s.y(i + 1));
        if (!((s.t(i) - 1) * ny < next && next < (s.t(i) + 1) * ny))
          problems.push_back(tag + " norm bounds at " + std::to_string(i));
      }
    }
  }
  double t = seconds_since(start);
  std::string detail = "5 forms to depth 25, " + std::to_string(problems.size()) + " violations";
  if (!problems.empty()) detail += " (first: " + problems.front() + ")";
  return {problems.empty() && t < 5, detail + ", " + fmt("%.2f s (limit 5 s)", t)};
}

Verdict growth() {
  const double gamma = (1 + std::sqrt(5.0)) / 2;
  ExtremalSequence s(seed_triple(BigInt(2), BigInt(3)));
  s.grow_to(21);
  double worst = 0;
  for (long i = 10; i <= 20; ++i) worst = std::max(worst, std::abs(log_norm(s.y(i + 1)) / log_norm(s.y(i)) - gamma));
  return {worst < 0.01, fmt("max |ratio - 1.6180| over i = 10..20 is %.3g (tolerance 0.01)", worst)};
}

Verdict extremal_exponent() {
  ExtremalSequence s(seed_triple(BigInt(2), BigInt(3)));
  long upto = 0;
  while (true) {
    s.grow_to(upto + 1);
    if (log_norm(s.y(upto + 1)) / std::log(10.0) > 50.5) break;
    ++upto;
  }
  auto xi = limit_point(s, 1024);
  auto records = records_from_sequence(s, xi, upto);
  auto report = estimate_lambda(records);
  double target = (std::sqrt(5.0) - 1) / 2, got = report.summary.mid_double();
  std::ostringstream hats;
  for (const auto &h : report.lambda_hats) hats << (h.i > 1 ? " " : "") << fmt("%.4f", h.value.mid_double());
  return {std::abs(got - target) <= 0.005,
          "members y_0..y_" + std::to_string(upto) + fmt(" (|y| up to 1e%.0f)", log_norm(s.y(upto)) / std::log(10.0)) +
              fmt(", summary %.5f", got) + fmt(" vs 0.61803, |diff| %.4f (tolerance 0.005)", std::abs(got - target)) +
              "; lambda_hat = " + hats.str()};
}

long double coordinate(const ExtremalSequence &s, long i, int j) { return oracle::ratio(s.y(i)(j), s.y(i)(0)); }

Verdict oracle_equivalence() {
  auto start = std::chrono::steady_clock::now();
  ExtremalSequence s(seed_triple(BigInt(2), BigInt(3)));
  s.grow_to(8);
  struct Case {
    Target target;
    long double xi1, xi2;
  };
  std::vector<Case> cases = {
      {extremal_target(BigInt(2), BigInt(3)), coordinate(s, 8, 1), coordinate(s, 8, 2)},
      {sqrt_target(BigInt(2), BigInt(3)), std::sqrt(2.0L), std::sqrt(3.0L)},
      {sqrt_target(BigInt(2), BigInt(5)), std::sqrt(2.0L), std::sqrt(5.0L)},
  };
  bool same = true;
  std::string counts;
  for (const auto &c : cases) {
    auto records = enumerate_minimal(c.target, BigInt(10000));
    auto brute = oracle::minimal_points_by_search(c.xi1, c.xi2, 10000);
    bool equal = brute.closest_gap > 1e-12L && records.size() == brute.points.size();
    for (std::size_t k = 0; equal && k < records.size(); ++k)
      equal = records[k].x == make_vec(brute.points[k][0], brute.points[k][1], brute.points[k][2]);
    same = same && equal;
    counts += (counts.empty() ? "" : ", ") + std::to_string(records.size()) + (equal ? "" : " (mismatch)");
  }
  double t = seconds_since(start);
  return {same && t < 60, "record counts " + counts + ", " + fmt("%.2f s (limit 60 s)", t)};
}

struct Enumerations {
  std::vector<MinimalPointRecord> extremal, control, control5;
};

Verdict rigidity(const Enumerations &e) {
  auto ext = rigidity_check(TernaryQuadraticForm::diagonal(BigInt(2), BigInt(3)), e.extremal);
  auto ctl = rigidity_check(form(5, -1, -1), e.control);
  bool control_fails = ctl.sufficient_data && !ctl.failures.empty();
  std::string detail = "extremal: " + std::to_string(ext.independence_set.size()) + " independence indices";
  bool ext_ok = false;
  if (!ext.sufficient_data) {
    detail += ", too few to test any step beyond the first 3";
  } else {
    long bad = 0;
    for (const auto &step : ext.steps)
      if (step.k > 3 && !step.integer_multiple) ++bad;
    ext_ok = bad == 0;
    detail += ", " + std::to_string(bad) + " failures beyond k = 3";
  }
  detail += "; control: " + std::to_string(ctl.failures.size()) + " failures of " + std::to_string(ctl.steps.size()) +
            " steps";
  return {ext_ok && control_fails, detail};
}

Verdict control_exponent(const Enumerations &e) {
  double got = estimate_lambda(e.control).summary.mid_double();
  return {got >= 0.45 && got <= 0.60, fmt("(1, sqrt 2, sqrt 3) at X = 1e6: summary %.4f (band [0.45, 0.60])", got)};
}

Verdict reductions() {
  struct Base {
    TernaryQuadraticForm phi;
    ReductionCase kind;
  };
  std::vector<Base> bases = {
      {form(0, -1, 0, 0, 1, 0), ReductionCase::Parabola},  {form(1, -2, -2), ReductionCase::Parabola},
      {form(1, -2, 0), ReductionCase::PairOfLines},        {form(1, -5, 0), ReductionCase::PairOfLines},
      {form(1, -2, -3), ReductionCase::Anisotropic},       {form(1, -2, -5), ReductionCase::Anisotropic},
  };
  long trials = 0, good = 0;
  for (const auto &base : bases) {
    for (int k = 0; k < 100; ++k) {
      ++trials;
      auto phi = fixture::transform(gram_of(base.phi), fixture::random_gl3(), fixture::random_scalar());
      auto r = reduce_form(phi);
      if (r.kind == base.kind &&
          fixture::transformed_coefficients(phi, r.T, r.mu) == fixture::canonical_coefficients(r.kind, r.b, r.c))
        ++good;
    }
  }
  // (x0 + x1 + x2)(x0 - x1 - x2) - (x1 - x2)^2 = x0^2 - 2 x1^2 - 2 x2^2.
  auto expanded = oracle::coefficients_of([](const std::array<Rational, 3> &x) {
    return (x[0] + x[1] + x[2]) * (x[0] - x[1] - x[2]) - (x[1] - x[2]) * (x[1] - x[2]);
  });
  bool fixed = true;
  auto fixed_form = form(1, -2, -2);
  for (int k = 0; k < 6; ++k) fixed = fixed && expanded[k] == Rational(fixed_form.coefficients()[k]);
  auto fr = reduce_form(fixed_form);
  fixed = fixed && fr.kind == ReductionCase::Parabola &&
          fixture::transformed_coefficients(fixed_form, fr.T, fr.mu) ==
              fixture::canonical_coefficients(fr.kind, fr.b, fr.c);
  return {good == trials && trials == 600 && fixed, std::to_string(good) + "/" + std::to_string(trials) +
                                                        " randomized reductions exact, fixed identity " +
                                                        (fixed ? "ok" : "broken")};
}

Verdict pell_table() {
  int good = 0, total = 0;
  std::string shown;
  for (long b : {2, 3, 5, 6, 7, 10, 13}) {
    ++total;
    auto expected = oracle::pell_by_search(static_cast<std::uint64_t>(b), 1000000);
    auto s = fundamental_solution(BigInt(b));
    if (expected && s.m == expected->first && s.n == expected->second) ++good;
    shown += (shown.empty() ? "" : " ") + std::string("(") + to_string(s.m) + "," + to_string(s.n) + ")";
  }
  return {good == total, std::to_string(good) + "/" + std::to_string(total) + " match: " + shown};
}

Verdict determinant_bound(const Enumerations &e) {
  long triples = 0, violations = 0;
  for (const auto *records : {&e.extremal, &e.control, &e.control5}) {
    for (const auto &c : determinant_bound_checks(*records)) {
      ++triples;
      if (!c.holds || c.det == 0) ++violations;
    }
  }
  return {violations == 0 && triples > 0,
          std::to_string(triples) + " independence triples over 3 targets at X = 1e6, " + std::to_string(violations) +
              " violations"};
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"acceptance run"};
  std::vector<int> expect_red;
  app.add_option("--expect-red", expect_red, "criteria known to fail")->delimiter(',');
  CLI11_PARSE(app, argc, argv);
  std::set<int> red(expect_red.begin(), expect_red.end());

  Enumerations e;
  auto enumerate = [](Target t) { return enumerate_minimal(t, BigInt(1000000)); };

  std::vector<std::pair<const char *, std::function<Verdict()>>> criteria = {
      {"psi identity suite", psi_identities},
      {"sequence invariants", sequence_invariants},
      {"growth to the golden ratio", growth},
      {"exponent at the extremal point", extremal_exponent},
      {"oracle equivalence", oracle_equivalence},
      {"rigidity",
       [&] {
         e.extremal = enumerate(extremal_target(BigInt(2), BigInt(3)));
         e.control = enumerate(sqrt_target(BigInt(2), BigInt(3)));
         e.control5 = enumerate(sqrt_target(BigInt(2), BigInt(5)));
         return rigidity(e);
       }},
      {"control exponent", [&] { return control_exponent(e); }},
      {"reduction correctness", reductions},
      {"Pell table", pell_table},
      {"determinant bound", [&] { return determinant_bound(e); }},
  };

  bool ok = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    int id = static_cast<int>(k + 1);
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception &ex) {
      v = {false, std::string("exception: ") + ex.what()};
    }
    std::printf("%s  %2d  %s: %s", v.pass ? "PASS" : "FAIL", id, criteria[k].first, v.detail.c_str());
    if (!v.pass && red.count(id)) std::printf("  [known red]");
    if (v.pass && red.count(id)) std::printf("  [listed as known red but passes]");
    std::printf("\n");
    std::fflush(stdout);
    ok = ok && (v.pass || red.count(id));
  }
  return ok ? 0 : 1;
}
