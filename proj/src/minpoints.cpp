#include "conic/minpoints.hpp"

#include <algorithm>
#include <memory>

namespace conic {

namespace {

class Float {
 public:
  explicit Float(long precision) { mpfr_init2(v_, precision); }
  ~Float() { mpfr_clear(v_); }
  Float(const Float &) = delete;
  Float &operator=(const Float &) = delete;
  mpfr_ptr get() { return v_; }
  operator mpfr_ptr() { return v_; }

 private:
  mpfr_t v_;
};

std::string vec_text(const IntegerVec3 &x) {
  return "(" + to_string(x(0)) + ", " + to_string(x(1)) + ", " + to_string(x(2)) + ")";
}

// Certified scan for one enclosure; std::nullopt when the enclosure cannot
// decide some rounding or record comparison.
std::optional<std::vector<MinimalPointRecord>> scan(const CertifiedVec3 &xi, unsigned long xmax) {
  const long prec = std::max(xi.xi1().precision(), xi.xi2().precision()) + 64;
  std::array<mpfr_srcptr, 2> lo{xi.xi1().lo(), xi.xi2().lo()};
  std::array<mpfr_srcptr, 2> hi{xi.xi1().hi(), xi.xi2().hi()};
  Float plo(prec), phi(prec), a(prec), b(prec);
  std::array<std::unique_ptr<Float>, 2> dlo, dhi, alo, ahi;
  for (int j = 0; j < 2; ++j) {
    dlo[j] = std::make_unique<Float>(prec);
    dhi[j] = std::make_unique<Float>(prec);
    alo[j] = std::make_unique<Float>(prec);
    ahi[j] = std::make_unique<Float>(prec);
  }
  Float Llo(prec), Lhi(prec), best_lo(prec), best_hi(prec);
  std::array<long, 2> n{};
  std::vector<MinimalPointRecord> records;

  for (unsigned long x0 = 1; x0 <= xmax; ++x0) {
    for (int j = 0; j < 2; ++j) {
      mpfr_mul_ui(plo, lo[j], x0, MPFR_RNDD);
      mpfr_mul_ui(phi, hi[j], x0, MPFR_RNDU);
      mpfr_add_d(a, plo, 0.5, MPFR_RNDD);
      mpfr_add_d(b, phi, 0.5, MPFR_RNDU);
      if (!mpfr_fits_slong_p(a, MPFR_RNDD) || !mpfr_fits_slong_p(b, MPFR_RNDD))
        throw DomainError("enumerate_minimal: x0 * xi out of range");
      n[j] = mpfr_get_si(a, MPFR_RNDD);
      if (n[j] != mpfr_get_si(b, MPFR_RNDD)) return std::nullopt;
      mpfr_sub_si(dlo[j]->get(), plo, n[j], MPFR_RNDD);
      mpfr_sub_si(dhi[j]->get(), phi, n[j], MPFR_RNDU);
      // |d| as an interval.
      if (mpfr_sgn(dlo[j]->get()) >= 0) {
        mpfr_set(alo[j]->get(), dlo[j]->get(), MPFR_RNDD);
        mpfr_set(ahi[j]->get(), dhi[j]->get(), MPFR_RNDU);
      } else if (mpfr_sgn(dhi[j]->get()) <= 0) {
        mpfr_neg(alo[j]->get(), dhi[j]->get(), MPFR_RNDD);
        mpfr_neg(ahi[j]->get(), dlo[j]->get(), MPFR_RNDU);
      } else {
        mpfr_set_zero(alo[j]->get(), 1);
        mpfr_neg(ahi[j]->get(), dlo[j]->get(), MPFR_RNDU);
        mpfr_max(ahi[j]->get(), ahi[j]->get(), dhi[j]->get(), MPFR_RNDU);
      }
    }
    mpfr_max(Llo, alo[0]->get(), alo[1]->get(), MPFR_RNDD);
    mpfr_max(Lhi, ahi[0]->get(), ahi[1]->get(), MPFR_RNDU);

    if (!records.empty()) {
      if (mpfr_greaterequal_p(Llo, best_hi)) continue;
      if (!mpfr_less_p(Lhi, best_lo)) return std::nullopt;
    }
    mpfr_set(best_lo.get(), Llo.get(), MPFR_RNDD);
    mpfr_set(best_hi.get(), Lhi.get(), MPFR_RNDU);
    if (mpfr_zero_p(Lhi.get()))
      throw MathRejection("rational target: L = 0 at x = (" + std::to_string(x0) + ", " + std::to_string(n[0]) +
                          ", " + std::to_string(n[1]) + ")");
    MinimalPointRecord r;
    r.x = IntegerVec3(BigInt(x0), BigInt(n[0]), BigInt(n[1]));
    r.X = x0;
    r.L = CertifiedReal::from_mpfr(Llo, Lhi, prec);
    for (int j = 0; j < 2; ++j) r.delta[j] = -CertifiedReal::from_mpfr(dlo[j]->get(), dhi[j]->get(), prec);
    if (!is_primitive(r.x)) throw InvariantFailure("enumerate_minimal: record " + vec_text(r.x) + " is not primitive");
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<MinimalPointRecord> scan_exact(const std::array<Rational, 2> &xi, unsigned long xmax) {
  std::vector<MinimalPointRecord> records;
  Rational best;
  const Rational half(1, 2);
  for (unsigned long x0 = 1; x0 <= xmax; ++x0) {
    IntegerVec3 x;
    x(0) = x0;
    std::array<Rational, 2> d;
    Rational L = 0;
    for (int j = 0; j < 2; ++j) {
      Rational p = xi[j] * x0;
      x(j + 1) = floor(p + half);
      d[j] = Rational(x(j + 1)) - p;
      L = std::max(L, Rational(abs(d[j])));
    }
    if (!records.empty() && L >= best) continue;
    if (L == 0) throw MathRejection("rational target: L = 0 at x = " + vec_text(x));
    best = L;
    MinimalPointRecord r;
    r.x = x;
    r.X = x0;
    r.L = CertifiedReal::from_rational(L);
    for (int j = 0; j < 2; ++j) r.delta[j] = CertifiedReal::from_rational(d[j]);
    records.push_back(std::move(r));
  }
  return records;
}

long bits_for_width(const CertifiedReal &w) {
  if (w.contains_zero()) return 1L << 20;
  return static_cast<long>(mp::msb(floor(1 / w.lower()) + 1)) + 1;
}

}  // namespace

Target sqrt_target(const BigInt &p, const BigInt &q) {
  if (p < 0 || q < 0) throw InputError("sqrt target needs nonnegative radicands");
  Target t;
  t.name = "(1, sqrt " + to_string(p) + ", sqrt " + to_string(q) + ")";
  t.enclose = [p, q](long bits) {
    long prec = bits + 16 + static_cast<long>(mp::msb(p + q + 1));
    CertifiedVec3 xi;
    xi.coords(0) = CertifiedReal::from_integer(BigInt(1), prec);
    xi.coords(1) = sqrt_of_integer(p, prec);
    xi.coords(2) = sqrt_of_integer(q, prec);
    xi.tail_bound = CertifiedReal(prec);
    return xi;
  };
  return t;
}

Target rational_target(const Rational &xi1, const Rational &xi2) {
  Target t;
  t.name = "(1, " + to_string(xi1) + ", " + to_string(xi2) + ")";
  t.exact = std::array<Rational, 2>{xi1, xi2};
  t.enclose = [xi1, xi2](long bits) {
    CertifiedVec3 xi;
    xi.coords(0) = CertifiedReal::from_integer(BigInt(1), bits + 16);
    xi.coords(1) = CertifiedReal::from_rational(xi1, bits + 16);
    xi.coords(2) = CertifiedReal::from_rational(xi2, bits + 16);
    xi.tail_bound = CertifiedReal(bits + 16);
    return xi;
  };
  return t;
}

Target extremal_target(const BigInt &b, const BigInt &c) {
  auto seq = std::make_shared<ExtremalSequence>(seed_triple(b, c));
  Target t;
  t.name = "extremal (b, c) = (" + to_string(b) + ", " + to_string(c) + ")";
  t.enclose = [seq](long bits) { return limit_point(*seq, bits); };
  return t;
}

Target fixed_target(const CertifiedVec3 &xi, std::string name) {
  Target t;
  t.name = std::move(name);
  t.refinable = false;
  t.enclose = [xi](long) { return xi; };
  return t;
}

std::vector<MinimalPointRecord> enumerate_minimal(const Target &target, const BigInt &xmax, long initial_bits) {
  if (xmax < 1) throw InputError("xmax must be at least 1");
  if (xmax > BigInt(1) << 62) throw InputError("xmax is too large to scan");
  const auto limit = xmax.convert_to<unsigned long>();
  if (target.exact) return scan_exact(*target.exact, limit);
  long bits = initial_bits;
  for (;;) {
    if (bits > precision_cap())
      throw PrecisionCapError("enumerate_minimal: deciding all roundings needs more than " +
                              std::to_string(precision_cap()) + " bits");
    CertifiedVec3 xi = target.enclose(bits);
    if (auto records = scan(xi, limit)) return *records;
    if (!target.refinable) {
      throw PrecisionCapError("enumerate_minimal: the stored enclosure (about " +
                              std::to_string(bits_for_width(xi.xi1().width())) +
                              " bits) is too wide to decide every rounding up to xmax");
    }
    bits *= 2;
  }
}

std::vector<MinimalPointRecord> records_from_sequence(const ExtremalSequence &seq, const CertifiedVec3 &xi, long upto) {
  ExtremalSequence s = extend(seq, upto);
  std::vector<MinimalPointRecord> records;
  const long prec = xi.xi1().precision();
  for (long i = 0; i <= upto; ++i) {
    const IntegerVec3 &y = s.y(i);
    MinimalPointRecord r;
    r.x = y;
    r.X = y(0);
    auto x0 = CertifiedReal::from_integer(y(0), prec);
    for (int j = 0; j < 2; ++j)
      r.delta[j] = CertifiedReal::from_integer(y(j + 1), prec) - x0 * xi.coords(j + 1);
    r.L = max(abs(r.delta[0]), abs(r.delta[1]));
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<InvariantResult> check_records(const std::vector<MinimalPointRecord> &records) {
  InvariantResult increasing{"X_i strictly increasing", true, std::nullopt};
  InvariantResult decreasing{"L_i strictly decreasing", true, std::nullopt};
  InvariantResult primitive{"x_i primitive with x_i0 = X_i > 0", true, std::nullopt};
  auto fail = [](InvariantResult &r, long i) {
    if (r.passed) {
      r.passed = false;
      r.failed_index = i;
    }
  };
  for (std::size_t k = 0; k < records.size(); ++k) {
    const long i = static_cast<long>(k) + 1;
    const auto &r = records[k];
    if (!is_primitive(r.x) || r.x(0) != r.X || r.X <= 0) fail(primitive, i);
    if (k == 0) continue;
    if (!(records[k - 1].X < r.X)) fail(increasing, i);
    if (!r.L.certainly_less(records[k - 1].L)) fail(decreasing, i);
  }
  return {increasing, decreasing, primitive};
}

ExponentReport estimate_lambda(const std::vector<MinimalPointRecord> &records) {
  if (records.size() < 2) throw InputError("estimate_lambda needs at least two records");
  ExponentReport report;
  for (std::size_t k = 0; k + 1 < records.size(); ++k) {
    const auto &L = records[k].L;
    long prec = std::max(L.precision(), 128L);
    auto logX = log(CertifiedReal::from_integer(records[k + 1].X, prec));
    report.lambda_hats.push_back({static_cast<long>(k) + 1, -log(L) / logX});
  }
  const std::size_t n = report.lambda_hats.size();
  const std::size_t tail = (n + 2) / 3;
  report.summary = report.lambda_hats[n - tail].value;
  for (std::size_t k = n - tail; k < n; ++k) report.summary = min(report.summary, report.lambda_hats[k].value);

  const long prec = report.summary.precision();
  auto one = CertifiedReal::from_integer(BigInt(1), prec);
  auto two = CertifiedReal::from_integer(BigInt(2), prec);
  auto lambda = report.summary;
  if (!(one - lambda).contains_zero()) report.alpha = (two * lambda - one) / (one - lambda);
  if (!lambda.contains_zero()) report.theta = (one - lambda) / lambda;

  report.independence_set = independence_indices(records);

  // L_i X_{i+1}^lambda at the lower end of the summary.
  auto lambda_lo = CertifiedReal::from_mpfr(lambda.lo(), lambda.lo(), prec);
  std::optional<CertifiedReal> running;
  for (std::size_t k = 0; k + 1 < records.size(); ++k) {
    auto X = CertifiedReal::from_integer(records[k + 1].X, prec);
    auto value = records[k].L * exp(lambda_lo * log(X));
    running = running ? max(*running, value) : value;
    report.c_lower.push_back(*running);
  }
  return report;
}

std::vector<long> independence_indices(const std::vector<MinimalPointRecord> &records) {
  std::vector<long> out;
  for (std::size_t k = 1; k + 1 < records.size(); ++k) {
    if (det3(records[k - 1].x, records[k].x, records[k + 1].x) != 0) out.push_back(static_cast<long>(k) + 1);
  }
  return out;
}

std::vector<DeterminantCheck> determinant_bound_checks(const std::vector<MinimalPointRecord> &records) {
  std::vector<DeterminantCheck> out;
  for (long i : independence_indices(records)) {
    const auto &prev = records[static_cast<std::size_t>(i - 2)];
    const auto &cur = records[static_cast<std::size_t>(i - 1)];
    const auto &next = records[static_cast<std::size_t>(i)];
    DeterminantCheck c;
    c.i = i;
    c.det = det3(prev.x, cur.x, next.x);
    c.bound = 6 * Rational(next.X) * cur.L.upper() * prev.L.upper();
    c.holds = Rational(abs(c.det)) <= c.bound;
    out.push_back(std::move(c));
  }
  return out;
}

RigidityReport rigidity_check(const TernaryQuadraticForm &phi, const std::vector<MinimalPointRecord> &records) {
  RigidityReport report;
  report.independence_set = independence_indices(records);
  report.max_abs_phi = 0;
  const auto &I = report.independence_set;
  report.sufficient_data = I.size() >= 4;
  if (!report.sufficient_data) return report;
  auto y = [&](std::size_t k) -> const IntegerVec3 & { return records[static_cast<std::size_t>(I[k - 1] - 1)].x; };
  for (std::size_t k = 3; k + 1 <= I.size(); ++k) {
    RigidityStep step;
    step.k = static_cast<long>(k);
    step.record_index = I[k - 1];
    IntegerVec3 w = psi(phi, y(k), y(k - 2));
    step.integer_multiple = !w.isZero() && is_integer_multiple(w, y(k + 1), &step.factor);
    if (!step.integer_multiple) step.factor = 0;
    step.phi_value = eval_form(phi, y(k));
    report.max_abs_phi = std::max(report.max_abs_phi, BigInt(abs(step.phi_value)));
    if (!step.integer_multiple) report.failures.push_back(step.k);
    report.steps.push_back(std::move(step));
  }
  if (report.failures.empty())
    report.holds_from = report.steps.front().k;
  else if (report.failures.back() < report.steps.back().k)
    report.holds_from = report.failures.back() + 1;
  return report;
}

}  // namespace conic
