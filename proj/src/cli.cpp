#include "conic/cli.hpp"

#include "conic/io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace conic::cli {

namespace fs = std::filesystem;
using io::Json;

namespace {

struct Options {
  std::string form_file;
  std::string b, c;
  std::string xmax;
  long depth = 25;
  long precision = 256;
  long initial_bits = 128;
  std::string out_dir = ".";
  std::string format = "csv";
  std::string xi_file;
  std::string target_sqrt;
  std::string target_rational;
  std::string sequence_file;
};

Json read_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error &e) {
    throw InputError(path + ": " + e.what());
  }
}

std::ofstream open_output(const fs::path &path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

fs::path output_dir(const std::string &dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (!fs::is_directory(p)) throw InputError("cannot create output directory " + dir);
  return p;
}

std::pair<std::string, std::string> split_pair(const std::string &text, const char *flag) {
  auto comma = text.find(',');
  if (comma == std::string::npos) throw InputError(std::string(flag) + " expects two values separated by a comma");
  return {text.substr(0, comma), text.substr(comma + 1)};
}

int cmd_reduce(const Options &o, std::ostream &out) {
  TernaryQuadraticForm phi = io::form_from_json(read_json_file(o.form_file));
  CanonicalReduction r = reduce_form(phi);
  if (!reduction_holds(phi, r)) throw InvariantFailure("reduction identity does not hold");
  out << io::reduction_to_json(phi, r).dump(2) << '\n';
  return kOk;
}

int cmd_construct(const Options &o, std::ostream &out) {
  if (o.depth < 1) throw InputError("--depth must be positive");
  if (o.precision < 1) throw InputError("--precision must be positive");
  BigInt b = parse_bigint(o.b);
  BigInt c = parse_bigint(o.c);
  ExtremalSequence seq(seed_triple(b, c));
  seq.grow_to(o.depth);
  for (const auto &row : check_sequence(seq.form(), seq.ys(), seq.ts())) {
    if (!row.passed) throw InvariantFailure(row.name + " fails at index " + std::to_string(*row.failed_index));
  }
  CertifiedVec3 xi = limit_point(seq, o.precision);

  fs::path dir = output_dir(o.out_dir);
  auto seq_out = open_output(dir / "sequence.jsonl");
  io::write_sequence(seq_out, seq, o.depth);
  auto xi_out = open_output(dir / "xi.json");
  xi_out << io::xi_to_json(seq.seed(), o.depth, o.precision, xi).dump(2) << '\n';

  out << "form      " << seq.form().to_string() << '\n';
  out << "seed      m=" << seq.seed().m << " n=" << seq.seed().n << " m'=" << seq.seed().m2 << " n'=" << seq.seed().n2
      << " r=" << seq.seed().r << " t=" << seq.seed().t << '\n';
  out << "vectors   " << o.depth + 2 << " (indices -1.." << o.depth << "), all invariants hold\n";
  out << "xi1       " << xi.xi1().to_string(30) << '\n';
  out << "xi2       " << xi.xi2().to_string(30) << '\n';
  out << "wrote     " << (dir / "sequence.jsonl").string() << ", " << (dir / "xi.json").string() << '\n';
  return kOk;
}

int cmd_enumerate(const Options &o, std::ostream &out) {
  BigInt xmax = parse_bigint(o.xmax);
  if (xmax < 1) throw InputError("--xmax must be positive");
  if (o.format != "csv" && o.format != "json") throw InputError("--format must be csv or json");
  int sources = (!o.b.empty() || !o.c.empty()) + !o.xi_file.empty() + !o.target_sqrt.empty() + !o.target_rational.empty();
  if (sources != 1) throw InputError("give exactly one target: --b/--c, --xi, --target-sqrt or --target-rational");

  Target target;
  std::optional<TernaryQuadraticForm> rigidity_form;
  if (!o.b.empty() || !o.c.empty()) {
    if (o.b.empty() || o.c.empty()) throw InputError("--b and --c go together");
    BigInt b = parse_bigint(o.b), c = parse_bigint(o.c);
    target = extremal_target(b, c);
    rigidity_form = TernaryQuadraticForm::diagonal(b, c);
  } else if (!o.xi_file.empty()) {
    Json j = read_json_file(o.xi_file);
    target = fixed_target(io::xi_from_json(j), "enclosure from " + o.xi_file);
    if (j.contains("b") && j.contains("c"))
      rigidity_form = TernaryQuadraticForm::diagonal(io::json_bigint(j["b"], "b"), io::json_bigint(j["c"], "c"));
  } else if (!o.target_sqrt.empty()) {
    auto [p, q] = split_pair(o.target_sqrt, "--target-sqrt");
    BigInt P = parse_bigint(p), Q = parse_bigint(q);
    target = sqrt_target(P, Q);
    // (1, sqrt p, sqrt q) is a zero of (p + q) x0^2 - x1^2 - x2^2.
    rigidity_form = TernaryQuadraticForm(P + Q, BigInt(-1), BigInt(-1), BigInt(0), BigInt(0), BigInt(0));
  } else {
    auto [p, q] = split_pair(o.target_rational, "--target-rational");
    target = rational_target(parse_rational(p), parse_rational(q));
  }

  auto records = enumerate_minimal(target, xmax, o.initial_bits);
  for (const auto &row : check_records(records)) {
    if (!row.passed) throw InvariantFailure(row.name + " fails at record " + std::to_string(*row.failed_index));
  }
  std::optional<ExponentReport> report;
  if (records.size() >= 2) report = estimate_lambda(records);
  const ExponentReport *rep = report ? &*report : nullptr;

  fs::path dir = output_dir(o.out_dir);
  if (o.format == "csv") {
    auto f = open_output(dir / "records.csv");
    io::write_records_csv(f, records, rep);
  } else {
    auto f = open_output(dir / "records.json");
    f << io::records_json(records, rep).dump(2) << '\n';
  }
  Json summary = io::report_json(target, xmax, records, rep, rigidity_form);
  auto f = open_output(dir / "report.json");
  f << summary.dump(2) << '\n';

  out << "target    " << target.name << '\n';
  out << "records   " << records.size() << " up to X = " << xmax << '\n';
  if (rep) out << "lambda    " << rep->summary.to_string(8) << " (min over last third)\n";
  out << "indep     " << summary["independence_set"].size() << " indices\n";
  if (!summary["rigidity"].is_null()) {
    const Json &r = summary["rigidity"];
    if (!r["sufficient_data"].get<bool>())
      out << "rigidity  insufficient data (fewer than 4 independence indices)\n";
    else
      out << "rigidity  " << r["failures"].size() << " failures of " << r["steps"].size() << " steps\n";
  }
  out << "wrote     " << (dir / (o.format == "csv" ? "records.csv" : "records.json")).string() << ", "
      << (dir / "report.json").string() << '\n';
  return kOk;
}

int cmd_verify(const Options &o, std::ostream &out) {
  std::ifstream in(o.sequence_file);
  if (!in) throw InputError("cannot open " + o.sequence_file);
  io::SequenceFile file = io::read_sequence(in);
  std::optional<BigInt> b = file.b, c = file.c;
  if (!o.b.empty()) b = parse_bigint(o.b);
  if (!o.c.empty()) c = parse_bigint(o.c);
  if (!b || !c) throw InputError("the file has no header with b and c; pass --b and --c");
  TernaryQuadraticForm phi = TernaryQuadraticForm::diagonal(*b, *c);
  bool all = true;
  for (const auto &row : check_sequence(phi, file.ys, file.ts)) {
    all = all && row.passed;
    out << (row.passed ? "PASS  " : "FAIL  ") << row.name;
    if (!row.passed) out << "  [first failure at index " << *row.failed_index << "]";
    out << '\n';
  }
  out << (all ? "all invariants hold" : "invariant violations found") << " on " << file.ys.size() << " vectors\n";
  return all ? kOk : kInvariantFailure;
}

int cmd_pell(const Options &o, std::ostream &out) {
  out << io::pell_to_json(parse_bigint(o.b)).dump(2) << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Rational approximation to points on conics"};
  app.require_subcommand(1);
  Options o;

  auto *reduce = app.add_subcommand("reduce", "bring a ternary quadratic form to canonical shape");
  reduce->add_option("--form", o.form_file, "JSON file with coefficients a00 a11 a22 a01 a02 a12")->required();

  auto *construct = app.add_subcommand("construct", "build the extremal sequence and its limit point");
  construct->add_option("--b", o.b, "square-free b > 1")->required();
  construct->add_option("--c", o.c, "square-free c > 1, or 0 for x0^2 - b x1^2")->required();
  construct->add_option("--depth", o.depth, "last sequence index")->capture_default_str();
  construct->add_option("--precision", o.precision, "width 2^-BITS of the limit point enclosure")->capture_default_str();
  construct->add_option("--out", o.out_dir, "output directory")->capture_default_str();

  auto *enumerate = app.add_subcommand("enumerate", "minimal points, exponent estimates and rigidity report");
  enumerate->add_option("--b", o.b, "extremal target: b");
  enumerate->add_option("--c", o.c, "extremal target: c");
  enumerate->add_option("--xi", o.xi_file, "target enclosure written by construct");
  enumerate->add_option("--target-sqrt", o.target_sqrt, "target (1, sqrt P, sqrt Q), given as P,Q");
  enumerate->add_option("--target-rational", o.target_rational, "target (1, A, B) with rationals, given as A,B");
  enumerate->add_option("--xmax", o.xmax, "largest first coordinate scanned")->required();
  enumerate->add_option("--precision", o.initial_bits, "starting enclosure width in bits")->capture_default_str();
  enumerate->add_option("--out", o.out_dir, "output directory")->capture_default_str();
  enumerate->add_option("--format", o.format, "records format: csv or json")->capture_default_str();

  auto *verify = app.add_subcommand("verify", "check the recurrence identities of a sequence file");
  verify->add_option("file", o.sequence_file, "sequence JSONL file")->required();
  verify->add_option("--b", o.b, "override b from the file header");
  verify->add_option("--c", o.c, "override c from the file header");

  auto *pell = app.add_subcommand("pell", "fundamental solution of m^2 - b n^2 = 1");
  pell->add_option("--b", o.b, "non-square b >= 2")->required();

  std::vector<const char *> argv;
  for (const auto &a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*reduce) return cmd_reduce(o, out);
    if (*construct) return cmd_construct(o, out);
    if (*enumerate) return cmd_enumerate(o, out);
    if (*verify) return cmd_verify(o, out);
    if (*pell) return cmd_pell(o, out);
  } catch (const InputError &e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const MathRejection &e) {
    err << "rejected: " << e.what() << '\n';
    return kMathRejection;
  } catch (const PrecisionCapError &e) {
    err << "precision cap: " << e.what() << '\n';
    return kInvariantFailure;
  } catch (const Error &e) {
    err << "internal failure: " << e.what() << '\n';
    return kInvariantFailure;
  }
  return kInputError;
}

}  // namespace conic::cli
