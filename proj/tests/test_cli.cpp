#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "conic/cli.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "conic-approx");
  std::ostringstream out, err;
  int code = conic::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string &name) {
  fs::path p = fs::temp_directory_path() / ("conic_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines_of(const fs::path &p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

void write_file(const fs::path &p, const std::string &text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST_CASE("construct then verify") {
  auto dir = scratch("construct");
  auto r = run({"construct", "--b", "2", "--c", "3", "--depth", "25", "--out", dir.string()});
  REQUIRE(r.code == 0);
  auto lines = lines_of(dir / "sequence.jsonl");
  REQUIRE(lines.size() == 28);  // header plus indices -1..25
  Json header = Json::parse(lines[0]);
  CHECK(header["b"] == "2");
  CHECK(header["c"] == "3");
  Json third = Json::parse(lines[4]);
  CHECK(third["i"] == 2);
  CHECK(third["y"] == Json::array({"78407", "55440", "396"}));
  CHECK(third["t"] == "26922");
  CHECK(third["phi"] == "1");

  Json xi = Json::parse(slurp(dir / "xi.json"));
  CHECK(xi["precision"] == 256);
  CHECK(xi["xi1"]["decimal"].get<std::string>().rfind("7.0707972508", 0) == 0);

  auto v = run({"verify", (dir / "sequence.jsonl").string()});
  CHECK(v.code == 0);
  CHECK(v.out.find("FAIL") == std::string::npos);
  CHECK(v.out.find("all invariants hold on 27 vectors") != std::string::npos);
}

TEST_CASE("verify reports the index of a perturbed vector") {
  auto dir = scratch("perturb");
  REQUIRE(run({"construct", "--b", "2", "--c", "3", "--depth", "10", "--out", dir.string()}).code == 0);
  auto lines = lines_of(dir / "sequence.jsonl");
  // Line k + 2 holds index k.
  Json row = Json::parse(lines[7 + 2]);
  std::string x1 = row["y"][1];
  row["y"][1] = x1 + "1";
  lines[7 + 2] = row.dump();
  std::string joined;
  for (const auto &l : lines) joined += l + "\n";
  write_file(dir / "bad.jsonl", joined);
  auto v = run({"verify", (dir / "bad.jsonl").string()});
  CHECK(v.code == 4);
  CHECK(v.out.find("FAIL  phi(y_i) = 1  [first failure at index 7]") != std::string::npos);
}

TEST_CASE("verify input errors") {
  auto dir = scratch("verify_errors");
  write_file(dir / "empty.jsonl", "");
  CHECK(run({"verify", (dir / "empty.jsonl").string()}).code == 2);
  write_file(dir / "junk.jsonl", "{not json\n");
  CHECK(run({"verify", (dir / "junk.jsonl").string()}).code == 2);
  CHECK(run({"verify", (dir / "missing.jsonl").string()}).code == 2);
}

TEST_CASE("argument errors map to exit code 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"construct", "--b", "4", "--c", "3", "--out", scratch("b4").string()}).code == 2);
  CHECK(run({"construct", "--b", "2"}).code == 2);
  CHECK(run({"construct", "--b", "two", "--c", "3"}).code == 2);
  CHECK(run({"enumerate", "--target-sqrt", "2,3", "--xmax", "0"}).code == 2);
  CHECK(run({"enumerate", "--xmax", "10"}).code == 2);
  CHECK(run({"enumerate", "--b", "2", "--c", "3", "--target-sqrt", "2,3", "--xmax", "10"}).code == 2);
  CHECK(run({"pell", "--b", "9"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
}

TEST_CASE("reduce") {
  auto dir = scratch("reduce");
  write_file(dir / "definite.json", R"({"a00": 1, "a11": 1, "a22": 1})");
  auto d = run({"reduce", "--form", (dir / "definite.json").string()});
  CHECK(d.code == 3);
  CHECK_FALSE(d.err.empty());

  write_file(dir / "parabola.json", R"({"a00": 1, "a11": -2, "a22": -2})");
  auto p = run({"reduce", "--form", (dir / "parabola.json").string()});
  REQUIRE(p.code == 0);
  Json pj = Json::parse(p.out);
  CHECK(pj["case"] == "parabola");
  CHECK(pj["identity_verified"] == true);

  write_file(dir / "conic.json", R"({"a02": 1, "a11": -1})");
  auto q = run({"reduce", "--form", (dir / "conic.json").string()});
  REQUIRE(q.code == 0);
  CHECK(Json::parse(q.out)["case"] == "parabola");

  write_file(dir / "aniso.json", R"({"a00": "1", "a11": "-2", "a22": "-3"})");
  auto a = run({"reduce", "--form", (dir / "aniso.json").string()});
  REQUIRE(a.code == 0);
  Json aj = Json::parse(a.out);
  CHECK(aj["case"] == "anisotropic");
  CHECK(aj["b"] == "2");
  CHECK(aj["c"] == "3");

  write_file(dir / "unknown.json", R"({"a00": 1, "a33": 1})");
  CHECK(run({"reduce", "--form", (dir / "unknown.json").string()}).code == 2);
}

TEST_CASE("enumerate is deterministic") {
  auto first = scratch("enum_a"), second = scratch("enum_b");
  REQUIRE(run({"enumerate", "--target-sqrt", "2,3", "--xmax", "20000", "--out", first.string()}).code == 0);
  REQUIRE(run({"enumerate", "--target-sqrt", "2,3", "--xmax", "20000", "--out", second.string()}).code == 0);
  CHECK(slurp(first / "records.csv") == slurp(second / "records.csv"));
  CHECK(slurp(first / "report.json") == slurp(second / "report.json"));
  auto lines = lines_of(first / "records.csv");
  REQUIRE(lines.size() >= 3);
  CHECK(lines[0] == "i,X_i,x1,x2,L_i_lo,L_i_hi,lambda_hat_i");
  CHECK(lines[1].rfind("1,1,1,2,", 0) == 0);

  auto json_dir = scratch("enum_json");
  REQUIRE(run({"enumerate", "--target-sqrt", "2,3", "--xmax", "20000", "--format", "json", "--out",
               json_dir.string()})
              .code == 0);
  Json records = Json::parse(slurp(json_dir / "records.json"));
  CHECK(records.size() == lines.size() - 1);
}

TEST_CASE("enumerate from a stored enclosure reproduces the construction") {
  auto dir = scratch("enum_xi");
  REQUIRE(run({"construct", "--b", "2", "--c", "3", "--depth", "8", "--out", dir.string()}).code == 0);
  auto e = run({"enumerate", "--xi", (dir / "xi.json").string(), "--xmax", "100000", "--out", dir.string()});
  REQUIRE(e.code == 0);
  std::string csv = slurp(dir / "records.csv");
  CHECK(csv.find(",3,2,0,") != std::string::npos);
  CHECK(csv.find(",198,140,1,") != std::string::npos);
  CHECK(csv.find(",78407,55440,396,") != std::string::npos);
  Json report = Json::parse(slurp(dir / "report.json"));
  CHECK(report["record_count"] == 6);
}

TEST_CASE("enumerate the extremal target and the control target") {
  auto dir = scratch("enum_extremal");
  REQUIRE(run({"enumerate", "--b", "2", "--c", "3", "--xmax", "100000", "--out", dir.string()}).code == 0);
  Json report = Json::parse(slurp(dir / "report.json"));
  CHECK(std::stod(report["summary"]["lo"].get<std::string>()) > 0.55);

  auto control = scratch("enum_control");
  auto r = run({"enumerate", "--target-sqrt", "2,3", "--xmax", "100000", "--out", control.string()});
  REQUIRE(r.code == 0);
  Json rig = Json::parse(slurp(control / "report.json"))["rigidity"];
  REQUIRE(rig["sufficient_data"] == true);
  CHECK(rig["failures"].size() > 0);
  CHECK(r.out.find("failures of") != std::string::npos);
}

TEST_CASE("enumerate rejects a rational target that is hit exactly") {
  auto dir = scratch("enum_rational");
  auto r = run({"enumerate", "--target-rational", "1/2,1/3", "--xmax", "100", "--out", dir.string()});
  CHECK(r.code == 3);
  CHECK(r.err.find("(6, 3, 2)") != std::string::npos);
}

TEST_CASE("pell") {
  auto r = run({"pell", "--b", "61"});
  REQUIRE(r.code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["m"] == "1766319049");
  CHECK(j["n"] == "226153980");
}
