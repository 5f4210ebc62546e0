#include <catch_amalgamated.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "app.hpp"

using namespace nevlab;
using namespace nevlab::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  static fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("nevlab_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_spec(const std::string& name, const json& spec) {
  auto p = scratch() / (name + ".json");
  std::ofstream(p) << spec.dump();
  return p;
}

int run(const std::string& cmd, const fs::path& spec, const fs::path& out,
        std::vector<std::string> extra = {}) {
  std::vector<std::string> args{"nevlab", cmd, "--spec", spec.string(), "--out", out.string()};
  args.insert(args.end(), extra.begin(), extra.end());
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

json monomial(std::vector<int> q, const std::string& coeff = "1") {
  return {{"coeff", coeff}, {"exponents", q}};
}

const json kExampleOne = {{"monomials", {monomial({2, 1, 2, 2}), monomial({2, 2, 1, 2}, "-1")}}};

std::size_t count_fields(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("spec parsing is fail-closed") {
  CHECK_NOTHROW(parse_run_spec(R"j({"function": "exp(z)"})j"));
  CHECK_THROWS_AS(parse_run_spec(R"j({"function": "exp(z)", "fucntion": "z"})j"), SpecError);
  CHECK_THROWS_AS(parse_run_spec(R"j({"radii": {"start": 2, "stop": 40, "cnt": 9}})j"), SpecError);
  CHECK_THROWS_AS(parse_run_spec(R"j({"radii": {"start": 40, "stop": 2}})j"), SpecError);
  CHECK_THROWS_AS(parse_run_spec(R"j({"radii": {"spacing": "cubic"}})j"), SpecError);
  CHECK_THROWS_AS(parse_run_spec(R"j({"tolerances": {"eps_verdict": -1}})j"), SpecError);
  CHECK_THROWS_AS(parse_run_spec(R"j({"tolerances": {"eps": 0.1}})j"), SpecError);
  CHECK_THROWS_AS(parse_run_spec(R"j({"checks": ["thm_z"]})j"), SpecError);
  CHECK_THROWS_AS(parse_run_spec(R"j({"checks": [{"id": "thm_b", "params": {"l": 3}}]})j"), SpecError);
  CHECK_THROWS_AS(parse_run_spec(R"j({"checks": [{"id": "thm_b", "params": {"k": 2.5}}]})j"), SpecError);
  CHECK_THROWS_AS(parse_run_spec(R"j({"checks": ["thm_a", "thm_a"]})j"), SpecError);
  CHECK_THROWS_AS(parse_run_spec(R"j({"seed": -4})j"), SpecError);
  CHECK_THROWS_AS(parse_run_spec(R"j({"polynomial": {"monomials": []}})j"), SpecError);
  CHECK_THROWS_AS(parse_run_spec(R"j({"polynomial": {"monomials": [{"exponents": [0, 0]}]}})j"), SpecError);
  CHECK_THROWS_AS(parse_run_spec(R"j({"polynomial": {"monomials": [{"coeff": "exp(z)", "exponents": [1]}]}})j"),
                  SpecError);
  CHECK_THROWS_AS(parse_run_spec(R"j({"function": "exp(z"})j"), ParseError);
  CHECK_THROWS_AS(parse_run_spec("{not json"), SpecError);

  auto spec = parse_run_spec(R"j({
    "function": "tan(z)",
    "radii": {"start": 1, "stop": 10, "count": 9, "spacing": "linear"},
    "checks": ["thm_a", {"id": "lem_32", "params": {"k": 3}}, {"id": "thm_c", "params": {"alpha": 2, "a": "z"}}],
    "tolerances": {"eps_verdict": 0.1, "quad_tol": 1e-8, "equality_tol": 1e-3, "ring_rel": 2e-4, "merge_rel": 1e-6},
    "seed": 99})j");
  CHECK(spec.function == "tan(z)");
  CHECK(grid(spec.radii) == std::vector<double>{1, 2.125, 3.25, 4.375, 5.5, 6.625, 7.75, 8.875, 10});
  REQUIRE(spec.checks.size() == 3);
  CHECK(spec.checks[1].label == "lem_32_k3");
  CHECK(spec.checks[1].params.ints.at("k") == 3);
  CHECK(spec.checks[2].params.exprs.at("alpha") == "2");
  CHECK(spec.tolerances.eps_verdict == 0.1);
  CHECK(spec.tolerances.nev.proximity.abs_tol == 1e-8);
  CHECK(spec.tolerances.equality_tol == 1e-3);
  CHECK(spec.tolerances.nev.locator.ring_rel == 2e-4);
  CHECK(spec.tolerances.nev.locator.merge_rel == 1e-6);
  CHECK(spec.seed == 99);
}

TEST_CASE("stats reports the polynomial statistics") {
  auto spec = write_spec("stats", {{"polynomial", kExampleOne}});
  auto out = scratch() / "stats_out.json";
  REQUIRE(run("stats", spec, out) == kPass);
  auto j = json::parse(read(out));
  CHECK(j["d"] == 7);
  CHECK(j["nu"] == 11);
  CHECK(j["qstar"] == 2);
  CHECK(j["k"] == 3);
  CHECK(j["homogeneous"] == true);

  auto csv = scratch() / "stats.csv";
  REQUIRE(run("stats", spec, csv, {"--format", "csv", "--reproducible"}) == kPass);
  auto ls = lines(read(csv));
  REQUIRE(ls.size() == 2);
  CHECK(ls[1] == "7,7,18,11,2,2,3,true");

  CHECK(run("stats", write_spec("nopoly", {{"function", "exp(z)"}}), out) == kSpecError);
}

TEST_CASE("zeros lists the divisor") {
  auto spec = write_spec("zeros", {{"function", "exp(3*z)-1"}, {"radii", {{"start", 1}, {"stop", 3}}}});
  auto out = scratch() / "zeros.csv";
  REQUIRE(run("zeros", spec, out, {"--reproducible"}) == kPass);
  auto ls = lines(read(out));
  REQUIRE(ls.size() == 4);
  CHECK(ls[0] == "kind,re,im,mult");
  for (std::size_t i = 1; i < ls.size(); ++i) CHECK(count_fields(ls[i]) == 4);

  auto js = scratch() / "zeros.json";
  REQUIRE(run("zeros", spec, js, {"--format", "json"}) == kPass);
  auto j = json::parse(read(js));
  CHECK(j["zeros"].size() == 3);
  CHECK(j["poles"].empty());
  CHECK(j["valid"] == true);

  auto poles = write_spec("poles", {{"function", "tan(z)"}, {"radii", {{"start", 1}, {"stop", 4}}}});
  REQUIRE(run("zeros", poles, js, {"--format", "json"}) == kPass);
  j = json::parse(read(js));
  CHECK(j["zeros"].size() == 3);  // 0, +-pi
  CHECK(j["poles"].size() == 2);  // +-pi/2
}

TEST_CASE("nev writes one row per radius") {
  auto spec = write_spec("nev", {{"function", "exp(z)"}, {"radii", {{"start", 2}, {"stop", 40}, {"count", 10}}}});
  auto out = scratch() / "nev.csv";
  REQUIRE(run("nev", spec, out) == kPass);
  auto ls = lines(read(out));
  REQUIRE(ls.size() == 12);
  CHECK(ls[0].rfind("# nevlab nev ", 0) == 0);
  CHECK(ls[1] == "r,m,N,T,perturbed_r");
  for (std::size_t i = 2; i < ls.size(); ++i) CHECK(count_fields(ls[i]) == 5);
  CHECK(ls.back() == "40,12.7323954474,0,12.7323954474,40");

  auto js = scratch() / "nev.json";
  REQUIRE(run("nev", spec, js, {"--format", "json"}) == kPass);
  auto j = json::parse(read(js));
  REQUIRE(j.size() == 10);
  CHECK(j[9]["T"].get<double>() == 12.7323954474);

  CHECK(run("nev", write_spec("bad", {{"function", "exp(1/z)"}}), out) == kSpecError);
  CHECK(run("nev", write_spec("badparse", {{"function", "exp(z"}}), out) == kSpecError);
}

TEST_CASE("check reports, plot files and exit codes") {
  json base{{"function", "exp(z)"}, {"polynomial", {{"monomials", {monomial({2, 0, 2})}}}}};

  json pass = base;
  pass["checks"] = {"thm_1", "thm_e", "thm_a"};
  auto spec = write_spec("check_pass", pass);
  auto out = scratch() / "check.json";
  REQUIRE(run("check", spec, out, {"--format", "json"}) == kPass);
  auto j = json::parse(read(out));
  REQUIRE(j.size() == 3);
  for (const auto& rep : j) {
    CHECK(rep["verdict"] == "pass");
    CHECK(rep["rows"].size() == 32);
    for (const char* key : {"check_id", "verdict", "worst_residual", "rows", "statistic", "constants"}) {
      CHECK(rep.contains(key));
    }
  }
  CHECK(j[0]["rows"] == j[1]["rows"]);
  auto dat = lines(read(out.string() + ".thm_1.dat"));
  REQUIRE(dat.size() == 33);
  CHECK(dat[0] == "# r residual");

  auto csv = scratch() / "check.csv";
  REQUIRE(run("check", spec, csv, {"--reproducible"}) == kPass);
  auto ls = lines(read(csv));
  REQUIRE(ls.size() == 1 + 3 * 32);
  CHECK(ls[0] == "check,verdict,r,r_used,perturbed,T,lhs,rhs,residual,ok");
  for (const auto& l : ls) CHECK(count_fields(l) == 10);

  json fail = base;
  fail["checks"] = {"thm_1", "lem_35"};
  CHECK(run("check", write_spec("check_fail", fail), csv) == kCheckFailed);

  json violation = base;
  violation["polynomial"] = {{"monomials", {monomial({1, 1})}}};
  violation["checks"] = {"thm_1"};
  CHECK(run("check", write_spec("check_violation", violation), csv) == kNotApplicable);

  json vacuous{{"function", "exp(z)"}, {"polynomial", kExampleOne}, {"checks", {"thm_1"}}};
  CHECK(run("check", write_spec("check_vacuous", vacuous), csv) == kNotApplicable);
  json mixed = vacuous;
  mixed["checks"] = {"thm_1", "thm_a"};
  CHECK(run("check", write_spec("check_mixed", mixed), csv) == kPass);

  json numerical{{"function", "exp(z^2)"},
                 {"checks", {{{"id", "thm_c"}, {"params", {{"n", 2}, {"p", 1}, {"k", 1}}}}}}};
  CHECK(run("check", write_spec("check_numerical", numerical), csv) == kNumericalFailure);

  json missing = base;
  missing.erase("polynomial");
  missing["checks"] = {"thm_1"};
  CHECK(run("check", write_spec("check_missing", missing), csv) == kSpecError);
  json few = pass;
  few["radii"] = {{"count", 6}};
  CHECK(run("check", write_spec("check_few", few), csv) == kSpecError);
  CHECK(run("check", scratch() / "does_not_exist.json", csv) == kSpecError);
  CHECK(run("check", spec, csv, {"--format", "xml"}) == kSpecError);
}

TEST_CASE("reports are deterministic") {
  json s{{"function", "tan(z)"},
         {"checks", {{{"id", "lem_32"}, {"params", {{"k", 2}}}}, "thm_a"}}};
  auto spec = write_spec("determinism", s);
  auto a = scratch() / "det_a.csv", b = scratch() / "det_b.csv";
  REQUIRE(run("check", spec, a, {"--reproducible", "--threads", "1"}) == kPass);
  REQUIRE(run("check", spec, b, {"--reproducible", "--threads", "3"}) == kPass);
  CHECK(read(a) == read(b));
  CHECK(read(a).front() != '#');
}

TEST_CASE("seed override from the environment") {
  auto spec = write_spec("seed", {{"polynomial", kExampleOne}, {"seed", 7}});
  auto out = scratch() / "seed_out.json";
  ::setenv("NEVLAB_SEED", "12345", 1);
  CHECK(run("stats", spec, out) == kPass);
  ::setenv("NEVLAB_SEED", "twelve", 1);
  CHECK(run("stats", spec, out) == kSpecError);
  ::unsetenv("NEVLAB_SEED");
}

TEST_CASE("the installed binary behaves like run_cli") {
  auto spec = write_spec("binary", {{"function", "exp(z)"},
                                    {"polynomial", {{"monomials", {monomial({2, 0, 2})}}}},
                                    {"checks", {"thm_1"}}});
  auto out = scratch() / "binary.csv";
  std::string cmd = std::string(NEVLAB_CLI) + " check --spec " + spec.string() + " --out " + out.string() +
                    " --reproducible > /dev/null";
  int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == 0);
  std::string bad = std::string(NEVLAB_CLI) + " frobnicate 2> /dev/null";
  CHECK(WEXITSTATUS(std::system(bad.c_str())) == 3);
}
