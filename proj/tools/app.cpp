#include "app.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "nevlab/analytic.hpp"
#include "nevlab/locator.hpp"
#include "nevlab/nevanlinna.hpp"
#include "nevlab/parser.hpp"

namespace nevlab::cli {

using nlohmann::json;

namespace {

// Allowed parameters per check: integer names, then expression names.
struct ParamSchema {
  std::set<std::string> ints;
  std::set<std::string> exprs;
};

const ParamSchema& schema_for(const std::string& id) {
  static const std::map<std::string, ParamSchema> table{
      {"thm_b", {{"k"}, {}}},
      {"thm_c", {{"n", "p", "k"}, {"alpha", "a"}}},
      {"thm_d", {{"l", "n", "k"}, {}}},
      {"lem_32", {{"k"}, {}}},
      {"lem_33", {{}, {"b"}}},
      {"lem_35", {{}, {"b"}}},
  };
  static const ParamSchema none;
  auto it = table.find(id);
  return it == table.end() ? none : it->second;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw SpecError(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw SpecError("unknown field '" + key + "' in " + where);
  }
}

double positive_number(const json& v, const std::string& name) {
  if (!v.is_number()) throw SpecError(name + " must be a number");
  double x = v.get<double>();
  if (!(x > 0.0) || !std::isfinite(x)) throw SpecError(name + " must be positive");
  return x;
}

int integer(const json& v, const std::string& name) {
  if (!v.is_number_integer()) throw SpecError(name + " must be an integer");
  return v.get<int>();
}

std::string string_field(const json& v, const std::string& name) {
  if (!v.is_string()) throw SpecError(name + " must be a string");
  return v.get<std::string>();
}

DiffPolynomial parse_polynomial(const json& j) {
  reject_unknown(j, {"monomials"}, "polynomial");
  if (!j.contains("monomials") || !j["monomials"].is_array() || j["monomials"].empty()) {
    throw SpecError("polynomial.monomials must be a non-empty array");
  }
  std::vector<DiffMonomial> ms;
  for (const auto& m : j["monomials"]) {
    reject_unknown(m, {"coeff", "exponents"}, "monomial");
    if (!m.contains("exponents") || !m["exponents"].is_array()) {
      throw SpecError("monomial.exponents must be an array");
    }
    std::vector<int> q;
    for (const auto& e : m["exponents"]) q.push_back(integer(e, "monomial exponent"));
    auto coeff = parse_expr(m.contains("coeff") ? string_field(m["coeff"], "monomial.coeff") : "1");
    try {
      ms.emplace_back(coeff, q);
    } catch (const std::invalid_argument& e) {
      throw SpecError(e.what());
    }
  }
  return DiffPolynomial(std::move(ms));
}

CheckRequest parse_check(const json& j) {
  CheckRequest req;
  json params = json::object();
  if (j.is_string()) {
    req.id = j.get<std::string>();
  } else {
    reject_unknown(j, {"id", "params"}, "check");
    if (!j.contains("id")) throw SpecError("check needs an id");
    req.id = string_field(j["id"], "check.id");
    if (j.contains("params")) params = j["params"];
  }
  const auto& ids = check_ids();
  if (std::find(ids.begin(), ids.end(), req.id) == ids.end()) {
    throw SpecError("unknown check '" + req.id + "'");
  }
  const auto& schema = schema_for(req.id);
  if (!params.is_object()) throw SpecError("check.params must be an object");
  req.label = req.id;
  for (const auto& [key, value] : params.items()) {
    if (schema.ints.count(key)) {
      req.params.ints[key] = integer(value, req.id + "." + key);
      req.label += "_" + key + std::to_string(req.params.ints[key]);
    } else if (schema.exprs.count(key)) {
      auto text = value.is_number() ? value.dump() : string_field(value, req.id + "." + key);
      parse_expr(text);
      req.params.exprs[key] = text;
      req.label += "_" + key;
    } else {
      throw SpecError("unknown parameter '" + key + "' for " + req.id);
    }
  }
  return req;
}

void parse_tolerances(const json& j, CheckTolerances& tol) {
  reject_unknown(j, {"eps_verdict", "quad_tol", "equality_tol", "ring_rel", "merge_rel"}, "tolerances");
  if (j.contains("eps_verdict")) tol.eps_verdict = positive_number(j["eps_verdict"], "eps_verdict");
  if (j.contains("quad_tol")) {
    double q = positive_number(j["quad_tol"], "quad_tol");
    tol.nev.proximity.abs_tol = q;
    tol.nev.locator.quad.abs_tol = q;
  }
  if (j.contains("equality_tol")) tol.equality_tol = positive_number(j["equality_tol"], "equality_tol");
  if (j.contains("ring_rel")) tol.nev.locator.ring_rel = positive_number(j["ring_rel"], "ring_rel");
  if (j.contains("merge_rel")) tol.nev.locator.merge_rel = positive_number(j["merge_rel"], "merge_rel");
}

// Floating-point output keeps 12 significant digits.
std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

json jnum(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::strtod(num(x).c_str(), nullptr);
}

std::string timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Output {
  std::string path;
  std::string format;
  bool reproducible = false;
  std::string command;

  void write(const std::string& body) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SpecError("cannot open output file " + path);
    if (format == "csv" && !reproducible) out << "# nevlab " << command << " " << timestamp() << "\n";
    out << body;
    if (!out) throw SpecError("failed writing " + path);
  }
};

MeroExpr function_of(const RunSpec& spec) {
  if (!spec.function) throw SpecError("spec needs a function");
  auto f = parse_expr(*spec.function);
  MeroFunction check_class(f);
  return f;
}

int cmd_stats(const RunSpec& spec, const Output& out) {
  if (!spec.polynomial) throw SpecError("stats needs a polynomial");
  auto s = poly_stats(*spec.polynomial);
  if (out.format == "json") {
    json j{{"d", s.degree_upper},        {"degree_lower", s.degree_lower}, {"weight", s.weight},
           {"nu", s.nu},                 {"qstar", s.qstar},               {"qkstar", s.qkstar},
           {"k", s.order},               {"homogeneous", s.homogeneous},
           {"polynomial", to_string(*spec.polynomial)}};
    out.write(j.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << "d,degree_lower,weight,nu,qstar,qkstar,k,homogeneous\n"
       << s.degree_upper << ',' << s.degree_lower << ',' << s.weight << ',' << s.nu << ',' << s.qstar
       << ',' << s.qkstar << ',' << s.order << ',' << (s.homogeneous ? "true" : "false") << "\n";
    out.write(os.str());
  }
  return kPass;
}

int cmd_zeros(const RunSpec& spec, const Output& out) {
  MeroFunction f(function_of(spec));
  auto div = divisor_of(f, spec.radii.stop, Target::at(0.0), spec.tolerances.nev.locator);
  bool valid = div.zeros.valid && div.poles.valid;
  if (out.format == "json") {
    json j{{"radius", jnum(spec.radii.stop)}, {"valid", valid}};
    for (const auto* part : {&div.zeros, &div.poles}) {
      json pts = json::array();
      for (const auto& p : part->points) {
        pts.push_back({{"re", jnum(p.z.real())}, {"im", jnum(p.z.imag())}, {"mult", p.mult},
                       {"flagged", p.flagged}});
      }
      j[part == &div.zeros ? "zeros" : "poles"] = pts;
    }
    out.write(j.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << "kind,re,im,mult\n";
    for (const auto* part : {&div.zeros, &div.poles}) {
      for (const auto& p : part->points) {
        os << (part == &div.zeros ? "zero" : "pole") << ',' << num(p.z.real()) << ','
           << num(p.z.imag()) << ',' << p.mult << "\n";
      }
    }
    out.write(os.str());
  }
  return valid ? kPass : kNumericalFailure;
}

int cmd_nev(const RunSpec& spec, const Output& out, int threads) {
  MeroFunction f(function_of(spec));
  auto samples = radial_grid(f, grid(spec.radii), spec.tolerances.nev, threads);
  bool ok = true;
  if (out.format == "json") {
    json rows = json::array();
    for (const auto& s : samples) {
      json row{{"r", jnum(s.r)},       {"r_used", jnum(s.r_used)}, {"m", jnum(s.m)},
               {"N", jnum(s.N)},       {"T", jnum(s.T)},           {"perturbed", s.perturbed},
               {"ok", s.ok}};
      if (!s.ok) row["error"] = s.error;
      rows.push_back(row);
      ok = ok && s.ok;
    }
    out.write(rows.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << "r,m,N,T,perturbed_r\n";
    for (const auto& s : samples) {
      os << num(s.r) << ',' << num(s.m) << ',' << num(s.N) << ',' << num(s.T) << ','
         << num(s.r_used) << "\n";
      ok = ok && s.ok;
    }
    out.write(os.str());
  }
  return ok ? kPass : kNumericalFailure;
}

json report_json(const CheckRequest& req, const CheckReport& rep) {
  json constants = json::object();
  for (const auto& [k, v] : rep.constants) constants[k] = jnum(v);
  json rows = json::array();
  for (const auto& r : rep.rows) {
    json row{{"r", jnum(r.r)},     {"r_used", jnum(r.r_used)}, {"perturbed", r.perturbed},
             {"T", jnum(r.T)},     {"lhs", jnum(r.lhs)},       {"rhs", jnum(r.rhs)},
             {"residual", jnum(r.residual)}, {"ok", r.ok}};
    if (!r.ok) row["error"] = r.error;
    rows.push_back(row);
  }
  return json{{"check_id", rep.check_id},
              {"label", req.label},
              {"function", rep.function},
              {"verdict", to_string(rep.verdict)},
              {"statistic", jnum(rep.statistic)},
              {"worst_residual", jnum(rep.worst_residual)},
              {"eps", jnum(rep.eps)},
              {"equality", rep.equality},
              {"constants", constants},
              {"violations", rep.violations},
              {"note", rep.note},
              {"rows", rows}};
}

int cmd_check(const RunSpec& spec, const Output& out, int threads) {
  if (spec.checks.empty()) throw SpecError("check needs at least one entry in checks");
  if (spec.radii.count < 8) throw SpecError("check runs need radii.count >= 8");
  auto f = function_of(spec);
  auto radii = grid(spec.radii);
  CheckTolerances tol = spec.tolerances;
  tol.sampling.seed = spec.seed;

  std::vector<CheckReport> reports;
  for (const auto& req : spec.checks) {
    if (check_uses_polynomial(req.id) && !spec.polynomial) {
      throw SpecError(req.id + " needs a polynomial");
    }
    reports.push_back(check(req.id, f, spec.polynomial, req.params, radii, tol, threads));
  }

  if (out.format == "json") {
    json all = json::array();
    for (std::size_t i = 0; i < reports.size(); ++i) all.push_back(report_json(spec.checks[i], reports[i]));
    out.write(all.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << "check,verdict,r,r_used,perturbed,T,lhs,rhs,residual,ok\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto& rep = reports[i];
      for (const auto& r : rep.rows) {
        os << spec.checks[i].label << ',' << to_string(rep.verdict) << ',' << num(r.r) << ','
           << num(r.r_used) << ',' << (r.perturbed ? 1 : 0) << ',' << num(r.T) << ',' << num(r.lhs)
           << ',' << num(r.rhs) << ',' << num(r.residual) << ',' << (r.ok ? 1 : 0) << "\n";
      }
    }
    out.write(os.str());
  }

  // Residual series for plotting, one file per check.
  for (std::size_t i = 0; i < reports.size(); ++i) {
    std::ofstream dat(out.path + "." + spec.checks[i].label + ".dat", std::ios::binary);
    dat << "# r residual\n";
    for (const auto& r : reports[i].rows) dat << num(r.r) << ' ' << num(r.residual) << "\n";
  }

  bool fail = false, numerical = false, violation = false, all_vacuous = true;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& rep = reports[i];
    std::cout << spec.checks[i].label << ": " << to_string(rep.verdict);
    if (!rep.rows.empty()) std::cout << " (statistic " << num(rep.statistic) << ")";
    for (const auto& v : rep.violations) std::cout << "; " << v;
    if (!rep.note.empty()) std::cout << "; " << rep.note;
    std::cout << "\n";
    fail = fail || rep.verdict == Verdict::Fail;
    numerical = numerical || rep.verdict == Verdict::NumericalFailure;
    violation = violation || rep.verdict == Verdict::HypothesisViolation;
    all_vacuous = all_vacuous && rep.verdict == Verdict::Vacuous;
  }
  if (fail) return kCheckFailed;
  if (numerical) return kNumericalFailure;
  if (violation || all_vacuous) return kNotApplicable;
  return kPass;
}

}  // namespace

RunSpec parse_run_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("spec is not valid JSON: ") + e.what());
  }
  reject_unknown(j, {"function", "polynomial", "radii", "checks", "tolerances", "seed"}, "spec");
  RunSpec spec;
  if (j.contains("function")) {
    spec.function = string_field(j["function"], "function");
    parse_expr(*spec.function);
  }
  if (j.contains("polynomial")) spec.polynomial = parse_polynomial(j["polynomial"]);
  if (j.contains("radii")) {
    const auto& r = j["radii"];
    reject_unknown(r, {"start", "stop", "count", "spacing"}, "radii");
    if (r.contains("start")) spec.radii.start = positive_number(r["start"], "radii.start");
    if (r.contains("stop")) spec.radii.stop = positive_number(r["stop"], "radii.stop");
    if (r.contains("count")) spec.radii.count = integer(r["count"], "radii.count");
    if (r.contains("spacing")) spec.radii.spacing = string_field(r["spacing"], "radii.spacing");
  }
  if (!(spec.radii.start < spec.radii.stop)) throw SpecError("radii.start must be below radii.stop");
  if (spec.radii.count < 2) throw SpecError("radii.count must be at least 2");
  if (spec.radii.spacing != "log" && spec.radii.spacing != "linear") {
    throw SpecError("radii.spacing must be log or linear");
  }
  if (j.contains("checks")) {
    if (!j["checks"].is_array()) throw SpecError("checks must be an array");
    std::set<std::string> labels;
    for (const auto& c : j["checks"]) {
      auto req = parse_check(c);
      if (!labels.insert(req.label).second) throw SpecError("duplicate check " + req.label);
      spec.checks.push_back(std::move(req));
    }
  }
  if (j.contains("tolerances")) parse_tolerances(j["tolerances"], spec.tolerances);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw SpecError("seed must be a non-negative integer");
    spec.seed = j["seed"].get<std::uint64_t>();
  }
  return spec;
}

std::vector<double> grid(const RadiusSpec& radii) {
  return radii.spacing == "linear" ? linear_spaced(radii.start, radii.stop, radii.count)
                                   : log_spaced(radii.start, radii.stop, radii.count);
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Value distribution checks for differential polynomials"};
  app.require_subcommand(1);
  std::string spec_path, out_path, format;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  bool reproducible = false;
  for (const char* name : {"stats", "zeros", "nev", "check"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--spec", spec_path, "run specification (JSON)")->required();
    sub->add_option("--out", out_path, "output file")->required();
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--reproducible", reproducible, "omit the timestamp header");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kPass : kSpecError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    std::ifstream in(spec_path, std::ios::binary);
    if (!in) throw SpecError("cannot read spec file " + spec_path);
    std::stringstream buf;
    buf << in.rdbuf();
    RunSpec spec = parse_run_spec(buf.str());
    if (const char* env = std::getenv("NEVLAB_SEED")) {
      char* end = nullptr;
      unsigned long long s = std::strtoull(env, &end, 0);
      if (end == env || *end != '\0') throw SpecError("NEVLAB_SEED must be an integer");
      spec.seed = s;
    }
    Output out{out_path, format.empty() ? (command == "stats" ? "json" : "csv") : format, reproducible,
               command};
    if (command == "stats") return cmd_stats(spec, out);
    if (command == "zeros") return cmd_zeros(spec, out);
    if (command == "nev") return cmd_nev(spec, out, threads);
    return cmd_check(spec, out, threads);
  } catch (const SpecError& e) {
    std::cerr << "nevlab: " << e.what() << "\n";
    return kSpecError;
  } catch (const ParseError& e) {
    std::cerr << "nevlab: " << e.what() << "\n";
    return kSpecError;
  } catch (const ClassError& e) {
    std::cerr << "nevlab: " << e.what() << "\n";
    return kSpecError;
  } catch (const UnknownCheck& e) {
    std::cerr << "nevlab: " << e.what() << "\n";
    return kSpecError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "nevlab: " << e.what() << "\n";
    return kSpecError;
  } catch (const Error& e) {
    std::cerr << "nevlab: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

}  // namespace nevlab::cli
