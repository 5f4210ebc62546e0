#include "nevlab/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "nevlab/error.hpp"
#include "nevlab/identity.hpp"
#include "nevlab/parallel.hpp"
#include "nevlab/parser.hpp"

namespace nevlab {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Vacuous: return "vacuous";
    case Verdict::HypothesisViolation: return "hypothesis_violation";
    case Verdict::NumericalFailure: return "numerical_failure";
  }
  return "?";
}

int CheckParams::get_int(const std::string& name, int fallback) const {
  auto it = ints.find(name);
  return it == ints.end() ? fallback : it->second;
}

std::string CheckParams::get_expr(const std::string& name, const std::string& fallback) const {
  auto it = exprs.find(name);
  return it == exprs.end() ? fallback : it->second;
}

const std::vector<std::string>& check_ids() {
  static const std::vector<std::string> ids{"thm_a", "thm_b", "thm_c",  "thm_d",  "thm_e",
                                            "thm_f", "thm_g", "thm_1",  "thm_2",  "thm_3",
                                            "lem_31", "lem_32", "lem_33", "lem_35", "lem_36"};
  return ids;
}

bool check_uses_polynomial(const std::string& id) {
  static const std::set<std::string> uses{"thm_e", "thm_f", "thm_g", "thm_1", "thm_2",
                                          "thm_3", "lem_33", "lem_35", "lem_36"};
  return uses.count(id) > 0;
}

double top_quartile_median(const std::vector<double>& residuals) {
  if (residuals.size() < 8) {
    throw TooFewRows("verdict needs at least 8 rows, got " + std::to_string(residuals.size()));
  }
  std::size_t q = (residuals.size() + 3) / 4;
  std::vector<double> top(residuals.end() - static_cast<std::ptrdiff_t>(q), residuals.end());
  std::sort(top.begin(), top.end());
  return q % 2 ? top[q / 2] : 0.5 * (top[q / 2 - 1] + top[q / 2]);
}

Verdict verdict(const std::vector<double>& residuals, double eps) {
  return top_quartile_median(residuals) <= eps ? Verdict::Pass : Verdict::Fail;
}

Verdict equality_verdict(const std::vector<double>& differences, double tol) {
  if (differences.size() < 8) {
    throw TooFewRows("verdict needs at least 8 rows, got " + std::to_string(differences.size()));
  }
  for (double d : differences) {
    if (!(std::abs(d) <= tol)) return Verdict::Fail;
  }
  return Verdict::Pass;
}

namespace {

using Mode = CountingMode;

// Divisors of the functions a check needs, computed once on the largest disk.
class Engine {
 public:
  explicit Engine(const NevanlinnaOptions& opt) : opt_(opt) {}

  /// a-points of h (poles when a is infinity).
  std::size_t points(const MeroExpr& h, const Target& a) {
    std::string key = to_string(h) + "|" + a.to_string();
    for (std::size_t i = 0; i < sources_.size(); ++i) {
      if (sources_[i].key == key) return i;
    }
    sources_.push_back({key, MeroFunction(h), a, {}});
    return sources_.size() - 1;
  }
  std::size_t zeros(const MeroExpr& h) { return points(h, Target::at(0.0)); }
  std::size_t poles(const MeroExpr& h) { return points(h, Target::infinity()); }
  /// Registers T(r, h); radii are kept away from the poles of h.
  std::size_t characteristic(const MeroExpr& h) {
    auto i = poles(h);
    chars_.insert(i);
    return i;
  }

  void prepare(double r_max, int threads) {
    parallel_for(sources_.size(), threads, [&](std::size_t i) {
      auto& s = sources_[i];
      s.div = divisor_for_grid(s.fn, s.target, r_max, opt_.locator);
      if (!s.div.zeros.valid || !s.div.poles.valid) {
        throw NonIntegerResidual("divisor search did not conserve the count for " + s.key, 0.0);
      }
    });
  }

  const Divisor& divisor(std::size_t i) const { return sources_[i].div.zeros; }

  double N(std::size_t i, double r, Mode m = Mode::Full, int k = 0) const {
    return counting(divisor(i), r, CountingSpec{sources_[i].target, m, k}, opt_.locator.merge_rel);
  }

  double N_of(const Divisor& d, double r, Mode m = Mode::Full, int k = 0) const {
    return counting(d, r, CountingSpec{Target::at(0.0), m, k}, opt_.locator.merge_rel);
  }

  double T(std::size_t i, double r) const {
    return proximity(sources_[i].fn, r, opt_.proximity) + N(i, r);
  }

  double radius(double r) const {
    std::vector<const Divisor*> avoid;
    for (auto i : chars_) avoid.push_back(&divisor(i));
    return choose_radius(r, avoid, opt_.locator.ring_rel, opt_.perturb_rel);
  }

  double merge_rel() const { return opt_.locator.merge_rel; }

 private:
  struct Source {
    std::string key;
    MeroFunction fn;
    Target target;
    DivisorPair div;
  };
  const NevanlinnaOptions& opt_;
  std::vector<Source> sources_;
  std::set<std::size_t> chars_;
};

struct Sides {
  double lhs, rhs;
};

struct Plan {
  std::vector<std::string> violations;
  std::map<std::string, double> constants;
  bool equality = false;
  std::optional<MeroExpr> must_be_nonzero;  // vacuous when this vanishes identically
  std::string note;
  // Registers sources on the engine and returns the row evaluator.
  std::function<std::function<Sides(const Engine&, double, double)>(Engine&)> build;
};

// Parses a rational small-function parameter; records a violation when it
// is not rational or vanishes.
MeroExpr small_function(const CheckParams& params, const std::string& name, Plan& plan) {
  auto e = parse_expr(params.get_expr(name, "1"));
  if (!is_rational(e)) plan.violations.push_back(name + " is not a rational function");
  auto z = is_identically_zero(e);
  if (z == ZeroVerdict::Zero || z == ZeroVerdict::ProbablyZero) {
    plan.violations.push_back(name + " vanishes identically");
  }
  return e;
}

void require_int(Plan& plan, const std::string& name, int value, int min) {
  plan.constants[name] = value;
  if (value < min) {
    plan.violations.push_back(name + "=" + std::to_string(value) + " < " + std::to_string(min));
  }
}

MeroExpr nth_derivative(const MeroExpr& f, int k) { return differentiate(f, k); }

// T(r, f) <= c * N^{mode}(r, 1/(h - 1))
Plan compare_with_one_points(const MeroExpr& f, MeroExpr h, double c, Mode mode) {
  Plan plan;
  plan.constants["multiplier"] = c;
  plan.build = [=](Engine& eng) {
    auto tf = eng.characteristic(f);
    auto ones = eng.points(h, Target::at(1.0));
    return std::function<Sides(const Engine&, double, double)>(
        [=](const Engine& e, double r, double) { return Sides{e.T(tf, r), c * e.N(ones, r, mode)}; });
  };
  return plan;
}

Plan plan_for(const std::string& id, const MeroExpr& f, const std::optional<DiffPolynomial>& P,
              const CheckParams& params) {
  Plan plan;
  std::optional<PolyStats> st;
  if (check_uses_polynomial(id)) {
    if (!P) throw std::invalid_argument("check " + id + " needs a differential polynomial");
    plan.violations = validate_hypotheses(*P, id);
    st = poly_stats(*P);
    plan.constants["d"] = st->degree_upper;
    plan.constants["nu"] = st->nu;
    plan.constants["qstar"] = st->qstar;
    plan.constants["qkstar"] = st->qkstar;
    plan.constants["k"] = st->order;
    plan.constants["Gamma"] = st->weight;
  }
  if (plan.violations.empty() && st) {
    // Constants are only meaningful once the hypotheses hold.
    const int d = st->degree_upper, nu = st->nu, qs = st->qstar, k = st->order;
    MeroExpr Pf = apply(*P, f);
    Plan base = std::move(plan);
    plan = Plan{};
    if (id == "thm_1" || id == "thm_e") {
      plan = compare_with_one_points(f, Pf, 1.0 / (qs - 1), Mode::Full);
    } else if (id == "thm_2" || id == "thm_f") {
      plan = compare_with_one_points(f, Pf, 1.0 / (d - nu - 2), Mode::Reduced);
    } else if (id == "thm_3") {
      plan = compare_with_one_points(f, Pf, double(k + 1) / (d + k * qs - nu - 2 * (k + 1)),
                                     Mode::Reduced);
      if (qs < 3) plan.note = "q*=" + std::to_string(qs) + " < 3";
    } else if (id == "thm_g") {
      int q0 = P->monomials().front().q(0);
      plan = compare_with_one_points(f, Pf, 1.0 / (d - nu - 4 + q0), Mode::Reduced);
    } else if (id == "lem_33") {
      auto b = small_function(params, "b", base);
      MeroExpr bP = b * Pf;
      double gamma = st->weight;
      plan.constants["multiplier"] = gamma;
      plan.build = [=](Engine& eng) {
        auto tb = eng.characteristic(bP);
        return std::function<Sides(const Engine&, double, double)>(
            [=](const Engine& e, double r, double T) { return Sides{e.T(tb, r), gamma * T}; });
      };
    } else if (id == "lem_35") {
      auto b = small_function(params, "b", base);
      MeroExpr bP = b * Pf;
      MeroExpr dbP = differentiate(bP);
      plan.build = [=](Engine& eng) {
        auto tf = eng.characteristic(f);
        auto zf = eng.zeros(f);
        auto ones = eng.points(bP, Target::at(1.0));
        auto crit = eng.zeros(dbP);
        return std::function<Sides(const Engine&, double, double)>(
            [=](const Engine& e, double r, double T) {
              (void)T;
              double rhs = d * e.N(zf, r) + e.N(tf, r, Mode::Reduced) + e.N(ones, r) - e.N(crit, r);
              return Sides{d * e.T(tf, r), rhs};
            });
      };
    } else if (id == "lem_36") {
      MeroExpr dP = differentiate(Pf);
      plan.build = [=](Engine& eng) {
        auto tf = eng.characteristic(f);
        auto zf = eng.zeros(f);
        auto ones = eng.points(Pf, Target::at(1.0));
        auto crit = eng.zeros(dP);
        return std::function<Sides(const Engine&, double, double)>(
            [=](const Engine& e, double r, double) {
              // N_0: zeros of P' that are neither zeros of f nor 1-points of P.
              Divisor excluded = divisor_add(e.divisor(zf), e.divisor(ones), e.merge_rel());
              for (auto& p : excluded.points) p.mult = 1 << 20;
              Divisor n0 = divisor_subtract(e.divisor(crit), excluded, e.merge_rel());
              double rhs = e.N(tf, r, Mode::Reduced) + e.N(zf, r, Mode::Reduced) +
                           nu * e.N(zf, r, Mode::TruncGeReduced, k + 1) +
                           (d - qs) * e.N(zf, r, Mode::TruncLe, k) +
                           e.N(ones, r, Mode::Reduced) - e.N_of(n0, r);
              return Sides{d * e.T(tf, r), rhs};
            });
      };
    }
    plan.violations.insert(plan.violations.end(), base.violations.begin(), base.violations.end());
    plan.constants.insert(base.constants.begin(), base.constants.end());
    plan.must_be_nonzero = Pf;
    return plan;
  }
  if (!plan.violations.empty()) return plan;

  if (id == "thm_a") {
    MeroExpr h = pow(f, 2) * differentiate(f);
    plan = compare_with_one_points(f, h, 6.0, Mode::Full);
  } else if (id == "thm_b") {
    int k = params.get_int("k", 1);
    Plan p;
    require_int(p, "k", k, 1);
    if (!p.violations.empty()) return p;
    plan = compare_with_one_points(f, pow(f, 2) * nth_derivative(f, k), 6.0, Mode::Full);
    plan.constants.insert(p.constants.begin(), p.constants.end());
  } else if (id == "thm_d") {
    int l = params.get_int("l", 3), n = params.get_int("n", 1), k = params.get_int("k", 1);
    Plan p;
    require_int(p, "l", l, 3);
    require_int(p, "n", n, 1);
    require_int(p, "k", k, 1);
    if (!p.violations.empty()) return p;
    plan = compare_with_one_points(f, pow(f, l) * pow(nth_derivative(f, k), n), 1.0 / (l - 2),
                                   Mode::Reduced);
    plan.constants.insert(p.constants.begin(), p.constants.end());
  } else if (id == "thm_c") {
    int n = params.get_int("n", 1), p = params.get_int("p", 1), k = params.get_int("k", 1);
    require_int(plan, "n", n, 0);
    require_int(plan, "p", p, 1);
    require_int(plan, "k", k, 1);
    auto alpha = small_function(params, "alpha", plan);
    auto a = small_function(params, "a", plan);
    if (!plan.violations.empty()) return plan;
    MeroExpr psi = alpha * pow(f, n) * pow(nth_derivative(f, k), p);
    MeroExpr psi_a = psi - a;
    plan.constants["multiplier"] = 1.0;
    plan.must_be_nonzero = psi_a;
    plan.build = [=](Engine& eng) {
      auto tf = eng.characteristic(f);
      auto zf = eng.zeros(f);
      auto hits = eng.zeros(psi_a);
      return std::function<Sides(const Engine&, double, double)>(
          [=](const Engine& e, double r, double) {
            double rhs = e.N(tf, r, Mode::Reduced) + e.N(zf, r, Mode::Reduced) +
                         p * e.N(zf, r, Mode::Capped, k) + e.N(hits, r, Mode::Reduced);
            return Sides{(p + n) * e.T(tf, r), rhs};
          });
    };
  } else if (id == "lem_32") {
    int k = params.get_int("k", 2);
    require_int(plan, "k", k, 2);
    if (!plan.violations.empty()) return plan;
    MeroExpr fk = nth_derivative(f, k);
    plan.build = [=](Engine& eng) {
      auto tf = eng.characteristic(f);
      auto zk = eng.zeros(fk);
      return std::function<Sides(const Engine&, double, double)>(
          [=](const Engine& e, double r, double) {
            return Sides{(k - 1) * e.N(tf, r, Mode::Reduced), e.N(zk, r)};
          });
    };
  } else if (id == "lem_31") {
    MeroExpr g = f, dg = differentiate(f);
    plan.equality = true;
    plan.build = [=](Engine& eng) {
      eng.characteristic(g);
      auto a = eng.poles(dg / g);
      auto b = eng.poles(g / dg);
      auto pg = eng.poles(g);
      auto zg = eng.zeros(g);
      auto zdg = eng.zeros(dg);
      return std::function<Sides(const Engine&, double, double)>(
          [=](const Engine& e, double r, double) {
            return Sides{e.N(a, r) - e.N(b, r), e.N(pg, r, Mode::Reduced) + e.N(zg, r) - e.N(zdg, r)};
          });
    };
  } else {
    throw UnknownCheck("unknown check id '" + id + "'");
  }
  return plan;
}

}  // namespace

CheckReport check(const std::string& id, const MeroExpr& f, const std::optional<DiffPolynomial>& P,
                  const CheckParams& params, const std::vector<double>& radii,
                  const CheckTolerances& tol, int threads) {
  const auto& ids = check_ids();
  if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
    throw UnknownCheck("unknown check id '" + id + "'");
  }
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] > radii[i - 1]))) {
      throw std::invalid_argument("radii must be positive and strictly increasing");
    }
  }
  CheckReport rep;
  rep.check_id = id;
  rep.function = to_string(f);

  Plan plan = plan_for(id, f, P, params);
  rep.constants = plan.constants;
  rep.equality = plan.equality;
  rep.eps = plan.equality ? tol.equality_tol : tol.eps_verdict;
  rep.note = plan.note;
  rep.violations = plan.violations;

  // The statements concern transcendental f; the identity holds for any
  // non-constant g.
  if (id == "lem_31") {
    if (is_constant(f, tol.sampling).kind == ConstantVerdict::Kind::Constant) rep.violations.push_back("g is constant");
  } else if (is_rational(f)) {
    rep.violations.push_back("f is rational, not transcendental");
  }
  if (!rep.violations.empty()) {
    rep.verdict = Verdict::HypothesisViolation;
    return rep;
  }
  if (plan.must_be_nonzero) {
    auto z = is_identically_zero(*plan.must_be_nonzero, tol.sampling);
    if (z == ZeroVerdict::Zero || z == ZeroVerdict::ProbablyZero) {
      rep.verdict = Verdict::Vacuous;
      if (z == ZeroVerdict::ProbablyZero) rep.note = "vanishing decided by sampling";
      return rep;
    }
  }
  if (radii.size() < 8) {
    throw TooFewRows("check runs need at least 8 radii, got " + std::to_string(radii.size()));
  }

  Engine eng(tol.nev);
  auto row_fn = plan.build(eng);
  auto tf = eng.characteristic(f);
  try {
    eng.prepare(radii.back(), threads);
  } catch (const Error& e) {
    rep.verdict = Verdict::NumericalFailure;
    rep.note = e.what();
    return rep;
  }

  rep.rows.resize(radii.size());
  parallel_for(radii.size(), threads, [&](std::size_t i) {
    CheckRow& row = rep.rows[i];
    row.r = radii[i];
    try {
      row.r_used = eng.radius(radii[i]);
      row.perturbed = row.r_used != radii[i];
      row.T = eng.T(tf, row.r_used);
      auto s = row_fn(eng, row.r_used, row.T);
      row.lhs = s.lhs;
      row.rhs = s.rhs;
      row.residual = (s.lhs - s.rhs) / std::max(row.T, 1.0);
    } catch (const Error& e) {
      row.ok = false;
      row.error = e.what();
    }
  });

  std::vector<double> values;
  for (const auto& row : rep.rows) {
    if (!row.ok) {
      rep.verdict = Verdict::NumericalFailure;
      rep.note = "r=" + std::to_string(row.r) + ": " + row.error;
      return rep;
    }
    values.push_back(plan.equality ? row.lhs - row.rhs : row.residual);
  }
  rep.worst_residual = rep.rows.front().residual;
  for (const auto& row : rep.rows) {
    if (plan.equality ? std::abs(row.residual) > std::abs(rep.worst_residual)
                      : row.residual > rep.worst_residual) {
      rep.worst_residual = row.residual;
    }
  }
  if (plan.equality) {
    rep.verdict = equality_verdict(values, tol.equality_tol);
    rep.statistic = 0.0;
    for (double v : values) rep.statistic = std::max(rep.statistic, std::abs(v));
  } else {
    rep.statistic = top_quartile_median(values);
    rep.verdict = rep.statistic <= tol.eps_verdict ? Verdict::Pass : Verdict::Fail;
  }
  return rep;
}

}  // namespace nevlab
