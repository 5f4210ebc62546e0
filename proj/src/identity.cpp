#include "nevlab/identity.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "nevlab/error.hpp"
#include "nevlab/exp_poly.hpp"

namespace nevlab {

namespace {

bool is_one(const MeroExpr& e) { return e.is_const(1.0); }

QuotientForm combine_sum(const QuotientForm& a, const QuotientForm& b) {
  if (is_one(b.den)) return {a.num + b.num * a.den, a.den};
  if (is_one(a.den)) return {a.num * b.den + b.num, b.den};
  if (structurally_equal(a.den, b.den)) return {a.num + b.num, a.den};
  return {a.num * b.den + b.num * a.den, a.den * b.den};
}

std::vector<cplx> sample_points(const SamplingOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<cplx> pts;
  for (int k = 0; k < opt.points; ++k) {
    double r = k < opt.points / 2 ? opt.inner_radius : opt.outer_radius;
    pts.push_back(std::polar(r, angle(rng)));
  }
  return pts;
}

}  // namespace

QuotientForm to_quotient(const MeroExpr& e) {
  switch (e.kind()) {
    case NodeKind::Const:
    case NodeKind::Var:
      return {e, constant(1.0)};
    case NodeKind::Add: {
      auto ch = e.children();
      QuotientForm acc = to_quotient(ch[0]);
      for (std::size_t i = 1; i < ch.size(); ++i) acc = combine_sum(acc, to_quotient(ch[i]));
      return acc;
    }
    case NodeKind::Mul: {
      std::vector<MeroExpr> nums, dens;
      for (const auto& c : e.children()) {
        auto q = to_quotient(c);
        nums.push_back(q.num);
        dens.push_back(q.den);
      }
      return {product(std::move(nums)), product(std::move(dens))};
    }
    case NodeKind::Neg: {
      auto q = to_quotient(e.children()[0]);
      return {-q.num, q.den};
    }
    case NodeKind::Div: {
      auto a = to_quotient(e.children()[0]);
      auto b = to_quotient(e.children()[1]);
      return {a.num * b.den, a.den * b.num};
    }
    case NodeKind::IntPow: {
      auto q = to_quotient(e.children()[0]);
      int n = e.exponent();
      if (n > 0) return {pow(q.num, n), pow(q.den, n)};
      return {pow(q.den, -n), pow(q.num, -n)};
    }
    case NodeKind::Exp: {
      auto q = to_quotient(e.children()[0]);
      if (is_one(q.den)) return {exp(q.num), constant(1.0)};
      if (q.den.is_const()) return {exp(q.num * constant(1.0 / q.den.value())), constant(1.0)};
      // A denominator that is a single exponential term never vanishes.
      auto d = to_exp_poly(q.den);
      if (d && d->is_single_exponential()) {
        return {exp(q.num * d->reciprocal()->to_expr()), constant(1.0)};
      }
      throw ClassError("exp of an argument with poles is not meromorphic: " + to_string(e));
    }
  }
  return {e, constant(1.0)};
}

const char* to_string(ZeroVerdict v) {
  switch (v) {
    case ZeroVerdict::Zero: return "Zero";
    case ZeroVerdict::NonZero: return "NonZero";
    case ZeroVerdict::ProbablyZero: return "ProbablyZero";
    case ZeroVerdict::ProbablyNonZero: return "ProbablyNonZero";
  }
  return "?";
}

ZeroVerdict is_identically_zero(const MeroExpr& e, const SamplingOptions& opt) {
  try {
    auto q = to_quotient(e);
    if (auto p = to_exp_poly(q.num)) return p->is_zero() ? ZeroVerdict::Zero : ZeroVerdict::NonZero;
  } catch (const ClassError&) {
  }
  int valid = 0;
  for (cplx z : sample_points(opt)) {
    auto r = eval(e, z);
    auto* v = std::get_if<cplx>(&r);
    if (!v) continue;
    ++valid;
    double scale = eval_magnitude(e, z);
    if (std::abs(*v) > opt.rel_threshold * scale) return ZeroVerdict::ProbablyNonZero;
  }
  return valid > 0 ? ZeroVerdict::ProbablyZero : ZeroVerdict::ProbablyNonZero;
}

ConstantVerdict is_constant(const MeroExpr& e, const SamplingOptions& opt) {
  using Kind = ConstantVerdict::Kind;
  try {
    auto q = to_quotient(e);
    auto num = to_exp_poly(q.num);
    auto den = to_exp_poly(q.den);
    if (num && den && !den->is_zero()) {
      if (num->is_zero()) return {Kind::Constant, 0.0, true};
      auto wronskian = num->derivative() * *den - *num * den->derivative();
      if (!wronskian.is_zero()) return {Kind::NonConstant, {}, true};
      // num = c * den, so any matching coefficient pair gives c.
      const auto& dt = den->terms().front();
      for (const auto& nt : num->terms()) {
        if (std::abs(nt.freq - dt.freq) <= kFrequencyMergeTol) {
          return {Kind::Constant, nt.coeffs.back() / dt.coeffs.back(), true};
        }
      }
      return {Kind::Unknown, {}, false};
    }
  } catch (const ClassError&) {
  }
  bool have = false;
  cplx first{};
  for (cplx z : sample_points(opt)) {
    auto r = eval(e, z);
    auto* v = std::get_if<cplx>(&r);
    if (!v) continue;
    if (!have) {
      first = *v;
      have = true;
      continue;
    }
    double scale = std::max({std::abs(first), std::abs(*v), eval_magnitude(e, z)});
    if (std::abs(*v - first) > opt.rel_threshold * scale) return {Kind::NonConstant, {}, false};
  }
  if (!have) return {Kind::Unknown, {}, false};
  return {Kind::Constant, first, false};
}

bool is_rational(const MeroExpr& e) {
  if (!contains_exp(e)) return true;
  try {
    auto q = to_quotient(e);
    auto num = to_exp_poly(q.num);
    auto den = to_exp_poly(q.den);
    if (!num || !den) return false;
    if (num->is_zero()) return true;
    if (num->terms().size() != 1 || den->terms().size() != 1) return false;
    return std::abs(num->terms().front().freq - den->terms().front().freq) <= kFrequencyMergeTol;
  } catch (const ClassError&) {
    return false;
  }
}

}  // namespace nevlab
