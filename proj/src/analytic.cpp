#include "nevlab/analytic.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "nevlab/error.hpp"

namespace nevlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::string Target::to_string() const {
  if (infinite) return "inf";
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.12g%+.12gi", value.real(), value.imag());
  return buf;
}

EntireFunction::EntireFunction(const MeroExpr& e) : expr_(e), ep_(to_exp_poly(e)) {
  if (ep_) {
    dep_ = ep_->derivative();
  } else {
    deriv_ = differentiate(e);
  }
}

EntireFunction::EntireFunction(ExpPoly p) : expr_(p.to_expr()), ep_(std::move(p)) {
  dep_ = ep_->derivative();
}

bool EntireFunction::is_zero() const {
  if (ep_) return ep_->is_zero();
  auto v = is_identically_zero(expr_);
  return v == ZeroVerdict::Zero || v == ZeroVerdict::ProbablyZero;
}

bool EntireFunction::is_zero_free() const { return ep_ && ep_->is_single_exponential(); }

ScaledValue EntireFunction::value(cplx z) const {
  if (ep_) return ep_->eval_scaled(z);
  auto r = eval(expr_, z);
  if (auto* v = std::get_if<cplx>(&r)) return {*v, 0.0};
  return {cplx(kInf, 0.0), 0.0};
}

double EntireFunction::log_abs(cplx z) const { return value(z).log_abs(); }

cplx EntireFunction::log_derivative(cplx z) const {
  if (ep_) {
    ScaledValue v, dv;
    ep_->eval_scaled_with_derivative(z, *dep_, v, dv);
    return dv.mantissa / v.mantissa;
  }
  auto v = eval(expr_, z);
  auto d = eval(deriv_, z);
  auto* pv = std::get_if<cplx>(&v);
  auto* pd = std::get_if<cplx>(&d);
  if (!pv || !pd) return {kInf, 0.0};
  return *pd / *pv;
}

EntireFunction EntireFunction::without_exp_factors() const {
  if (ep_) {
    if (ep_->terms().size() == 1) {
      auto t = ep_->terms().front();
      t.freq = 0.0;
      return EntireFunction(ExpPoly::from_terms({t}));
    }
    return *this;
  }
  if (expr_.kind() == NodeKind::Exp) return EntireFunction(constant(1.0));
  if (expr_.kind() == NodeKind::Mul) {
    std::vector<MeroExpr> kept;
    for (const auto& c : expr_.children()) {
      if (c.kind() != NodeKind::Exp) kept.push_back(c);
    }
    if (kept.size() != expr_.children().size()) return EntireFunction(product(std::move(kept)));
  }
  return *this;
}

namespace {

QuotientForm checked_quotient(const MeroExpr& f) {
  auto q = to_quotient(f);
  if (!is_syntactically_entire(q.num) || !is_syntactically_entire(q.den)) {
    throw ClassError("quotient form is not entire: " + to_string(f));
  }
  return q;
}

}  // namespace

MeroFunction::MeroFunction(const MeroExpr& f) : MeroFunction(f, checked_quotient(f)) {}

MeroFunction::MeroFunction(const MeroExpr& f, const QuotientForm& q)
    : expr_(f), num_(q.num), den_(q.den) {
  if (den_.is_zero()) throw ClassError("denominator vanishes identically: " + to_string(f));
}

double MeroFunction::log_abs(cplx z) const { return num_.log_abs(z) - den_.log_abs(z); }

cplx MeroFunction::log_derivative(cplx z) const {
  return num_.log_derivative(z) - den_.log_derivative(z);
}

EntireFunction MeroFunction::a_point_function(const Target& a) const {
  if (a.infinite) return den_;
  if (a.value == 0.0) return num_;
  if (num_.exp_poly() && den_.exp_poly()) {
    return EntireFunction(*num_.exp_poly() - *den_.exp_poly() * a.value);
  }
  return EntireFunction(num_.expr() - constant(a.value) * den_.expr());
}

}  // namespace nevlab
