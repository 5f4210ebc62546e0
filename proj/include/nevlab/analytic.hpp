#pragma once

// Numeric views of expressions used by the locator and the Nevanlinna
// functionals. Exponential polynomials are evaluated from their canonical
// form with a shared exponential scale, which removes the cancellation and
// overflow that direct tree evaluation suffers on large circles.

#include <optional>
#include <string>

#include "nevlab/exp_poly.hpp"
#include "nevlab/expr.hpp"
#include "nevlab/identity.hpp"

namespace nevlab {

/// A value a in the extended plane: a finite complex number or infinity.
struct Target {
  bool infinite = false;
  cplx value{};

  static Target infinity() { return {true, {}}; }
  static Target at(cplx a) { return {false, a}; }
  std::string to_string() const;
};

class EntireFunction {
 public:
  /// e must be entire (no Div, no negative IntPow after to_quotient).
  explicit EntireFunction(const MeroExpr& e);
  explicit EntireFunction(ExpPoly p);

  const MeroExpr& expr() const { return expr_; }
  const std::optional<ExpPoly>& exp_poly() const { return ep_; }

  /// Exact for exponential polynomials; sampling verdict otherwise.
  bool is_zero() const;
  /// A single exponential term c*e^{lz}: no zeros anywhere.
  bool is_zero_free() const;

  ScaledValue value(cplx z) const;
  double log_abs(cplx z) const;
  /// g'(z)/g(z); infinite at a zero.
  cplx log_derivative(cplx z) const;

  /// Drops exp factors of a top-level product (they never vanish).
  EntireFunction without_exp_factors() const;

 private:
  MeroExpr expr_;
  MeroExpr deriv_;
  std::optional<ExpPoly> ep_;
  std::optional<ExpPoly> dep_;
};

class MeroFunction {
 public:
  /// Throws ClassError when the expression leaves the class or its
  /// denominator vanishes identically.
  explicit MeroFunction(const MeroExpr& f);

  const MeroExpr& expr() const { return expr_; }
  const EntireFunction& num() const { return num_; }
  const EntireFunction& den() const { return den_; }

  double log_abs(cplx z) const;
  cplx log_derivative(cplx z) const;

  /// Entire function whose zeros (before cancellation against the
  /// denominator) are the a-points: num - a*den, or den for a = infinity.
  EntireFunction a_point_function(const Target& a) const;

 private:
  MeroFunction(const MeroExpr& f, const QuotientForm& q);

  MeroExpr expr_;
  EntireFunction num_;
  EntireFunction den_;
};

}  // namespace nevlab
