#pragma once

// Exponential polynomials  sum_k p_k(z) * exp(lambda_k * z)  in canonical form.
//
// Terms are kept sorted by (Re lambda, Im lambda) with pairwise distinct
// frequencies; every polynomial has a nonzero leading coefficient; the zero
// function is the empty term list. Distinct frequencies make the functions
// e^{lambda z} linearly independent over C[z], so zero testing is exact on
// this class.

#include <cmath>
#include <optional>
#include <vector>

#include "nevlab/expr.hpp"

namespace nevlab {

/// Frequencies closer than this are the same frequency.
inline constexpr double kFrequencyMergeTol = 1e-12;
/// A coefficient sum a+b with |a+b| <= kCancelRelTol * max(|a|,|b|) is exactly zero.
inline constexpr double kCancelRelTol = 1e-12;

/// Value represented as mantissa * exp(log_scale), to survive e^{lambda z}
/// with large |lambda z|.
struct ScaledValue {
  cplx mantissa;
  double log_scale = 0.0;

  double log_abs() const { return log_scale + std::log(std::abs(mantissa)); }
};

class ExpPoly {
 public:
  struct Term {
    cplx freq;
    std::vector<cplx> coeffs;  // coeffs[j] multiplies z^j
  };

  ExpPoly() = default;

  static ExpPoly constant(cplx c);
  static ExpPoly var();
  /// scale * exp(freq * z)
  static ExpPoly exponential(cplx freq, cplx scale = 1.0);
  /// Builds a canonical form from arbitrary (possibly repeated) terms.
  static ExpPoly from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// A single term c * z^0 * exp(freq z).
  bool is_single_exponential() const;
  /// Nonzero constant (single term, frequency 0, degree 0).
  bool is_nonzero_constant() const;

  ExpPoly operator+(const ExpPoly& other) const;
  ExpPoly operator-(const ExpPoly& other) const;
  ExpPoly operator-() const;
  ExpPoly operator*(const ExpPoly& other) const;
  ExpPoly operator*(cplx c) const;
  ExpPoly pow(unsigned n) const;
  ExpPoly derivative() const;

  /// Reciprocal of a single exponential term; nullopt otherwise.
  std::optional<ExpPoly> reciprocal() const;

  cplx eval(cplx z) const;
  ScaledValue eval_scaled(cplx z) const;
  /// f(z) and f'(z) sharing one scale factor.
  void eval_scaled_with_derivative(cplx z, const ExpPoly& deriv, ScaledValue& value,
                                   ScaledValue& dvalue) const;

  /// Canonical-form equality (the difference cancels to zero).
  bool operator==(const ExpPoly& other) const { return (*this - other).is_zero(); }

  MeroExpr to_expr() const;

 private:
  std::vector<Term> terms_;
};

/// Canonical form of an entire expression; nullopt ("not in class") when the
/// expression has exp of a non-linear argument, or a genuine division.
std::optional<ExpPoly> to_exp_poly(const MeroExpr& e);

}  // namespace nevlab
