#pragma once

// Differential monomials  M[f] = b * f^{q0} (f')^{q1} ... (f^{(k)})^{qk}
// and polynomials P[f] = sum_j M_j[f] generated by a meromorphic f.

#include <string>
#include <vector>

#include "nevlab/expr.hpp"

namespace nevlab {

class DiffMonomial {
 public:
  /// coeff must be a rational function of z (a small function for any
  /// transcendental f); exponents[i] is the power of f^{(i)}.
  /// Throws std::invalid_argument on negative exponents, an all-zero
  /// exponent vector, or a coefficient that is not rational.
  DiffMonomial(MeroExpr coeff, std::vector<int> exponents);

  const MeroExpr& coeff() const { return coeff_; }
  const std::vector<int>& exponents() const { return exponents_; }

  /// Exponent of f^{(i)}; 0 beyond the stored vector.
  int q(std::size_t i) const { return i < exponents_.size() ? exponents_[i] : 0; }
  int degree() const;
  int weight() const;
  /// weight - degree = sum_i i*q_i
  int weight_excess() const;
  /// Largest i with q_i > 0.
  int order() const;

 private:
  MeroExpr coeff_;
  std::vector<int> exponents_;
};

struct PolyStats {
  int degree_upper = 0;  // max_j d(M_j)
  int degree_lower = 0;  // min_j d(M_j)
  int weight = 0;        // max_j Gamma(M_j)
  int nu = 0;            // max_j (Gamma(M_j) - d(M_j))
  int qstar = 0;         // min_j q_{0j}
  int qkstar = 0;        // min_j q_{kj}, k the order of P
  int order = 0;         // k
  bool homogeneous = false;
};

class DiffPolynomial {
 public:
  /// Throws std::invalid_argument when monomials is empty.
  explicit DiffPolynomial(std::vector<DiffMonomial> monomials);

  const std::vector<DiffMonomial>& monomials() const { return monomials_; }
  bool is_monomial() const { return monomials_.size() == 1; }

  DiffPolynomial operator+(const DiffPolynomial& other) const;

 private:
  std::vector<DiffMonomial> monomials_;
};

PolyStats poly_stats(const DiffPolynomial& p);

/// Builds sum_j b_j prod_i (f^{(i)})^{q_ij}; each derivative of f is computed once.
MeroExpr apply(const DiffPolynomial& p, const MeroExpr& f);

/// Hypothesis clauses each harness check places on P. Empty result means all
/// hold. Throws UnknownCheck for an unrecognized id.
std::vector<std::string> validate_hypotheses(const DiffPolynomial& p, const std::string& check_id);

/// "f^2*(f'')^2"-style rendering for reports.
std::string to_string(const DiffPolynomial& p);

}  // namespace nevlab
