#pragma once

// Per-radius inequality and identity checks for differential polynomials,
// with hypothesis validation and an asymptotic verdict.
//
// Every check compares lhs(r) <= rhs(r) (or lhs = rhs for identities) on a
// radius grid. The error terms S(r, f) cannot be evaluated pointwise, so a
// row's residual is (lhs - rhs) / max(T(r, f), 1) and the verdict looks at
// the largest radii only: pass when the median residual over the top quartile
// of the grid is at most eps.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nevlab/diffpoly.hpp"
#include "nevlab/identity.hpp"
#include "nevlab/nevanlinna.hpp"

namespace nevlab {

enum class Verdict { Pass, Fail, Vacuous, HypothesisViolation, NumericalFailure };

const char* to_string(Verdict v);

/// Integer parameters (k, l, n, p) and expression parameters (alpha, a, b).
struct CheckParams {
  std::map<std::string, int> ints;
  std::map<std::string, std::string> exprs;

  int get_int(const std::string& name, int fallback) const;
  std::string get_expr(const std::string& name, const std::string& fallback) const;
};

struct CheckTolerances {
  double eps_verdict = 0.05;
  double equality_tol = 5e-3;
  NevanlinnaOptions nev;
  SamplingOptions sampling;  // vanishing test outside the exponential-polynomial class
};

struct CheckRow {
  double r = 0.0;
  double r_used = 0.0;
  bool perturbed = false;
  double T = 0.0;  // T(r, f), the normalizer
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // (lhs - rhs) / max(T, 1)
  bool ok = true;
  std::string error;
};

struct CheckReport {
  std::string check_id;
  std::string function;
  std::vector<std::string> violations;
  std::vector<CheckRow> rows;
  Verdict verdict = Verdict::Fail;
  bool equality = false;
  /// Top-quartile median residual (inequalities) or max |lhs - rhs| (identities).
  double statistic = 0.0;
  double worst_residual = 0.0;
  double eps = 0.0;
  /// Constants the check used: rhs multiplier, poly stats, params.
  std::map<std::string, double> constants;
  std::string note;
};

/// Known check ids, in report order.
const std::vector<std::string>& check_ids();

/// True for checks that take a differential polynomial.
bool check_uses_polynomial(const std::string& check_id);

/// Runs one check. Throws UnknownCheck for an unknown id and
/// std::invalid_argument when a required polynomial or parameter is missing
/// or malformed. Numerical failures are reported in the rows and verdict.
CheckReport check(const std::string& check_id, const MeroExpr& f,
                  const std::optional<DiffPolynomial>& P, const CheckParams& params,
                  const std::vector<double>& radii, const CheckTolerances& tol = {},
                  int threads = 1);

/// Top-quartile median of residuals taken in increasing-radius order.
/// Throws TooFewRows below 8 rows.
double top_quartile_median(const std::vector<double>& residuals);

/// Pass iff top_quartile_median(residuals) <= eps. Throws TooFewRows.
Verdict verdict(const std::vector<double>& residuals, double eps);

/// Pass iff every |difference| <= tol. Throws TooFewRows below 8 rows.
Verdict equality_verdict(const std::vector<double>& differences, double tol);

}  // namespace nevlab
