#pragma once

// Quotient normal form and identity testing for the meromorphic class.

#include <cstdint>

#include "nevlab/expr.hpp"

namespace nevlab {

/// num / den with both parts entire (no Div, no negative IntPow).
struct QuotientForm {
  MeroExpr num;
  MeroExpr den;
};

/// Eliminates Div and negative IntPow bottom-up. Exp factors only ever end up
/// as multiplicative factors, so they never introduce zeros.
/// Throws ClassError for exp of an argument that has poles.
QuotientForm to_quotient(const MeroExpr& e);

enum class ZeroVerdict { Zero, NonZero, ProbablyZero, ProbablyNonZero };

const char* to_string(ZeroVerdict v);

/// Parameters of the sampling fallback used outside the exponential-polynomial class.
struct SamplingOptions {
  std::uint64_t seed = 0x5EED;
  int points = 16;          // split evenly over the two circles
  double inner_radius = 0.7;
  double outer_radius = 1.3;
  double rel_threshold = 1e-9;
};

/// Exact when the quotient numerator canonicalizes to an exponential
/// polynomial; a seeded sampling test otherwise.
ZeroVerdict is_identically_zero(const MeroExpr& e, const SamplingOptions& opt = {});

struct ConstantVerdict {
  enum class Kind { Constant, NonConstant, Unknown } kind = Kind::Unknown;
  cplx value{};        // meaningful for Constant
  bool exact = false;  // decided symbolically rather than by sampling
};

/// Exact in the exponential-polynomial quotient class (num' den - num den' == 0),
/// sampling fallback otherwise.
ConstantVerdict is_constant(const MeroExpr& e, const SamplingOptions& opt = {});

/// True when e is a rational function of z: no exp at all, or an exp
/// quotient whose numerator and denominator share one frequency.
bool is_rational(const MeroExpr& e);

}  // namespace nevlab
