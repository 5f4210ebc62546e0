#pragma once

// Zero and pole location in a disk by argument-principle counting,
// recursive square subdivision and Newton polishing.

#include <vector>

#include "nevlab/analytic.hpp"
#include "nevlab/quadrature.hpp"

namespace nevlab {

struct DivisorPoint {
  cplx z;
  int mult = 1;
  /// Set when Newton polishing failed or the multiplicity could not be confirmed.
  bool flagged = false;
};

/// Finite multiset of points in the closed disk |z| <= radius, sorted by (re, im).
struct Divisor {
  double radius = 0.0;
  std::vector<DivisorPoint> points;
  /// False when the search hit its depth budget or failed conservation.
  bool valid = true;

  int degree() const;
  /// Points with |z| <= r, as a divisor of radius r (r <= radius).
  Divisor restricted(double r) const;
};

struct LocatorOptions {
  double ring_rel = 1e-4;      // guard distance around |z| = r, relative to r
  double cell_guard_rel = 1e-5; // guard distance around cell edges, relative to the cell side
  int max_depth = 40;
  double cluster_rel = 1e-10;  // cells smaller than this (times r) are accepted as one point
  double merge_rel = 1e-7;     // divisor points closer than this (times r) coincide
  int newton_max_iter = 50;
  double newton_rel = 1e-13;   // Newton convergence |dz| < newton_rel * r
  double residual_tol = 0.25;  // max distance of a contour count from an integer
  quad::Options quad{1e-9, 16, 6000, 1e-15};
};

/// (1/2 pi i) * contour integral of f'/f over |z - center| = r, rounded.
/// Throws RingTooClose or NonIntegerResidual.
int winding_number(const MeroFunction& f, double r, const LocatorOptions& opt = {});
int winding_number(const EntireFunction& g, cplx center, double r, const LocatorOptions& opt = {});

/// All zeros of an entire function in the closed disk |z| <= r.
/// Top-level products are searched factor by factor and exp factors skipped.
/// Throws RingTooClose when a zero sits within the guard ring of |z| = r.
Divisor find_zeros(const MeroExpr& entire, double r, const LocatorOptions& opt = {});
Divisor find_zeros(const EntireFunction& g, double r, const LocatorOptions& opt = {});

struct DivisorPair {
  Divisor zeros;  // a-points (poles when the target is infinity)
  Divisor poles;
};

/// a-points and poles of f in |z| <= r after cancelling common zeros of the
/// quotient's numerator and denominator.
DivisorPair divisor_of(const MeroFunction& f, double r, const Target& a,
                       const LocatorOptions& opt = {});

/// Pointwise max(A(p) - B(p), 0). Throws RadiusMismatch when radii differ.
Divisor divisor_subtract(const Divisor& a, const Divisor& b, double merge_rel = 1e-7);

/// Pointwise sum of multiplicities (radii must match).
Divisor divisor_add(const Divisor& a, const Divisor& b, double merge_rel = 1e-7);

}  // namespace nevlab
