#pragma once

// Nevanlinna functionals on circles |z| = r: proximity m(r, f), integrated
// counting functions N(r, a; f) in all truncation modes, and T = m + N.
// All logarithms are natural.

#include <string>
#include <vector>

#include "nevlab/analytic.hpp"
#include "nevlab/locator.hpp"

namespace nevlab {

enum class CountingMode { Full, Reduced, TruncLe, TruncLeReduced, TruncGe, TruncGeReduced, Capped };

struct CountingSpec {
  Target target = Target::infinity();
  CountingMode mode = CountingMode::Full;
  int k = 0;  // threshold for the truncated and capped modes

  /// Weight of a point of multiplicity m: full counts m, reduced counts 1,
  /// trunc_le keeps m <= k, trunc_ge keeps m >= k, capped counts min(m, k).
  double weight(int mult) const;
  std::string to_string() const;
};

/// Sum over points 0 < |a| <= r of w(mult) log(r/|a|), plus w(mult_0) log r
/// for a point at the origin. Points closer to 0 than merge_rel * div.radius
/// are taken to be at the origin.
double counting(const Divisor& div, double r, const CountingSpec& spec, double merge_rel = 1e-7);

struct ProximityOptions {
  double abs_tol = 1e-9;
  int max_intervals = 20000;
  int min_samples = 512;  // initial sign-change scan of log|f| on the circle
};

/// (1/2pi) * integral of log+|f(r e^{it})| dt. Kinks of log+ (where |f| = 1)
/// are located by bisection and the pieces integrated separately.
/// Throws QuadratureBudgetExceeded.
double proximity(const MeroFunction& f, double r, const ProximityOptions& opt = {});

struct RadialSample {
  double r = 0.0;       // requested radius
  double r_used = 0.0;  // radius actually evaluated (differs when perturbed)
  double m = 0.0;
  double N = 0.0;
  double T = 0.0;
  bool perturbed = false;
  bool ok = true;
  std::string error;  // set when ok is false
};

struct NevanlinnaOptions {
  LocatorOptions locator;
  ProximityOptions proximity;
  double perturb_rel = 1e-3;  // largest radius perturbation, relative to r
};

/// Picks a radius within perturb_rel * r of r (trying r itself, then
/// outward before inward) with no listed point within ring_rel of the circle.
/// Throws RingTooClose when every candidate is blocked.
double choose_radius(double r, const std::vector<const Divisor*>& avoid, double ring_rel,
                     double perturb_rel);

/// a-points and poles of f on a disk slightly larger than r_max (so that
/// perturbed radii stay inside), retrying the search radius when a point sits
/// on its boundary.
DivisorPair divisor_for_grid(const MeroFunction& f, const Target& a, double r_max,
                             const LocatorOptions& opt = {});

/// m, N (poles, full mode) and T at one radius, perturbing away from poles.
RadialSample characteristic(const MeroFunction& f, double r, const NevanlinnaOptions& opt = {});

/// Samples in the order of radii (strictly increasing, positive). The pole
/// divisor is computed once on the largest disk and restricted per radius.
/// Radii that fail are flagged in the sample, not dropped.
std::vector<RadialSample> radial_grid(const MeroFunction& f, const std::vector<double>& radii,
                                      const NevanlinnaOptions& opt = {}, int threads = 1);

std::vector<double> log_spaced(double start, double stop, int count);
std::vector<double> linear_spaced(double start, double stop, int count);

}  // namespace nevlab
