#include "nevlab/nevanlinna.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "nevlab/error.hpp"
#include "nevlab/parallel.hpp"
#include "nevlab/quadrature.hpp"

namespace nevlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

double CountingSpec::weight(int mult) const {
  switch (mode) {
    case CountingMode::Full:
      return mult;
    case CountingMode::Reduced:
      return 1.0;
    case CountingMode::TruncLe:
      return mult <= k ? mult : 0.0;
    case CountingMode::TruncLeReduced:
      return mult <= k ? 1.0 : 0.0;
    case CountingMode::TruncGe:
      return mult >= k ? mult : 0.0;
    case CountingMode::TruncGeReduced:
      return mult >= k ? 1.0 : 0.0;
    case CountingMode::Capped:
      return std::min(mult, k);
  }
  return 0.0;
}

std::string CountingSpec::to_string() const {
  std::string m;
  switch (mode) {
    case CountingMode::Full: m = "full"; break;
    case CountingMode::Reduced: m = "reduced"; break;
    case CountingMode::TruncLe: m = "trunc_le"; break;
    case CountingMode::TruncLeReduced: m = "trunc_le_reduced"; break;
    case CountingMode::TruncGe: m = "trunc_ge"; break;
    case CountingMode::TruncGeReduced: m = "trunc_ge_reduced"; break;
    case CountingMode::Capped: m = "capped"; break;
  }
  if (mode != CountingMode::Full && mode != CountingMode::Reduced) m += "(" + std::to_string(k) + ")";
  return m + "@" + target.to_string();
}

double counting(const Divisor& div, double r, const CountingSpec& spec, double merge_rel) {
  const double origin_tol = merge_rel * div.radius;
  const double log_r = std::log(r);
  double n = 0.0;
  for (const auto& p : div.points) {
    double a = std::abs(p.z);
    if (a > r) continue;
    double w = spec.weight(p.mult);
    if (w == 0.0) continue;
    n += a <= origin_tol ? w * log_r : w * std::log(r / a);
  }
  return n;
}

double proximity(const MeroFunction& f, double r, const ProximityOptions& opt) {
  auto h = [&](double t) { return f.log_abs(std::polar(r, t)); };
  auto positive = [](double v) { return v > 0.0; };

  const int n = std::max(opt.min_samples, static_cast<int>(std::ceil(16.0 * r)));
  std::vector<double> breaks{0.0};
  double t_prev = 0.0;
  bool s_prev = positive(h(0.0));
  for (int j = 1; j <= n; ++j) {
    double t = kTwoPi * j / n;
    bool s = positive(h(t));
    if (s != s_prev) {
      double lo = t_prev, hi = t;
      for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
        double mid = 0.5 * (lo + hi);
        (positive(h(mid)) == s_prev ? lo : hi) = mid;
      }
      breaks.push_back(0.5 * (lo + hi));
    }
    t_prev = t;
    s_prev = s;
  }
  breaks.push_back(kTwoPi);

  auto integrand = [&](double t) { return std::max(h(t), 0.0); };
  auto norm = [](double v) { return std::abs(v); };
  double total = 0.0, err = 0.0;
  bool converged = true;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    double a = breaks[i], b = breaks[i + 1];
    if (b <= a) continue;
    quad::Options q;
    q.abs_tol = opt.abs_tol * (b - a);
    q.initial_pieces = 4;
    q.max_intervals = opt.max_intervals;
    auto res = quad::integrate<double>(integrand, a, b, q, norm);
    total += res.value;
    err += res.error;
    converged = converged && res.converged;
  }
  if (!converged || !std::isfinite(total)) {
    throw QuadratureBudgetExceeded("proximity quadrature did not reach tolerance at r=" +
                                       std::to_string(r),
                                   err / kTwoPi);
  }
  return total / kTwoPi;
}

double choose_radius(double r, const std::vector<const Divisor*>& avoid, double ring_rel,
                     double perturb_rel) {
  auto clear = [&](double rr) {
    for (const Divisor* d : avoid) {
      for (const auto& p : d->points) {
        if (std::abs(std::abs(p.z) - rr) < ring_rel * rr) return false;
      }
    }
    return true;
  };
  constexpr int kSteps = 32;
  const double step = perturb_rel * r / kSteps;
  for (int k = 0; k <= kSteps; ++k) {
    if (clear(r + k * step)) return r + k * step;
    if (k > 0 && clear(r - k * step)) return r - k * step;
  }
  char msg[96];
  std::snprintf(msg, sizeof msg, "no admissible radius within %g*r of r=%.9g", perturb_rel, r);
  throw RingTooClose(msg);
}

DivisorPair divisor_for_grid(const MeroFunction& f, const Target& a, double r_max,
                             const LocatorOptions& opt) {
  double R = r_max * (1.0 + 2e-3);
  for (int attempt = 0;; ++attempt) {
    try {
      return divisor_of(f, R, a, opt);
    } catch (const RingTooClose&) {
      if (attempt >= 8) throw;
      R *= 1.0 + 3.7e-4;
    }
  }
}

namespace {

RadialSample sample_at(const MeroFunction& f, const Divisor& poles, double r,
                       const NevanlinnaOptions& opt) {
  RadialSample s;
  s.r = r;
  try {
    s.r_used = choose_radius(r, {&poles}, opt.locator.ring_rel, opt.perturb_rel);
    s.perturbed = s.r_used != r;
    s.m = proximity(f, s.r_used, opt.proximity);
    s.N = counting(poles, s.r_used, CountingSpec{}, opt.locator.merge_rel);
    s.T = s.m + s.N;
  } catch (const Error& e) {
    s.ok = false;
    s.error = e.what();
  }
  return s;
}

}  // namespace

RadialSample characteristic(const MeroFunction& f, double r, const NevanlinnaOptions& opt) {
  auto poles = divisor_for_grid(f, Target::infinity(), r, opt.locator).zeros;
  return sample_at(f, poles, r, opt);
}

std::vector<RadialSample> radial_grid(const MeroFunction& f, const std::vector<double>& radii,
                                      const NevanlinnaOptions& opt, int threads) {
  std::vector<RadialSample> out(radii.size());
  if (radii.empty()) return out;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] > radii[i - 1]))) {
      throw std::invalid_argument("radii must be positive and strictly increasing");
    }
  }
  Divisor poles;
  try {
    poles = divisor_for_grid(f, Target::infinity(), radii.back(), opt.locator).zeros;
  } catch (const Error& e) {
    for (std::size_t i = 0; i < radii.size(); ++i) {
      out[i].r = radii[i];
      out[i].ok = false;
      out[i].error = e.what();
    }
    return out;
  }
  parallel_for(radii.size(), threads, [&](std::size_t i) { out[i] = sample_at(f, poles, radii[i], opt); });
  return out;
}

std::vector<double> log_spaced(double start, double stop, int count) {
  std::vector<double> v;
  if (count <= 0) return v;
  if (count == 1) return {start};
  const double a = std::log(start), b = std::log(stop);
  for (int i = 0; i < count; ++i) v.push_back(std::exp(a + (b - a) * i / (count - 1)));
  v.front() = start;
  v.back() = stop;
  return v;
}

std::vector<double> linear_spaced(double start, double stop, int count) {
  std::vector<double> v;
  if (count <= 0) return v;
  if (count == 1) return {start};
  for (int i = 0; i < count; ++i) v.push_back(start + (stop - start) * i / (count - 1));
  v.back() = stop;
  return v;
}

}  // namespace nevlab
