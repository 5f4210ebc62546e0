#include "nevlab/locator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "nevlab/error.hpp"

namespace nevlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const cplx kTwoPiI{0.0, kTwoPi};

// Zeroth and first moments of g'/g over a contour: (count, sum of zeros).
struct Moments {
  cplx m0{}, m1{};
  Moments operator+(const Moments& o) const { return {m0 + o.m0, m1 + o.m1}; }
  Moments operator-(const Moments& o) const { return {m0 - o.m0, m1 - o.m1}; }
  Moments operator*(double s) const { return {m0 * s, m1 * s}; }
};

struct ContourResult {
  Moments value;
  double min_distance = std::numeric_limits<double>::infinity();  // min |g/g'| seen
  bool converged = false;
};

// Integrates g'/g (and z g'/g) along z(t), t in [t0, t1], with derivative dz(t).
template <class Path, class Speed>
ContourResult contour(const EntireFunction& g, Path path, Speed speed, double t0, double t1,
                      double scale, const quad::Options& qopt) {
  ContourResult res;
  auto integrand = [&](double t) {
    cplx z = path(t);
    cplx L = g.log_derivative(z);
    double a = std::abs(L);
    if (!std::isfinite(a)) {
      res.min_distance = 0.0;
      return Moments{};
    }
    if (a > 0.0) res.min_distance = std::min(res.min_distance, 1.0 / a);
    cplx w = L * speed(t) / kTwoPiI;
    return Moments{w, z * w};
  };
  auto norm = [scale](const Moments& m) { return std::abs(m.m0) + std::abs(m.m1) / scale; };
  auto q = quad::integrate<Moments>(integrand, t0, t1, qopt, norm);
  res.value = q.value;
  res.converged = q.converged;
  return res;
}

ContourResult segment_integral(const EntireFunction& g, cplx a, cplx b, double scale,
                               const quad::Options& qopt) {
  cplx d = b - a;
  quad::Options o = qopt;
  o.initial_pieces = std::max(2, qopt.initial_pieces / 4);
  return contour(g, [a, d](double t) { return a + t * d; }, [d](double) { return d; }, 0.0, 1.0,
                 scale, o);
}

ContourResult circle_integral(const EntireFunction& g, cplx c, double rho, const quad::Options& qopt) {
  return contour(
      g, [c, rho](double t) { return c + std::polar(rho, t); },
      [rho](double t) { return cplx(0.0, 1.0) * std::polar(rho, t); }, 0.0, kTwoPi,
      std::abs(c) + rho, qopt);
}

bool near_integer(cplx v, double tol, int& n) {
  double rr = std::round(v.real());
  n = static_cast<int>(rr);
  return std::abs(v.real() - rr) <= tol && std::abs(v.imag()) <= tol;
}

bool less_point(const DivisorPoint& a, const DivisorPoint& b) {
  if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
  return a.z.imag() < b.z.imag();
}

void sort_points(std::vector<DivisorPoint>& pts) { std::sort(pts.begin(), pts.end(), less_point); }

// --------------------------------------------------------------------------

class ZeroSearch {
 public:
  ZeroSearch(const EntireFunction& g, double r, const LocatorOptions& opt)
      : g_(g), r_(r), opt_(opt) {}

  Divisor run(int expected_total) {
    Divisor out{r_, {}, true};
    if (expected_total == 0) return out;

    bool rooted = false;
    for (int attempt = 0; attempt < 6 && !rooted; ++attempt) {
      double s = r_ * (1.05 + 0.0173 * attempt);
      Cell root{cplx(-s, -s), cplx(s, s), 0, {}};
      auto b = segment_integral(g_, cplx(-s, -s), cplx(s, -s), scale(root), opt_.quad);
      auto rt = segment_integral(g_, cplx(s, -s), cplx(s, s), scale(root), opt_.quad);
      auto t = segment_integral(g_, cplx(s, s), cplx(-s, s), scale(root), opt_.quad);
      auto l = segment_integral(g_, cplx(-s, s), cplx(-s, -s), scale(root), opt_.quad);
      double guard = opt_.cell_guard_rel * 2.0 * s;
      bool ok = true;
      for (const auto* c : {&b, &rt, &t, &l}) {
        ok = ok && c->converged && c->min_distance >= guard;
      }
      if (!ok) continue;
      root.moments = b.value + rt.value + t.value + l.value;
      if (!near_integer(root.moments.m0, opt_.residual_tol, root.count) || root.count < 0) continue;
      rooted = true;
      process(root, 0);
    }
    if (!rooted) {
      throw NonIntegerResidual("could not count zeros on the search square", 0.0);
    }

    auto merged = merge_candidates();
    const double snap = 1e-14 * std::max(1.0, r_);
    for (auto& p : merged) {
      // Round-off residue on a symmetry axis would otherwise decide the sort order.
      if (std::abs(p.z.real()) <= snap) p.z.real(0.0);
      if (std::abs(p.z.imag()) <= snap) p.z.imag(0.0);
      if (std::abs(p.z) <= r_) out.points.push_back(p);
    }
    sort_points(out.points);
    out.valid = valid_ && out.degree() == expected_total;
    return out;
  }

 private:
  struct Cell {
    cplx lo, hi;
    int count = 0;
    Moments moments;
  };

  double scale(const Cell& c) const { return std::abs(c.lo) + std::abs(c.hi) + 1e-300; }

  static double side(const Cell& c) {
    return std::max(c.hi.real() - c.lo.real(), c.hi.imag() - c.lo.imag());
  }

  bool inside(const Cell& c, cplx z, double margin) const {
    return z.real() >= c.lo.real() - margin && z.real() <= c.hi.real() + margin &&
           z.imag() >= c.lo.imag() - margin && z.imag() <= c.hi.imag() + margin;
  }

  // Newton iteration for a zero of multiplicity m; false on non-convergence.
  bool polish(cplx& z, int m, double max_move) const {
    cplx start = z;
    for (int it = 0; it < opt_.newton_max_iter; ++it) {
      cplx L = g_.log_derivative(z);
      if (!std::isfinite(std::abs(L))) return true;  // landed exactly on the zero
      if (L == 0.0) return false;
      cplx dz = double(m) / L;
      z -= dz;
      if (!std::isfinite(z.real()) || std::abs(z - start) > max_move) return false;
      if (std::abs(dz) < opt_.newton_rel * r_) return true;
    }
    return false;
  }

  void accept(cplx z, int count, bool flagged) { cands_.push_back({z, count, flagged}); }

  bool split(const Cell& c, double fx, double fy, std::array<Cell, 4>& kids) const {
    const double x[3] = {c.lo.real(), c.lo.real() + fx * (c.hi.real() - c.lo.real()), c.hi.real()};
    const double y[3] = {c.lo.imag(), c.lo.imag() + fy * (c.hi.imag() - c.lo.imag()), c.hi.imag()};
    const double guard = opt_.cell_guard_rel * side(c);
    const double sc = scale(c);
    Moments h[3][2], v[3][2];
    for (int j = 0; j < 3; ++j) {
      for (int i = 0; i < 2; ++i) {
        auto res = segment_integral(g_, cplx(x[i], y[j]), cplx(x[i + 1], y[j]), sc, opt_.quad);
        if (!res.converged || res.min_distance < guard) return false;
        h[j][i] = res.value;
      }
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 2; ++j) {
        auto res = segment_integral(g_, cplx(x[i], y[j]), cplx(x[i], y[j + 1]), sc, opt_.quad);
        if (!res.converged || res.min_distance < guard) return false;
        v[i][j] = res.value;
      }
    }
    int total = 0;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        Cell& k = kids[static_cast<std::size_t>(2 * i + j)];
        k.lo = cplx(x[i], y[j]);
        k.hi = cplx(x[i + 1], y[j + 1]);
        k.moments = h[j][i] + v[i + 1][j] - h[j + 1][i] - v[i][j];
        if (!near_integer(k.moments.m0, opt_.residual_tol, k.count) || k.count < 0) return false;
        total += k.count;
      }
    }
    return total == c.count;
  }

  void process(const Cell& c, int depth) {
    if (c.count == 0) return;
    const double s = side(c);
    const cplx mean = c.moments.m1 / double(c.count);

    if (c.count == 1) {
      cplx z = c.moments.m1;
      if (polish(z, 1, 2.0 * s) && inside(c, z, 1e-6 * s)) {
        accept(z, 1, false);
        return;
      }
    }
    if (s * std::numbers::sqrt2 < opt_.cluster_rel * r_) {
      cplx z = mean;
      bool ok = polish(z, c.count, 4.0 * s + opt_.cluster_rel * r_);
      accept(ok ? z : mean, c.count, !ok);
      return;
    }
    if (depth >= opt_.max_depth) {
      accept(mean, c.count, true);
      valid_ = false;
      return;
    }
    static constexpr std::array<std::pair<double, double>, 6> kFractions{{
        {0.51237, 0.49087}, {0.46371, 0.53813}, {0.53891, 0.45529},
        {0.42133, 0.57219}, {0.57811, 0.41377}, {0.38459, 0.61947},
    }};
    std::array<Cell, 4> kids;
    for (auto [fx, fy] : kFractions) {
      if (split(c, fx, fy, kids)) {
        for (const auto& k : kids) process(k, depth + 1);
        return;
      }
    }
    // The function is numerically flat around this cluster: keep it, flagged.
    accept(mean, c.count, true);
  }

  std::vector<DivisorPoint> merge_candidates() {
    const double tol = opt_.merge_rel * r_;
    std::vector<DivisorPoint> pts;
    for (const auto& c : cands_) {
      auto it = std::find_if(pts.begin(), pts.end(),
                             [&](const DivisorPoint& p) { return std::abs(p.z - c.z) <= tol; });
      if (it != pts.end()) {
        it->mult += c.count;
        it->flagged = true;
      } else {
        pts.push_back({c.z, c.count, c.flagged});
      }
    }
    // Confirm each multiplicity on a small circle around the point.
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double nearest = 2.0 * r_;
      for (std::size_t j = 0; j < pts.size(); ++j) {
        if (j != i) nearest = std::min(nearest, std::abs(pts[i].z - pts[j].z));
      }
      double rho = std::max(1e-3 * nearest, 1e-9 * std::max(1.0, r_));
      auto res = circle_integral(g_, pts[i].z, rho, opt_.quad);
      int m = 0;
      if (res.converged && res.min_distance >= opt_.ring_rel * rho &&
          near_integer(res.value.m0, opt_.residual_tol, m) && m > 0) {
        if (m != pts[i].mult) pts[i].flagged = true;
        pts[i].mult = m;
      } else {
        pts[i].flagged = true;
      }
    }
    return pts;
  }

  struct Candidate {
    cplx z;
    int count;
    bool flagged;
  };

  const EntireFunction& g_;
  double r_;
  const LocatorOptions& opt_;
  std::vector<Candidate> cands_;
  bool valid_ = true;
};

struct Factor {
  MeroExpr expr;
  int mult;
};

void collect_factors(const MeroExpr& e, int mult, std::vector<Factor>& out) {
  switch (e.kind()) {
    case NodeKind::Mul:
      for (const auto& c : e.children()) collect_factors(c, mult, out);
      return;
    case NodeKind::IntPow:
      if (e.exponent() > 0) {
        collect_factors(e.children()[0], mult * e.exponent(), out);
        return;
      }
      break;
    case NodeKind::Neg:
      collect_factors(e.children()[0], mult, out);
      return;
    case NodeKind::Exp:
      return;
    case NodeKind::Const:
      if (e.value() != 0.0) return;
      break;
    default:
      break;
  }
  out.push_back({e, mult});
}

Divisor scale_multiplicities(Divisor d, int m) {
  for (auto& p : d.points) p.mult *= m;
  return d;
}

}  // namespace

// ---------------------------------------------------------------------------

int Divisor::degree() const {
  int n = 0;
  for (const auto& p : points) n += p.mult;
  return n;
}

Divisor Divisor::restricted(double r) const {
  Divisor d{r, {}, valid};
  for (const auto& p : points) {
    if (std::abs(p.z) <= r) d.points.push_back(p);
  }
  return d;
}

int winding_number(const EntireFunction& g, cplx center, double r, const LocatorOptions& opt) {
  if (g.is_zero_free()) return 0;
  auto res = circle_integral(g, center, r, opt.quad);
  if (res.min_distance < opt.ring_rel * r) {
    char msg[96];
    std::snprintf(msg, sizeof msg, "zero within %.3g of the circle |z-c|=%.9g", res.min_distance, r);
    throw RingTooClose(msg);
  }
  int n = 0;
  if (!res.converged || !near_integer(res.value.m0, opt.residual_tol, n)) {
    throw NonIntegerResidual("argument-principle integral is not near an integer",
                             res.value.m0.real());
  }
  return n;
}

int winding_number(const MeroFunction& f, double r, const LocatorOptions& opt) {
  return winding_number(f.num(), 0.0, r, opt) - winding_number(f.den(), 0.0, r, opt);
}

Divisor find_zeros(const EntireFunction& g, double r, const LocatorOptions& opt) {
  if (g.is_zero()) throw std::invalid_argument("find_zeros: function vanishes identically");
  EntireFunction h = g.without_exp_factors();
  int total = winding_number(h, 0.0, r, opt);
  if (total < 0) throw NonIntegerResidual("negative zero count for an entire function", total);
  ZeroSearch search(h, r, opt);
  return search.run(total);
}

Divisor find_zeros(const MeroExpr& entire, double r, const LocatorOptions& opt) {
  std::vector<Factor> factors;
  collect_factors(entire, 1, factors);
  Divisor acc{r, {}, true};
  for (const auto& f : factors) {
    auto d = find_zeros(EntireFunction(f.expr), r, opt);
    acc = divisor_add(acc, scale_multiplicities(std::move(d), f.mult), opt.merge_rel);
  }
  return acc;
}

DivisorPair divisor_of(const MeroFunction& f, double r, const Target& a, const LocatorOptions& opt) {
  auto search = [&](const EntireFunction& g) {
    auto k = g.expr().kind();
    if (k == NodeKind::Mul || k == NodeKind::IntPow) return find_zeros(g.expr(), r, opt);
    return find_zeros(g, r, opt);
  };
  Divisor den_zeros = search(f.den());
  if (a.infinite) {
    Divisor num_zeros = search(f.num());
    Divisor poles = divisor_subtract(den_zeros, num_zeros, opt.merge_rel);
    return {poles, poles};
  }
  Divisor apts = search(f.a_point_function(a));
  return {divisor_subtract(apts, den_zeros, opt.merge_rel),
          divisor_subtract(den_zeros, apts, opt.merge_rel)};
}

Divisor divisor_subtract(const Divisor& a, const Divisor& b, double merge_rel) {
  if (a.radius != b.radius) throw RadiusMismatch("divisor radii differ");
  const double tol = merge_rel * a.radius;
  Divisor out{a.radius, {}, a.valid && b.valid};
  for (const auto& p : a.points) {
    int m = p.mult;
    for (const auto& q : b.points) {
      if (std::abs(p.z - q.z) <= tol) m -= q.mult;
    }
    if (m > 0) out.points.push_back({p.z, m, p.flagged});
  }
  return out;
}

Divisor divisor_add(const Divisor& a, const Divisor& b, double merge_rel) {
  if (a.radius != b.radius) throw RadiusMismatch("divisor radii differ");
  const double tol = merge_rel * a.radius;
  Divisor out = a;
  out.valid = a.valid && b.valid;
  for (const auto& q : b.points) {
    auto it = std::find_if(out.points.begin(), out.points.end(),
                           [&](const DivisorPoint& p) { return std::abs(p.z - q.z) <= tol; });
    if (it != out.points.end()) {
      it->mult += q.mult;
      it->flagged = it->flagged || q.flagged;
    } else {
      out.points.push_back(q);
    }
  }
  sort_points(out.points);
  return out;
}

}  // namespace nevlab
