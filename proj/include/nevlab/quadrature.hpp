#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature over a real parameter,
// generic in the value type (double, complex, or small arrays of complex).

#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace nevlab::quad {

namespace detail {

inline constexpr std::array<double, 8> kNodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrod{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> kGauss{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace detail

template <class V>
struct Estimate {
  V value{};
  double error = 0.0;
};

/// One 15-point Kronrod estimate on [a, b]; the error is |K15 - G7| in `norm`.
template <class V, class F, class Norm>
Estimate<V> gk15(F& f, double a, double b, Norm& norm) {
  using namespace detail;
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  V center = f(c);
  V kron = center * kKronrod[7];
  V gauss = center * kGauss[3];
  for (int i = 0; i < 7; ++i) {
    V lo = f(c - h * kNodes[i]);
    V hi = f(c + h * kNodes[i]);
    V s = lo + hi;
    kron = kron + s * kKronrod[i];
    if (i % 2 == 1) gauss = gauss + s * kGauss[i / 2];
  }
  return {kron * h, norm((kron - gauss) * h)};
}

template <class V>
struct Result {
  V value{};
  double error = 0.0;
  int intervals = 0;
  bool converged = false;
};

struct Options {
  double abs_tol = 1e-10;
  int initial_pieces = 8;
  int max_intervals = 4000;
  /// Intervals narrower than this are not split further.
  double min_width = 1e-15;
};

/// Integrates f over [a, b], splitting the interval with the largest error
/// estimate until the summed error is below abs_tol or the budget runs out.
template <class V, class F, class Norm>
Result<V> integrate(F&& f, double a, double b, const Options& opt, Norm norm) {
  struct Piece {
    double a, b;
    Estimate<V> est;
    bool operator<(const Piece& o) const { return est.error < o.est.error; }
  };
  std::priority_queue<Piece> heap;
  double err = 0.0;
  const int n0 = opt.initial_pieces > 0 ? opt.initial_pieces : 1;
  for (int i = 0; i < n0; ++i) {
    double lo = a + (b - a) * i / n0;
    double hi = i + 1 == n0 ? b : a + (b - a) * (i + 1) / n0;
    auto e = gk15<V>(f, lo, hi, norm);
    err += e.error;
    heap.push({lo, hi, e});
  }
  int count = n0;
  while (err > opt.abs_tol && count < opt.max_intervals && !heap.empty()) {
    Piece p = heap.top();
    if (std::abs(p.b - p.a) <= opt.min_width * (1.0 + std::abs(p.a))) break;
    heap.pop();
    double mid = 0.5 * (p.a + p.b);
    auto l = gk15<V>(f, p.a, mid, norm);
    auto r = gk15<V>(f, mid, p.b, norm);
    err += l.error + r.error - p.est.error;
    heap.push({p.a, mid, l});
    heap.push({mid, p.b, r});
    ++count;
  }
  // Sum from the final pieces; the running error sum drifts slightly.
  V exact{};
  double exact_err = 0.0;
  while (!heap.empty()) {
    exact = exact + heap.top().est.value;
    exact_err += heap.top().est.error;
    heap.pop();
  }
  return {exact, exact_err, count, exact_err <= opt.abs_tol};
}

}  // namespace nevlab::quad
