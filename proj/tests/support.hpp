#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "nevlab/expr.hpp"

namespace testing_support {

using nevlab::cplx;

inline std::vector<cplx> random_points(int n, unsigned seed, double rmin = 0.3, double rmax = 2.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> rad(rmin, rmax), ang(0.0, 2.0 * M_PI);
  std::vector<cplx> pts;
  for (int i = 0; i < n; ++i) pts.push_back(std::polar(rad(rng), ang(rng)));
  return pts;
}

inline cplx value_at(const nevlab::MeroExpr& e, cplx z) {
  auto r = nevlab::eval(e, z);
  if (auto* v = std::get_if<cplx>(&r)) return *v;
  return {NAN, NAN};
}

}  // namespace testing_support

#include "nevlab/diffpoly.hpp"

namespace testing_support {

inline nevlab::DiffPolynomial poly(std::vector<std::pair<double, std::vector<int>>> terms) {
  std::vector<nevlab::DiffMonomial> ms;
  for (auto& [c, q] : terms) ms.emplace_back(nevlab::constant(c), q);
  return nevlab::DiffPolynomial(std::move(ms));
}

// f^2 (f'(f'')^2(f''')^2 - (f')^2 f'' (f''')^2), vanishing at e^z.
inline nevlab::DiffPolynomial vanishing_order3() {
  return poly({{1.0, {2, 1, 2, 2}}, {-1.0, {2, 2, 1, 2}}});
}

// f^6 (f' f''' + f'' f'''), vanishing at e^{-z}.
inline nevlab::DiffPolynomial vanishing_sixth() { return poly({{1.0, {6, 1, 0, 1}}, {1.0, {6, 0, 1, 1}}}); }

// f^5 (f')^3 - f^3 (f')^5, vanishing at e^z.
inline nevlab::DiffPolynomial vanishing_first_order() { return poly({{1.0, {5, 3}}, {-1.0, {3, 5}}}); }

}  // namespace testing_support
