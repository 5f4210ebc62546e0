#include <catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>
#include <random>

#include "nevlab/analytic.hpp"
#include "nevlab/error.hpp"
#include "nevlab/locator.hpp"
#include "nevlab/parser.hpp"

using namespace nevlab;

namespace {

const double kPi = std::numbers::pi;

bool has_point(const Divisor& d, cplx z, int mult, double tol = 1e-8) {
  for (const auto& p : d.points) {
    if (std::abs(p.z - z) <= tol) return p.mult == mult;
  }
  return false;
}

int winding_of(const char* s, double r) { return winding_number(MeroFunction(parse_expr(s)), r); }

}  // namespace

TEST_CASE("winding numbers") {
  CHECK(winding_of("z^2", 1.0) == 2);
  CHECK(winding_of("exp(3*z)-1", 3.0) == 3);
  CHECK(winding_of("(z-1/2)^2/z", 1.0) == 1);
  CHECK(winding_of("exp(z)", 5.0) == 0);
  CHECK(winding_of("tan(z)", 2.0) == -1);
  CHECK_THROWS_AS(winding_of("z-1", 1.0), RingTooClose);
}

TEST_CASE("zeros of closed-form functions") {
  auto d1 = find_zeros(parse_expr("(z-1)^3"), 2.0);
  REQUIRE(d1.points.size() == 1);
  CHECK(has_point(d1, 1.0, 3));
  CHECK(d1.valid);

  auto d2 = find_zeros(parse_expr("exp(3*z)-1"), 3.0);
  REQUIRE(d2.points.size() == 3);
  CHECK(has_point(d2, 0.0, 1));
  CHECK(has_point(d2, cplx(0.0, 2.0 * kPi / 3.0), 1));
  CHECK(has_point(d2, cplx(0.0, -2.0 * kPi / 3.0), 1));

  auto q = to_quotient(parse_expr("sin(z)"));
  auto d3 = find_zeros(q.num, 4.0);
  REQUIRE(d3.points.size() == 3);
  CHECK(has_point(d3, -kPi, 1));
  CHECK(has_point(d3, 0.0, 1));
  CHECK(has_point(d3, kPi, 1));
  // Sorted by (re, im).
  CHECK(d3.points[0].z.real() < d3.points[1].z.real());
}

TEST_CASE("multiple zeros inside an expanded product") {
  auto d = find_zeros(parse_expr("z^3-3*z^2+3*z-1"), 2.0);
  CHECK(d.degree() == 3);
  REQUIRE(d.points.size() == 1);
  CHECK(std::abs(d.points[0].z - 1.0) < 1e-4);
  CHECK(d.points[0].mult == 3);
}

TEST_CASE("exp factors are skipped") {
  auto d = find_zeros(parse_expr("(z-1)*exp(z)*z^2"), 3.0);
  CHECK(has_point(d, 0.0, 2));
  CHECK(has_point(d, 1.0, 1));
  CHECK(d.degree() == 3);
}

TEST_CASE("divisors of meromorphic functions") {
  auto inv = divisor_of(MeroFunction(parse_expr("1/z")), 1.0, Target::infinity());
  REQUIRE(inv.zeros.points.size() == 1);
  CHECK(has_point(inv.zeros, 0.0, 1));

  auto ones = divisor_of(MeroFunction(parse_expr("exp(z)")), 7.0, Target::at(1.0));
  REQUIRE(ones.zeros.points.size() == 3);
  CHECK(has_point(ones.zeros, 0.0, 1));
  CHECK(has_point(ones.zeros, cplx(0.0, 2.0 * kPi), 1));
  CHECK(has_point(ones.zeros, cplx(0.0, -2.0 * kPi), 1));
  CHECK(ones.poles.points.empty());

  auto canc = divisor_of(MeroFunction(parse_expr("z^2/z")), 1.0, Target::at(0.0));
  REQUIRE(canc.zeros.points.size() == 1);
  CHECK(has_point(canc.zeros, 0.0, 1));
  CHECK(canc.poles.points.empty());

  auto tanp = divisor_of(MeroFunction(parse_expr("tan(z)")), 5.0, Target::infinity());
  CHECK(tanp.zeros.degree() == 4);
  CHECK(has_point(tanp.zeros, kPi / 2.0, 1));
  CHECK(has_point(tanp.zeros, -3.0 * kPi / 2.0, 1));
}

TEST_CASE("divisor algebra") {
  Divisor a{2.0, {{1.0, 3}}, true}, b{2.0, {{1.0, 1}}, true};
  auto d = divisor_subtract(a, b);
  REQUIRE(d.points.size() == 1);
  CHECK(d.points[0].mult == 2);
  CHECK(divisor_subtract(b, Divisor{2.0, {{1.0, 5}}, true}).points.empty());
  Divisor c{2.0, {{0.0, 2}, {cplx(0, 1), 1}}, true}, e{2.0, {{cplx(0, 1), 1}}, true};
  auto ce = divisor_subtract(c, e);
  REQUIRE(ce.points.size() == 1);
  CHECK(ce.points[0].mult == 2);
  CHECK(ce.points[0].z == cplx(0.0));
  CHECK_THROWS_AS(divisor_subtract(a, Divisor{3.0, {}, true}), RadiusMismatch);
  CHECK(divisor_add(a, b).degree() == 4);
}

TEST_CASE("conservation and monotonicity on suite functions") {
  const char* suite[] = {"exp(z)-1", "exp(3*z)-1", "sin(z)", "cos(z)", "(z-1)*exp(z)", "z^2+1",
                         "exp(2*z)+exp(-z)+z", "exp(i*z)-z"};
  const double radii[] = {2.5, 6.0, 11.0};
  for (const char* s : suite) {
    auto q = to_quotient(parse_expr(s));
    EntireFunction g(q.num);
    Divisor outer = find_zeros(q.num, 11.0);
    for (double r : radii) {
      INFO(s << " r=" << r);
      auto d = find_zeros(q.num, r);
      CHECK(d.valid);
      CHECK(d.degree() == winding_number(g, 0.0, r));
      auto inner = outer.restricted(r);
      CHECK(inner.degree() == d.degree());
      for (const auto& p : d.points) {
        bool found = false;
        for (const auto& o : inner.points) found = found || (std::abs(o.z - p.z) < 1e-8 * r && o.mult == p.mult);
        CHECK(found);
      }
    }
  }
}

TEST_CASE("random integer polynomials match companion-matrix roots") {
  std::mt19937_64 rng(20240917);
  std::uniform_int_distribution<int> coef(-5, 5), deg(1, 8);
  int trials = 0;
  while (trials < 100) {
    int n = deg(rng);
    std::vector<int> c(static_cast<std::size_t>(n + 1));
    for (auto& x : c) x = coef(rng);
    if (c.back() == 0) continue;
    // Build the expression c0 + c1 z + ... + cn z^n.
    MeroExpr e = constant(0.0);
    for (int j = n; j >= 0; --j) e = e * var_z() + constant(double(c[static_cast<std::size_t>(j)]));
    // Oracle roots.
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -double(c[static_cast<std::size_t>(i)]) / c.back();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp);
    std::vector<cplx> roots(es.eigenvalues().data(), es.eigenvalues().data() + n);
    double rmax = 0.0;
    for (auto z : roots) rmax = std::max(rmax, std::abs(z));
    double r = 1.5 * rmax + 0.5;
    ++trials;
    INFO("trial " << trials << " poly " << to_string(e));
    auto d = find_zeros(e, r);
    CHECK(d.valid);
    REQUIRE(d.degree() == n);
    // Every oracle root (or the mean of an oracle cluster) is matched.
    for (const auto& p : d.points) {
      std::vector<cplx> near;
      for (auto z : roots) {
        if (std::abs(z - p.z) < 1e-4) near.push_back(z);
      }
      CHECK(int(near.size()) == p.mult);
      cplx mean = 0.0;
      for (auto z : near) mean += z;
      if (!near.empty()) mean /= double(near.size());
      double tol = p.mult == 1 ? 1e-8 : 1e-6;
      CHECK(std::abs(mean - p.z) <= tol);
    }
  }
}
