#include <catch_amalgamated.hpp>

#include <numbers>

#include "nevlab/error.hpp"
#include "nevlab/nevanlinna.hpp"
#include "nevlab/parser.hpp"

using namespace nevlab;

namespace {

const double kPi = std::numbers::pi;
const double kE = std::numbers::e;

MeroFunction fn(const char* s) { return MeroFunction(parse_expr(s)); }

CountingSpec mode(CountingMode m, int k = 0) { return CountingSpec{Target::at(0.0), m, k}; }

}  // namespace

TEST_CASE("proximity closed forms") {
  // (1/2pi) * integral of max(0, r cos t) = r/pi.
  CHECK(std::abs(proximity(fn("exp(z)"), kPi) - 1.0) <= 1e-8);
  CHECK(std::abs(proximity(fn("exp(z)"), 25.0) - 25.0 / kPi) <= 1e-8);
  CHECK(proximity(fn("0.5"), 3.0) == 0.0);
  CHECK(proximity(fn("1"), 3.0) == 0.0);
  CHECK(std::abs(proximity(fn("z"), kE) - 1.0) <= 1e-9);
  CHECK(std::abs(proximity(fn("z"), kE * kE) - 2.0) <= 1e-9);
  CHECK(proximity(fn("1/z"), 2.0) == 0.0);
  // log+|z^2 - 1| is kinked at four points on |z| = 1.2 and has no closed form;
  // Jensen gives the average of log|z^2-1| = 2 log 1.2 as a lower bound.
  double m = proximity(fn("z^2-1"), 1.2);
  CHECK(m >= 2.0 * std::log(1.2) - 1e-9);
}

TEST_CASE("counting closed forms") {
  auto d = divisor_of(fn("exp(z)"), 10.0, Target::at(1.0)).zeros;
  REQUIRE(d.degree() == 3);
  double want = std::log(10.0) + 2.0 * std::log(10.0 / (2.0 * kPi));
  CHECK(std::abs(counting(d, 10.0, CountingSpec{Target::at(1.0)}) - want) <= 1e-9);
  CHECK(std::abs(want - 3.2320) <= 1e-3);

  const double r = 3.0;
  auto z = find_zeros(parse_expr("z^3*(z-1)"), r);
  CHECK(std::abs(counting(z, r, mode(CountingMode::Capped, 2)) - 3.0 * std::log(r)) <= 1e-12);
  CHECK(std::abs(counting(z, r, mode(CountingMode::TruncLe, 2)) - std::log(r)) <= 1e-12);
  CHECK(std::abs(counting(z, r, mode(CountingMode::Full)) - 4.0 * std::log(r)) <= 1e-12);
  CHECK(std::abs(counting(z, r, mode(CountingMode::Reduced)) - 2.0 * std::log(r)) <= 1e-12);
  CHECK(std::abs(counting(z, r, mode(CountingMode::TruncGe, 2)) - 3.0 * std::log(r)) <= 1e-12);
  CHECK(std::abs(counting(z, r, mode(CountingMode::TruncGeReduced, 2)) - std::log(r)) <= 1e-12);
  CHECK(std::abs(counting(z, r, mode(CountingMode::TruncLeReduced, 2)) - std::log(r)) <= 1e-12);

  Divisor empty{5.0, {}, true};
  for (auto m : {CountingMode::Full, CountingMode::Reduced, CountingMode::Capped}) {
    CHECK(counting(empty, 5.0, mode(m, 2)) == 0.0);
  }
}

TEST_CASE("counting mode ordering") {
  const char* suite[] = {"(z-1)^3*(z+2)^2*z", "exp(z)-1", "sin(z)^2*(z-0.5)", "z^4*(z^2+1)^3"};
  for (const char* s : suite) {
    auto d = find_zeros(parse_expr(s), 9.0);
    for (double r : {1.5, 3.0, 6.0, 9.0}) {
      double full = counting(d, r, mode(CountingMode::Full));
      double red = counting(d, r, mode(CountingMode::Reduced));
      CHECK(red <= full + 1e-12);
      for (int k = 1; k <= 4; ++k) {
        double le = counting(d, r, mode(CountingMode::TruncLe, k));
        double ge = counting(d, r, mode(CountingMode::TruncGe, k + 1));
        CHECK(std::abs(le + ge - full) <= 1e-12 * (1.0 + full));
        double cap = counting(d, r, mode(CountingMode::Capped, k));
        CHECK(cap <= std::min(full, k * red) + 1e-12);
      }
    }
  }
}

TEST_CASE("characteristic closed forms") {
  for (double r : {1.0, 2.0, 7.5}) {
    auto s = characteristic(fn("z"), r);
    CHECK(std::abs(s.T - std::log(r)) <= 1e-9);
    CHECK(s.N == 0.0);
    auto p = characteristic(fn("1/z"), r);
    CHECK(std::abs(p.T - std::log(r)) <= 1e-9);
    CHECK(p.m <= 1e-12);
  }
  auto e = characteristic(fn("exp(z)"), kPi);
  CHECK(std::abs(e.T - 1.0) <= 1e-8);
}

TEST_CASE("radial grids") {
  auto s = radial_grid(fn("z"), {1.0, kE, kE * kE});
  REQUIRE(s.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(s[static_cast<std::size_t>(i)].T - i) <= 1e-9);
  auto e = radial_grid(fn("exp(z)"), {kPi, 2.0 * kPi});
  CHECK(std::abs(e[0].T - 1.0) <= 1e-8);
  CHECK(std::abs(e[1].T - 2.0) <= 1e-8);
  CHECK(radial_grid(fn("z"), {}).empty());
  CHECK_THROWS(radial_grid(fn("z"), {2.0, 1.0}));
}

TEST_CASE("radius perturbation avoids poles on the circle") {
  // tan has a pole at pi/2; asking for r = pi/2 must move the radius.
  auto s = radial_grid(fn("tan(z)"), {1.0, kPi / 2.0, 3.0});
  REQUIRE(s[1].ok);
  CHECK(s[1].perturbed);
  CHECK(s[1].r_used > kPi / 2.0);
  CHECK(std::abs(s[1].r_used - kPi / 2.0) <= 1e-3 * kPi / 2.0);
  CHECK_FALSE(s[0].perturbed);
}

TEST_CASE("T is nondecreasing on suite functions") {
  const char* suite[] = {"exp(z)", "tan(z)", "(z-1)*exp(z)/z", "exp(z)-1", "(z^2-1)/(z^2+1)", "sin(z)"};
  auto radii = log_spaced(2.0, 40.0, 32);
  for (const char* s : suite) {
    auto g = radial_grid(fn(s), radii);
    for (std::size_t i = 0; i < g.size(); ++i) {
      INFO(s << " r=" << g[i].r);
      REQUIRE(g[i].ok);
      CHECK(g[i].m >= 0.0);
      CHECK(g[i].N >= 0.0);
      if (i > 0) CHECK(g[i].T >= g[i - 1].T - 1e-6);
    }
  }
}

TEST_CASE("grid helpers") {
  auto l = log_spaced(2.0, 40.0, 32);
  REQUIRE(l.size() == 32);
  CHECK(l.front() == 2.0);
  CHECK(l.back() == 40.0);
  CHECK(std::abs(l[1] / l[0] - l[31] / l[30]) < 1e-12);
  auto lin = linear_spaced(1.0, 2.0, 3);
  CHECK(lin[1] == 1.5);
}

TEST_CASE("threaded grids match the serial result") {
  auto radii = log_spaced(2.0, 20.0, 10);
  auto a = radial_grid(fn("tan(z)"), radii, {}, 1);
  auto b = radial_grid(fn("tan(z)"), radii, {}, 4);
  for (std::size_t i = 0; i < radii.size(); ++i) CHECK(a[i].T == b[i].T);
}

TEST_CASE("first fundamental theorem bound") {
  const auto radii = log_spaced(2.0, 40.0, 32);
  for (std::string f : {"exp(z)", "tan(z)", "(z-1)*exp(z)/z"}) {
    auto base = radial_grid(fn(f.c_str()), radii);
    for (std::string a : {"1", "i"}) {
      auto shifted = radial_grid(MeroFunction(parse_expr("1/((" + f + ")-(" + a + "))")), radii);
      INFO(f << " a=" << a);
      for (std::size_t i = 0; i < radii.size(); ++i) {
        REQUIRE(base[i].ok);
        REQUIRE(shifted[i].ok);
        // log+|a| = 0 for both targets.
        CHECK(std::abs(shifted[i].T - base[i].T) <= std::log(2.0) + 0.5);
      }
    }
  }
}
