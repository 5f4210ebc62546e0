#include <catch_amalgamated.hpp>

#include "nevlab/diffpoly.hpp"
#include "nevlab/identity.hpp"
#include "nevlab/parser.hpp"
#include "support.hpp"

using namespace nevlab;

TEST_CASE("exact zero verdicts in the exponential class") {
  CHECK(is_identically_zero(parse_expr("exp(z)-1")) == ZeroVerdict::NonZero);
  CHECK(is_identically_zero(parse_expr("exp(z)*exp(z)-exp(2*z)")) == ZeroVerdict::Zero);
  CHECK(is_identically_zero(parse_expr("tan(z)-sin(z)/cos(z)")) == ZeroVerdict::Zero);
  CHECK(is_identically_zero(parse_expr("(exp(2*z)-1)/(exp(z)-1)-exp(z)-1")) == ZeroVerdict::Zero);
}

TEST_CASE("sampling fallback outside the class") {
  CHECK(is_identically_zero(parse_expr("exp(z^2)*exp(z^2)-exp(2*z^2)")) == ZeroVerdict::ProbablyZero);
  CHECK(is_identically_zero(parse_expr("exp(z^2)-1")) == ZeroVerdict::ProbablyNonZero);
}

TEST_CASE("zero test never claims Zero with a witness") {
  const char* inputs[] = {"exp(z)-1",          "exp(z^2)-1-z^2",       "sin(z)-z",
                          "exp(exp(z))-exp(1)", "z^20",                 "exp(-40*z)",
                          "1e-7*z",             "(z-1)^8-z^8",          "tan(z)*cos(z)-sin(z)+1e-5"};
  for (const char* s : inputs) {
    auto e = parse_expr(s);
    bool witness = false;
    for (auto z : testing_support::random_points(50, 31, 0.1, 3.0)) {
      auto v = testing_support::value_at(e, z);
      if (std::abs(v) > 1e-6) witness = true;
    }
    INFO(s);
    if (witness) {
      auto v = is_identically_zero(e);
      CHECK(v != ZeroVerdict::Zero);
      CHECK(v != ZeroVerdict::ProbablyZero);
    }
  }
}

TEST_CASE("constant detection") {
  auto c1 = is_constant(parse_expr("exp(z)/exp(z)"));
  CHECK(c1.kind == ConstantVerdict::Kind::Constant);
  CHECK(std::abs(c1.value - 1.0) < 1e-12);
  CHECK(c1.exact);
  CHECK(is_constant(parse_expr("exp(z)")).kind == ConstantVerdict::Kind::NonConstant);
  auto c0 = is_constant(parse_expr("(exp(2*z)-1)/(exp(z)-1)-exp(z)-1"));
  CHECK(c0.kind == ConstantVerdict::Kind::Constant);
  CHECK(std::abs(c0.value) < 1e-12);
  auto ct = is_constant(parse_expr("sin(z)^2+cos(z)^2"));
  CHECK(ct.kind == ConstantVerdict::Kind::Constant);
  CHECK(std::abs(ct.value - 1.0) < 1e-12);
  CHECK(is_constant(parse_expr("exp(z^2)")).kind == ConstantVerdict::Kind::NonConstant);
}

TEST_CASE("rationality") {
  CHECK(is_rational(parse_expr("(z^2-1)/(z^2+1)")));
  CHECK(is_rational(parse_expr("exp(z)/exp(z)*z")));
  CHECK_FALSE(is_rational(parse_expr("exp(z)")));
  CHECK_FALSE(is_rational(parse_expr("tan(z)")));
}
