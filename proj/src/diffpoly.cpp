#include "nevlab/diffpoly.hpp"

#include <algorithm>
#include <stdexcept>

#include "nevlab/error.hpp"
#include "nevlab/identity.hpp"

namespace nevlab {

DiffMonomial::DiffMonomial(MeroExpr coeff, std::vector<int> exponents)
    : coeff_(std::move(coeff)), exponents_(std::move(exponents)) {
  if (std::any_of(exponents_.begin(), exponents_.end(), [](int q) { return q < 0; })) {
    throw std::invalid_argument("monomial exponents must be non-negative");
  }
  if (std::none_of(exponents_.begin(), exponents_.end(), [](int q) { return q > 0; })) {
    throw std::invalid_argument("monomial needs at least one positive exponent");
  }
  if (!is_rational(coeff_)) {
    throw std::invalid_argument("monomial coefficient must be a rational function of z");
  }
  auto zero = is_identically_zero(coeff_);
  if (zero == ZeroVerdict::Zero || zero == ZeroVerdict::ProbablyZero) {
    throw std::invalid_argument("monomial coefficient must not vanish identically");
  }
}

int DiffMonomial::degree() const {
  int d = 0;
  for (int q : exponents_) d += q;
  return d;
}

int DiffMonomial::weight() const {
  int g = 0;
  for (std::size_t i = 0; i < exponents_.size(); ++i) g += static_cast<int>(i + 1) * exponents_[i];
  return g;
}

int DiffMonomial::weight_excess() const {
  int s = 0;
  for (std::size_t i = 0; i < exponents_.size(); ++i) s += static_cast<int>(i) * exponents_[i];
  return s;
}

int DiffMonomial::order() const {
  for (std::size_t i = exponents_.size(); i-- > 0;) {
    if (exponents_[i] > 0) return static_cast<int>(i);
  }
  return 0;
}

DiffPolynomial::DiffPolynomial(std::vector<DiffMonomial> monomials)
    : monomials_(std::move(monomials)) {
  if (monomials_.empty()) throw std::invalid_argument("differential polynomial needs a monomial");
}

DiffPolynomial DiffPolynomial::operator+(const DiffPolynomial& other) const {
  auto all = monomials_;
  all.insert(all.end(), other.monomials_.begin(), other.monomials_.end());
  return DiffPolynomial(std::move(all));
}

PolyStats poly_stats(const DiffPolynomial& p) {
  const auto& ms = p.monomials();
  PolyStats s;
  s.degree_upper = s.degree_lower = ms.front().degree();
  s.qstar = ms.front().q(0);
  for (const auto& m : ms) {
    s.degree_upper = std::max(s.degree_upper, m.degree());
    s.degree_lower = std::min(s.degree_lower, m.degree());
    s.weight = std::max(s.weight, m.weight());
    s.nu = std::max(s.nu, m.weight_excess());
    s.qstar = std::min(s.qstar, m.q(0));
    s.order = std::max(s.order, m.order());
  }
  s.qkstar = ms.front().q(static_cast<std::size_t>(s.order));
  for (const auto& m : ms) s.qkstar = std::min(s.qkstar, m.q(static_cast<std::size_t>(s.order)));
  s.homogeneous = s.degree_upper == s.degree_lower;
  return s;
}

MeroExpr apply(const DiffPolynomial& p, const MeroExpr& f) {
  int k = poly_stats(p).order;
  std::vector<MeroExpr> derivs{f};
  for (int i = 1; i <= k; ++i) derivs.push_back(differentiate(derivs.back()));

  std::vector<MeroExpr> terms;
  for (const auto& m : p.monomials()) {
    std::vector<MeroExpr> factors{m.coeff()};
    for (std::size_t i = 0; i < m.exponents().size(); ++i) {
      if (m.q(i) > 0) factors.push_back(pow(derivs[i], m.q(i)));
    }
    terms.push_back(product(std::move(factors)));
  }
  return sum(std::move(terms));
}

namespace {

class Clauses {
 public:
  explicit Clauses(const DiffPolynomial& p) : p_(p), s_(poly_stats(p)) {}

  void require(bool ok, const std::string& msg) {
    if (!ok) out_.push_back(msg);
  }

  void homogeneous() {
    require(s_.homogeneous, "P is not homogeneous (degrees " + std::to_string(s_.degree_lower) +
                                ".." + std::to_string(s_.degree_upper) + ")");
  }

  void order_at_least(int lo) {
    require(s_.order >= lo, "k=" + std::to_string(s_.order) + " < " + std::to_string(lo));
  }

  void first_exponent_at_least(int lo) {
    for (std::size_t j = 0; j < p_.monomials().size(); ++j) {
      int q0 = p_.monomials()[j].q(0);
      require(q0 >= lo, "monomial " + std::to_string(j + 1) + ": q0=" + std::to_string(q0) + " < " +
                            std::to_string(lo));
    }
  }

  void top_exponent_at_least(int lo) {
    auto k = static_cast<std::size_t>(s_.order);
    for (std::size_t j = 0; j < p_.monomials().size(); ++j) {
      int qk = p_.monomials()[j].q(k);
      require(qk >= lo, "monomial " + std::to_string(j + 1) + ": q" + std::to_string(k) + "=" +
                            std::to_string(qk) + " < " + std::to_string(lo));
    }
  }

  void single_constant_monomial() {
    require(p_.is_monomial(), "expected a single differential monomial");
    const auto& c = p_.monomials().front().coeff();
    auto cv = is_constant(c);
    require(cv.kind == ConstantVerdict::Kind::Constant && cv.value != 0.0,
            "monomial coefficient must be a nonzero constant");
  }

  const PolyStats& stats() const { return s_; }
  std::vector<std::string> take() { return std::move(out_); }

 private:
  const DiffPolynomial& p_;
  PolyStats s_;
  std::vector<std::string> out_;
};

}  // namespace

std::vector<std::string> validate_hypotheses(const DiffPolynomial& p, const std::string& check_id) {
  Clauses c(p);
  const auto& s = c.stats();
  int d = s.degree_upper;
  if (check_id == "thm_1" || check_id == "thm_e") {
    if (check_id == "thm_e") c.single_constant_monomial();
    else c.homogeneous();
    c.order_at_least(2);
    c.first_exponent_at_least(2);
    c.top_exponent_at_least(2);
  } else if (check_id == "thm_2" || check_id == "thm_f") {
    if (check_id == "thm_f") c.single_constant_monomial();
    else c.homogeneous();
    c.order_at_least(1);
    c.first_exponent_at_least(1);
    c.top_exponent_at_least(1);
    c.require(d - s.nu > 2, "d(P)-nu=" + std::to_string(d - s.nu) + " is not > 2");
  } else if (check_id == "thm_3") {
    c.homogeneous();
    c.order_at_least(1);
    c.first_exponent_at_least(1);
    c.top_exponent_at_least(1);
    int lhs = d + s.order * s.qstar;
    int rhs = 2 * (s.order + 1) + s.nu;
    c.require(lhs > rhs, "d(P)+k*q*=" + std::to_string(lhs) + " is not > 2(k+1)+nu=" +
                             std::to_string(rhs));
  } else if (check_id == "thm_g") {
    c.single_constant_monomial();
    c.order_at_least(1);
    c.first_exponent_at_least(1);
    c.top_exponent_at_least(1);
    int q0 = p.monomials().front().q(0);
    c.require(d - s.nu >= 5 - q0, "mu-mu*=" + std::to_string(d - s.nu) + " is not >= 5-q0=" +
                                      std::to_string(5 - q0));
  } else if (check_id == "lem_35") {
    c.homogeneous();
    c.first_exponent_at_least(1);
  } else if (check_id == "lem_36") {
    c.homogeneous();
    c.first_exponent_at_least(1);
    c.top_exponent_at_least(1);
  } else if (check_id == "lem_33" || check_id == "thm_a" || check_id == "thm_b" ||
             check_id == "thm_c" || check_id == "thm_d" || check_id == "lem_31" ||
             check_id == "lem_32") {
    // No clause on P: these checks build their own expression or take any P.
  } else {
    throw UnknownCheck("unknown check id '" + check_id + "'");
  }
  return c.take();
}

std::string to_string(const DiffPolynomial& p) {
  std::string s;
  for (std::size_t j = 0; j < p.monomials().size(); ++j) {
    const auto& m = p.monomials()[j];
    if (j) s += " + ";
    std::string c = to_string(m.coeff());
    bool first = true;
    if (c != "1") {
      s += "(" + c + ")";
      first = false;
    }
    for (std::size_t i = 0; i < m.exponents().size(); ++i) {
      int q = m.q(i);
      if (q == 0) continue;
      if (!first) s += "*";
      first = false;
      std::string base = i == 0 ? "f" : "f^(" + std::to_string(i) + ")";
      s += q == 1 ? base : "(" + base + ")^" + std::to_string(q);
    }
  }
  return s;
}

}  // namespace nevlab
