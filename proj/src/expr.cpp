#include "nevlab/expr.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

namespace nevlab {

namespace {

std::shared_ptr<const Node> make_node(NodeKind kind, cplx value = {}, int exponent = 0,
                                      std::vector<MeroExpr> children = {}) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->value = value;
  n->exponent = exponent;
  n->children = std::move(children);
  return n;
}

bool finite(cplx c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

}  // namespace

MeroExpr::MeroExpr() : node_(make_node(NodeKind::Const)) {}

MeroExpr MeroExpr::constant(cplx c) { return MeroExpr(make_node(NodeKind::Const, c)); }

MeroExpr MeroExpr::var() { return MeroExpr(make_node(NodeKind::Var)); }

MeroExpr MeroExpr::add(std::vector<MeroExpr> terms) {
  if (terms.empty()) throw std::invalid_argument("Add needs at least one term");
  return MeroExpr(make_node(NodeKind::Add, {}, 0, std::move(terms)));
}

MeroExpr MeroExpr::mul(std::vector<MeroExpr> factors) {
  if (factors.empty()) throw std::invalid_argument("Mul needs at least one factor");
  return MeroExpr(make_node(NodeKind::Mul, {}, 0, std::move(factors)));
}

MeroExpr MeroExpr::neg(MeroExpr child) {
  return MeroExpr(make_node(NodeKind::Neg, {}, 0, {std::move(child)}));
}

MeroExpr MeroExpr::div(MeroExpr num, MeroExpr den) {
  if (den.is_const(0.0)) throw std::invalid_argument("division by the literal constant 0");
  return MeroExpr(make_node(NodeKind::Div, {}, 0, {std::move(num), std::move(den)}));
}

MeroExpr MeroExpr::int_pow(MeroExpr base, int exponent) {
  if (exponent == 0) throw std::invalid_argument("IntPow exponent must be nonzero");
  return MeroExpr(make_node(NodeKind::IntPow, {}, exponent, {std::move(base)}));
}

MeroExpr MeroExpr::exp(MeroExpr arg) {
  return MeroExpr(make_node(NodeKind::Exp, {}, 0, {std::move(arg)}));
}

NodeKind MeroExpr::kind() const { return node_->kind; }
cplx MeroExpr::value() const { return node_->value; }
int MeroExpr::exponent() const { return node_->exponent; }
std::span<const MeroExpr> MeroExpr::children() const { return node_->children; }

// ---------------------------------------------------------------------------
// Simplifying builders

MeroExpr sum(std::vector<MeroExpr> terms) {
  std::vector<MeroExpr> flat;
  cplx c = 0.0;
  for (auto& t : terms) {
    if (t.kind() == NodeKind::Add) {
      for (const auto& s : t.children()) {
        if (s.is_const()) c += s.value();
        else flat.push_back(s);
      }
    } else if (t.is_const()) {
      c += t.value();
    } else {
      flat.push_back(std::move(t));
    }
  }
  if (c != 0.0) flat.insert(flat.begin(), MeroExpr::constant(c));
  if (flat.empty()) return MeroExpr::constant(0.0);
  if (flat.size() == 1) return flat.front();
  return MeroExpr::add(std::move(flat));
}

MeroExpr product(std::vector<MeroExpr> factors) {
  cplx c = 1.0;
  std::vector<std::pair<MeroExpr, int>> powers;
  std::vector<MeroExpr> exp_args;

  auto absorb = [&](auto&& self, const MeroExpr& f, int mult) -> void {
    switch (f.kind()) {
      case NodeKind::Const:
        c *= ipow(f.value(), mult);
        return;
      case NodeKind::Mul:
        for (const auto& g : f.children()) self(self, g, mult);
        return;
      case NodeKind::Neg:
        if (mult % 2 != 0) c = -c;
        self(self, f.children()[0], mult);
        return;
      case NodeKind::IntPow:
        self(self, f.children()[0], mult * f.exponent());
        return;
      case NodeKind::Exp:
        exp_args.push_back(mult == 1 ? f.children()[0]
                                     : MeroExpr::constant(double(mult)) * f.children()[0]);
        return;
      default:
        break;
    }
    for (auto& [base, e] : powers) {
      if (structurally_equal(base, f)) {
        e += mult;
        return;
      }
    }
    powers.emplace_back(f, mult);
  };
  for (const auto& f : factors) absorb(absorb, f, 1);

  if (c == 0.0) return MeroExpr::constant(0.0);
  std::vector<MeroExpr> out;
  for (auto& [base, e] : powers) {
    if (e == 0) continue;
    out.push_back(e == 1 ? base : MeroExpr::int_pow(base, e));
  }
  if (!exp_args.empty()) {
    auto arg = sum(std::move(exp_args));
    if (arg.is_const()) c *= std::exp(arg.value());
    else out.push_back(MeroExpr::exp(arg));
  }
  if (c != 1.0 || out.empty()) out.insert(out.begin(), MeroExpr::constant(c));
  if (out.size() == 1) return out.front();
  return MeroExpr::mul(std::move(out));
}

MeroExpr operator+(const MeroExpr& a, const MeroExpr& b) { return sum({a, b}); }

MeroExpr operator-(const MeroExpr& a) {
  if (a.is_const()) return MeroExpr::constant(-a.value());
  if (a.kind() == NodeKind::Neg) return a.children()[0];
  if (a.kind() == NodeKind::Mul && a.children()[0].is_const()) {
    return product({MeroExpr::constant(-1.0), a});
  }
  if (a.kind() == NodeKind::Add) {
    std::vector<MeroExpr> terms;
    for (const auto& t : a.children()) terms.push_back(-t);
    return sum(std::move(terms));
  }
  return MeroExpr::neg(a);
}

MeroExpr operator-(const MeroExpr& a, const MeroExpr& b) { return sum({a, -b}); }

MeroExpr operator*(const MeroExpr& a, const MeroExpr& b) { return product({a, b}); }

MeroExpr operator/(const MeroExpr& a, const MeroExpr& b) {
  if (b.is_const()) {
    if (b.value() == 0.0) throw std::invalid_argument("division by the constant 0");
    return product({MeroExpr::constant(1.0 / b.value()), a});
  }
  if (a.is_const(0.0)) return a;
  if (structurally_equal(a, b)) return MeroExpr::constant(1.0);
  if (b.kind() == NodeKind::Exp) return product({a, exp(-b.children()[0])});
  return MeroExpr::div(a, b);
}

MeroExpr pow(const MeroExpr& base, int exponent) {
  if (exponent == 0) return MeroExpr::constant(1.0);
  if (exponent == 1) return base;
  switch (base.kind()) {
    case NodeKind::Const:
      return MeroExpr::constant(ipow(base.value(), exponent));
    case NodeKind::IntPow:
      return pow(base.children()[0], base.exponent() * exponent);
    case NodeKind::Exp:
      return exp(MeroExpr::constant(double(exponent)) * base.children()[0]);
    case NodeKind::Mul:
      if (exponent > 0) return product(std::vector<MeroExpr>(exponent, base));
      break;
    case NodeKind::Neg:
      return product({MeroExpr::constant(exponent % 2 == 0 ? 1.0 : -1.0),
                      pow(base.children()[0], exponent)});
    default:
      break;
  }
  return MeroExpr::int_pow(base, exponent);
}

MeroExpr exp(const MeroExpr& arg) {
  if (arg.is_const()) return MeroExpr::constant(std::exp(arg.value()));
  return MeroExpr::exp(arg);
}

// ---------------------------------------------------------------------------

bool structurally_equal(const MeroExpr& a, const MeroExpr& b) {
  if (a.same_node(b)) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case NodeKind::Const:
      return a.value() == b.value();
    case NodeKind::Var:
      return true;
    case NodeKind::IntPow:
      if (a.exponent() != b.exponent()) return false;
      break;
    default:
      break;
  }
  auto ca = a.children();
  auto cb = b.children();
  if (ca.size() != cb.size()) return false;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (!structurally_equal(ca[i], cb[i])) return false;
  }
  return true;
}

namespace {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_const(cplx c) {
  if (c.imag() == 0.0) {
    auto s = format_real(c.real());
    return c.real() < 0 ? "(" + s + ")" : s;
  }
  if (c.real() == 0.0) {
    if (c.imag() == 1.0) return "i";
    return "(" + format_real(c.imag()) + "*i)";
  }
  return "(" + format_real(c.real()) + (c.imag() < 0 ? "-" : "+") +
         format_real(std::abs(c.imag())) + "*i)";
}

// Precedence: 1 sum, 2 product/quotient, 3 unary minus, 4 power, 5 atom.
int precedence(const MeroExpr& e) {
  switch (e.kind()) {
    case NodeKind::Add: return 1;
    case NodeKind::Mul:
    case NodeKind::Div: return 2;
    case NodeKind::Neg: return 3;
    case NodeKind::IntPow: return 4;
    default: return 5;
  }
}

std::string wrap(const MeroExpr& e, int min_prec) {
  auto s = to_string(e);
  return precedence(e) < min_prec ? "(" + s + ")" : s;
}

}  // namespace

std::string to_string(const MeroExpr& e) {
  switch (e.kind()) {
    case NodeKind::Const:
      return format_const(e.value());
    case NodeKind::Var:
      return "z";
    case NodeKind::Add: {
      std::string s;
      bool first = true;
      for (const auto& t : e.children()) {
        if (!first && t.kind() == NodeKind::Neg) {
          s += "-" + wrap(t.children()[0], 2);
        } else {
          if (!first) s += "+";
          s += wrap(t, 2);
        }
        first = false;
      }
      return s;
    }
    case NodeKind::Mul: {
      std::string s;
      for (std::size_t i = 0; i < e.children().size(); ++i) {
        if (i) s += "*";
        s += wrap(e.children()[i], 3);
      }
      return s;
    }
    case NodeKind::Neg:
      return "-" + wrap(e.children()[0], 4);
    case NodeKind::Div:
      return wrap(e.children()[0], 2) + "/" + wrap(e.children()[1], 4);
    case NodeKind::IntPow: {
      const auto& b = e.children()[0];
      bool atom = b.kind() == NodeKind::Var || b.kind() == NodeKind::Exp ||
                  (b.is_const() && b.value().imag() == 0.0 && b.value().real() >= 0.0);
      return (atom ? to_string(b) : "(" + to_string(b) + ")") + "^" +
             std::to_string(e.exponent());
    }
    case NodeKind::Exp:
      return "exp(" + to_string(e.children()[0]) + ")";
  }
  return {};
}

std::string to_tree_string(const MeroExpr& e) {
  auto list = [&](const char* name) {
    std::string s = name;
    s += "[";
    for (std::size_t i = 0; i < e.children().size(); ++i) {
      if (i) s += ",";
      s += to_tree_string(e.children()[i]);
    }
    return s + "]";
  };
  switch (e.kind()) {
    case NodeKind::Const: {
      auto c = e.value();
      if (c.imag() == 0.0) return format_real(c.real());
      return "(" + format_real(c.real()) + "," + format_real(c.imag()) + ")";
    }
    case NodeKind::Var: return "z";
    case NodeKind::Add: return list("Add");
    case NodeKind::Mul: return list("Mul");
    case NodeKind::Neg: return "Neg(" + to_tree_string(e.children()[0]) + ")";
    case NodeKind::Div:
      return "Div(" + to_tree_string(e.children()[0]) + "," + to_tree_string(e.children()[1]) + ")";
    case NodeKind::IntPow:
      return "IntPow(" + to_tree_string(e.children()[0]) + "," + std::to_string(e.exponent()) + ")";
    case NodeKind::Exp: return "Exp(" + to_tree_string(e.children()[0]) + ")";
  }
  return {};
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

// Returns false on a pole; overflow is set when the failure is a non-finite value.
bool eval_impl(const MeroExpr& e, cplx z, cplx& out, bool& overflow) {
  switch (e.kind()) {
    case NodeKind::Const:
      out = e.value();
      return true;
    case NodeKind::Var:
      out = z;
      return true;
    case NodeKind::Add: {
      cplx acc = 0.0;
      for (const auto& t : e.children()) {
        cplx v;
        if (!eval_impl(t, z, v, overflow)) return false;
        acc += v;
      }
      out = acc;
      break;
    }
    case NodeKind::Mul: {
      cplx acc = 1.0;
      for (const auto& t : e.children()) {
        cplx v;
        if (!eval_impl(t, z, v, overflow)) return false;
        acc *= v;
      }
      out = acc;
      break;
    }
    case NodeKind::Neg: {
      if (!eval_impl(e.children()[0], z, out, overflow)) return false;
      out = -out;
      return true;
    }
    case NodeKind::Div: {
      cplx n, d;
      if (!eval_impl(e.children()[0], z, n, overflow)) return false;
      if (!eval_impl(e.children()[1], z, d, overflow)) return false;
      if (d == 0.0) return false;
      out = n / d;
      break;
    }
    case NodeKind::IntPow: {
      cplx b;
      if (!eval_impl(e.children()[0], z, b, overflow)) return false;
      int n = e.exponent();
      if (n < 0 && b == 0.0) return false;
      out = ipow(b, n);
      break;
    }
    case NodeKind::Exp: {
      cplx a;
      if (!eval_impl(e.children()[0], z, a, overflow)) return false;
      out = std::exp(a);
      break;
    }
  }
  if (!finite(out)) {
    overflow = true;
    return false;
  }
  return true;
}

}  // namespace

EvalResult eval(const MeroExpr& e, cplx z) {
  cplx v;
  bool overflow = false;
  if (!eval_impl(e, z, v, overflow)) return PoleSignal{overflow};
  return v;
}

double eval_magnitude(const MeroExpr& e, cplx z) {
  switch (e.kind()) {
    case NodeKind::Const: return std::abs(e.value());
    case NodeKind::Var: return std::abs(z);
    case NodeKind::Add: {
      double s = 0.0;
      for (const auto& t : e.children()) s += eval_magnitude(t, z);
      return s;
    }
    case NodeKind::Mul: {
      double p = 1.0;
      for (const auto& t : e.children()) p *= eval_magnitude(t, z);
      return p;
    }
    case NodeKind::Neg: return eval_magnitude(e.children()[0], z);
    case NodeKind::Div: {
      auto d = eval(e.children()[1], z);
      if (auto* v = std::get_if<cplx>(&d)) return eval_magnitude(e.children()[0], z) / std::abs(*v);
      return HUGE_VAL;
    }
    case NodeKind::IntPow: {
      if (e.exponent() > 0) return std::pow(eval_magnitude(e.children()[0], z), e.exponent());
      auto b = eval(e.children()[0], z);
      if (auto* v = std::get_if<cplx>(&b)) return std::pow(std::abs(*v), e.exponent());
      return HUGE_VAL;
    }
    case NodeKind::Exp: {
      auto a = eval(e.children()[0], z);
      if (auto* v = std::get_if<cplx>(&a)) return std::exp(v->real());
      return HUGE_VAL;
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Differentiation

namespace {

struct PowerSplit {
  cplx coeff;
  MeroExpr base;
  int exponent;
};

// Writes e as coeff * base^exponent with exponent >= 1.
PowerSplit split_power(const MeroExpr& e) {
  if (e.kind() == NodeKind::Mul && e.children().size() == 2 && e.children()[0].is_const()) {
    auto inner = split_power(e.children()[1]);
    inner.coeff *= e.children()[0].value();
    return inner;
  }
  if (e.kind() == NodeKind::IntPow && e.exponent() > 0) return {1.0, e.children()[0], e.exponent()};
  return {1.0, e, 1};
}

}  // namespace

MeroExpr differentiate(const MeroExpr& e) {
  switch (e.kind()) {
    case NodeKind::Const:
      return MeroExpr::constant(0.0);
    case NodeKind::Var:
      return MeroExpr::constant(1.0);
    case NodeKind::Add: {
      std::vector<MeroExpr> terms;
      for (const auto& t : e.children()) terms.push_back(differentiate(t));
      return sum(std::move(terms));
    }
    case NodeKind::Mul: {
      auto ch = e.children();
      std::vector<MeroExpr> terms;
      for (std::size_t i = 0; i < ch.size(); ++i) {
        auto d = differentiate(ch[i]);
        if (d.is_const(0.0)) continue;
        std::vector<MeroExpr> factors{d};
        for (std::size_t j = 0; j < ch.size(); ++j) {
          if (j != i) factors.push_back(ch[j]);
        }
        terms.push_back(product(std::move(factors)));
      }
      return sum(std::move(terms));
    }
    case NodeKind::Neg:
      return -differentiate(e.children()[0]);
    case NodeKind::Div: {
      const auto& a = e.children()[0];
      const auto& b = e.children()[1];
      auto da = differentiate(a);
      auto db = differentiate(b);
      if (db.is_const(0.0)) return da / b;
      // a/(c B^n) -> (a' B - n a B') / (c B^(n+1)): the denominator grows
      // linearly with the order instead of doubling.
      auto [c, base, n] = split_power(b);
      return (da * base - constant(double(n)) * a * differentiate(base)) /
             (constant(c) * pow(base, n + 1));
    }
    case NodeKind::IntPow: {
      const auto& b = e.children()[0];
      int n = e.exponent();
      return product({MeroExpr::constant(double(n)), pow(b, n - 1), differentiate(b)});
    }
    case NodeKind::Exp:
      return differentiate(e.children()[0]) * e;
  }
  return {};
}

MeroExpr differentiate(const MeroExpr& e, int n) {
  MeroExpr d = e;
  for (int i = 0; i < n; ++i) d = differentiate(d);
  return d;
}

bool is_syntactically_entire(const MeroExpr& e) {
  if (e.kind() == NodeKind::Div) return false;
  if (e.kind() == NodeKind::IntPow && e.exponent() < 0) return false;
  for (const auto& c : e.children()) {
    if (!is_syntactically_entire(c)) return false;
  }
  return true;
}

bool contains_exp(const MeroExpr& e) {
  if (e.kind() == NodeKind::Exp && !e.children()[0].is_const()) return true;
  for (const auto& c : e.children()) {
    if (contains_exp(c)) return true;
  }
  return false;
}

std::size_t node_count(const MeroExpr& e) {
  std::size_t n = 1;
  for (const auto& c : e.children()) n += node_count(c);
  return n;
}

}  // namespace nevlab
