#include "nevlab/exp_poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nevlab {

namespace {

struct Entry {
  cplx freq;
  std::size_t degree;
  cplx coeff;
};

struct Accum {
  cplx sum = 0.0;
  double scale = 0.0;
  void add(cplx c) {
    sum += c;
    scale = std::max(scale, std::abs(c));
  }
  cplx result() const { return std::abs(sum) <= kCancelRelTol * scale ? cplx(0.0) : sum; }
};

bool freq_less(const cplx& a, const cplx& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

std::vector<ExpPoly::Term> canonicalize(const std::vector<Entry>& entries) {
  struct Group {
    cplx freq;
    std::vector<Accum> acc;
  };
  std::vector<Group> groups;
  for (const auto& e : entries) {
    Group* g = nullptr;
    for (auto& cand : groups) {
      if (std::abs(cand.freq - e.freq) <= kFrequencyMergeTol) {
        g = &cand;
        break;
      }
    }
    if (!g) {
      groups.push_back({e.freq, {}});
      g = &groups.back();
    }
    if (g->acc.size() <= e.degree) g->acc.resize(e.degree + 1);
    g->acc[e.degree].add(e.coeff);
  }
  std::vector<ExpPoly::Term> out;
  for (const auto& g : groups) {
    ExpPoly::Term t{g.freq, {}};
    for (const auto& a : g.acc) t.coeffs.push_back(a.result());
    while (!t.coeffs.empty() && t.coeffs.back() == 0.0) t.coeffs.pop_back();
    if (!t.coeffs.empty()) out.push_back(std::move(t));
  }
  std::sort(out.begin(), out.end(),
            [](const ExpPoly::Term& a, const ExpPoly::Term& b) { return freq_less(a.freq, b.freq); });
  return out;
}

void append_entries(std::vector<Entry>& entries, const ExpPoly& p, cplx factor = 1.0) {
  for (const auto& t : p.terms()) {
    for (std::size_t j = 0; j < t.coeffs.size(); ++j) {
      if (t.coeffs[j] != 0.0) entries.push_back({t.freq, j, factor * t.coeffs[j]});
    }
  }
}

cplx horner(const std::vector<cplx>& c, cplx z) {
  cplx acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

}  // namespace

ExpPoly ExpPoly::constant(cplx c) {
  ExpPoly p;
  if (c != 0.0) p.terms_.push_back({0.0, {c}});
  return p;
}

ExpPoly ExpPoly::var() {
  ExpPoly p;
  p.terms_.push_back({0.0, {0.0, 1.0}});
  return p;
}

ExpPoly ExpPoly::exponential(cplx freq, cplx scale) {
  ExpPoly p;
  if (scale != 0.0) p.terms_.push_back({freq, {scale}});
  return p;
}

ExpPoly ExpPoly::from_terms(std::vector<Term> terms) {
  std::vector<Entry> entries;
  for (const auto& t : terms) {
    for (std::size_t j = 0; j < t.coeffs.size(); ++j) {
      if (t.coeffs[j] != 0.0) entries.push_back({t.freq, j, t.coeffs[j]});
    }
  }
  ExpPoly p;
  p.terms_ = canonicalize(entries);
  return p;
}

bool ExpPoly::is_single_exponential() const {
  return terms_.size() == 1 && terms_.front().coeffs.size() == 1;
}

bool ExpPoly::is_nonzero_constant() const {
  return is_single_exponential() && terms_.front().freq == 0.0;
}

ExpPoly ExpPoly::operator+(const ExpPoly& other) const {
  std::vector<Entry> entries;
  append_entries(entries, *this);
  append_entries(entries, other);
  ExpPoly p;
  p.terms_ = canonicalize(entries);
  return p;
}

ExpPoly ExpPoly::operator-(const ExpPoly& other) const {
  std::vector<Entry> entries;
  append_entries(entries, *this);
  append_entries(entries, other, -1.0);
  ExpPoly p;
  p.terms_ = canonicalize(entries);
  return p;
}

ExpPoly ExpPoly::operator-() const { return *this * cplx(-1.0); }

ExpPoly ExpPoly::operator*(cplx c) const {
  if (c == 0.0) return {};
  ExpPoly p = *this;
  for (auto& t : p.terms_) {
    for (auto& a : t.coeffs) a *= c;
  }
  return p;
}

ExpPoly ExpPoly::operator*(const ExpPoly& other) const {
  std::vector<Entry> entries;
  for (const auto& a : terms_) {
    for (const auto& b : other.terms_) {
      cplx f = a.freq + b.freq;
      for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
        if (a.coeffs[i] == 0.0) continue;
        for (std::size_t j = 0; j < b.coeffs.size(); ++j) {
          if (b.coeffs[j] != 0.0) entries.push_back({f, i + j, a.coeffs[i] * b.coeffs[j]});
        }
      }
    }
  }
  ExpPoly p;
  p.terms_ = canonicalize(entries);
  return p;
}

ExpPoly ExpPoly::pow(unsigned n) const {
  ExpPoly acc = constant(1.0);
  ExpPoly base = *this;
  for (; n; n >>= 1) {
    if (n & 1u) acc = acc * base;
    if (n > 1) base = base * base;
  }
  return acc;
}

ExpPoly ExpPoly::derivative() const {
  // (p e^{lz})' = (p' + l p) e^{lz}
  std::vector<Entry> entries;
  for (const auto& t : terms_) {
    for (std::size_t j = 0; j < t.coeffs.size(); ++j) {
      if (t.coeffs[j] == 0.0) continue;
      if (t.freq != 0.0) entries.push_back({t.freq, j, t.freq * t.coeffs[j]});
      if (j > 0) entries.push_back({t.freq, j - 1, double(j) * t.coeffs[j]});
    }
  }
  ExpPoly p;
  p.terms_ = canonicalize(entries);
  return p;
}

std::optional<ExpPoly> ExpPoly::reciprocal() const {
  if (!is_single_exponential()) return std::nullopt;
  const auto& t = terms_.front();
  return exponential(-t.freq, 1.0 / t.coeffs.front());
}

cplx ExpPoly::eval(cplx z) const {
  cplx acc = 0.0;
  for (const auto& t : terms_) acc += horner(t.coeffs, z) * std::exp(t.freq * z);
  return acc;
}

ScaledValue ExpPoly::eval_scaled(cplx z) const {
  if (terms_.empty()) return {0.0, 0.0};
  double s = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms_) s = std::max(s, (t.freq * z).real());
  cplx acc = 0.0;
  for (const auto& t : terms_) acc += horner(t.coeffs, z) * std::exp(t.freq * z - s);
  return {acc, s};
}

void ExpPoly::eval_scaled_with_derivative(cplx z, const ExpPoly& deriv, ScaledValue& value,
                                          ScaledValue& dvalue) const {
  double s = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms_) s = std::max(s, (t.freq * z).real());
  for (const auto& t : deriv.terms_) s = std::max(s, (t.freq * z).real());
  if (!std::isfinite(s)) s = 0.0;
  cplx v = 0.0, dv = 0.0;
  for (const auto& t : terms_) v += horner(t.coeffs, z) * std::exp(t.freq * z - s);
  for (const auto& t : deriv.terms_) dv += horner(t.coeffs, z) * std::exp(t.freq * z - s);
  value = {v, s};
  dvalue = {dv, s};
}

MeroExpr ExpPoly::to_expr() const {
  std::vector<MeroExpr> terms;
  for (const auto& t : terms_) {
    std::vector<MeroExpr> poly;
    for (std::size_t j = 0; j < t.coeffs.size(); ++j) {
      if (t.coeffs[j] == 0.0) continue;
      poly.push_back(nevlab::constant(t.coeffs[j]) * nevlab::pow(var_z(), static_cast<int>(j)));
    }
    auto p = sum(std::move(poly));
    if (t.freq != 0.0) p = p * nevlab::exp(nevlab::constant(t.freq) * var_z());
    terms.push_back(p);
  }
  return sum(std::move(terms));
}

std::optional<ExpPoly> to_exp_poly(const MeroExpr& e) {
  switch (e.kind()) {
    case NodeKind::Const:
      return ExpPoly::constant(e.value());
    case NodeKind::Var:
      return ExpPoly::var();
    case NodeKind::Add: {
      ExpPoly acc;
      for (const auto& t : e.children()) {
        auto p = to_exp_poly(t);
        if (!p) return std::nullopt;
        acc = acc + *p;
      }
      return acc;
    }
    case NodeKind::Mul: {
      ExpPoly acc = ExpPoly::constant(1.0);
      for (const auto& t : e.children()) {
        auto p = to_exp_poly(t);
        if (!p) return std::nullopt;
        acc = acc * *p;
      }
      return acc;
    }
    case NodeKind::Neg: {
      auto p = to_exp_poly(e.children()[0]);
      if (!p) return std::nullopt;
      return -*p;
    }
    case NodeKind::Div: {
      auto num = to_exp_poly(e.children()[0]);
      if (!num) return std::nullopt;
      auto den = to_exp_poly(e.children()[1]);
      if (!den) return std::nullopt;
      auto inv = den->reciprocal();
      if (!inv) return std::nullopt;
      return *num * *inv;
    }
    case NodeKind::IntPow: {
      auto b = to_exp_poly(e.children()[0]);
      if (!b) return std::nullopt;
      int n = e.exponent();
      if (n > 0) return b->pow(static_cast<unsigned>(n));
      auto inv = b->reciprocal();
      if (!inv) return std::nullopt;
      return inv->pow(static_cast<unsigned>(-n));
    }
    case NodeKind::Exp: {
      auto a = to_exp_poly(e.children()[0]);
      if (!a) return std::nullopt;
      if (a->is_zero()) return ExpPoly::constant(1.0);
      if (a->terms().size() != 1) return std::nullopt;
      const auto& t = a->terms().front();
      if (std::abs(t.freq) > kFrequencyMergeTol || t.coeffs.size() > 2) return std::nullopt;
      cplx slope = t.coeffs.size() == 2 ? t.coeffs[1] : 0.0;
      return ExpPoly::exponential(slope, std::exp(t.coeffs[0]));
    }
  }
  return std::nullopt;
}

}  // namespace nevlab
