#include "nevlab/parser.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <string>

#include "nevlab/error.hpp"

namespace nevlab {

namespace {

const cplx kI{0.0, 1.0};

MeroExpr sin_of(const MeroExpr& x) {
  auto iz = MeroExpr::mul({MeroExpr::constant(kI), x});
  return MeroExpr::div(MeroExpr::add({MeroExpr::exp(iz), MeroExpr::neg(MeroExpr::exp(MeroExpr::neg(iz)))}),
                       MeroExpr::constant(2.0 * kI));
}

MeroExpr cos_of(const MeroExpr& x) {
  auto iz = MeroExpr::mul({MeroExpr::constant(kI), x});
  return MeroExpr::div(MeroExpr::add({MeroExpr::exp(iz), MeroExpr::exp(MeroExpr::neg(iz))}),
                       MeroExpr::constant(2.0));
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  MeroExpr parse() {
    auto e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) { throw ParseError(what, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  MeroExpr expr() {
    std::vector<MeroExpr> terms{term()};
    for (;;) {
      if (accept('+')) terms.push_back(term());
      else if (accept('-')) terms.push_back(MeroExpr::neg(term()));
      else break;
    }
    return terms.size() == 1 ? terms.front() : MeroExpr::add(std::move(terms));
  }

  MeroExpr term() {
    auto lhs = factor();
    std::vector<MeroExpr> factors{lhs};
    for (;;) {
      if (accept('*')) {
        factors.push_back(factor());
      } else if (accept('/')) {
        auto num = factors.size() == 1 ? factors.front() : MeroExpr::mul(std::move(factors));
        std::size_t at = pos_;
        auto den = factor();
        if (den.is_const(0.0)) throw ParseError("division by zero", at);
        factors = {MeroExpr::div(num, den)};
      } else {
        break;
      }
    }
    return factors.size() == 1 ? factors.front() : MeroExpr::mul(std::move(factors));
  }

  MeroExpr factor() {
    if (accept('-')) {
      auto f = factor();
      if (f.is_const()) return MeroExpr::constant(-f.value());
      return MeroExpr::neg(f);
    }
    auto b = base();
    if (accept('^')) {
      skip_ws();
      std::size_t at = pos_;
      int sign = 1;
      if (accept('-')) sign = -1;
      else accept('+');
      skip_ws();
      at = pos_;
      int n = 0;
      auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), n);
      if (ec != std::errc() || ptr == text_.data() + pos_) fail("expected integer exponent");
      pos_ = static_cast<std::size_t>(ptr - text_.data());
      if (n == 0) throw ParseError("exponent must be nonzero", at);
      return MeroExpr::int_pow(b, sign * n);
    }
    return b;
  }

  MeroExpr base() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      auto e = expr();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      if (name == "z") return MeroExpr::var();
      if (name == "i") return MeroExpr::constant(kI);
      if (name != "exp" && name != "sin" && name != "cos" && name != "tan") {
        throw ParseError("unknown identifier '" + name + "'", start);
      }
      expect('(');
      auto arg = expr();
      expect(')');
      if (name == "exp") return MeroExpr::exp(arg);
      if (name == "sin") return sin_of(arg);
      if (name == "cos") return cos_of(arg);
      return MeroExpr::div(sin_of(arg), cos_of(arg));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  MeroExpr number() {
    std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) digits();
      else pos_ = save;  // "2exp(z)" style input; let the caller reject it
    }
    std::string lit(text_.substr(start, pos_ - start));
    if (lit == ".") throw ParseError("malformed number", start);
    return MeroExpr::constant(std::strtod(lit.c_str(), nullptr));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

MeroExpr parse_expr(std::string_view text) { return Parser(text).parse(); }

}  // namespace nevlab
