#pragma once

// Expression trees for meromorphic functions of one complex variable z.
//
// The class is closed under +, -, *, /, integer powers and exp of entire
// arguments. Nodes are immutable and shared; a MeroExpr is a cheap handle.

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace nevlab {

using cplx = std::complex<double>;

/// Integer power by repeated squaring (std::pow on complex goes through log/exp).
inline cplx ipow(cplx base, int n) {
  cplx acc = 1.0;
  if (n < 0) {
    base = 1.0 / base;
    n = -n;
  }
  for (unsigned m = static_cast<unsigned>(n); m; m >>= 1) {
    if (m & 1u) acc *= base;
    base *= base;
  }
  return acc;
}

enum class NodeKind { Const, Var, Add, Mul, Neg, Div, IntPow, Exp };

struct Node;

class MeroExpr {
 public:
  /// The constant 0.
  MeroExpr();

  // Raw constructors: build exactly the requested node, no simplification.
  static MeroExpr constant(cplx c);
  static MeroExpr var();
  static MeroExpr add(std::vector<MeroExpr> terms);
  static MeroExpr mul(std::vector<MeroExpr> factors);
  static MeroExpr neg(MeroExpr child);
  static MeroExpr div(MeroExpr num, MeroExpr den);
  static MeroExpr int_pow(MeroExpr base, int exponent);
  static MeroExpr exp(MeroExpr arg);

  NodeKind kind() const;
  /// Value of a Const node.
  cplx value() const;
  /// Exponent of an IntPow node.
  int exponent() const;
  std::span<const MeroExpr> children() const;

  bool is_const() const { return kind() == NodeKind::Const; }
  bool is_const(cplx c) const { return is_const() && value() == c; }

  /// Node identity (same shared node), not mathematical equality.
  bool same_node(const MeroExpr& other) const { return node_ == other.node_; }

 private:
  explicit MeroExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Node {
  NodeKind kind;
  cplx value{};
  int exponent = 0;
  std::vector<MeroExpr> children;
};

// Simplifying builders. They fold constants, flatten nested sums and
// products, merge repeated factors into powers and drop neutral elements.
MeroExpr operator+(const MeroExpr& a, const MeroExpr& b);
MeroExpr operator-(const MeroExpr& a, const MeroExpr& b);
MeroExpr operator-(const MeroExpr& a);
MeroExpr operator*(const MeroExpr& a, const MeroExpr& b);
MeroExpr operator/(const MeroExpr& a, const MeroExpr& b);
MeroExpr pow(const MeroExpr& base, int exponent);
MeroExpr exp(const MeroExpr& arg);
MeroExpr sum(std::vector<MeroExpr> terms);
MeroExpr product(std::vector<MeroExpr> factors);

inline MeroExpr constant(cplx c) { return MeroExpr::constant(c); }
inline MeroExpr var_z() { return MeroExpr::var(); }

bool structurally_equal(const MeroExpr& a, const MeroExpr& b);

/// Grammar-conforming text; parse(to_string(e)) is structurally equal to e
/// up to the parser's own desugaring.
std::string to_string(const MeroExpr& e);

/// Debug form mirroring the node structure, e.g. "Add[Exp(Mul[3,z]),Neg(1)]".
std::string to_tree_string(const MeroExpr& e);

/// Evaluation hit a pole, or the value overflowed (overflow = true).
struct PoleSignal {
  bool overflow = false;
};

using EvalResult = std::variant<cplx, PoleSignal>;

EvalResult eval(const MeroExpr& e, cplx z);

/// Evaluates e with every sum replaced by the sum of absolute values of its
/// terms. Used as the scale for relative zero tests.
double eval_magnitude(const MeroExpr& e, cplx z);

MeroExpr differentiate(const MeroExpr& e);

/// n-th derivative; n == 0 returns e.
MeroExpr differentiate(const MeroExpr& e, int n);

/// True when e contains no Div and no negative IntPow.
bool is_syntactically_entire(const MeroExpr& e);

/// True when e contains an Exp node whose argument is not constant.
bool contains_exp(const MeroExpr& e);

std::size_t node_count(const MeroExpr& e);

}  // namespace nevlab
