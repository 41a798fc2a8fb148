#pragma once

#include <cmath>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nonholo/dual.hpp"

namespace nonholo {

/// Names visible to an expression: free variables (bound to a slot index at
/// evaluation time) and named real constants folded in at parse time.
struct SymbolTable {
  std::vector<std::string> variables;
  std::map<std::string, double> parameters;

  // q1..qD
  static SymbolTable coordinates(int dim, std::map<std::string, double> params = {});
};

/// Arithmetic expression over + - * / ^ and sin cos tan atan atan2 sqrt exp
/// log sinh cosh. Immutable after parsing; evaluation is re-entrant and works
/// for double and any (nested) Dual scalar.
class Expression {
 public:
  static Expression parse(std::string_view text, const SymbolTable& symbols);

  template <class T>
  T evaluate(std::span<const T> vars) const;

  double operator()(std::span<const double> vars) const { return evaluate<double>(vars); }

  const std::string& source() const { return source_; }
  int variable_count() const { return variable_count_; }

  enum class Op {
    Constant,
    Variable,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    PowInt,
    Pow,
    Sin,
    Cos,
    Tan,
    Atan,
    Atan2,
    Sqrt,
    Exp,
    Log,
    Sinh,
    Cosh,
  };

  struct Node {
    Op op = Op::Constant;
    double value = 0.0;  // Constant payload, or integer exponent for PowInt
    int index = -1;      // Variable slot
    int lhs = -1;
    int rhs = -1;
  };

 private:
  template <class T>
  T eval_node(int id, std::span<const T> vars) const;

  friend class ExpressionParser;

  std::string source_;
  std::vector<Node> nodes_;
  int root_ = -1;
  int variable_count_ = 0;
};

template <class T>
T ipow(T base, long n) {
  if (n < 0) return T(1.0) / ipow(base, -n);
  T result(1.0);
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

template <class T>
T Expression::evaluate(std::span<const T> vars) const {
  return eval_node<T>(root_, vars);
}

template <class T>
T Expression::eval_node(int id, std::span<const T> vars) const {
  using std::atan;
  using std::atan2;
  using std::cos;
  using std::cosh;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sinh;
  using std::sqrt;
  using std::tan;
  const Node& n = nodes_[id];
  switch (n.op) {
    case Op::Constant: return T(n.value);
    case Op::Variable: return vars[n.index];
    case Op::Add: return eval_node<T>(n.lhs, vars) + eval_node<T>(n.rhs, vars);
    case Op::Sub: return eval_node<T>(n.lhs, vars) - eval_node<T>(n.rhs, vars);
    case Op::Mul: return eval_node<T>(n.lhs, vars) * eval_node<T>(n.rhs, vars);
    case Op::Div: return eval_node<T>(n.lhs, vars) / eval_node<T>(n.rhs, vars);
    case Op::Neg: return -eval_node<T>(n.lhs, vars);
    case Op::PowInt: return ipow(eval_node<T>(n.lhs, vars), static_cast<long>(n.value));
    case Op::Pow:
      return exp(eval_node<T>(n.rhs, vars) * log(eval_node<T>(n.lhs, vars)));
    case Op::Sin: return sin(eval_node<T>(n.lhs, vars));
    case Op::Cos: return cos(eval_node<T>(n.lhs, vars));
    case Op::Tan: return tan(eval_node<T>(n.lhs, vars));
    case Op::Atan: return atan(eval_node<T>(n.lhs, vars));
    case Op::Atan2: return atan2(eval_node<T>(n.lhs, vars), eval_node<T>(n.rhs, vars));
    case Op::Sqrt: return sqrt(eval_node<T>(n.lhs, vars));
    case Op::Exp: return exp(eval_node<T>(n.lhs, vars));
    case Op::Log: return log(eval_node<T>(n.lhs, vars));
    case Op::Sinh: return sinh(eval_node<T>(n.lhs, vars));
    case Op::Cosh: return cosh(eval_node<T>(n.lhs, vars));
  }
  return T(0.0);
}

}  // namespace nonholo
