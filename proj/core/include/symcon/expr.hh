/*
 * expr.hh
 *
 * Small arithmetic expression language for vector field components.
 * Variables are x1..xn (state), u1..um (control input), d1..dl (disturbance);
 * the constant pi, the functions sin cos tan exp sqrt abs, the operators
 * + - * / ^ (power, right associative) and unary minus are understood.
 *
 * Parsed expressions are compiled to a flat postfix tape evaluated without
 * recursion, with constant subtrees folded, since field evaluation sits in
 * the innermost integration loop of the abstraction sweep.
 */

#ifndef SYMCON_EXPR_HH_
#define SYMCON_EXPR_HH_

#include <cstdint>
#include <string>
#include <vector>

namespace symcon {

struct ExprDims {
  int n = 0;  /* state variables   x1..xn */
  int m = 0;  /* control variables u1..um */
  int l = 0;  /* disturbance vars  d1..dl */
};

class Expr {
public:
  Expr() = default;

  /* parse against the declared variable counts; malformed input or an
   * unknown/out-of-range identifier raises a config error naming the token */
  static Expr parse(const std::string& text, const ExprDims& dims);

  double eval(const double* x, const double* u, const double* d) const;
  const std::string& text() const { return m_text; }
  bool empty() const { return m_tape.empty(); }

private:
  enum class Op : uint8_t {
    push, load_x, load_u, load_d,
    add, sub, mul, div, neg, pow,
    sin, cos, tan, exp, sqrt, abs
  };
  struct Ins {
    Op op;
    int32_t slot;   /* variable index for load_* */
    double value;   /* constant for push */
  };

  std::vector<Ins> m_tape;
  int m_stack_need = 0;
  std::string m_text;

  friend class ExprParser;
};

} /* namespace symcon */

#endif /* SYMCON_EXPR_HH_ */
