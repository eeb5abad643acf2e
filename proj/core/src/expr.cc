#include "symcon/expr.hh"

#include <cctype>
#include <cmath>
#include <cstring>

#include "symcon/errors.hh"

namespace symcon {

namespace {

struct Token {
  enum Kind { number, ident, op, lparen, rparen, end } kind;
  std::string text;
  double value;
  size_t pos;
};

class Lexer {
public:
  explicit Lexer(const std::string& s) : m_s(s), m_i(0) { advance(); }
  const Token& peek() const { return m_tok; }
  Token take() { Token t = m_tok; advance(); return t; }

private:
  void advance() {
    while (m_i < m_s.size() && std::isspace(static_cast<unsigned char>(m_s[m_i]))) ++m_i;
    m_tok.pos = m_i;
    if (m_i >= m_s.size()) { m_tok.kind = Token::end; m_tok.text = "<end>"; return; }
    const char c = m_s[m_i];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t used = 0;
      try {
        m_tok.value = std::stod(m_s.substr(m_i), &used);
      } catch (const std::exception&) {
        throw config_error("expression: bad numeric literal at position " + std::to_string(m_i));
      }
      m_tok.kind = Token::number;
      m_tok.text = m_s.substr(m_i, used);
      m_i += used;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = m_i;
      while (j < m_s.size() &&
             (std::isalnum(static_cast<unsigned char>(m_s[j])) || m_s[j] == '_')) ++j;
      m_tok.kind = Token::ident;
      m_tok.text = m_s.substr(m_i, j - m_i);
      m_i = j;
      return;
    }
    if (std::strchr("+-*/^", c)) { m_tok.kind = Token::op; m_tok.text = std::string(1, c); ++m_i; return; }
    if (c == '(') { m_tok.kind = Token::lparen; m_tok.text = "("; ++m_i; return; }
    if (c == ')') { m_tok.kind = Token::rparen; m_tok.text = ")"; ++m_i; return; }
    throw config_error("expression: unexpected character '" + std::string(1, c) +
                       "' at position " + std::to_string(m_i));
  }

  const std::string& m_s;
  size_t m_i;
  Token m_tok;
};

} /* namespace */

class ExprParser {
public:
  ExprParser(const std::string& text, const ExprDims& dims)
      : m_lex(text), m_dims(dims) {}

  void run(Expr& e) {
    parse_sum(e);
    const Token& t = m_lex.peek();
    if (t.kind != Token::end)
      throw config_error("expression: trailing input '" + t.text +
                         "' at position " + std::to_string(t.pos));
    fold(e);
    e.m_stack_need = stack_need(e);
    if (e.m_stack_need > 64)
      throw config_error("expression: nesting too deep (limit 64)");
  }

private:
  using Op = Expr::Op;

  void emit(Expr& e, Op op, int32_t slot = 0, double value = 0.0) {
    e.m_tape.push_back({op, slot, value});
  }

  void parse_sum(Expr& e) {
    parse_product(e);
    while (m_lex.peek().kind == Token::op &&
           (m_lex.peek().text == "+" || m_lex.peek().text == "-")) {
      const std::string op = m_lex.take().text;
      parse_product(e);
      emit(e, op == "+" ? Op::add : Op::sub);
    }
  }

  void parse_product(Expr& e) {
    parse_unary(e);
    while (m_lex.peek().kind == Token::op &&
           (m_lex.peek().text == "*" || m_lex.peek().text == "/")) {
      const std::string op = m_lex.take().text;
      parse_unary(e);
      emit(e, op == "*" ? Op::mul : Op::div);
    }
  }

  void parse_unary(Expr& e) {
    if (m_lex.peek().kind == Token::op && m_lex.peek().text == "-") {
      m_lex.take();
      parse_unary(e);
      emit(e, Op::neg);
      return;
    }
    if (m_lex.peek().kind == Token::op && m_lex.peek().text == "+") {
      m_lex.take();
      parse_unary(e);
      return;
    }
    parse_power(e);
  }

  void parse_power(Expr& e) {
    parse_primary(e);
    if (m_lex.peek().kind == Token::op && m_lex.peek().text == "^") {
      m_lex.take();
      parse_unary(e);  /* right associative, unary minus binds in the exponent */
      emit(e, Op::pow);
    }
  }

  void parse_primary(Expr& e) {
    Token t = m_lex.take();
    switch (t.kind) {
      case Token::number:
        emit(e, Op::push, 0, t.value);
        return;
      case Token::lparen:
        parse_sum(e);
        expect_rparen(t.pos);
        return;
      case Token::ident:
        parse_ident(e, t);
        return;
      default:
        throw config_error("expression: expected operand, got '" + t.text +
                           "' at position " + std::to_string(t.pos));
    }
  }

  void expect_rparen(size_t open_pos) {
    Token t = m_lex.take();
    if (t.kind != Token::rparen)
      throw config_error("expression: unbalanced parenthesis opened at position " +
                         std::to_string(open_pos));
  }

  void parse_ident(Expr& e, const Token& t) {
    static const struct { const char* name; Op op; } fns[] = {
        {"sin", Op::sin}, {"cos", Op::cos}, {"tan", Op::tan},
        {"exp", Op::exp}, {"sqrt", Op::sqrt}, {"abs", Op::abs}};
    for (const auto& fn : fns) {
      if (t.text == fn.name) {
        Token open = m_lex.take();
        if (open.kind != Token::lparen)
          throw config_error("expression: function '" + t.text + "' needs parentheses");
        parse_sum(e);
        expect_rparen(open.pos);
        emit(e, fn.op);
        return;
      }
    }
    if (t.text == "pi") { emit(e, Op::push, 0, M_PI); return; }

    /* indexed variables x<i>, u<i>, d<i>, 1-based */
    if (t.text.size() >= 2 &&
        (t.text[0] == 'x' || t.text[0] == 'u' || t.text[0] == 'd')) {
      bool digits = true;
      for (size_t i = 1; i < t.text.size(); ++i)
        digits = digits && std::isdigit(static_cast<unsigned char>(t.text[i]));
      if (digits) {
        const long idx = std::stol(t.text.substr(1));
        const long limit = t.text[0] == 'x' ? m_dims.n : t.text[0] == 'u' ? m_dims.m : m_dims.l;
        if (idx < 1 || idx > limit)
          throw config_error("expression: variable '" + t.text + "' out of range (" +
                             t.text.substr(0, 1) + "1.." + t.text.substr(0, 1) +
                             std::to_string(limit) + ")");
        const Op op = t.text[0] == 'x' ? Op::load_x : t.text[0] == 'u' ? Op::load_u : Op::load_d;
        emit(e, op, static_cast<int32_t>(idx - 1));
        return;
      }
    }
    throw config_error("expression: unknown identifier '" + t.text +
                       "' at position " + std::to_string(t.pos));
  }

  /* collapse constant subtrees; a second pass over the postfix tape with a
   * shadow stack marking which entries are compile-time constants */
  void fold(Expr& e) {
    std::vector<Expr::Ins> out;
    std::vector<int> const_at;  /* index into out if that stack slot is a push, else -1 */
    auto binary = [&](Op op, auto f) {
      const int b = const_at.back(); const_at.pop_back();
      const int a = const_at.back(); const_at.pop_back();
      if (a >= 0 && b >= 0) {
        out[a].value = f(out[a].value, out[b].value);
        out.pop_back();
        const_at.push_back(a);
      } else {
        out.push_back({op, 0, 0.0});
        const_at.push_back(-1);
      }
    };
    auto unary = [&](Op op, auto f) {
      const int a = const_at.back(); const_at.pop_back();
      if (a >= 0) {
        out[a].value = f(out[a].value);
        const_at.push_back(a);
      } else {
        out.push_back({op, 0, 0.0});
        const_at.push_back(-1);
      }
    };
    for (const auto& ins : e.m_tape) {
      switch (ins.op) {
        case Op::push:
          const_at.push_back(static_cast<int>(out.size()));
          out.push_back(ins);
          break;
        case Op::load_x: case Op::load_u: case Op::load_d:
          out.push_back(ins);
          const_at.push_back(-1);
          break;
        case Op::add: binary(ins.op, [](double a, double b) { return a + b; }); break;
        case Op::sub: binary(ins.op, [](double a, double b) { return a - b; }); break;
        case Op::mul: binary(ins.op, [](double a, double b) { return a * b; }); break;
        case Op::div: binary(ins.op, [](double a, double b) { return a / b; }); break;
        case Op::pow: binary(ins.op, [](double a, double b) { return std::pow(a, b); }); break;
        case Op::neg: unary(ins.op, [](double a) { return -a; }); break;
        case Op::sin: unary(ins.op, [](double a) { return std::sin(a); }); break;
        case Op::cos: unary(ins.op, [](double a) { return std::cos(a); }); break;
        case Op::tan: unary(ins.op, [](double a) { return std::tan(a); }); break;
        case Op::exp: unary(ins.op, [](double a) { return std::exp(a); }); break;
        case Op::sqrt: unary(ins.op, [](double a) { return std::sqrt(a); }); break;
        case Op::abs: unary(ins.op, [](double a) { return std::abs(a); }); break;
      }
    }
    e.m_tape = std::move(out);
  }

  static int stack_need(const Expr& e) {
    int depth = 0, need = 0;
    for (const auto& ins : e.m_tape) {
      switch (ins.op) {
        case Op::push: case Op::load_x: case Op::load_u: case Op::load_d:
          ++depth; break;
        case Op::add: case Op::sub: case Op::mul: case Op::div: case Op::pow:
          --depth; break;
        default: break;  /* unary, depth unchanged */
      }
      need = std::max(need, depth);
    }
    if (depth != 1)
      throw config_error("expression: internal arity imbalance");
    return need;
  }

  Lexer m_lex;
  ExprDims m_dims;
};

Expr Expr::parse(const std::string& text, const ExprDims& dims) {
  if (text.empty())
    throw config_error("expression: empty");
  Expr e;
  e.m_text = text;
  ExprParser(text, dims).run(e);
  return e;
}

double Expr::eval(const double* x, const double* u, const double* d) const {
  double stack[64];
  double* sp = stack;
  for (const Ins& ins : m_tape) {
    switch (ins.op) {
      case Op::push:   *sp++ = ins.value; break;
      case Op::load_x: *sp++ = x[ins.slot]; break;
      case Op::load_u: *sp++ = u[ins.slot]; break;
      case Op::load_d: *sp++ = d[ins.slot]; break;
      case Op::add: sp[-2] += sp[-1]; --sp; break;
      case Op::sub: sp[-2] -= sp[-1]; --sp; break;
      case Op::mul: sp[-2] *= sp[-1]; --sp; break;
      case Op::div: sp[-2] /= sp[-1]; --sp; break;
      case Op::pow: sp[-2] = std::pow(sp[-2], sp[-1]); --sp; break;
      case Op::neg:  sp[-1] = -sp[-1]; break;
      case Op::sin:  sp[-1] = std::sin(sp[-1]); break;
      case Op::cos:  sp[-1] = std::cos(sp[-1]); break;
      case Op::tan:  sp[-1] = std::tan(sp[-1]); break;
      case Op::exp:  sp[-1] = std::exp(sp[-1]); break;
      case Op::sqrt: sp[-1] = std::sqrt(sp[-1]); break;
      case Op::abs:  sp[-1] = std::abs(sp[-1]); break;
    }
  }
  return sp[-1];
}

} /* namespace symcon */
