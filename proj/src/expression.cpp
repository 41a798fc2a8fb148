#include "nonholo/expression.hpp"

#include <cctype>
#include <charconv>
#include <numbers>

#include "nonholo/errors.hpp"

namespace nonholo {

SymbolTable SymbolTable::coordinates(int dim, std::map<std::string, double> params) {
  SymbolTable table;
  for (int k = 1; k <= dim; ++k) table.variables.push_back("q" + std::to_string(k));
  table.parameters = std::move(params);
  return table;
}

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0.0;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = column_;
      if (pos_ >= src_.size()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        lex_number(t);
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          advance();
        t.kind = Tok::Ident;
        t.text = std::string(src_.substr(start, pos_ - start));
      } else {
        t.text = std::string(1, c);
        switch (c) {
          case '+': t.kind = Tok::Plus; break;
          case '-': t.kind = Tok::Minus; break;
          case '*': t.kind = Tok::Star; break;
          case '/': t.kind = Tok::Slash; break;
          case '^': t.kind = Tok::Caret; break;
          case '(': t.kind = Tok::LParen; break;
          case ')': t.kind = Tok::RParen; break;
          case ',': t.kind = Tok::Comma; break;
          default: throw ParseError("unexpected character", t.line, t.column, t.text);
        }
        advance();
      }
      out.push_back(t);
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }

  void lex_number(Token& t) {
    std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      advance();
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_;
      int save_col = column_;
      advance();
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        digits();
      } else {
        pos_ = save;
        column_ = save_col;
      }
    }
    t.kind = Tok::Number;
    t.text = std::string(src_.substr(start, pos_ - start));
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size())
      throw ParseError("malformed number", t.line, t.column, t.text);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

struct FunctionInfo {
  std::string_view name;
  Expression::Op op;
  int arity;
};

constexpr FunctionInfo kFunctions[] = {
    {"sin", Expression::Op::Sin, 1},   {"cos", Expression::Op::Cos, 1},
    {"tan", Expression::Op::Tan, 1},   {"atan", Expression::Op::Atan, 1},
    {"atan2", Expression::Op::Atan2, 2}, {"sqrt", Expression::Op::Sqrt, 1},
    {"exp", Expression::Op::Exp, 1},   {"log", Expression::Op::Log, 1},
    {"sinh", Expression::Op::Sinh, 1}, {"cosh", Expression::Op::Cosh, 1},
};

}  // namespace

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, const SymbolTable& symbols)
      : tokens_(Lexer(text).run()), symbols_(symbols) {
    expr_.source_ = std::string(text);
    expr_.variable_count_ = static_cast<int>(symbols.variables.size());
  }

  Expression run() {
    if (peek().kind == Tok::End) throw ParseError("empty expression", peek().line, peek().column, "");
    expr_.root_ = parse_sum();
    if (peek().kind != Tok::End)
      throw ParseError("unexpected trailing input", peek().line, peek().column, peek().text);
    return std::move(expr_);
  }

 private:
  using Op = Expression::Op;

  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() { return tokens_[pos_++]; }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind)
      throw ParseError(std::string("expected ") + what, peek().line, peek().column, peek().text);
    ++pos_;
  }

  int add(Expression::Node n) {
    expr_.nodes_.push_back(n);
    return static_cast<int>(expr_.nodes_.size()) - 1;
  }

  int constant(double v) { return add({Op::Constant, v, -1, -1, -1}); }
  int binary(Op op, int l, int r) { return add({op, 0.0, -1, l, r}); }
  int unary(Op op, int l) { return add({op, 0.0, -1, l, -1}); }

  bool is_constant(int id, double* value) const {
    const auto& n = expr_.nodes_[id];
    if (n.op != Op::Constant) return false;
    *value = n.value;
    return true;
  }

  int parse_sum() {
    int lhs = parse_product();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      Op op = take().kind == Tok::Plus ? Op::Add : Op::Sub;
      lhs = binary(op, lhs, parse_product());
    }
    return lhs;
  }

  int parse_product() {
    int lhs = parse_unary();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      Op op = take().kind == Tok::Star ? Op::Mul : Op::Div;
      lhs = binary(op, lhs, parse_unary());
    }
    return lhs;
  }

  int parse_unary() {
    if (peek().kind == Tok::Minus) {
      take();
      int operand = parse_unary();
      double v;
      if (is_constant(operand, &v)) return constant(-v);
      return unary(Op::Neg, operand);
    }
    if (peek().kind == Tok::Plus) {
      take();
      return parse_unary();
    }
    return parse_power();
  }

  // '^' is right associative and binds tighter than unary minus: -x^2 == -(x^2).
  int parse_power() {
    int base = parse_primary();
    if (peek().kind != Tok::Caret) return base;
    take();
    int exponent = parse_unary();
    double v;
    if (is_constant(exponent, &v) && v == std::floor(v) && std::abs(v) <= 64.0)
      return add({Op::PowInt, v, -1, base, -1});
    return binary(Op::Pow, base, exponent);
  }

  int parse_primary() {
    const Token& t = take();
    switch (t.kind) {
      case Tok::Number: return constant(t.number);
      case Tok::LParen: {
        int inner = parse_sum();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident: return parse_identifier(t);
      case Tok::End: throw ParseError("unexpected end of expression", t.line, t.column, "");
      default: throw ParseError("unexpected token", t.line, t.column, t.text);
    }
  }

  int parse_identifier(const Token& t) {
    if (peek().kind == Tok::LParen) {
      const FunctionInfo* fn = nullptr;
      for (const auto& f : kFunctions)
        if (f.name == t.text) fn = &f;
      if (!fn) throw ParseError("unknown function '" + t.text + "'", t.line, t.column, t.text);
      take();
      std::vector<int> args{parse_sum()};
      while (peek().kind == Tok::Comma) {
        take();
        args.push_back(parse_sum());
      }
      expect(Tok::RParen, "')'");
      if (static_cast<int>(args.size()) != fn->arity)
        throw ParseError("function '" + t.text + "' expects " + std::to_string(fn->arity) +
                             " argument(s)",
                         t.line, t.column, t.text);
      return fn->arity == 1 ? unary(fn->op, args[0]) : binary(fn->op, args[0], args[1]);
    }
    for (std::size_t k = 0; k < symbols_.variables.size(); ++k)
      if (symbols_.variables[k] == t.text) return add({Op::Variable, 0.0, static_cast<int>(k), -1, -1});
    if (auto it = symbols_.parameters.find(t.text); it != symbols_.parameters.end())
      return constant(it->second);
    if (t.text == "pi") return constant(std::numbers::pi);
    throw ParseError("unknown identifier '" + t.text + "'", t.line, t.column, t.text);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const SymbolTable& symbols_;
  Expression expr_;
};

Expression Expression::parse(std::string_view text, const SymbolTable& symbols) {
  return ExpressionParser(text, symbols).run();
}

}  // namespace nonholo
