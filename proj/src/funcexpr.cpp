#include "fejcal/funcexpr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

namespace fejcal {

namespace {

constexpr double kPoleEvalTol = 1e-14;
constexpr double kPoleCheckTol = 1e-6;
constexpr int kPoleCheckMinGrid = 4096;

cplx ipow(cplx b, int n) {
  // n >= 0
  cplx r{1.0, 0.0};
  while (n > 0) {
    if (n & 1) r *= b;
    b *= b;
    n >>= 1;
  }
  return r;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Lexer

struct Token {
  enum class Type {
    Number,
    Ident,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
  };
  Type type = Type::End;
  double number = 0.0;
  std::string text;
  std::size_t offset = 0;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = src.size();
  while (i < n) {
    const char c = src[i];
    if (static_cast<unsigned char>(c) > 0x7f)
      throw ParseError(i, "non-ASCII byte in expression");
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    Token t;
    t.offset = i;
    switch (c) {
      case '+': t.type = Token::Type::Plus; ++i; break;
      case '-': t.type = Token::Type::Minus; ++i; break;
      case '*': t.type = Token::Type::Star; ++i; break;
      case '/': t.type = Token::Type::Slash; ++i; break;
      case '^': t.type = Token::Type::Caret; ++i; break;
      case '(': t.type = Token::Type::LParen; ++i; break;
      case ')': t.type = Token::Type::RParen; ++i; break;
      case ',': t.type = Token::Type::Comma; ++i; break;
      default:
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
          std::size_t j = i;
          while (j < n && (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '.'))
            ++j;
          if (j < n && (src[j] == 'e' || src[j] == 'E')) {
            std::size_t k = j + 1;
            if (k < n && (src[k] == '+' || src[k] == '-')) ++k;
            if (k < n && std::isdigit(static_cast<unsigned char>(src[k]))) {
              ++k;
              while (k < n && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
              j = k;
            }
          }
          double value = 0.0;
          const auto res = std::from_chars(src.data() + i, src.data() + j, value);
          if (res.ec != std::errc{} || res.ptr != src.data() + j)
            throw ParseError(i, "malformed number");
          t.type = Token::Type::Number;
          t.number = value;
          i = j;
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
          std::size_t j = i;
          while (j < n && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
            ++j;
          t.type = Token::Type::Ident;
          t.text = std::string(src.substr(i, j - i));
          i = j;
        } else {
          throw ParseError(i, std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.type = Token::Type::End;
  end.offset = n;
  out.push_back(end);
  return out;
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

  ExprPtr run() {
    ExprPtr e = parse_expr();
    if (peek().type != Token::Type::End)
      throw ParseError(peek().offset, "trailing input after expression");
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token advance() { return toks_[pos_++]; }
  bool accept(Token::Type t) {
    if (peek().type == t) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(Token::Type t, const char* what) {
    if (!accept(t)) throw ParseError(peek().offset, std::string("expected ") + what);
  }

  ExprPtr parse_expr() {
    ExprPtr lhs = parse_term();
    for (;;) {
      if (accept(Token::Type::Plus))
        lhs = Expr::make_binary(Expr::Kind::Add, lhs, parse_term());
      else if (accept(Token::Type::Minus))
        lhs = Expr::make_binary(Expr::Kind::Sub, lhs, parse_term());
      else
        return lhs;
    }
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_unary();
    for (;;) {
      if (accept(Token::Type::Star))
        lhs = Expr::make_binary(Expr::Kind::Mul, lhs, parse_unary());
      else if (accept(Token::Type::Slash))
        lhs = Expr::make_binary(Expr::Kind::Div, lhs, parse_unary());
      else
        return lhs;
    }
  }

  ExprPtr parse_unary() {
    if (accept(Token::Type::Minus))
      return Expr::make_unary(Expr::Kind::Neg, parse_unary());
    return parse_postfix();
  }

  ExprPtr parse_postfix() {
    ExprPtr base = parse_primary();
    while (accept(Token::Type::Caret)) base = Expr::make_pow(base, parse_exponent());
    return base;
  }

  int parse_exponent() {
    const bool negative = accept(Token::Type::Minus);
    const Token& t = peek();
    if (t.type != Token::Type::Number)
      throw ParseError(t.offset, "expected integer exponent after '^'");
    const double v = t.number;
    if (v != std::floor(v) || std::abs(v) > 1e6)
      throw ParseError(t.offset, "exponent must be a small integer");
    advance();
    const int n = static_cast<int>(v);
    return negative ? -n : n;
  }

  ExprPtr parse_primary() {
    const Token t = advance();
    switch (t.type) {
      case Token::Type::Number:
        return Expr::make_literal(cplx{t.number, 0.0});
      case Token::Type::LParen: {
        ExprPtr first = parse_expr();
        if (accept(Token::Type::Comma)) {
          ExprPtr second = parse_expr();
          expect(Token::Type::RParen, "')'");
          const auto re = fold_real(first);
          const auto im = fold_real(second);
          if (!re || !im)
            throw ParseError(t.offset,
                             "complex literal parts must be numeric constants");
          return Expr::make_literal(cplx{*re, *im});
        }
        expect(Token::Type::RParen, "')'");
        return first;
      }
      case Token::Type::Ident: {
        if (t.text == "z") return Expr::make_var();
        const auto kind = call_kind(t.text);
        if (!kind)
          throw ParseError(t.offset, "unknown identifier '" + t.text + "'");
        expect(Token::Type::LParen, "'(' after function name");
        ExprPtr arg = parse_expr();
        expect(Token::Type::RParen, "')'");
        return Expr::make_unary(*kind, arg);
      }
      case Token::Type::End:
        throw ParseError(t.offset, "unexpected end of input");
      default:
        throw ParseError(t.offset, "unexpected token");
    }
  }

  static std::optional<Expr::Kind> call_kind(const std::string& name) {
    if (name == "conj") return Expr::Kind::Conj;
    if (name == "re") return Expr::Kind::Re;
    if (name == "im") return Expr::Kind::Im;
    if (name == "abs") return Expr::Kind::Abs;
    if (name == "exp") return Expr::Kind::Exp;
    if (name == "cos") return Expr::Kind::Cos;
    if (name == "sin") return Expr::Kind::Sin;
    if (name == "logabs") return Expr::Kind::LogAbs;
    return std::nullopt;
  }

  // Folds literal-only subtrees (literals under negation) to a real constant.
  static std::optional<double> fold_real(const ExprPtr& e) {
    if (e->kind == Expr::Kind::Literal)
      return e->literal.imag() == 0.0 ? std::optional<double>(e->literal.real())
                                      : std::nullopt;
    if (e->kind == Expr::Kind::Neg) {
      const auto inner = fold_real(e->lhs);
      return inner ? std::optional<double>(-*inner) : std::nullopt;
    }
    return std::nullopt;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

void collect_denominators(const Expr& e, std::vector<const Expr*>& out) {
  switch (e.kind) {
    case Expr::Kind::Div:
      out.push_back(e.rhs.get());
      break;
    case Expr::Kind::Pow:
      if (e.exponent < 0 && e.lhs->kind != Expr::Kind::Var) out.push_back(e.lhs.get());
      break;
    case Expr::Kind::LogAbs:
      out.push_back(e.lhs.get());
      break;
    default:
      break;
  }
  if (e.lhs) collect_denominators(*e.lhs, out);
  if (e.rhs) collect_denominators(*e.rhs, out);
}

}  // namespace

ExprPtr Expr::make_literal(cplx v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Literal;
  e->literal = v;
  return e;
}

ExprPtr Expr::make_var() {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Var;
  return e;
}

ExprPtr Expr::make_unary(Kind k, ExprPtr child) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->lhs = std::move(child);
  return e;
}

ExprPtr Expr::make_binary(Kind k, ExprPtr l, ExprPtr r) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  return e;
}

ExprPtr Expr::make_pow(ExprPtr base, int exponent) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Pow;
  e->lhs = std::move(base);
  e->exponent = exponent;
  return e;
}

ExprPtr parse(std::string_view src) {
  if (src.empty()) throw ParseError(0, "empty expression");
  return Parser(src).run();
}

cplx eval(const Expr& e, cplx z) {
  switch (e.kind) {
    case Expr::Kind::Literal:
      return e.literal;
    case Expr::Kind::Var:
      return z;
    case Expr::Kind::Neg:
      return -eval(*e.lhs, z);
    case Expr::Kind::Conj:
      return std::conj(eval(*e.lhs, z));
    case Expr::Kind::Re:
      return {eval(*e.lhs, z).real(), 0.0};
    case Expr::Kind::Im:
      return {eval(*e.lhs, z).imag(), 0.0};
    case Expr::Kind::Abs:
      return {std::abs(eval(*e.lhs, z)), 0.0};
    case Expr::Kind::Add:
      return eval(*e.lhs, z) + eval(*e.rhs, z);
    case Expr::Kind::Sub:
      return eval(*e.lhs, z) - eval(*e.rhs, z);
    case Expr::Kind::Mul:
      return eval(*e.lhs, z) * eval(*e.rhs, z);
    case Expr::Kind::Div: {
      const cplx num = eval(*e.lhs, z);
      const cplx den = eval(*e.rhs, z);
      if (std::abs(den) < kPoleEvalTol)
        throw EvalError("division by value of modulus < 1e-14");
      return num / den;
    }
    case Expr::Kind::Pow: {
      if (e.exponent >= 0) return ipow(eval(*e.lhs, z), e.exponent);
      // On the circle z^(-k) is conj(z)^k; other bases take a guarded
      // reciprocal.
      if (e.lhs->kind == Expr::Kind::Var) return ipow(std::conj(z), -e.exponent);
      const cplx b = ipow(eval(*e.lhs, z), -e.exponent);
      if (std::abs(b) < kPoleEvalTol)
        throw EvalError("negative power of value with modulus < 1e-14");
      return cplx{1.0, 0.0} / b;
    }
    case Expr::Kind::Exp:
      return std::exp(eval(*e.lhs, z));
    case Expr::Kind::Cos:
      return std::cos(eval(*e.lhs, z));
    case Expr::Kind::Sin:
      return std::sin(eval(*e.lhs, z));
    case Expr::Kind::LogAbs: {
      const double a = std::abs(eval(*e.lhs, z));
      if (a < kPoleEvalTol) throw EvalError("logabs of value with modulus < 1e-14");
      return {std::log(a), 0.0};
    }
  }
  throw EvalError("corrupt expression node");
}

std::string to_string(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Literal:
      if (e.literal.imag() == 0.0 && !std::signbit(e.literal.real()))
        return format_double(e.literal.real());
      return "(" + format_double(e.literal.real()) + "," +
             format_double(e.literal.imag()) + ")";
    case Expr::Kind::Var:
      return "z";
    case Expr::Kind::Neg:
      return "(-" + to_string(*e.lhs) + ")";
    case Expr::Kind::Conj:
      return "conj(" + to_string(*e.lhs) + ")";
    case Expr::Kind::Re:
      return "re(" + to_string(*e.lhs) + ")";
    case Expr::Kind::Im:
      return "im(" + to_string(*e.lhs) + ")";
    case Expr::Kind::Abs:
      return "abs(" + to_string(*e.lhs) + ")";
    case Expr::Kind::Add:
      return "(" + to_string(*e.lhs) + "+" + to_string(*e.rhs) + ")";
    case Expr::Kind::Sub:
      return "(" + to_string(*e.lhs) + "-" + to_string(*e.rhs) + ")";
    case Expr::Kind::Mul:
      return "(" + to_string(*e.lhs) + "*" + to_string(*e.rhs) + ")";
    case Expr::Kind::Div:
      return "(" + to_string(*e.lhs) + "/" + to_string(*e.rhs) + ")";
    case Expr::Kind::Pow:
      return "(" + to_string(*e.lhs) + "^" + std::to_string(e.exponent) + ")";
    case Expr::Kind::Exp:
      return "exp(" + to_string(*e.lhs) + ")";
    case Expr::Kind::Cos:
      return "cos(" + to_string(*e.lhs) + ")";
    case Expr::Kind::Sin:
      return "sin(" + to_string(*e.lhs) + ")";
    case Expr::Kind::LogAbs:
      return "logabs(" + to_string(*e.lhs) + ")";
  }
  return {};
}

PoleReport pole_check(const Expr& e, const CircleGrid& grid) {
  if (grid.size < kPoleCheckMinGrid)
    throw std::invalid_argument("pole_check: grid must have at least 4096 nodes");

  std::vector<const Expr*> denominators;
  collect_denominators(e, denominators);

  PoleReport report;
  if (denominators.empty()) {
    report.min_denominator_modulus = std::numeric_limits<double>::infinity();
    report.pass = true;
    return report;
  }

  double worst = std::numeric_limits<double>::infinity();
  for (double t : grid.nodes) {
    const cplx z = std::polar(1.0, t);
    for (const Expr* den : denominators) {
      double modulus = 0.0;
      try {
        modulus = std::abs(eval(*den, z));
      } catch (const EvalError&) {
        modulus = 0.0;  // nested pole underneath this denominator
      }
      worst = std::min(worst, modulus);
    }
  }
  report.min_denominator_modulus = worst;
  report.pass = worst > kPoleCheckTol;
  return report;
}

PoleReport pole_check(const Expr& e) {
  return pole_check(e, CircleGrid::uniform(kPoleCheckMinGrid));
}

CircleFunction CircleFunction::one() {
  return CircleFunction("1", [](cplx) { return cplx{1.0, 0.0}; },
                        Expr::make_literal(cplx{1.0, 0.0}), true);
}

CircleFunction CircleFunction::z() {
  return CircleFunction("z", [](cplx z) { return z; }, Expr::make_var(), true);
}

CircleFunction CircleFunction::re_z() {
  return CircleFunction("re(z)", [](cplx z) { return cplx{z.real(), 0.0}; },
                        Expr::make_unary(Expr::Kind::Re, Expr::make_var()), true);
}

CircleFunction CircleFunction::exp_z() {
  return CircleFunction("exp(z)", [](cplx z) { return std::exp(z); },
                        Expr::make_unary(Expr::Kind::Exp, Expr::make_var()), true);
}

CircleFunction CircleFunction::inv_shift(cplx w) {
  if (std::abs(std::abs(w) - 1.0) <= kPoleCheckTol)
    throw std::invalid_argument("inv_shift: pole lies on or too close to the circle");
  auto ast = Expr::make_binary(
      Expr::Kind::Div, Expr::make_literal(cplx{1.0, 0.0}),
      Expr::make_binary(Expr::Kind::Sub, Expr::make_var(), Expr::make_literal(w)));
  std::string desc = "1/(z-(" + format_double(w.real()) + "," +
                     format_double(w.imag()) + "))";
  return CircleFunction(std::move(desc), [w](cplx z) { return 1.0 / (z - w); },
                        std::move(ast), true);
}

CircleFunction CircleFunction::power(int n) {
  auto fn = [n](cplx z) {
    return n >= 0 ? ipow(z, n) : ipow(std::conj(z), -n);
  };
  return CircleFunction("z^" + std::to_string(n), fn,
                        Expr::make_pow(Expr::make_var(), n), true);
}

CircleFunction CircleFunction::from_expr(ExprPtr ast) {
  if (!ast) throw std::invalid_argument("CircleFunction: null expression");
  auto fn = [ast](cplx z) { return eval(*ast, z); };
  std::string desc = to_string(*ast);
  return CircleFunction(std::move(desc), std::move(fn), std::move(ast), false);
}

CircleFunction CircleFunction::from_source(std::string_view src) {
  ExprPtr ast = parse(src);
  auto fn = [ast](cplx z) { return eval(*ast, z); };
  return CircleFunction(std::string(src), std::move(fn), std::move(ast), false);
}

CircleFunction CircleFunction::conjugated() const {
  Fn base = fn_;
  ExprPtr ast = ast_ ? Expr::make_unary(Expr::Kind::Conj, ast_) : nullptr;
  return CircleFunction("conj(" + description_ + ")",
                        [base](cplx z) { return std::conj(base(z)); },
                        std::move(ast), false);
}

CircleFunction CircleFunction::product(const CircleFunction& g) const {
  Fn a = fn_;
  Fn b = g.fn_;
  ExprPtr ast = (ast_ && g.ast_) ? Expr::make_binary(Expr::Kind::Mul, ast_, g.ast_)
                                 : nullptr;
  return CircleFunction("(" + description_ + ")*(" + g.description_ + ")",
                        [a, b](cplx z) { return a(z) * b(z); }, std::move(ast),
                        false);
}

PoleReport CircleFunction::pole_report(const CircleGrid& grid) const {
  if (!ast_) {
    PoleReport r;
    r.min_denominator_modulus = std::numeric_limits<double>::infinity();
    r.pass = true;
    return r;
  }
  return pole_check(*ast_, grid);
}

}  // namespace fejcal
