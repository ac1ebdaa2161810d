// funcexpr.hpp — a small expression language for continuous functions on the
// unit circle, plus the CircleFunction wrapper consumed by the Fourier and
// functional-calculus layers.
//
// Grammar (ASCII source, byte offsets in errors):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | postfix
//   postfix := primary ('^' int)*            int := ['-'] digits
//   primary := number | '(' expr [',' expr] ')' | name '(' expr ')' | 'z'
//
// '+ - * /' are left associative; '^' binds tighter than unary minus and
// takes integer exponents only. "(a,b)" with numeric a, b is the complex
// literal a + bi; a bare number is a real literal. Named calls:
// conj, re, im, abs, exp, cos, sin, logabs.

#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fejcal/core.hpp"

namespace fejcal {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind {
    Literal,
    Var,  // z
    Neg,
    Conj,
    Re,
    Im,
    Abs,
    Add,
    Sub,
    Mul,
    Div,
    Pow,  // integer exponent in `exponent`
    Exp,
    Cos,
    Sin,
    LogAbs,
  };

  Kind kind;
  cplx literal{0.0, 0.0};
  int exponent = 0;
  ExprPtr lhs;  // only child for unary nodes
  ExprPtr rhs;

  static ExprPtr make_literal(cplx v);
  static ExprPtr make_var();
  static ExprPtr make_unary(Kind k, ExprPtr child);
  static ExprPtr make_binary(Kind k, ExprPtr l, ExprPtr r);
  static ExprPtr make_pow(ExprPtr base, int exponent);
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, const std::string& message)
      : std::runtime_error("parse error at offset " + std::to_string(offset) +
                           ": " + message),
        offset(offset) {}
  std::size_t offset;
};

class EvalError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

ExprPtr parse(std::string_view src);

/// Evaluates at a point of the unit circle. z^(-k) is conj(z)^k when the
/// base is the variable itself; other negative powers take a guarded
/// reciprocal. Throws EvalError when a denominator modulus drops below 1e-14.
cplx eval(const Expr& e, cplx z);

/// Deterministic printer; parse(to_string(e)) rebuilds an identical tree.
std::string to_string(const Expr& e);

struct PoleReport {
  double min_denominator_modulus = 0.0;
  bool pass = false;
};

/// Scans every denominator-like subexpression (divisor, negative-power base
/// other than z, logabs argument) over the grid. Requires grid.size >= 4096;
/// pass iff the minimum modulus stays above 1e-6. Expressions with no
/// denominators pass with modulus +inf.
PoleReport pole_check(const Expr& e, const CircleGrid& grid);
PoleReport pole_check(const Expr& e);  // on a 4096-node grid

/// A continuous function on the unit circle: either a builtin with a
/// closed-form evaluator or a parsed expression. Builtins also carry the
/// equivalent expression tree, so pole scanning and printing are uniform.
class CircleFunction {
 public:
  static CircleFunction one();
  static CircleFunction z();
  static CircleFunction re_z();
  static CircleFunction exp_z();
  static CircleFunction inv_shift(cplx w);  // 1/(z - w); requires ||w| - 1| > 1e-6
  static CircleFunction power(int n);       // z^n, any integer n
  static CircleFunction from_expr(ExprPtr ast);
  static CircleFunction from_source(std::string_view src);

  cplx operator()(cplx z) const { return fn_(z); }
  const std::string& description() const noexcept { return description_; }
  const ExprPtr& ast() const noexcept { return ast_; }
  bool is_builtin() const noexcept { return builtin_; }

  /// Pointwise complex conjugate z -> conj(f(z)).
  CircleFunction conjugated() const;
  /// Pointwise product z -> f(z) * g(z).
  CircleFunction product(const CircleFunction& g) const;

  PoleReport pole_report(const CircleGrid& grid) const;

 private:
  using Fn = std::function<cplx(cplx)>;
  CircleFunction(std::string description, Fn fn, ExprPtr ast, bool builtin)
      : description_(std::move(description)),
        fn_(std::move(fn)),
        ast_(std::move(ast)),
        builtin_(builtin) {}

  std::string description_;
  Fn fn_;
  ExprPtr ast_;  // may be null for composed functions
  bool builtin_ = false;
};

}  // namespace fejcal
