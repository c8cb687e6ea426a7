#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "darboux/curve.hpp"
#include "darboux/surface.hpp"

namespace darboux::dsl {

// Expression grammar (EBNF):
//   expr   := term (("+"|"-") term)* ;
//   term   := factor (("*"|"/") factor)* ;
//   factor := "-" factor | power ;
//   power  := atom ("^" factor)? ;
//   atom   := NUMBER | IDENT | IDENT "(" expr ("," expr)* ")" | "(" expr ")"
// NUMBER is a decimal literal with optional exponent; IDENT is
// [A-Za-z_][A-Za-z0-9_]*. '^' is right-associative and binds tighter than
// unary minus. Identifiers are case-sensitive; whitespace is insignificant.

enum class NodeKind { Literal, Variable, Constant, Neg, Add, Sub, Mul, Div, Pow, Call };

enum class Func { Sin, Cos, Tan, Sinh, Cosh, Tanh, Exp, Log, Sqrt, Atan2, Abs };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    NodeKind kind = NodeKind::Literal;
    double literal = 0.0;          // Literal
    int var_index = -1;            // Variable
    std::string name;              // Variable / Constant / Call spelling
    Func func = Func::Sin;         // Call
    ExprPtr a, b;                  // operands
    std::size_t offset = 0;        // byte offset in the source text
};

/// An expression together with the variable context it was parsed in.
struct ParsedExpr {
    ExprPtr root;
    std::vector<std::string> vars;
};

/// Hard limit on expression nesting.
inline constexpr int kMaxDepth = 64;

/// Parse source against the declared variable list. Throws SyntaxError,
/// UnknownIdentifier or DepthExceeded.
ParsedExpr parse_expr(const std::string& source, const std::vector<std::string>& allowed_vars);

/// Minimal-parenthesis rendering; parses back to a structurally identical tree.
std::string to_string(const ParsedExpr& expr);
std::string to_string(const ExprPtr& node);

bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

int depth(const ExprPtr& node);

/// Value, gradient and Hessian carried through an evaluation.
/// Slots beyond the declared variable count stay zero.
struct Dual2 {
    double val = 0.0;
    std::array<double, 2> g{0.0, 0.0};
    std::array<double, 3> h{0.0, 0.0, 0.0};  // h[0]=d^2/dx0^2, h[1]=d^2/dx0dx1, h[2]=d^2/dx1^2
};

/// Forward-mode evaluation at a point given positionally (values[i] binds
/// vars[i]). Derivatives are exact to machine precision. Throws DomainError
/// with the offending subexpression's source offset.
Dual2 eval_raw(const ParsedExpr& expr, const std::array<double, 2>& values);

struct EvalResult {
    double value = 0.0;
    std::vector<double> first;                // per declared variable
    std::vector<std::vector<double>> second;  // symmetric matrix per variable pair
};

/// Map-based evaluation; every declared variable must be bound.
EvalResult eval_dual2(const ParsedExpr& expr, const std::map<std::string, double>& bindings);

/// Three components x(u,v), y(u,v), z(u,v) plus the parameter rectangle.
struct ParsedSurface {
    ParsedExpr x, y, z;
    Domain domain;
};

/// Parse the component sources with variables {u, v} and check that the
/// domain center evaluates cleanly.
ParsedSurface parse_surface(const std::string& x_src, const std::string& y_src,
                            const std::string& z_src, const Domain& domain);

/// Patch backed by dual-number evaluation: exact first and second partials,
/// no third-order data. Domain errors surface lazily at evaluation sites.
std::shared_ptr<SurfacePatch> compile_surface(const ParsedSurface& parsed);

/// u(t), v(t) over a parameter interval.
struct ParsedCurve {
    ParsedExpr u, v;
    Interval range;
};

ParsedCurve parse_curve(const std::string& u_src, const std::string& v_src, const Interval& range);

std::shared_ptr<ParamCurve> compile_curve(const ParsedCurve& parsed);

}  // namespace darboux::dsl
