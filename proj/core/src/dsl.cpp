#include "darboux/dsl.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <optional>

#include "darboux/errors.hpp"

namespace darboux::dsl {

namespace {

// ---------------------------------------------------------------------------
// tokenizer
// ---------------------------------------------------------------------------

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
    Tok kind = Tok::End;
    std::size_t offset = 0;
    double number = 0.0;
    std::string text;
};

bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::vector<Token> tokenize(const std::string& src) {
    std::vector<Token> out;
    std::size_t i = 0;
    const std::size_t n = src.size();
    while (i < n) {
        const char c = src[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++i;
            continue;
        }
        Token tok;
        tok.offset = i;
        if (is_digit(c) || (c == '.' && i + 1 < n && is_digit(src[i + 1]))) {
            std::size_t j = i;
            while (j < n && is_digit(src[j])) ++j;
            if (j < n && src[j] == '.') {
                ++j;
                while (j < n && is_digit(src[j])) ++j;
            }
            if (j < n && (src[j] == 'e' || src[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < n && (src[k] == '+' || src[k] == '-')) ++k;
                if (k < n && is_digit(src[k])) {
                    while (k < n && is_digit(src[k])) ++k;
                    j = k;
                }
            }
            tok.kind = Tok::Number;
            tok.text = src.substr(i, j - i);
            tok.number = std::strtod(tok.text.c_str(), nullptr);
            i = j;
        } else if (is_ident_start(c)) {
            std::size_t j = i;
            while (j < n && is_ident_char(src[j])) ++j;
            tok.kind = Tok::Ident;
            tok.text = src.substr(i, j - i);
            i = j;
        } else {
            switch (c) {
                case '+': tok.kind = Tok::Plus; break;
                case '-': tok.kind = Tok::Minus; break;
                case '*': tok.kind = Tok::Star; break;
                case '/': tok.kind = Tok::Slash; break;
                case '^': tok.kind = Tok::Caret; break;
                case '(': tok.kind = Tok::LParen; break;
                case ')': tok.kind = Tok::RParen; break;
                case ',': tok.kind = Tok::Comma; break;
                default:
                    throw SyntaxError("unexpected character '" + std::string(1, c) +
                                          "' at offset " + std::to_string(i),
                                      i, "a number, identifier or operator");
            }
            ++i;
        }
        out.push_back(std::move(tok));
    }
    Token end;
    end.kind = Tok::End;
    end.offset = n;
    out.push_back(end);
    return out;
}

// ---------------------------------------------------------------------------
// parser
// ---------------------------------------------------------------------------

struct FuncInfo {
    const char* name;
    Func func;
    int arity;
};

constexpr FuncInfo kFuncs[] = {
    {"sin", Func::Sin, 1},   {"cos", Func::Cos, 1},   {"tan", Func::Tan, 1},
    {"sinh", Func::Sinh, 1}, {"cosh", Func::Cosh, 1}, {"tanh", Func::Tanh, 1},
    {"exp", Func::Exp, 1},   {"log", Func::Log, 1},   {"sqrt", Func::Sqrt, 1},
    {"atan2", Func::Atan2, 2}, {"abs", Func::Abs, 1},
};

const FuncInfo* lookup_func(const std::string& name) {
    for (const auto& f : kFuncs) {
        if (name == f.name) return &f;
    }
    return nullptr;
}

std::optional<double> lookup_constant(const std::string& name) {
    if (name == "pi") return std::numbers::pi;
    if (name == "e") return std::numbers::e;
    return std::nullopt;
}

class Parser {
public:
    Parser(const std::string& src, const std::vector<std::string>& vars)
        : tokens_(tokenize(src)), vars_(vars) {}

    ExprPtr parse() {
        ExprPtr e = expr();
        if (peek().kind != Tok::End) {
            fail("an operator or end of input");
        }
        return e;
    }

private:
    std::vector<Token> tokens_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;
    int depth_ = 0;

    const Token& peek() const { return tokens_[pos_]; }
    Token take() { return tokens_[pos_++]; }

    [[noreturn]] void fail(const std::string& expected) const {
        const Token& t = peek();
        const std::string got = (t.kind == Tok::End) ? "end of input" : "'" + describe(t) + "'";
        throw SyntaxError("expected " + expected + " but found " + got + " at offset " +
                              std::to_string(t.offset),
                          t.offset, expected);
    }

    static std::string describe(const Token& t) {
        switch (t.kind) {
            case Tok::Number: return t.text;
            case Tok::Ident: return t.text;
            case Tok::Plus: return "+";
            case Tok::Minus: return "-";
            case Tok::Star: return "*";
            case Tok::Slash: return "/";
            case Tok::Caret: return "^";
            case Tok::LParen: return "(";
            case Tok::RParen: return ")";
            case Tok::Comma: return ",";
            case Tok::End: return "";
        }
        return "";
    }

    struct DepthGuard {
        explicit DepthGuard(Parser& p) : p_(p) {
            if (++p_.depth_ > kMaxDepth) {
                throw DepthExceeded("expression nests deeper than " + std::to_string(kMaxDepth));
            }
        }
        ~DepthGuard() { --p_.depth_; }
        Parser& p_;
    };

    ExprPtr expr() {
        DepthGuard guard(*this);
        ExprPtr left = term();
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            const Token op = take();
            ExprPtr right = term();
            auto node = std::make_shared<Expr>();
            node->kind = (op.kind == Tok::Plus) ? NodeKind::Add : NodeKind::Sub;
            node->a = left;
            node->b = right;
            node->offset = op.offset;
            left = node;
        }
        return left;
    }

    ExprPtr term() {
        DepthGuard guard(*this);
        ExprPtr left = factor();
        while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
            const Token op = take();
            ExprPtr right = factor();
            auto node = std::make_shared<Expr>();
            node->kind = (op.kind == Tok::Star) ? NodeKind::Mul : NodeKind::Div;
            node->a = left;
            node->b = right;
            node->offset = op.offset;
            left = node;
        }
        return left;
    }

    ExprPtr factor() {
        DepthGuard guard(*this);
        if (peek().kind == Tok::Minus) {
            const Token op = take();
            auto node = std::make_shared<Expr>();
            node->kind = NodeKind::Neg;
            node->a = factor();
            node->offset = op.offset;
            return node;
        }
        return power();
    }

    ExprPtr power() {
        DepthGuard guard(*this);
        ExprPtr base = atom();
        if (peek().kind == Tok::Caret) {
            const Token op = take();
            auto node = std::make_shared<Expr>();
            node->kind = NodeKind::Pow;
            node->a = base;
            node->b = factor();  // right-associative
            node->offset = op.offset;
            return node;
        }
        return base;
    }

    ExprPtr atom() {
        DepthGuard guard(*this);
        const Token& t = peek();
        if (t.kind == Tok::Number) {
            const Token tok = take();
            auto node = std::make_shared<Expr>();
            node->kind = NodeKind::Literal;
            node->literal = tok.number;
            node->offset = tok.offset;
            return node;
        }
        if (t.kind == Tok::LParen) {
            take();
            ExprPtr inner = expr();
            if (peek().kind != Tok::RParen) fail("')'");
            take();
            return inner;
        }
        if (t.kind == Tok::Ident) {
            const Token tok = take();
            if (peek().kind == Tok::LParen) {
                const FuncInfo* info = lookup_func(tok.text);
                if (!info) {
                    throw UnknownIdentifier("unknown function '" + tok.text + "' at offset " +
                                                std::to_string(tok.offset),
                                            tok.offset);
                }
                take();  // '('
                std::vector<ExprPtr> args;
                args.push_back(expr());
                while (peek().kind == Tok::Comma) {
                    take();
                    args.push_back(expr());
                }
                if (peek().kind != Tok::RParen) fail("',' or ')'");
                take();
                if (static_cast<int>(args.size()) != info->arity) {
                    throw SyntaxError("function '" + tok.text + "' expects " +
                                          std::to_string(info->arity) + " argument(s), got " +
                                          std::to_string(args.size()),
                                      tok.offset, "argument list of arity " +
                                          std::to_string(info->arity));
                }
                auto node = std::make_shared<Expr>();
                node->kind = NodeKind::Call;
                node->func = info->func;
                node->name = tok.text;
                node->a = args[0];
                if (args.size() > 1) node->b = args[1];
                node->offset = tok.offset;
                return node;
            }
            for (std::size_t i = 0; i < vars_.size(); ++i) {
                if (vars_[i] == tok.text) {
                    auto node = std::make_shared<Expr>();
                    node->kind = NodeKind::Variable;
                    node->var_index = static_cast<int>(i);
                    node->name = tok.text;
                    node->offset = tok.offset;
                    return node;
                }
            }
            if (auto c = lookup_constant(tok.text)) {
                auto node = std::make_shared<Expr>();
                node->kind = NodeKind::Constant;
                node->literal = *c;
                node->name = tok.text;
                node->offset = tok.offset;
                return node;
            }
            throw UnknownIdentifier("unknown identifier '" + tok.text + "' at offset " +
                                        std::to_string(tok.offset),
                                    tok.offset);
        }
        fail("a number, identifier, '-' or '('");
    }
};

// ---------------------------------------------------------------------------
// dual-number evaluation
// ---------------------------------------------------------------------------

Dual2 dual_literal(double v) {
    Dual2 d;
    d.val = v;
    return d;
}

Dual2 dual_var(int index, double v) {
    Dual2 d;
    d.val = v;
    d.g[static_cast<std::size_t>(index)] = 1.0;
    return d;
}

Dual2 dual_add(const Dual2& a, const Dual2& b) {
    Dual2 r;
    r.val = a.val + b.val;
    for (int i = 0; i < 2; ++i) r.g[i] = a.g[i] + b.g[i];
    for (int i = 0; i < 3; ++i) r.h[i] = a.h[i] + b.h[i];
    return r;
}

Dual2 dual_sub(const Dual2& a, const Dual2& b) {
    Dual2 r;
    r.val = a.val - b.val;
    for (int i = 0; i < 2; ++i) r.g[i] = a.g[i] - b.g[i];
    for (int i = 0; i < 3; ++i) r.h[i] = a.h[i] - b.h[i];
    return r;
}

Dual2 dual_neg(const Dual2& a) {
    Dual2 r;
    r.val = -a.val;
    for (int i = 0; i < 2; ++i) r.g[i] = -a.g[i];
    for (int i = 0; i < 3; ++i) r.h[i] = -a.h[i];
    return r;
}

Dual2 dual_mul(const Dual2& a, const Dual2& b) {
    Dual2 r;
    r.val = a.val * b.val;
    for (int i = 0; i < 2; ++i) r.g[i] = a.g[i] * b.val + a.val * b.g[i];
    r.h[0] = a.h[0] * b.val + 2.0 * a.g[0] * b.g[0] + a.val * b.h[0];
    r.h[1] = a.h[1] * b.val + a.g[0] * b.g[1] + a.g[1] * b.g[0] + a.val * b.h[1];
    r.h[2] = a.h[2] * b.val + 2.0 * a.g[1] * b.g[1] + a.val * b.h[2];
    return r;
}

/// Chain rule for r = f(a): r'' = f''(a) a_i a_j + f'(a) a_ij.
Dual2 dual_chain(const Dual2& a, double f, double f1, double f2) {
    Dual2 r;
    r.val = f;
    for (int i = 0; i < 2; ++i) r.g[i] = f1 * a.g[i];
    r.h[0] = f2 * a.g[0] * a.g[0] + f1 * a.h[0];
    r.h[1] = f2 * a.g[0] * a.g[1] + f1 * a.h[1];
    r.h[2] = f2 * a.g[1] * a.g[1] + f1 * a.h[2];
    return r;
}

bool dual_is_constant(const Dual2& a) {
    for (int i = 0; i < 2; ++i) {
        if (a.g[i] != 0.0) return false;
    }
    for (int i = 0; i < 3; ++i) {
        if (a.h[i] != 0.0) return false;
    }
    return true;
}

class Evaluator {
public:
    explicit Evaluator(const std::array<double, 2>& values) : values_(values) {}

    Dual2 eval(const ExprPtr& node) {
        switch (node->kind) {
            case NodeKind::Literal:
            case NodeKind::Constant: return dual_literal(node->literal);
            case NodeKind::Variable:
                return dual_var(node->var_index, values_[static_cast<std::size_t>(node->var_index)]);
            case NodeKind::Neg: return dual_neg(eval(node->a));
            case NodeKind::Add: return dual_add(eval(node->a), eval(node->b));
            case NodeKind::Sub: return dual_sub(eval(node->a), eval(node->b));
            case NodeKind::Mul: return finite(dual_mul(eval(node->a), eval(node->b)), node);
            case NodeKind::Div: return div(eval(node->a), eval(node->b), node);
            case NodeKind::Pow: return pow(eval(node->a), eval(node->b), node);
            case NodeKind::Call: return call(node);
        }
        throw Error("eval: corrupt expression node");
    }

private:
    const std::array<double, 2>& values_;

    static Dual2 finite(const Dual2& r, const ExprPtr& node) {
        const bool ok = std::isfinite(r.val) && std::isfinite(r.g[0]) && std::isfinite(r.g[1]) &&
                        std::isfinite(r.h[0]) && std::isfinite(r.h[1]) && std::isfinite(r.h[2]);
        if (!ok) {
            throw DomainError("non-finite value in subexpression at offset " +
                                  std::to_string(node->offset),
                              node->offset);
        }
        return r;
    }

    static Dual2 div(const Dual2& a, const Dual2& b, const ExprPtr& node) {
        if (b.val == 0.0) {
            throw DomainError("division by zero at offset " + std::to_string(node->offset),
                              node->offset);
        }
        const double inv = 1.0 / b.val;
        const Dual2 binv = dual_chain(b, inv, -inv * inv, 2.0 * inv * inv * inv);
        return finite(dual_mul(a, binv), node);
    }

    static Dual2 int_pow(const Dual2& base, long long e, const ExprPtr& node) {
        if (e == 0) return dual_literal(1.0);
        if (e < 0) {
            const Dual2 p = int_pow(base, -e, node);
            if (p.val == 0.0) {
                throw DomainError("zero raised to a negative power at offset " +
                                      std::to_string(node->offset),
                                  node->offset);
            }
            const double inv = 1.0 / p.val;
            return dual_chain(p, inv, -inv * inv, 2.0 * inv * inv * inv);
        }
        Dual2 acc = dual_literal(1.0);
        Dual2 sq = base;
        long long k = e;
        while (k > 0) {
            if (k & 1) acc = dual_mul(acc, sq);
            k >>= 1;
            if (k > 0) sq = dual_mul(sq, sq);
        }
        return acc;
    }

    static Dual2 pow(const Dual2& a, const Dual2& b, const ExprPtr& node) {
        const double rounded = std::nearbyint(b.val);
        if (dual_is_constant(b) && std::abs(b.val - rounded) < 1e-12 && std::abs(rounded) < 1e9) {
            return finite(int_pow(a, static_cast<long long>(rounded), node), node);
        }
        if (a.val <= 0.0) {
            throw DomainError("non-integer power of a non-positive base at offset " +
                                  std::to_string(node->offset),
                              node->offset);
        }
        // a^b = exp(b log a)
        const double la = std::log(a.val);
        const Dual2 loga = dual_chain(a, la, 1.0 / a.val, -1.0 / (a.val * a.val));
        const Dual2 prod = dual_mul(b, loga);
        const double ev = std::exp(prod.val);
        return finite(dual_chain(prod, ev, ev, ev), node);
    }

    Dual2 call(const ExprPtr& node) {
        if (node->func == Func::Atan2) {
            return atan2_dual(eval(node->a), eval(node->b), node);
        }
        const Dual2 a = eval(node->a);
        const double x = a.val;
        switch (node->func) {
            case Func::Sin: return dual_chain(a, std::sin(x), std::cos(x), -std::sin(x));
            case Func::Cos: return dual_chain(a, std::cos(x), -std::sin(x), -std::cos(x));
            case Func::Tan: {
                const double t = std::tan(x);
                const double sec2 = 1.0 + t * t;
                return finite(dual_chain(a, t, sec2, 2.0 * sec2 * t), node);
            }
            case Func::Sinh: return dual_chain(a, std::sinh(x), std::cosh(x), std::sinh(x));
            case Func::Cosh: return dual_chain(a, std::cosh(x), std::sinh(x), std::cosh(x));
            case Func::Tanh: {
                const double t = std::tanh(x);
                const double sech2 = 1.0 - t * t;
                return dual_chain(a, t, sech2, -2.0 * sech2 * t);
            }
            case Func::Exp: {
                const double ev = std::exp(x);
                return finite(dual_chain(a, ev, ev, ev), node);
            }
            case Func::Log:
                if (x <= 0.0) {
                    throw DomainError("log of a non-positive value at offset " +
                                          std::to_string(node->offset),
                                      node->offset);
                }
                return dual_chain(a, std::log(x), 1.0 / x, -1.0 / (x * x));
            case Func::Sqrt: {
                if (x < 0.0) {
                    throw DomainError("sqrt of a negative value at offset " +
                                          std::to_string(node->offset),
                                      node->offset);
                }
                if (x == 0.0) {
                    if (dual_is_constant(a)) return dual_literal(0.0);
                    throw DomainError("derivative of sqrt is singular at zero (offset " +
                                          std::to_string(node->offset) + ")",
                                      node->offset);
                }
                const double r = std::sqrt(x);
                return dual_chain(a, r, 0.5 / r, -0.25 / (r * x));
            }
            case Func::Abs: {
                if (x == 0.0) {
                    if (dual_is_constant(a)) return dual_literal(0.0);
                    throw DomainError("derivative of abs is undefined at zero (offset " +
                                          std::to_string(node->offset) + ")",
                                      node->offset);
                }
                const double sign = (x > 0.0) ? 1.0 : -1.0;
                return dual_chain(a, std::abs(x), sign, 0.0);
            }
            case Func::Atan2: break;
        }
        throw Error("eval: corrupt function node");
    }

    static Dual2 atan2_dual(const Dual2& y, const Dual2& x, const ExprPtr& node) {
        const double r2 = x.val * x.val + y.val * y.val;
        if (r2 == 0.0) {
            throw DomainError("atan2(0, 0) at offset " + std::to_string(node->offset),
                              node->offset);
        }
        const double fy = x.val / r2;
        const double fx = -y.val / r2;
        const double r4 = r2 * r2;
        const double fyy = -2.0 * x.val * y.val / r4;
        const double fxx = 2.0 * x.val * y.val / r4;
        const double fxy = (y.val * y.val - x.val * x.val) / r4;
        Dual2 r;
        r.val = std::atan2(y.val, x.val);
        for (int i = 0; i < 2; ++i) r.g[i] = fy * y.g[i] + fx * x.g[i];
        auto hess = [&](int i, int j) {
            return fyy * y.g[i] * y.g[j] + fxy * (y.g[i] * x.g[j] + x.g[i] * y.g[j]) +
                   fxx * x.g[i] * x.g[j];
        };
        r.h[0] = hess(0, 0) + fy * y.h[0] + fx * x.h[0];
        r.h[1] = hess(0, 1) + fy * y.h[1] + fx * x.h[1];
        r.h[2] = hess(1, 1) + fy * y.h[2] + fx * x.h[2];
        return r;
    }
};

// ---------------------------------------------------------------------------
// printing
// ---------------------------------------------------------------------------

std::string literal_to_string(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Precedence levels: + - (1), * / (2), unary - (3), ^ (4), atoms (5).
void print_node(const ExprPtr& node, int min_prec, std::string& out) {
    auto parenthesize = [&](int prec, auto&& body) {
        const bool need = prec < min_prec;
        if (need) out += '(';
        body();
        if (need) out += ')';
    };
    switch (node->kind) {
        case NodeKind::Literal:
            out += literal_to_string(node->literal);
            return;
        case NodeKind::Variable:
        case NodeKind::Constant:
            out += node->name;
            return;
        case NodeKind::Add:
            parenthesize(1, [&] {
                print_node(node->a, 1, out);
                out += " + ";
                print_node(node->b, 2, out);
            });
            return;
        case NodeKind::Sub:
            parenthesize(1, [&] {
                print_node(node->a, 1, out);
                out += " - ";
                print_node(node->b, 2, out);
            });
            return;
        case NodeKind::Mul:
            parenthesize(2, [&] {
                print_node(node->a, 2, out);
                out += "*";
                print_node(node->b, 3, out);
            });
            return;
        case NodeKind::Div:
            parenthesize(2, [&] {
                print_node(node->a, 2, out);
                out += "/";
                print_node(node->b, 3, out);
            });
            return;
        case NodeKind::Neg:
            parenthesize(3, [&] {
                out += '-';
                print_node(node->a, 3, out);
            });
            return;
        case NodeKind::Pow:
            parenthesize(4, [&] {
                print_node(node->a, 5, out);
                out += '^';
                print_node(node->b, 3, out);  // rhs is a factor: unary minus or power
            });
            return;
        case NodeKind::Call:
            out += node->name;
            out += '(';
            print_node(node->a, 1, out);
            if (node->b) {
                out += ", ";
                print_node(node->b, 1, out);
            }
            out += ')';
            return;
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// public API
// ---------------------------------------------------------------------------

ParsedExpr parse_expr(const std::string& source, const std::vector<std::string>& allowed_vars) {
    if (source.empty()) {
        throw SyntaxError("empty expression", 0, "an expression");
    }
    Parser parser(source, allowed_vars);
    ParsedExpr out;
    out.root = parser.parse();
    out.vars = allowed_vars;
    return out;
}

std::string to_string(const ExprPtr& node) {
    std::string out;
    print_node(node, 1, out);
    return out;
}

std::string to_string(const ParsedExpr& expr) { return to_string(expr.root); }

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case NodeKind::Literal: return a->literal == b->literal;
        case NodeKind::Constant: return a->name == b->name;
        case NodeKind::Variable: return a->var_index == b->var_index && a->name == b->name;
        case NodeKind::Call:
            if (a->func != b->func) return false;
            break;
        default: break;
    }
    return structurally_equal(a->a, b->a) && structurally_equal(a->b, b->b);
}

int depth(const ExprPtr& node) {
    if (!node) return 0;
    return 1 + std::max(depth(node->a), depth(node->b));
}

Dual2 eval_raw(const ParsedExpr& expr, const std::array<double, 2>& values) {
    Evaluator ev(values);
    return ev.eval(expr.root);
}

EvalResult eval_dual2(const ParsedExpr& expr, const std::map<std::string, double>& bindings) {
    std::array<double, 2> values{0.0, 0.0};
    if (expr.vars.size() > 2) {
        throw Error("eval_dual2: at most two variables supported");
    }
    for (std::size_t i = 0; i < expr.vars.size(); ++i) {
        const auto it = bindings.find(expr.vars[i]);
        if (it == bindings.end()) {
            throw Error("eval_dual2: variable '" + expr.vars[i] + "' is not bound");
        }
        values[i] = it->second;
    }
    const Dual2 d = eval_raw(expr, values);
    EvalResult out;
    out.value = d.val;
    const std::size_t n = expr.vars.size();
    out.first.resize(n);
    out.second.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) out.first[i] = d.g[i];
    if (n >= 1) out.second[0][0] = d.h[0];
    if (n >= 2) {
        out.second[0][1] = out.second[1][0] = d.h[1];
        out.second[1][1] = d.h[2];
    }
    return out;
}

namespace {

class DslPatch final : public SurfacePatch {
public:
    DslPatch(ParsedSurface parsed) : parsed_(std::move(parsed)) {}

    SurfaceJet jet(double u, double v) const override {
        const std::array<double, 2> at{u, v};
        const Dual2 x = eval_raw(parsed_.x, at);
        const Dual2 y = eval_raw(parsed_.y, at);
        const Dual2 z = eval_raw(parsed_.z, at);
        SurfaceJet out;
        out.p = {x.val, y.val, z.val};
        out.pu = {x.g[0], y.g[0], z.g[0]};
        out.pv = {x.g[1], y.g[1], z.g[1]};
        out.puu = {x.h[0], y.h[0], z.h[0]};
        out.puv = {x.h[1], y.h[1], z.h[1]};
        out.pvv = {x.h[2], y.h[2], z.h[2]};
        return out;
    }

    Domain domain() const override { return parsed_.domain; }

private:
    ParsedSurface parsed_;
};

class DslCurve final : public ParamCurve {
public:
    DslCurve(ParsedCurve parsed) : parsed_(std::move(parsed)) {}

    CurveJet at(double t) const override {
        const std::array<double, 2> at_t{t, 0.0};
        const Dual2 u = eval_raw(parsed_.u, at_t);
        const Dual2 v = eval_raw(parsed_.v, at_t);
        CurveJet out;
        out.u = u.val;
        out.v = v.val;
        out.du = u.g[0];
        out.dv = v.g[0];
        out.ddu = u.h[0];
        out.ddv = v.h[0];
        return out;
    }

    Interval range() const override { return parsed_.range; }

private:
    ParsedCurve parsed_;
};

}  // namespace

ParsedSurface parse_surface(const std::string& x_src, const std::string& y_src,
                            const std::string& z_src, const Domain& domain) {
    const std::vector<std::string> vars{"u", "v"};
    ParsedSurface out{parse_expr(x_src, vars), parse_expr(y_src, vars), parse_expr(z_src, vars),
                      domain};
    // The domain center must evaluate cleanly; domain errors elsewhere stay lazy.
    const std::array<double, 2> center{0.5 * (domain.u_min + domain.u_max),
                                       0.5 * (domain.v_min + domain.v_max)};
    eval_raw(out.x, center);
    eval_raw(out.y, center);
    eval_raw(out.z, center);
    return out;
}

std::shared_ptr<SurfacePatch> compile_surface(const ParsedSurface& parsed) {
    return std::make_shared<DslPatch>(parsed);
}

ParsedCurve parse_curve(const std::string& u_src, const std::string& v_src,
                        const Interval& range) {
    const std::vector<std::string> vars{"t"};
    return ParsedCurve{parse_expr(u_src, vars), parse_expr(v_src, vars), range};
}

std::shared_ptr<ParamCurve> compile_curve(const ParsedCurve& parsed) {
    return std::make_shared<DslCurve>(parsed);
}

}  // namespace darboux::dsl
