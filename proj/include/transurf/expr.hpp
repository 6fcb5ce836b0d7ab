#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace transurf {

// Name -> value map used to bind variables and parameters at evaluation time.
using Bindings = std::map<std::string, double, std::less<>>;

enum class NodeKind { Constant, Variable, Parameter, Add, Sub, Mul, Div, Neg, Pow, Call };

enum class Func { Sin, Cos, Tan, Sinh, Cosh, Tanh, Exp, Log, Sqrt, Abs };

const char* func_name(Func f);

class ExprNode;

// Expressions are immutable trees shared by pointer; all operations on them
// are pure functions, so an Expr may be used from several threads at once.
using Expr = std::shared_ptr<const ExprNode>;

class ExprNode {
public:
    NodeKind kind() const { return kind_; }
    double value() const { return value_; }            // Constant only
    const std::string& name() const { return name_; }  // Variable / Parameter
    Func func() const { return func_; }                // Call only
    const Expr& left() const { return a_; }
    const Expr& right() const { return b_; }
    const Expr& child() const { return a_; }

    static Expr constant(double v);
    static Expr variable(std::string name);
    static Expr parameter(std::string name);
    static Expr add(Expr a, Expr b);
    static Expr sub(Expr a, Expr b);
    static Expr mul(Expr a, Expr b);
    static Expr div(Expr a, Expr b);
    static Expr neg(Expr a);
    static Expr pow(Expr base, Expr exponent);
    static Expr call(Func f, Expr arg);

private:
    ExprNode() = default;

    NodeKind kind_{NodeKind::Constant};
    double value_{0};
    std::string name_;
    Func func_{Func::Sin};
    Expr a_, b_;
};

// Constant-folding builders: 0+x -> x, 1*x -> x, 0*x -> 0, constant arithmetic
// evaluated, neg(neg(x)) -> x, x^0 -> 1, x^1 -> x.  Used by differentiate();
// the parser builds raw nodes so that parse trees mirror the input text.
Expr fold_add(Expr a, Expr b);
Expr fold_sub(Expr a, Expr b);
Expr fold_mul(Expr a, Expr b);
Expr fold_div(Expr a, Expr b);
Expr fold_neg(Expr a);
Expr fold_pow(Expr base, Expr exponent);
Expr fold_call(Func f, Expr arg);

// True (and *out filled) when e is a Constant node.
bool is_constant(const Expr& e, double* out = nullptr);

struct ParseError : std::runtime_error {
    ParseError(std::size_t offset, std::string expected_what);
    std::size_t offset;    // byte offset into the input text
    std::string expected;  // description of what would have been accepted
};

struct EvalError : std::runtime_error {
    EvalError(std::string message, std::string node_text);
    std::string node;  // printed form of the offending subexpression
};

// Grammar (whitespace-insensitive, '#' starts a comment running to end of input):
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := unary ('^' factor)?
//   unary  := '-' unary | atom
//   atom   := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'
// An identifier equal to `variable` becomes a Variable; the other coordinate
// name (u or v) is rejected; any other identifier becomes a Parameter.
Expr parse(std::string_view text, std::string_view variable);

// Serializes so that parsing the result reproduces the tree: for any
// grammar-valid s, parse(to_string(parse(s))) is structurally identical
// to parse(s).
std::string to_string(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

// Symbolic d/d(variable) with constant folding.  Pow with a non-constant
// exponent differentiates through the exp(log) rewrite.
Expr differentiate(const Expr& e, std::string_view variable);

// Throws EvalError for unbound names, division by zero, log/sqrt outside
// their domains, pow of a negative base with non-integer exponent, and any
// non-finite intermediate result.
double eval(const Expr& e, const Bindings& bindings);

struct Jet3 {
    double value{0};
    double d1{0};
    double d2{0};
    double d3{0};
};

// Value and first three derivatives with respect to `variable` at x, with the
// remaining names bound by `params`.  The three derivative trees are computed
// once per (expression, variable) pair and cached; the cache is safe for
// concurrent use.
Jet3 eval_jet(const Expr& e, std::string_view variable, double x, const Bindings& params = {});

}  // namespace transurf
