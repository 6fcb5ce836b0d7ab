#include "transurf/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <shared_mutex>
#include <utility>
#include <vector>

namespace transurf {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

bool is_integer_value(double x) {
    return std::isfinite(x) && std::nearbyint(x) == x && std::abs(x) < 9.007199254740992e15;
}

}  // namespace

const char* func_name(Func f) {
    switch (f) {
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Tan: return "tan";
        case Func::Sinh: return "sinh";
        case Func::Cosh: return "cosh";
        case Func::Tanh: return "tanh";
        case Func::Exp: return "exp";
        case Func::Log: return "log";
        case Func::Sqrt: return "sqrt";
        case Func::Abs: return "abs";
    }
    return "?";
}

Expr ExprNode::constant(double v) {
    auto n = std::shared_ptr<ExprNode>(new ExprNode);
    n->kind_ = NodeKind::Constant;
    n->value_ = v;
    return n;
}

Expr ExprNode::variable(std::string name) {
    auto n = std::shared_ptr<ExprNode>(new ExprNode);
    n->kind_ = NodeKind::Variable;
    n->name_ = std::move(name);
    return n;
}

Expr ExprNode::parameter(std::string name) {
    auto n = std::shared_ptr<ExprNode>(new ExprNode);
    n->kind_ = NodeKind::Parameter;
    n->name_ = std::move(name);
    return n;
}

Expr ExprNode::add(Expr a, Expr b) {
    auto n = std::shared_ptr<ExprNode>(new ExprNode);
    n->kind_ = NodeKind::Add;
    n->a_ = std::move(a);
    n->b_ = std::move(b);
    return n;
}

Expr ExprNode::sub(Expr a, Expr b) {
    auto n = std::shared_ptr<ExprNode>(new ExprNode);
    n->kind_ = NodeKind::Sub;
    n->a_ = std::move(a);
    n->b_ = std::move(b);
    return n;
}

Expr ExprNode::mul(Expr a, Expr b) {
    auto n = std::shared_ptr<ExprNode>(new ExprNode);
    n->kind_ = NodeKind::Mul;
    n->a_ = std::move(a);
    n->b_ = std::move(b);
    return n;
}

Expr ExprNode::div(Expr a, Expr b) {
    auto n = std::shared_ptr<ExprNode>(new ExprNode);
    n->kind_ = NodeKind::Div;
    n->a_ = std::move(a);
    n->b_ = std::move(b);
    return n;
}

Expr ExprNode::neg(Expr a) {
    auto n = std::shared_ptr<ExprNode>(new ExprNode);
    n->kind_ = NodeKind::Neg;
    n->a_ = std::move(a);
    return n;
}

Expr ExprNode::pow(Expr base, Expr exponent) {
    auto n = std::shared_ptr<ExprNode>(new ExprNode);
    n->kind_ = NodeKind::Pow;
    n->a_ = std::move(base);
    n->b_ = std::move(exponent);
    return n;
}

Expr ExprNode::call(Func f, Expr arg) {
    auto n = std::shared_ptr<ExprNode>(new ExprNode);
    n->kind_ = NodeKind::Call;
    n->func_ = f;
    n->a_ = std::move(arg);
    return n;
}

bool is_constant(const Expr& e, double* out) {
    if (e->kind() != NodeKind::Constant) return false;
    if (out) *out = e->value();
    return true;
}

namespace {

bool is_constant_value(const Expr& e, double v) {
    double c;
    return is_constant(e, &c) && c == v;
}

}  // namespace

Expr fold_add(Expr a, Expr b) {
    double ca, cb;
    if (is_constant(a, &ca) && is_constant(b, &cb)) return ExprNode::constant(ca + cb);
    if (is_constant_value(a, 0)) return b;
    if (is_constant_value(b, 0)) return a;
    return ExprNode::add(std::move(a), std::move(b));
}

Expr fold_sub(Expr a, Expr b) {
    double ca, cb;
    if (is_constant(a, &ca) && is_constant(b, &cb)) return ExprNode::constant(ca - cb);
    if (is_constant_value(b, 0)) return a;
    if (is_constant_value(a, 0)) return fold_neg(std::move(b));
    return ExprNode::sub(std::move(a), std::move(b));
}

Expr fold_mul(Expr a, Expr b) {
    double ca, cb;
    if (is_constant_value(a, 0) || is_constant_value(b, 0)) return ExprNode::constant(0);
    if (is_constant(a, &ca) && is_constant(b, &cb)) return ExprNode::constant(ca * cb);
    if (is_constant_value(a, 1)) return b;
    if (is_constant_value(b, 1)) return a;
    return ExprNode::mul(std::move(a), std::move(b));
}

Expr fold_div(Expr a, Expr b) {
    double ca, cb;
    if (is_constant_value(a, 0)) return ExprNode::constant(0);
    if (is_constant_value(b, 1)) return a;
    if (is_constant(a, &ca) && is_constant(b, &cb) && cb != 0) return ExprNode::constant(ca / cb);
    return ExprNode::div(std::move(a), std::move(b));
}

Expr fold_neg(Expr a) {
    double c;
    if (is_constant(a, &c)) return ExprNode::constant(-c);
    if (a->kind() == NodeKind::Neg) return a->child();
    return ExprNode::neg(std::move(a));
}

Expr fold_pow(Expr base, Expr exponent) {
    double cb, ce;
    bool bc = is_constant(base, &cb), ec = is_constant(exponent, &ce);
    if (ec && ce == 0) return ExprNode::constant(1);
    if (ec && ce == 1) return base;
    if (bc && ec) {
        bool ok = cb > 0 || (cb < 0 && is_integer_value(ce)) || (cb == 0 && ce > 0);
        if (ok) {
            double r = std::pow(cb, ce);
            if (std::isfinite(r)) return ExprNode::constant(r);
        }
    }
    return ExprNode::pow(std::move(base), std::move(exponent));
}

Expr fold_call(Func f, Expr arg) {
    double c;
    if (is_constant(arg, &c)) {
        bool ok = true;
        double r = 0;
        switch (f) {
            case Func::Sin: r = std::sin(c); break;
            case Func::Cos: r = std::cos(c); break;
            case Func::Tan: r = std::tan(c); break;
            case Func::Sinh: r = std::sinh(c); break;
            case Func::Cosh: r = std::cosh(c); break;
            case Func::Tanh: r = std::tanh(c); break;
            case Func::Exp: r = std::exp(c); break;
            case Func::Log: ok = c > 0; r = ok ? std::log(c) : 0; break;
            case Func::Sqrt: ok = c >= 0; r = ok ? std::sqrt(c) : 0; break;
            case Func::Abs: r = std::abs(c); break;
        }
        if (ok && std::isfinite(r)) return ExprNode::constant(r);
    }
    return ExprNode::call(f, std::move(arg));
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Effective precedence for parenthesization decisions: +/- lowest, then */,
// then unary minus (negative constants print like a unary minus), then ^,
// then atoms.
int precedence(const Expr& e) {
    switch (e->kind()) {
        case NodeKind::Add:
        case NodeKind::Sub: return 1;
        case NodeKind::Mul:
        case NodeKind::Div: return 2;
        case NodeKind::Neg: return 3;
        case NodeKind::Pow: return 4;
        case NodeKind::Constant: return e->value() < 0 ? 3 : 5;
        default: return 5;
    }
}

void render(const Expr& e, std::string& out);

void render_child(const Expr& e, int min_prec, std::string& out) {
    if (precedence(e) < min_prec) {
        out += '(';
        render(e, out);
        out += ')';
    } else {
        render(e, out);
    }
}

void render(const Expr& e, std::string& out) {
    switch (e->kind()) {
        case NodeKind::Constant:
            out += fmt17(e->value());
            break;
        case NodeKind::Variable:
        case NodeKind::Parameter:
            out += e->name();
            break;
        case NodeKind::Add:
            render_child(e->left(), 1, out);
            out += " + ";
            render_child(e->right(), 2, out);
            break;
        case NodeKind::Sub:
            render_child(e->left(), 1, out);
            out += " - ";
            render_child(e->right(), 2, out);
            break;
        case NodeKind::Mul:
            render_child(e->left(), 2, out);
            out += '*';
            render_child(e->right(), 3, out);
            break;
        case NodeKind::Div:
            render_child(e->left(), 2, out);
            out += '/';
            render_child(e->right(), 3, out);
            break;
        case NodeKind::Neg:
            out += '-';
            render_child(e->child(), 5, out);
            break;
        case NodeKind::Pow:
            // A printed base must not swallow the '^': "-u^2" parses as
            // (-u)^2 under this grammar, but "u^2^3" is right-associative,
            // so a Pow base always gets parentheses.
            if (precedence(e->left()) < 3 || e->left()->kind() == NodeKind::Pow) {
                out += '(';
                render(e->left(), out);
                out += ')';
            } else {
                render(e->left(), out);
            }
            out += '^';
            render_child(e->right(), 3, out);
            break;
        case NodeKind::Call:
            out += func_name(e->func());
            out += '(';
            render(e->child(), out);
            out += ')';
            break;
    }
}

}  // namespace

std::string to_string(const Expr& e) {
    std::string out;
    render(e, out);
    return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.get() == b.get()) return true;
    if (a->kind() != b->kind()) return false;
    switch (a->kind()) {
        case NodeKind::Constant: return a->value() == b->value();
        case NodeKind::Variable:
        case NodeKind::Parameter: return a->name() == b->name();
        case NodeKind::Neg: return structurally_equal(a->child(), b->child());
        case NodeKind::Call:
            return a->func() == b->func() && structurally_equal(a->child(), b->child());
        default:
            return structurally_equal(a->left(), b->left()) &&
                   structurally_equal(a->right(), b->right());
    }
}

// ---------------------------------------------------------------------------
// Parsing

ParseError::ParseError(std::size_t off, std::string expected_what)
    : std::runtime_error("syntax error at offset " + std::to_string(off) + ": expected " +
                         expected_what),
      offset(off),
      expected(std::move(expected_what)) {}

namespace {

struct Token {
    enum Type { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End } type;
    std::size_t offset{0};
    double number{0};
    std::string ident;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) pos_++;
        if (pos_ >= text_.size() || text_[pos_] == '#') {
            tok_ = {Token::End, pos_, 0, {}};
            return;
        }
        const std::size_t start = pos_;
        const char c = text_[pos_];
        switch (c) {
            case '+': pos_++; tok_ = {Token::Plus, start, 0, {}}; return;
            case '-': pos_++; tok_ = {Token::Minus, start, 0, {}}; return;
            case '*': pos_++; tok_ = {Token::Star, start, 0, {}}; return;
            case '/': pos_++; tok_ = {Token::Slash, start, 0, {}}; return;
            case '^': pos_++; tok_ = {Token::Caret, start, 0, {}}; return;
            case '(': pos_++; tok_ = {Token::LParen, start, 0, {}}; return;
            case ')': pos_++; tok_ = {Token::RParen, start, 0, {}}; return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            lex_number(start);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_;
            while (end < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
                end++;
            tok_ = {Token::Ident, start, 0, std::string(text_.substr(start, end - start))};
            pos_ = end;
            return;
        }
        throw ParseError(start, "a number, name, operator or parenthesis");
    }

    void lex_number(std::size_t start) {
        std::size_t end = pos_;
        while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) end++;
        if (end < text_.size() && text_[end] == '.') {
            end++;
            while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) end++;
        }
        // Exponent part only when digits follow (so "2e" stays number-then-name).
        if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
            std::size_t p = end + 1;
            if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) p++;
            if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
                p++;
                while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) p++;
                end = p;
            }
        }
        double value = 0;
        auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + end, value);
        if (ec != std::errc() || ptr != text_.data() + end)
            throw ParseError(start, "a valid numeric literal");
        tok_ = {Token::Number, start, value, {}};
        pos_ = end;
    }

    std::string_view text_;
    std::size_t pos_{0};
    Token tok_;
};

const std::map<std::string, Func, std::less<>>& function_table() {
    static const std::map<std::string, Func, std::less<>> t = {
        {"sin", Func::Sin},   {"cos", Func::Cos},   {"tan", Func::Tan},
        {"sinh", Func::Sinh}, {"cosh", Func::Cosh}, {"tanh", Func::Tanh},
        {"exp", Func::Exp},   {"log", Func::Log},   {"sqrt", Func::Sqrt},
        {"abs", Func::Abs},
    };
    return t;
}

class Parser {
public:
    Parser(std::string_view text, std::string_view variable) : lex_(text), variable_(variable) {}

    Expr run() {
        Expr e = parse_expr();
        if (lex_.peek().type != Token::End)
            throw ParseError(lex_.peek().offset, "end of expression or an operator");
        return e;
    }

private:
    Expr parse_expr() {
        Expr e = parse_term();
        while (lex_.peek().type == Token::Plus || lex_.peek().type == Token::Minus) {
            Token op = lex_.take();
            Expr rhs = parse_term();
            e = op.type == Token::Plus ? ExprNode::add(std::move(e), std::move(rhs))
                                       : ExprNode::sub(std::move(e), std::move(rhs));
        }
        return e;
    }

    Expr parse_term() {
        Expr e = parse_factor();
        while (lex_.peek().type == Token::Star || lex_.peek().type == Token::Slash) {
            Token op = lex_.take();
            Expr rhs = parse_factor();
            e = op.type == Token::Star ? ExprNode::mul(std::move(e), std::move(rhs))
                                       : ExprNode::div(std::move(e), std::move(rhs));
        }
        return e;
    }

    Expr parse_factor() {
        Expr base = parse_unary();
        if (lex_.peek().type == Token::Caret) {
            lex_.take();
            Expr exponent = parse_factor();
            return ExprNode::pow(std::move(base), std::move(exponent));
        }
        return base;
    }

    Expr parse_unary() {
        if (lex_.peek().type == Token::Minus) {
            lex_.take();
            return ExprNode::neg(parse_unary());
        }
        return parse_atom();
    }

    Expr parse_atom() {
        Token t = lex_.peek();
        switch (t.type) {
            case Token::Number:
                lex_.take();
                return ExprNode::constant(t.number);
            case Token::LParen: {
                lex_.take();
                Expr e = parse_expr();
                if (lex_.peek().type != Token::RParen)
                    throw ParseError(lex_.peek().offset, "')'");
                lex_.take();
                return e;
            }
            case Token::Ident: {
                lex_.take();
                if (lex_.peek().type == Token::LParen) {
                    auto it = function_table().find(t.ident);
                    if (it == function_table().end())
                        throw ParseError(t.offset, "a known function name (got '" + t.ident + "')");
                    lex_.take();
                    Expr arg = parse_expr();
                    if (lex_.peek().type != Token::RParen)
                        throw ParseError(lex_.peek().offset, "')'");
                    lex_.take();
                    return ExprNode::call(it->second, std::move(arg));
                }
                if (t.ident == variable_) return ExprNode::variable(t.ident);
                if (t.ident == "u" || t.ident == "v")
                    throw ParseError(t.offset, "the declared variable '" + std::string(variable_) +
                                                   "' (got coordinate '" + t.ident + "')");
                return ExprNode::parameter(t.ident);
            }
            default:
                throw ParseError(t.offset, "a number, name, '(' or '-'");
        }
    }

    Lexer lex_;
    std::string_view variable_;
};

}  // namespace

Expr parse(std::string_view text, std::string_view variable) {
    return Parser(text, variable).run();
}

// ---------------------------------------------------------------------------
// Differentiation

Expr differentiate(const Expr& e, std::string_view variable) {
    switch (e->kind()) {
        case NodeKind::Constant:
        case NodeKind::Parameter:
            return ExprNode::constant(0);
        case NodeKind::Variable:
            return ExprNode::constant(e->name() == variable ? 1 : 0);
        case NodeKind::Add:
            return fold_add(differentiate(e->left(), variable), differentiate(e->right(), variable));
        case NodeKind::Sub:
            return fold_sub(differentiate(e->left(), variable), differentiate(e->right(), variable));
        case NodeKind::Mul: {
            Expr da = differentiate(e->left(), variable);
            Expr db = differentiate(e->right(), variable);
            return fold_add(fold_mul(std::move(da), e->right()), fold_mul(e->left(), std::move(db)));
        }
        case NodeKind::Div: {
            Expr da = differentiate(e->left(), variable);
            Expr db = differentiate(e->right(), variable);
            Expr num = fold_sub(fold_mul(std::move(da), e->right()), fold_mul(e->left(), std::move(db)));
            return fold_div(std::move(num), fold_pow(e->right(), ExprNode::constant(2)));
        }
        case NodeKind::Neg:
            return fold_neg(differentiate(e->child(), variable));
        case NodeKind::Pow: {
            double c;
            Expr db = differentiate(e->left(), variable);
            if (is_constant(e->right(), &c)) {
                // power rule: d b^c = c * b^(c-1) * b'
                return fold_mul(ExprNode::constant(c),
                                fold_mul(fold_pow(e->left(), ExprNode::constant(c - 1)),
                                         std::move(db)));
            }
            // general case via b^x = exp(x log b):
            // d = b^x * (x' log b + x b'/b)
            Expr dx = differentiate(e->right(), variable);
            Expr inner = fold_add(fold_mul(std::move(dx), fold_call(Func::Log, e->left())),
                                  fold_mul(e->right(), fold_div(std::move(db), e->left())));
            return fold_mul(fold_pow(e->left(), e->right()), std::move(inner));
        }
        case NodeKind::Call: {
            Expr da = differentiate(e->child(), variable);
            const Expr& a = e->child();
            switch (e->func()) {
                case Func::Sin:
                    return fold_mul(fold_call(Func::Cos, a), std::move(da));
                case Func::Cos:
                    return fold_neg(fold_mul(fold_call(Func::Sin, a), std::move(da)));
                case Func::Tan:
                    return fold_div(std::move(da),
                                    fold_pow(fold_call(Func::Cos, a), ExprNode::constant(2)));
                case Func::Sinh:
                    return fold_mul(fold_call(Func::Cosh, a), std::move(da));
                case Func::Cosh:
                    return fold_mul(fold_call(Func::Sinh, a), std::move(da));
                case Func::Tanh:
                    return fold_div(std::move(da),
                                    fold_pow(fold_call(Func::Cosh, a), ExprNode::constant(2)));
                case Func::Exp:
                    return fold_mul(fold_call(Func::Exp, a), std::move(da));
                case Func::Log:
                    return fold_div(std::move(da), a);
                case Func::Sqrt:
                    return fold_div(std::move(da),
                                    fold_mul(ExprNode::constant(2), fold_call(Func::Sqrt, a)));
                case Func::Abs:
                    // d|a| = a a' / |a|; undefined at a = 0, reported at eval time.
                    return fold_div(fold_mul(a, std::move(da)), fold_call(Func::Abs, a));
            }
            break;
        }
    }
    throw std::logic_error("differentiate: unhandled node kind");
}

// ---------------------------------------------------------------------------
// Evaluation

EvalError::EvalError(std::string message, std::string node_text)
    : std::runtime_error(message + " in '" + node_text + "'"), node(std::move(node_text)) {}

namespace {

double eval_node(const Expr& e, const Bindings& b) {
    double r = 0;
    switch (e->kind()) {
        case NodeKind::Constant:
            r = e->value();
            break;
        case NodeKind::Variable:
        case NodeKind::Parameter: {
            auto it = b.find(e->name());
            if (it == b.end()) throw EvalError("unbound name '" + e->name() + "'", to_string(e));
            r = it->second;
            break;
        }
        case NodeKind::Add:
            r = eval_node(e->left(), b) + eval_node(e->right(), b);
            break;
        case NodeKind::Sub:
            r = eval_node(e->left(), b) - eval_node(e->right(), b);
            break;
        case NodeKind::Mul:
            r = eval_node(e->left(), b) * eval_node(e->right(), b);
            break;
        case NodeKind::Div: {
            double num = eval_node(e->left(), b);
            double den = eval_node(e->right(), b);
            if (den == 0) throw EvalError("division by zero", to_string(e));
            r = num / den;
            break;
        }
        case NodeKind::Neg:
            r = -eval_node(e->child(), b);
            break;
        case NodeKind::Pow: {
            double base = eval_node(e->left(), b);
            double ex = eval_node(e->right(), b);
            if (base < 0 && !is_integer_value(ex))
                throw EvalError("pow of negative base with non-integer exponent", to_string(e));
            if (base == 0 && ex <= 0 && !(ex == 0))
                throw EvalError("pow of zero base with non-positive exponent", to_string(e));
            r = std::pow(base, ex);
            break;
        }
        case NodeKind::Call: {
            double a = eval_node(e->child(), b);
            switch (e->func()) {
                case Func::Sin: r = std::sin(a); break;
                case Func::Cos: r = std::cos(a); break;
                case Func::Tan: r = std::tan(a); break;
                case Func::Sinh: r = std::sinh(a); break;
                case Func::Cosh: r = std::cosh(a); break;
                case Func::Tanh: r = std::tanh(a); break;
                case Func::Exp: r = std::exp(a); break;
                case Func::Log:
                    if (a <= 0) throw EvalError("log of non-positive value", to_string(e));
                    r = std::log(a);
                    break;
                case Func::Sqrt:
                    if (a < 0) throw EvalError("sqrt of negative value", to_string(e));
                    r = std::sqrt(a);
                    break;
                case Func::Abs: r = std::abs(a); break;
            }
            break;
        }
    }
    if (!std::isfinite(r)) throw EvalError("non-finite result", to_string(e));
    return r;
}

}  // namespace

double eval(const Expr& e, const Bindings& bindings) { return eval_node(e, bindings); }

// ---------------------------------------------------------------------------
// Jets

namespace {

struct JetDerivs {
    Expr d1, d2, d3;
};

struct JetCache {
    std::shared_mutex mu;
    // Keyed by node identity + variable name; `pins` keeps every cached root
    // alive so node addresses are never recycled under a live key.
    std::map<std::pair<const ExprNode*, std::string>, JetDerivs> entries;
    std::vector<Expr> pins;
};

JetCache& jet_cache() {
    static JetCache c;
    return c;
}

}  // namespace

Jet3 eval_jet(const Expr& e, std::string_view variable, double x, const Bindings& params) {
    JetDerivs d;
    auto key = std::make_pair(e.get(), std::string(variable));
    auto& cache = jet_cache();
    {
        std::shared_lock lock(cache.mu);
        auto it = cache.entries.find(key);
        if (it != cache.entries.end()) d = it->second;
    }
    if (!d.d1) {
        JetDerivs fresh;
        fresh.d1 = differentiate(e, variable);
        fresh.d2 = differentiate(fresh.d1, variable);
        fresh.d3 = differentiate(fresh.d2, variable);
        std::unique_lock lock(cache.mu);
        auto [it, inserted] = cache.entries.emplace(key, fresh);
        if (inserted) cache.pins.push_back(e);
        d = it->second;
    }
    Bindings b = params;
    b[std::string(variable)] = x;
    Jet3 jet;
    jet.value = eval(e, b);
    jet.d1 = eval(d.d1, b);
    jet.d2 = eval(d.d2, b);
    jet.d3 = eval(d.d3, b);
    return jet;
}

}  // namespace transurf
