#include "transurf/geometry.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <vector>

namespace transurf {

namespace {

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void collect_parameters(const Expr& e, std::vector<std::string>& out) {
    if (!e) return;
    if (e->kind() == NodeKind::Parameter) out.push_back(e->name());
    collect_parameters(e->left(), out);
    collect_parameters(e->right(), out);
    collect_parameters(e->child(), out);
}

}  // namespace

OutOfDomainError::OutOfDomainError(double u_, double v_)
    : std::runtime_error("point (u, v) = (" + fmt17(u_) + ", " + fmt17(v_) +
                         ") is outside the surface domain"),
      u(u_),
      v(v_) {}

FileFormatError::FileFormatError(int line_, const std::string& message)
    : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ": " + message
                                   : message),
      line(line_) {}

struct SurfaceDef::State {
    Expr f, g;
    Bindings params;
    Rect domain;

    mutable std::mutex mu;
    mutable std::vector<Expr> f_chain, g_chain;  // chain[k] is the k-th derivative
    mutable std::optional<SecondFormTrees> second;

    Expr derivative(const Expr& base, std::vector<Expr>& chain, const char* var,
                    std::size_t order) const {
        std::lock_guard<std::mutex> lock(mu);
        if (chain.empty()) chain.push_back(base);
        while (chain.size() <= order)
            chain.push_back(differentiate(chain.back(), var));
        return chain[order];
    }
};

SurfaceDef::SurfaceDef(Expr f, Expr g, Bindings params, Rect domain)
    : state_(std::make_shared<State>()) {
    if (!f || !g) throw std::invalid_argument("surface requires both f and g");
    if (!(domain.u_min < domain.u_max) || !(domain.v_min < domain.v_max))
        throw std::invalid_argument("surface domain is empty");
    std::vector<std::string> names;
    collect_parameters(f, names);
    collect_parameters(g, names);
    for (const auto& n : names)
        if (!params.count(n))
            throw std::invalid_argument("unbound parameter '" + n + "'");
    state_->f = std::move(f);
    state_->g = std::move(g);
    state_->params = std::move(params);
    state_->domain = domain;
}

const Expr& SurfaceDef::f() const { return state_->f; }
const Expr& SurfaceDef::g() const { return state_->g; }
const Bindings& SurfaceDef::params() const { return state_->params; }
const Rect& SurfaceDef::domain() const { return state_->domain; }

Expr SurfaceDef::f_derivative(std::size_t order) const {
    return state_->derivative(state_->f, state_->f_chain, "u", order);
}

Expr SurfaceDef::g_derivative(std::size_t order) const {
    return state_->derivative(state_->g, state_->g_chain, "v", order);
}

Bindings SurfaceDef::bind(double u, double v) const {
    Bindings b = state_->params;
    b["u"] = u;
    b["v"] = v;
    return b;
}

double SurfaceDef::eval_f(double u) const {
    Bindings b = state_->params;
    b["u"] = u;
    return eval(state_->f, b);
}

double SurfaceDef::eval_g(double v) const {
    Bindings b = state_->params;
    b["v"] = v;
    return eval(state_->g, b);
}

Jet3 SurfaceDef::alpha_jet(double u) const {
    return eval_jet(f_derivative(1), "u", u, state_->params);
}

Jet3 SurfaceDef::beta_jet(double v) const {
    return eval_jet(g_derivative(1), "v", v, state_->params);
}

const SecondFormTrees& SurfaceDef::second_form_trees() const {
    {
        std::lock_guard<std::mutex> lock(state_->mu);
        if (state_->second) return *state_->second;
    }
    // Build outside the lock; differentiate() is pure, and a duplicate build
    // on a race just wastes a little work.
    Expr alpha = differentiate(state_->f, "u");
    Expr beta = differentiate(state_->g, "v");
    Expr alpha_p = differentiate(alpha, "u");
    Expr beta_p = differentiate(beta, "v");
    Expr delta = fold_add(ExprNode::constant(1),
                          fold_add(fold_mul(alpha, alpha), fold_mul(beta, beta)));
    Expr root = fold_call(Func::Sqrt, delta);

    SecondFormTrees t;
    t.e = fold_div(alpha_p, root);
    t.e_u = differentiate(t.e, "u");
    t.e_v = differentiate(t.e, "v");
    t.e_vv = differentiate(t.e_v, "v");
    t.g = fold_div(beta_p, root);
    t.g_u = differentiate(t.g, "u");
    t.g_v = differentiate(t.g, "v");
    t.g_uu = differentiate(t.g_u, "u");

    std::lock_guard<std::mutex> lock(state_->mu);
    if (!state_->second) state_->second = std::move(t);
    return *state_->second;
}

SurfaceDef make_surface(const std::string& f_text, const std::string& g_text,
                        const Bindings& params, const Rect& domain) {
    return SurfaceDef(parse(f_text, "u"), parse(g_text, "v"), params, domain);
}

FormBundle forms_at(const SurfaceDef& s, double u, double v) {
    if (!s.domain().contains(u, v)) throw OutOfDomainError(u, v);
    FormBundle b;
    b.u = u;
    b.v = v;
    b.alpha = s.alpha_jet(u);
    b.beta = s.beta_jet(v);
    const double a = b.alpha.value, bb = b.beta.value;
    b.E = 1 + a * a;
    b.F = a * bb;
    b.G = 1 + bb * bb;
    b.delta = 1 + a * a + bb * bb;
    const double root = std::sqrt(b.delta);
    b.e = b.alpha.d1 / root;
    b.f = 0;
    b.g = b.beta.d1 / root;
    b.nondegenerate = std::abs(b.alpha.d1 * b.beta.d1) > kDegeneracyTol;
    return b;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_number(const std::string& text, int line) {
    const char* begin = text.c_str();
    char* end = nullptr;
    double x = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(x))
        throw FileFormatError(line, "expected a number, got '" + text + "'");
    return x;
}

int parse_grid_count(const std::string& text, int line) {
    double x = parse_number(text, line);
    int n = static_cast<int>(x);
    if (n != x || n < 2)
        throw FileFormatError(line, "grid resolution must be an integer >= 2, got '" +
                                        text + "'");
    return n;
}

bool valid_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

}  // namespace

SurfaceFile load_surface_file(std::istream& in) {
    std::string f_text, g_text;
    bool have_f = false, have_g = false;
    Bindings params;
    Rect domain;
    int nu = 50, nv = 50;
    int f_line = 0, g_line = 0;

    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        if (auto hash = s.find('#'); hash != std::string::npos) s.erase(hash);
        s = trim(s);
        if (s.empty()) continue;
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw FileFormatError(line, "expected 'key = value'");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (key.empty()) throw FileFormatError(line, "missing key before '='");
        if (value.empty()) throw FileFormatError(line, "missing value for '" + key + "'");

        if (key == "f") {
            f_text = value;
            have_f = true;
            f_line = line;
        } else if (key == "g") {
            g_text = value;
            have_g = true;
            g_line = line;
        } else if (key.rfind("param.", 0) == 0) {
            std::string name = key.substr(6);
            if (!valid_identifier(name))
                throw FileFormatError(line, "invalid parameter name '" + name + "'");
            params[name] = parse_number(value, line);
        } else if (key == "u_min") {
            domain.u_min = parse_number(value, line);
        } else if (key == "u_max") {
            domain.u_max = parse_number(value, line);
        } else if (key == "v_min") {
            domain.v_min = parse_number(value, line);
        } else if (key == "v_max") {
            domain.v_max = parse_number(value, line);
        } else if (key == "nu") {
            nu = parse_grid_count(value, line);
        } else if (key == "nv") {
            nv = parse_grid_count(value, line);
        } else {
            throw FileFormatError(line, "unknown key '" + key + "'");
        }
    }
    if (!have_f) throw FileFormatError(0, "missing required key 'f'");
    if (!have_g) throw FileFormatError(0, "missing required key 'g'");

    Expr f, g;
    try {
        f = parse(f_text, "u");
    } catch (const ParseError& pe) {
        throw FileFormatError(f_line, std::string("in f: ") + pe.what());
    }
    try {
        g = parse(g_text, "v");
    } catch (const ParseError& pe) {
        throw FileFormatError(g_line, std::string("in g: ") + pe.what());
    }
    if (!(domain.u_min < domain.u_max) || !(domain.v_min < domain.v_max))
        throw FileFormatError(0, "surface domain is empty");

    try {
        SurfaceFile out{
            SurfaceDef(std::move(f), std::move(g), std::move(params), domain), nu, nv};
        return out;
    } catch (const std::invalid_argument& e) {
        throw FileFormatError(0, e.what());
    }
}

SurfaceFile load_surface_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FileFormatError(0, "cannot open file: " + path.string());
    return load_surface_file(in);
}

}  // namespace transurf
