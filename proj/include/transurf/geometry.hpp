#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>

#include "transurf/expr.hpp"

namespace transurf {

// |α'β'| at or below this bound marks the second fundamental form degenerate.
inline constexpr double kDegeneracyTol = 1e-12;

// Open rectangle (u_min, u_max) x (v_min, v_max); boundary points are
// out of domain because catalog surfaces put singularities there.
struct Rect {
    double u_min{-1}, u_max{1};
    double v_min{-1}, v_max{1};

    bool contains(double u, double v) const {
        return u > u_min && u < u_max && v > v_min && v < v_max;
    }
};

struct OutOfDomainError : std::runtime_error {
    OutOfDomainError(double u, double v);
    double u, v;
};

// Partial-derivative trees of the second-form coefficients
//   e(u,v) = α'/√Δ,   g(u,v) = β'/√Δ,   Δ = 1 + α² + β²
// (the mixed coefficient f is identically zero for translation surfaces).
// Built symbolically, so the determinant formulation of K_II differentiates
// exactly instead of through finite differences.
struct SecondFormTrees {
    Expr e, e_u, e_v, e_vv;
    Expr g, g_u, g_v, g_uu;
};

// A translation surface r(u,v) = (u, v, f(u) + g(v)).  f is an expression in
// u, g in v; both may reference bound parameters.  Immutable after
// construction; derivative trees are cached inside and extended lazily under
// a lock, so a SurfaceDef may be shared across threads.
class SurfaceDef {
public:
    SurfaceDef(Expr f, Expr g, Bindings params, Rect domain);

    const Expr& f() const;
    const Expr& g() const;
    const Bindings& params() const;
    const Rect& domain() const;

    // order 0 is the function itself; higher orders are cached on first use.
    Expr f_derivative(std::size_t order) const;
    Expr g_derivative(std::size_t order) const;

    double eval_f(double u) const;
    double eval_g(double v) const;

    // Jet of α = f' at u: value = f'(u), d1 = f''(u), d2 = f'''(u), d3 = f''''(u).
    Jet3 alpha_jet(double u) const;
    Jet3 beta_jet(double v) const;

    const SecondFormTrees& second_form_trees() const;

    Bindings bind(double u, double v) const;  // params plus both coordinates

private:
    struct State;
    std::shared_ptr<State> state_;
};

// Parses f_text in u and g_text in v and validates that every referenced
// parameter is bound.
SurfaceDef make_surface(const std::string& f_text, const std::string& g_text,
                        const Bindings& params, const Rect& domain);

// First and second fundamental forms at a point:
//   I:  E = 1 + α²,  F = αβ,  G = 1 + β²
//   II: e = α'/√Δ,   f = 0,   g = β'/√Δ,   Δ = 1 + α² + β² = EG - F²
struct FormBundle {
    double u{0}, v{0};
    Jet3 alpha, beta;  // jets of f' and g' (see SurfaceDef::alpha_jet)
    double E{0}, F{0}, G{0};
    double e{0}, f{0}, g{0};
    double delta{0};
    bool nondegenerate{false};  // |α'β'| > kDegeneracyTol
};

FormBundle forms_at(const SurfaceDef& s, double u, double v);

struct FileFormatError : std::runtime_error {
    FileFormatError(int line, const std::string& message);
    int line;
};

// Surface definition file: one `key = value` per line, '#' comments.
// Keys: f, g (expressions), param.NAME (number), u_min/u_max/v_min/v_max
// (numbers, default -1/1), nu/nv (grid resolution, integers >= 2, default 50).
// Unknown keys are errors.
struct SurfaceFile {
    SurfaceDef surface;
    int nu{50}, nv{50};
};

SurfaceFile load_surface_file(std::istream& in);
SurfaceFile load_surface_file(const std::filesystem::path& path);

}  // namespace transurf
