#include "transurf/catalog.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "transurf/curvature.hpp"

namespace transurf {

namespace {

std::optional<std::string> nonzero(const Bindings& p, const char* name) {
    if (p.at(name) == 0.0)
        return std::string("parameter ") + name + " must be nonzero";
    return std::nullopt;
}

std::optional<std::string> positive(const Bindings& p,
                                    std::initializer_list<const char*> names) {
    for (const char* n : names)
        if (!(p.at(n) > 0.0))
            return std::string("parameter ") + n + " must be positive";
    return std::nullopt;
}

// Coordinate windows with a 0.1 margin from the nearest singularity of the
// corresponding factor.  k > 0 is enforced by the entry validators.
std::pair<double, double> cos_window(double k) {
    const double h = std::numbers::pi / (2.0 * k) - 0.1;
    return {-h, h};
}
std::pair<double, double> sinh_window(double k) {
    return {0.1 / k, 3.0 / k};  // log(sinh) needs a positive argument
}
std::pair<double, double> cosh_window(double k) {
    return {-2.0 / k, 2.0 / k};  // no singularity; bounded for conditioning
}

Rect rect(std::pair<double, double> u, std::pair<double, double> v) {
    return Rect{u.first, u.second, v.first, v.second};
}

CatalogEntry entry(std::string name, std::string description,
                   std::string f_text, std::string g_text, Bindings defaults,
                   std::string constraints,
                   std::function<std::optional<std::string>(const Bindings&)> validate,
                   std::function<Rect(const Bindings&)> domain,
                   Relation relation, double tolerance) {
    CatalogEntry e;
    e.name = std::move(name);
    e.description = std::move(description);
    e.default_params = std::move(defaults);
    e.param_constraints = std::move(constraints);
    e.validate = std::move(validate);
    e.valid_domain = domain;
    e.builder = [f_text = std::move(f_text), g_text = std::move(g_text),
                 domain = std::move(domain)](const Bindings& p) {
        return make_surface(f_text, g_text, p, domain(p));
    };
    e.relation = relation;
    e.tolerance = tolerance;
    return e;
}

// The nine surfaces satisfying K_II = 2H with default parameters.  Each leg
// is one of -log sinh, -log cosh, +log cos on the u side and the mirrored
// set -log cos, +log sinh, +log cosh on the v side, weighted by
// (nu/2)/p^2 or (nu/2)/q^2.
struct LambdaTwoSpec {
    const char* name;
    const char* blurb;
    const char* f_text;
    const char* g_text;
    char u_window;  // 's' sinh, 'h' cosh, 'c' cos
    char v_window;
};

constexpr LambdaTwoSpec kLambdaTwo[] = {
    {"surface_28", "z = -(nu/2)(log(sinh(p u))/p^2 + log(cos(q v))/q^2)",
     "-(nu/2)*(1/p^2)*log(sinh(p*u))", "-(nu/2)*(1/q^2)*log(cos(q*v))", 's', 'c'},
    {"surface_29", "z = -(nu/2)(log(cosh(p u))/p^2 + log(cos(q v))/q^2)",
     "-(nu/2)*(1/p^2)*log(cosh(p*u))", "-(nu/2)*(1/q^2)*log(cos(q*v))", 'h', 'c'},
    {"surface_30", "z = (nu/2)(log(cos(p u))/p^2 - log(cos(q v))/q^2)",
     "(nu/2)*(1/p^2)*log(cos(p*u))", "-(nu/2)*(1/q^2)*log(cos(q*v))", 'c', 'c'},
    {"surface_31", "z = (nu/2)(log(sinh(q v))/q^2 - log(sinh(p u))/p^2)",
     "-(nu/2)*(1/p^2)*log(sinh(p*u))", "(nu/2)*(1/q^2)*log(sinh(q*v))", 's', 's'},
    {"surface_32", "z = (nu/2)(log(cosh(q v))/q^2 - log(cosh(p u))/p^2)",
     "-(nu/2)*(1/p^2)*log(cosh(p*u))", "(nu/2)*(1/q^2)*log(cosh(q*v))", 'h', 'h'},
    {"surface_33", "z = (nu/2)(log(sinh(q v))/q^2 - log(cosh(p u))/p^2)",
     "-(nu/2)*(1/p^2)*log(cosh(p*u))", "(nu/2)*(1/q^2)*log(sinh(q*v))", 'h', 's'},
    {"surface_34", "z = (nu/2)(log(cosh(q v))/q^2 - log(sinh(p u))/p^2)",
     "-(nu/2)*(1/p^2)*log(sinh(p*u))", "(nu/2)*(1/q^2)*log(cosh(q*v))", 's', 'h'},
    {"surface_35", "z = (nu/2)(log(cos(p u))/p^2 + log(sinh(q v))/q^2)",
     "(nu/2)*(1/p^2)*log(cos(p*u))", "(nu/2)*(1/q^2)*log(sinh(q*v))", 'c', 's'},
    {"surface_36", "z = (nu/2)(log(cos(p u))/p^2 + log(cosh(q v))/q^2)",
     "(nu/2)*(1/p^2)*log(cos(p*u))", "(nu/2)*(1/q^2)*log(cosh(q*v))", 'c', 'h'},
};

std::pair<double, double> window(char kind, double k) {
    switch (kind) {
        case 's': return sinh_window(k);
        case 'h': return cosh_window(k);
        default: return cos_window(k);
    }
}

std::vector<CatalogEntry> build_entries() {
    std::vector<CatalogEntry> out;

    const Relation minimal{Relation::Kind::Weingarten, 1.0, true};
    const Relation lambda_two{Relation::Kind::Weingarten, 2.0, false};
    const Relation kii_zero{Relation::Kind::KiiZero, 0.0, false};
    const Relation degenerate{Relation::Kind::DegenerateII, 0.0, false};

    out.push_back(entry(
        "scherk_16",
        "z = (2/c)(log(cos(c u/2)) - log(cos(c v/2))); K_II and H both vanish",
        "(2/c)*log(cos(c*u/2))", "-(2/c)*log(cos(c*v/2))", {{"c", 1.0}},
        "c != 0", [](const Bindings& p) { return nonzero(p, "c"); },
        [](const Bindings& p) {
            const double L = 2.9 / std::abs(p.at("c"));
            return Rect{-L, L, -L, L};
        },
        minimal, 1e-8));

    out.push_back(entry(
        "scherk_25",
        "z = (1/p)(log(cos(p v + r)) - log(cos(p u + q))); phase-shifted, "
        "K_II and H both vanish",
        "-(1/p)*log(cos(p*u + q))", "(1/p)*log(cos(p*v + r))",
        {{"p", 1.0}, {"q", 0.0}, {"r", 0.0}}, "p > 0",
        [](const Bindings& p) { return positive(p, {"p"}); },
        [](const Bindings& b) {
            const double p = b.at("p"), q = b.at("q"), r = b.at("r");
            const double half = std::numbers::pi / 2;
            return Rect{(-half - q) / p + 0.1, (half - q) / p - 0.1,
                        (-half - r) / p + 0.1, (half - r) / p - 0.1};
        },
        minimal, 1e-8));

    for (const LambdaTwoSpec& s : kLambdaTwo) {
        out.push_back(entry(
            s.name, s.blurb, s.f_text, s.g_text,
            {{"nu", 2.0}, {"p", 1.0}, {"q", 1.0}}, "nu > 0, p > 0, q > 0",
            [](const Bindings& p) { return positive(p, {"nu", "p", "q"}); },
            [uw = s.u_window, vw = s.v_window](const Bindings& p) {
                return rect(window(uw, p.at("p")), window(vw, p.at("q")));
            },
            lambda_two, 1e-8));
    }

    out.push_back(entry(
        "hyperbolic_paraboloid_37", "z = a(u - u0)^2 - a(v - v0)^2",
        "a*(u - u0)^2", "-a*(v - v0)^2",
        {{"a", 0.5}, {"u0", 0.0}, {"v0", 0.0}}, "a != 0",
        [](const Bindings& p) { return nonzero(p, "a"); },
        [](const Bindings& p) {
            const double u0 = p.at("u0"), v0 = p.at("v0");
            return Rect{u0 - 2, u0 + 2, v0 - 2, v0 + 2};
        },
        lambda_two, 1e-10));

    out.push_back(entry(
        "blair_9",
        "z = c(u^(4/3) - v^(4/3)); fractional powers with K_II = 0",
        "c*u^(4/3)", "-c*v^(4/3)", {{"c", 1.0}}, "c != 0",
        [](const Bindings& p) { return nonzero(p, "c"); },
        [](const Bindings&) { return Rect{0.2, 3.0, 0.2, 3.0}; },
        kii_zero, 1e-7));

    out.push_back(entry(
        "cylinder_6", "z = a u + v^3; flat in u, second form degenerate",
        "a*u", "v^3", {{"a", 0.0}}, "(none)",
        [](const Bindings&) { return std::nullopt; },
        [](const Bindings&) { return Rect{-1, 1, -1, 1}; },
        degenerate, kDegeneracyTol));

    out.push_back(entry(
        "cylinder_7", "z = u^3 + a v; flat in v, second form degenerate",
        "u^3", "a*v", {{"a", 0.0}}, "(none)",
        [](const Bindings&) { return std::nullopt; },
        [](const Bindings&) { return Rect{-1, 1, -1, 1}; },
        degenerate, kDegeneracyTol));

    return out;
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
    static const std::vector<CatalogEntry> entries = build_entries();
    return entries;
}

const CatalogEntry* find_entry(std::string_view name) {
    for (const CatalogEntry& e : catalog_entries())
        if (e.name == name) return &e;
    return nullptr;
}

std::vector<double> grid_centers(double lo, double hi, int n) {
    if (n < 1) throw std::invalid_argument("grid size must be at least 1");
    std::vector<double> xs(static_cast<std::size_t>(n));
    const double step = (hi - lo) / n;
    for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = lo + (i + 0.5) * step;
    return xs;
}

VerifyReport verify_entry(const CatalogEntry& entry, const Bindings& overrides,
                          int grid_n) {
    Bindings params = entry.default_params;
    for (const auto& [key, value] : overrides) {
        const auto it = params.find(key);
        if (it == params.end())
            throw std::invalid_argument("unknown parameter '" + key +
                                        "' for entry '" + entry.name + "'");
        it->second = value;
    }
    if (entry.validate)
        if (const auto err = entry.validate(params))
            throw std::invalid_argument(entry.name + ": " + *err);

    const SurfaceDef surface = entry.builder(params);
    const Rect dom = surface.domain();
    const auto us = grid_centers(dom.u_min, dom.u_max, grid_n);
    const auto vs = grid_centers(dom.v_min, dom.v_max, grid_n);

    VerifyReport rep;
    rep.name = entry.name;
    rep.params = params;
    rep.relation = entry.relation;
    rep.grid_n = grid_n;
    rep.n_points = static_cast<long>(grid_n) * grid_n;
    rep.tolerance = entry.tolerance;
    rep.worst_u = us.front();
    rep.worst_v = vs.front();

    double worst = -1.0;
    for (const double u : us) {
        for (const double v : vs) {
            double res;
            if (entry.relation.kind == Relation::Kind::DegenerateII) {
                // the claim is falsified by any usable second form
                res = std::abs(surface.alpha_jet(u).d1 * surface.beta_jet(v).d1);
            } else {
                const CurvatureSample s = curvature_sample(surface, u, v);
                if (!s.K_II) {
                    res = std::numeric_limits<double>::infinity();
                } else if (entry.relation.kind == Relation::Kind::KiiZero) {
                    res = std::abs(*s.K_II);
                } else if (entry.relation.both_vanish) {
                    res = std::max(std::abs(*s.K_II), std::abs(s.H));
                } else {
                    res = std::abs(*s.K_II - entry.relation.lambda * s.H);
                }
            }
            if (res > worst) {
                worst = res;
                rep.worst_u = u;
                rep.worst_v = v;
            }
        }
    }

    rep.max_abs_residual = worst;
    rep.pass = entry.relation.kind == Relation::Kind::DegenerateII
                   ? worst <= kDegeneracyTol
                   : worst < entry.tolerance;
    return rep;
}

const std::vector<OdeFamily>& ode_families() {
    static const std::vector<OdeFamily> families = [] {
        std::vector<OdeFamily> out;
        const auto add = [&out](std::string name, Bindings constants,
                                std::function<double(double, double, double)> residual,
                                const char* solution, double lo, double hi) {
            OdeFamily f;
            f.name = std::move(name);
            f.constants = std::move(constants);
            f.residual = std::move(residual);
            f.solution = parse(solution, "u");
            f.x_lo = lo;
            f.x_hi = hi;
            out.push_back(std::move(f));
        };

        // slope equations of the minimal family: 2y' = -c y^2 + 2 m (u side)
        // and 2y' = c y^2 + 2 m (v side); the log term carries weight 0 here
        {
            const double c = 1.0, m1 = -0.5;
            add("eq13_alpha", {{"c", c}, {"d1", 0.0}, {"m1", m1}},
                [c, m1](double, double y, double yp) {
                    return 2 * yp + c * y * y - 2 * m1;
                },
                "-tan(u/2)", -2.9, 2.9);
        }
        {
            const double c = 1.0, m2 = 0.5;
            add("eq13_beta", {{"c", c}, {"d2", 0.0}, {"m2", m2}},
                [c, m2](double, double y, double yp) {
                    return 2 * yp - c * y * y - 2 * m2;
                },
                "tan(u/2)", -2.9, 2.9);
        }

        // Riccati equations of the lambda = 2 family: y' = tau y^2 -/+ nu/2
        {
            const double tau = 1.0, nu = 2.0;
            const auto res = [tau, nu](double, double y, double yp) {
                return yp - tau * y * y + nu / 2;
            };
            add("eq27_coth", {{"tau1", tau}, {"nu", nu}}, res,
                "-cosh(u)/sinh(u)", 0.2, 5.0);
            add("eq27_tanh", {{"tau1", tau}, {"nu", nu}}, res, "-tanh(u)",
                -3.0, 3.0);
            add("eq27_tan", {{"tau2", tau}, {"nu", nu}},
                [tau, nu](double, double y, double yp) {
                    return yp - tau * y * y - nu / 2;
                },
                "tan(u)", -1.4, 1.4);
        }

        // reduced slope equation of the constant-angle family: y' = p(y^2 + 1)
        {
            const double p = 1.0;
            add("eq21_reduced", {{"p", p}},
                [p](double, double y, double yp) {
                    return yp - p * (y * y + 1);
                },
                "tan(u)", -1.4, 1.4);
        }

        return out;
    }();
    return families;
}

double ode_residual(const OdeFamily& family, const std::vector<double>& xs) {
    double worst = 0.0;
    for (const double x : xs) {
        if (!(x > family.x_lo && x < family.x_hi))
            throw std::domain_error("sample " + std::to_string(x) +
                                    " outside solution interval of " +
                                    family.name);
        const Jet3 j = eval_jet(family.solution, "u", x, {});
        worst = std::max(worst, std::abs(family.residual(x, j.value, j.d1)));
    }
    return worst;
}

std::vector<double> ode_samples(const OdeFamily& family, int n) {
    return grid_centers(family.x_lo, family.x_hi, n);
}

}  // namespace transurf
