#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "transurf/geometry.hpp"

namespace transurf {

// The curvature relation a catalog surface is claimed to satisfy on its
// valid domain.
struct Relation {
    enum class Kind {
        Weingarten,     // K_II = lambda * H
        KiiZero,        // K_II = 0
        DegenerateII,   // second form degenerate at every point
    };
    Kind kind = Kind::Weingarten;
    double lambda = 0;
    // K_II and H vanish separately (then K_II = lambda*H holds for every
    // lambda); the verification residual becomes max(|K_II|, |H|).
    bool both_vanish = false;
};

struct CatalogEntry {
    std::string name;
    std::string description;  // the z = f(u) + g(v) shape in plain text
    Bindings default_params;
    std::string param_constraints;  // human-readable constraint summary
    // nullopt when params are admissible, else a message
    std::function<std::optional<std::string>(const Bindings&)> validate;
    // singularity-free rectangle with margin, as a function of the params
    std::function<Rect(const Bindings&)> valid_domain;
    std::function<SurfaceDef(const Bindings&)> builder;
    Relation relation;
    double tolerance = 1e-8;  // verification pass threshold
};

const std::vector<CatalogEntry>& catalog_entries();
const CatalogEntry* find_entry(std::string_view name);  // nullptr when absent

struct VerifyReport {
    std::string name;
    Bindings params;  // defaults merged with overrides
    Relation relation;
    int grid_n = 0;
    long n_points = 0;
    double max_abs_residual = 0;
    double worst_u = 0, worst_v = 0;
    double tolerance = 0;
    bool pass = false;
};

// Evaluates the entry's relation residual on a grid_n x grid_n grid of cell
// centers over the valid domain.  Unknown override names and constraint
// violations throw std::invalid_argument.  Degenerate entries instead verify
// that no grid point has a usable second form (residual = max |α'β'|).
VerifyReport verify_entry(const CatalogEntry& entry, const Bindings& overrides,
                          int grid_n);

// n cell centers of (lo, hi): lo + (i + 1/2)(hi - lo)/n.  Strictly interior,
// so open domains are safe to sample.
std::vector<double> grid_centers(double lo, double hi, int n);

// First-order ODE y' = rhs(x, y) written as a residual r(x, y, y') that the
// stored closed-form solution must annihilate on (x_lo, x_hi).
struct OdeFamily {
    std::string name;
    Bindings constants;
    std::function<double(double x, double y, double yp)> residual;
    Expr solution;  // expression in u
    double x_lo = 0, x_hi = 0;
};

const std::vector<OdeFamily>& ode_families();

// max |residual| over the samples; y and y' come from the symbolic solution.
double ode_residual(const OdeFamily& family, const std::vector<double>& xs);
std::vector<double> ode_samples(const OdeFamily& family, int n);

}  // namespace transurf
