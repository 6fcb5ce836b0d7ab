#include "transurf/catalog.hpp"

#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "transurf/curvature.hpp"

using namespace transurf;

namespace {

const CatalogEntry& entry_or_fail(const char* name) {
    const CatalogEntry* e = find_entry(name);
    REQUIRE(e != nullptr);
    return *e;
}

bool is_degenerate_entry(const CatalogEntry& e) {
    return e.relation.kind == Relation::Kind::DegenerateII;
}

}  // namespace

TEST_CASE("catalog lists the fifteen surfaces in order") {
    const std::vector<std::string> expected = {
        "scherk_16",  "scherk_25",  "surface_28", "surface_29", "surface_30",
        "surface_31", "surface_32", "surface_33", "surface_34", "surface_35",
        "surface_36", "hyperbolic_paraboloid_37", "blair_9", "cylinder_6",
        "cylinder_7"};
    const auto& entries = catalog_entries();
    REQUIRE(entries.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(entries[i].name == expected[i]);
        CHECK_FALSE(entries[i].description.empty());
        CHECK_FALSE(entries[i].param_constraints.empty());
        CHECK_FALSE(entries[i].default_params.empty());
        CHECK(find_entry(expected[i]) == &entries[i]);
    }
    CHECK(find_entry("scherk") == nullptr);
    CHECK(find_entry("") == nullptr);

    int degenerate = 0;
    for (const auto& e : entries) degenerate += is_degenerate_entry(e);
    CHECK(degenerate == 2);
}

TEST_CASE("grid centers are strictly interior cell midpoints") {
    const auto xs = grid_centers(0.0, 1.0, 2);
    REQUIRE(xs.size() == 2);
    CHECK(xs[0] == 0.25);
    CHECK(xs[1] == 0.75);

    const auto mid = grid_centers(-3.0, 5.0, 1);
    REQUIRE(mid.size() == 1);
    CHECK(mid[0] == 1.0);

    const auto many = grid_centers(-2.9, 2.9, 50);
    CHECK(many.front() > -2.9);
    CHECK(many.back() < 2.9);
    CHECK(many.front() == doctest::Approx(-2.842).epsilon(1e-12));

    CHECK_THROWS_AS(grid_centers(0, 1, 0), std::invalid_argument);
}

TEST_CASE("every entry passes verification at its defaults") {
    for (const auto& e : catalog_entries()) {
        CAPTURE(e.name);
        const VerifyReport rep = verify_entry(e, {}, 25);
        CHECK(rep.pass);
        CHECK(rep.name == e.name);
        CHECK(rep.n_points == 625);
        CHECK(rep.params == e.default_params);
        if (is_degenerate_entry(e)) {
            CHECK(rep.max_abs_residual <= kDegeneracyTol);
        } else {
            CHECK(rep.max_abs_residual < e.tolerance);
            CHECK(rep.max_abs_residual >= 0);
        }
        const Rect dom = e.valid_domain(rep.params);
        CHECK(dom.contains(rep.worst_u, rep.worst_v));
    }
}

TEST_CASE("reported worst point reproduces the maximum residual") {
    const CatalogEntry& e = entry_or_fail("surface_29");
    const VerifyReport rep = verify_entry(e, {}, 17);
    const SurfaceDef s = e.builder(rep.params);
    const double there =
        std::abs(weingarten_residual(s, e.relation.lambda, rep.worst_u, rep.worst_v));
    CHECK(there == rep.max_abs_residual);
}

TEST_CASE("scherk surfaces satisfy every proportionality constant at once") {
    // K_II = H = 0, so K_II = lambda*H holds for all lambda simultaneously
    for (const char* name : {"scherk_16", "scherk_25"}) {
        CAPTURE(name);
        const CatalogEntry& e = entry_or_fail(name);
        Bindings params = e.default_params;
        if (name == std::string("scherk_25")) {
            params["q"] = 0.3;
            params["r"] = -0.2;
        }
        const SurfaceDef s = e.builder(params);
        const Rect dom = s.domain();
        for (const double lambda : {1.0, 2.0, 5.0}) {
            double worst = 0;
            for (const double u : grid_centers(dom.u_min, dom.u_max, 10))
                for (const double v : grid_centers(dom.v_min, dom.v_max, 10))
                    worst = std::max(worst,
                                     std::abs(weingarten_residual(s, lambda, u, v)));
            CHECK(worst < 1e-8);
        }
    }
}

TEST_CASE("hyperbolic paraboloid rejects wrong proportionality constants") {
    const CatalogEntry& e = entry_or_fail("hyperbolic_paraboloid_37");
    CHECK(verify_entry(e, {}, 20).pass);

    const SurfaceDef s = e.builder(e.default_params);
    const Rect dom = s.domain();
    for (const double lambda : {1.0, 3.0}) {
        double worst = 0;
        for (const double u : grid_centers(dom.u_min, dom.u_max, 15))
            for (const double v : grid_centers(dom.v_min, dom.v_max, 15))
                worst = std::max(worst, std::abs(weingarten_residual(s, lambda, u, v)));
        CAPTURE(lambda);
        CHECK(worst > 1e-3);
    }
}

TEST_CASE("raising the graph leaves every curvature untouched") {
    for (const auto& e : catalog_entries()) {
        if (is_degenerate_entry(e)) continue;
        CAPTURE(e.name);
        const SurfaceDef s1 = e.builder(e.default_params);
        const Rect dom = s1.domain();
        const SurfaceDef s2(fold_add(s1.f(), ExprNode::constant(3.7)),
                            fold_add(s1.g(), ExprNode::constant(-1.25)),
                            s1.params(), dom);
        const auto us = grid_centers(dom.u_min, dom.u_max, 5);
        const auto vs = grid_centers(dom.v_min, dom.v_max, 5);
        for (std::size_t i = 0; i < us.size(); ++i) {
            const CurvatureSample a = curvature_sample(s1, us[i], vs[i]);
            const CurvatureSample b = curvature_sample(s2, us[i], vs[i]);
            CHECK(a.K == b.K);
            CHECK(a.H == b.H);
            REQUIRE(a.K_II.has_value());
            REQUIRE(b.K_II.has_value());
            CHECK(*a.K_II == *b.K_II);
            CHECK(*a.H_II == *b.H_II);
        }
        CHECK(s2.eval_f(us[0]) == s1.eval_f(us[0]) + 3.7);
    }
}

TEST_CASE("parameter overrides are merged and validated") {
    const CatalogEntry& scherk = entry_or_fail("scherk_16");

    CHECK_THROWS_AS(verify_entry(scherk, {{"nope", 1.0}}, 5),
                    std::invalid_argument);
    CHECK_THROWS_WITH_AS(verify_entry(scherk, {{"c", 0.0}}, 5),
                         "scherk_16: parameter c must be nonzero",
                         std::invalid_argument);

    // halving c doubles the valid square
    const VerifyReport rep = verify_entry(scherk, {{"c", 0.5}}, 12);
    CHECK(rep.pass);
    CHECK(rep.params.at("c") == 0.5);
    const Rect dom = scherk.valid_domain(rep.params);
    CHECK(dom.u_max == doctest::Approx(5.8));

    const CatalogEntry& blair = entry_or_fail("blair_9");
    CHECK(verify_entry(blair, {{"c", -2.0}}, 12).pass);
    CHECK_THROWS_AS(verify_entry(blair, {{"c", 0.0}}, 5), std::invalid_argument);

    const CatalogEntry& lam2 = entry_or_fail("surface_31");
    CHECK_THROWS_AS(verify_entry(lam2, {{"p", -1.0}}, 5), std::invalid_argument);
    CHECK(verify_entry(lam2, {{"nu", 4.0}, {"q", 2.0}}, 12).pass);
}

TEST_CASE("degenerate entries stay degenerate for any slope") {
    for (const char* name : {"cylinder_6", "cylinder_7"}) {
        CAPTURE(name);
        const CatalogEntry& e = entry_or_fail(name);
        for (const double a : {0.0, 2.5, -1.5}) {
            const VerifyReport rep = verify_entry(e, {{"a", a}}, 12);
            CHECK(rep.pass);
            CHECK(rep.max_abs_residual <= kDegeneracyTol);
        }
        const SurfaceDef s = e.builder(e.default_params);
        const CurvatureSample sample = curvature_sample(s, 0.5, 0.5);
        CHECK(sample.flags.degenerate_II);
        CHECK_FALSE(sample.K_II.has_value());
        CHECK_FALSE(sample.H_II.has_value());
    }
}

TEST_CASE("ODE families annihilate their closed-form solutions") {
    const auto& families = ode_families();
    const std::vector<std::string> expected = {"eq13_alpha", "eq13_beta",
                                               "eq27_coth",  "eq27_tanh",
                                               "eq27_tan",   "eq21_reduced"};
    REQUIRE(families.size() == expected.size());
    for (std::size_t i = 0; i < families.size(); ++i) {
        CAPTURE(families[i].name);
        CHECK(families[i].name == expected[i]);
        CHECK_FALSE(families[i].constants.empty());
        const auto xs = ode_samples(families[i], 100);
        REQUIRE(xs.size() == 100);
        CHECK(ode_residual(families[i], xs) < 1e-12);
    }

    // a solution of the wrong family leaves a residual: tan into the
    // coth-type equation gives sec^2 - tan^2 + 1 = 2 identically
    const OdeFamily& coth = families[2];
    const Jet3 j = eval_jet(parse("tan(u)", "u"), "u", 0.7, {});
    CHECK(coth.residual(0.7, j.value, j.d1) == doctest::Approx(2.0).epsilon(1e-12));

    CHECK_THROWS_AS(ode_residual(coth, {0.1}), std::domain_error);
    CHECK_THROWS_AS(ode_residual(families[4], {1.5}), std::domain_error);
}

TEST_CASE("no grid pocket makes the vanishing residual and H_II small together") {
    // H_II may vanish along curves, but never on a whole patch: every 3x3
    // block of adjacent cells must contain a point where one of |residual|,
    // |H_II| is at least 1e-3.
    constexpr int n = 25;
    for (const auto& e : catalog_entries()) {
        if (is_degenerate_entry(e)) continue;
        CAPTURE(e.name);
        const SurfaceDef s = e.builder(e.default_params);
        const Rect dom = s.domain();
        const auto us = grid_centers(dom.u_min, dom.u_max, n);
        const auto vs = grid_centers(dom.v_min, dom.v_max, n);
        std::vector<std::vector<bool>> small(n, std::vector<bool>(n, false));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double res = hii_residual_eq39(s, us[i], vs[j]);
                const double h2 = hii(s, us[i], vs[j]);
                small[i][j] = std::abs(res) < 1e-3 && std::abs(h2) < 1e-3;
            }
        bool pocket = false;
        for (int i = 0; i + 2 < n && !pocket; ++i)
            for (int j = 0; j + 2 < n && !pocket; ++j) {
                bool all = true;
                for (int di = 0; di < 3 && all; ++di)
                    for (int dj = 0; dj < 3 && all; ++dj)
                        all = small[i + di][j + dj];
                pocket = all;
            }
        CHECK_FALSE(pocket);
    }
}
