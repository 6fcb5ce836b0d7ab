#pragma once

#include <optional>
#include <utility>

#include "transurf/geometry.hpp"

namespace transurf {

// Thrown where a curvature quantity does not exist at the point: the second
// fundamental form is degenerate, or a ladder denominator vanishes.
struct UndefinedCurvatureError : std::runtime_error {
    UndefinedCurvatureError(double u, double v, const std::string& reason);
    double u, v;
};

// K = α'β'/Δ²,  H = ((1+β²)α' + (1+α²)β') / (2Δ^{3/2}).
// Defined at every domain point, including degenerate ones.
std::pair<double, double> gauss_mean(const FormBundle& b);
std::pair<double, double> gauss_mean(const SurfaceDef& s, double u, double v);

// Twelve-term numerator of the specialized second-Gaussian-curvature formula,
// a polynomial in α, α', α'', β, β', β''.
double kii_numerator(const Jet3& alpha, const Jet3& beta);

// K_II = kii_numerator / (4α'β'Δ^{3/2}).  Throws when degenerate.
double kii_specialized(const FormBundle& b);
double kii_specialized(const SurfaceDef& s, double u, double v);

// K_II through the Brioschi-type determinant formula applied to the second
// fundamental form, with the partials of e and g taken from exact symbolic
// derivative trees.  Independent of kii_specialized; the two must agree.
double kii_brioschi(const SurfaceDef& s, double u, double v);

// Second mean curvature H_II = -H - div(...)/(2·sqrt|det II|), evaluated
// through the closed form of the divergence sum.  Indefinite second forms
// (α'β' < 0) use |det II| and |K| throughout.  Throws when degenerate.
double hii(const FormBundle& b);
double hii(const SurfaceDef& s, double u, double v);

// Residual whose vanishing is equivalent to H_II = 0:
//   (2α'α'''-3α''²)/(2α'³) + (2β'β'''-3β''²)/(2β'³)
//   - (2/Δ)((α'²+αα'')/α' + (β'²+ββ'')/β') + (6/Δ²)(α²α'+β²β').
// Satisfies H_II = -(sqrt(Δ)/4) · residual identically.
double hii_residual_eq39(const FormBundle& b);
double hii_residual_eq39(const SurfaceDef& s, double u, double v);

struct CurvatureFlags {
    bool degenerate_II = false;  // |α'β'| <= kDegeneracyTol
    bool indefinite_II = false;  // α'β' < 0 (then K < 0)
};

// K_II and H_II are present iff the second form is nondegenerate.
struct CurvatureSample {
    double u{0}, v{0};
    double K{0}, H{0};
    std::optional<double> K_II, H_II;
    CurvatureFlags flags;
};

CurvatureSample curvature_sample(const FormBundle& b);
CurvatureSample curvature_sample(const SurfaceDef& s, double u, double v);

// Auxiliary quantities of the higher-order identities:
//   φ = (α'²+αα'')/α',  p = α²α',  F = φ'/(2αα'),  P = φ + 3p'/(2αα'),
//   A = F'/(2αα'),      a = F - P'/(2αα')
// and the symmetric ψ, q, G, Q, B, b built from β(v).  Requires α, β, α', β'
// all nonzero at the point.
struct LadderRecord {
    double phi, psi;
    double p_small, q_small;
    double Fcap, Gcap;
    double Pcap, Qcap;
    double Acap, Bcap;
    double a_small, b_small;
};

LadderRecord ladder_record(const SurfaceDef& s, double u, double v);

struct IdentityPair {
    double lhs, rhs;
};

// Unconditional identity: the mixed partial ∂²/∂v∂u of
//   S = -(2/Δ)(φ+ψ) + (6/Δ²)(p+q)
// (taken numerically, central differences with step 1e-4 per axis), scaled by
// Δ⁴/(8αα'ββ'), equals (F+G)Δ² - 2(P+Q)Δ + 18(p+q).
IdentityPair ladder_identity_40(const SurfaceDef& s, double u, double v);

struct IdentityRatio {
    double lhs, rhs;
    std::optional<double> ratio;  // lhs/rhs; absent when |rhs| <= 1e-12
};

// Follow-up identity: lhs = mixed partial ∂²/∂v∂u of
//   R = (F+G)Δ² - 2(P+Q)Δ + 18(p+q)
// divided by 4αα'ββ'; rhs = (A+B)Δ + a + b.  lhs/rhs is the same constant at
// every point where rhs does not vanish.
IdentityRatio ladder_identity_41(const SurfaceDef& s, double u, double v);

// kii_specialized - λ·H.  Zero wherever the surface satisfies K_II = λH.
double weingarten_residual(const SurfaceDef& s, double lambda, double u, double v);

}  // namespace transurf
