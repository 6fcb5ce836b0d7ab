#include "transurf/curvature.hpp"

#include <cmath>
#include <cstdio>

namespace transurf {

namespace {

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double det3(const double m[3][3]) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

void require_nondegenerate(const FormBundle& b) {
    if (!b.nondegenerate)
        throw UndefinedCurvatureError(b.u, b.v,
                                      "second fundamental form is degenerate");
}

}  // namespace

UndefinedCurvatureError::UndefinedCurvatureError(double u_, double v_,
                                                 const std::string& reason)
    : std::runtime_error(reason + " at (u, v) = (" + fmt17(u_) + ", " + fmt17(v_) +
                         ")"),
      u(u_),
      v(v_) {}

std::pair<double, double> gauss_mean(const FormBundle& b) {
    const double ap = b.alpha.d1, bp = b.beta.d1;
    const double K = ap * bp / (b.delta * b.delta);
    const double H = (b.G * ap + b.E * bp) / (2 * b.delta * std::sqrt(b.delta));
    return {K, H};
}

std::pair<double, double> gauss_mean(const SurfaceDef& s, double u, double v) {
    return gauss_mean(forms_at(s, u, v));
}

double kii_numerator(const Jet3& alpha, const Jet3& beta) {
    const double a = alpha.value, a1 = alpha.d1, a2 = alpha.d2;
    const double b = beta.value, b1 = beta.d1, b2 = beta.d2;
    return -2 * a * a * a1 * a1 * b1 - 2 * a1 * b * b * b1 * b1 +
           2 * a * a * a1 * b1 * b1 + 2 * a1 * a1 * b * b * b1 + 2 * a1 * b1 * b1 +
           2 * a1 * a1 * b1 + a1 * b * b2 + a * a2 * b1 + a * a * a1 * b * b2 +
           a * a2 * b * b * b1 + a1 * b * b * b * b2 + a * a * a * a2 * b1;
}

double kii_specialized(const FormBundle& b) {
    require_nondegenerate(b);
    const double ap = b.alpha.d1, bp = b.beta.d1;
    return kii_numerator(b.alpha, b.beta) /
           (4 * ap * bp * b.delta * std::sqrt(b.delta));
}

double kii_specialized(const SurfaceDef& s, double u, double v) {
    return kii_specialized(forms_at(s, u, v));
}

double kii_brioschi(const SurfaceDef& s, double u, double v) {
    FormBundle b = forms_at(s, u, v);
    require_nondegenerate(b);
    const auto& t = s.second_form_trees();
    const Bindings at = s.bind(u, v);
    const double e = eval(t.e, at), e_u = eval(t.e_u, at), e_v = eval(t.e_v, at),
                 e_vv = eval(t.e_vv, at);
    const double g = eval(t.g, at), g_u = eval(t.g_u, at), g_v = eval(t.g_v, at),
                 g_uu = eval(t.g_uu, at);
    // mixed second-form coefficient f and all its partials vanish identically
    const double m1[3][3] = {{-0.5 * e_vv - 0.5 * g_uu, 0.5 * e_u, -0.5 * e_v},
                             {-0.5 * g_u, e, 0},
                             {0.5 * g_v, 0, g}};
    const double m2[3][3] = {{0, 0.5 * e_v, 0.5 * g_u},
                             {0.5 * e_v, e, 0},
                             {0.5 * g_u, 0, g}};
    const double det2 = e * g;
    return (det3(m1) - det3(m2)) / (det2 * det2);
}

double hii(const FormBundle& bd) {
    require_nondegenerate(bd);
    const double a = bd.alpha.value, a1 = bd.alpha.d1, a2 = bd.alpha.d2,
                 a3 = bd.alpha.d3;
    const double b = bd.beta.value, b1 = bd.beta.d1, b2 = bd.beta.d2,
                 b3 = bd.beta.d3;
    const double d = bd.delta;
    const double root = std::sqrt(std::abs(a1 * b1));
    const double wa = root / a1;
    const double wb = root / b1;
    const double bra = ((2 * a1 * a3 - 3 * a2 * a2) / (a1 * a1)) * d * d +
                       (-4 * a * a2 - 8 * a1 * a1) * d + 16 * a * a * a1 * a1;
    const double brb = ((2 * b1 * b3 - 3 * b2 * b2) / (b1 * b1)) * d * d +
                       (-4 * b * b2 - 8 * b1 * b1) * d + 16 * b * b * b1 * b1;
    const double sum = (wa * bra + wb * brb) / (4 * d * d);
    const double H = gauss_mean(bd).second;
    return -H - sum / (2 * std::sqrt(std::abs(a1 * b1) / d));
}

double hii(const SurfaceDef& s, double u, double v) {
    return hii(forms_at(s, u, v));
}

double hii_residual_eq39(const FormBundle& bd) {
    require_nondegenerate(bd);
    const double a = bd.alpha.value, a1 = bd.alpha.d1, a2 = bd.alpha.d2,
                 a3 = bd.alpha.d3;
    const double b = bd.beta.value, b1 = bd.beta.d1, b2 = bd.beta.d2,
                 b3 = bd.beta.d3;
    const double d = bd.delta;
    return (2 * a1 * a3 - 3 * a2 * a2) / (2 * a1 * a1 * a1) +
           (2 * b1 * b3 - 3 * b2 * b2) / (2 * b1 * b1 * b1) -
           (2 / d) * ((a1 * a1 + a * a2) / a1 + (b1 * b1 + b * b2) / b1) +
           (6 / (d * d)) * (a * a * a1 + b * b * b1);
}

double hii_residual_eq39(const SurfaceDef& s, double u, double v) {
    return hii_residual_eq39(forms_at(s, u, v));
}

CurvatureSample curvature_sample(const FormBundle& b) {
    CurvatureSample out;
    out.u = b.u;
    out.v = b.v;
    auto [K, H] = gauss_mean(b);
    out.K = K;
    out.H = H;
    out.flags.degenerate_II = !b.nondegenerate;
    out.flags.indefinite_II = b.alpha.d1 * b.beta.d1 < 0;
    if (b.nondegenerate) {
        out.K_II = kii_specialized(b);
        out.H_II = hii(b);
    }
    return out;
}

CurvatureSample curvature_sample(const SurfaceDef& s, double u, double v) {
    return curvature_sample(forms_at(s, u, v));
}

namespace {

// Symbolic trees for one coordinate side of the ladder.  `fn` is f(u) or
// g(v); `var` the matching coordinate.
struct SideTrees {
    Expr phi, p, F, P, A, a;
};

SideTrees ladder_side(const Expr& fn, const std::string& var) {
    Expr al = differentiate(fn, var);
    Expr a1 = differentiate(al, var);
    Expr a2 = differentiate(a1, var);
    Expr two_al_a1 =
        fold_mul(ExprNode::constant(2), fold_mul(al, a1));
    SideTrees t;
    t.phi = fold_div(fold_add(fold_mul(a1, a1), fold_mul(al, a2)), a1);
    t.p = fold_mul(fold_mul(al, al), a1);
    t.F = fold_div(differentiate(t.phi, var), two_al_a1);
    t.P = fold_add(t.phi, fold_div(fold_mul(ExprNode::constant(3),
                                            differentiate(t.p, var)),
                                   two_al_a1));
    t.A = fold_div(differentiate(t.F, var), two_al_a1);
    t.a = fold_sub(t.F, fold_div(differentiate(t.P, var), two_al_a1));
    return t;
}

struct LadderContext {
    SideTrees fu, gv;
    Jet3 aj, bj;
    double delta;
};

LadderContext ladder_context(const SurfaceDef& s, double u, double v) {
    if (!s.domain().contains(u, v)) throw OutOfDomainError(u, v);
    LadderContext c;
    c.aj = s.alpha_jet(u);
    c.bj = s.beta_jet(v);
    if (c.aj.value == 0 || c.bj.value == 0 || c.aj.d1 == 0 || c.bj.d1 == 0)
        throw UndefinedCurvatureError(
            u, v, "zero denominator among alpha, beta, alpha', beta'");
    c.fu = ladder_side(s.f(), "u");
    c.gv = ladder_side(s.g(), "v");
    c.delta = 1 + c.aj.value * c.aj.value + c.bj.value * c.bj.value;
    return c;
}

double delta_at(const SurfaceDef& s, double u, double v) {
    const double a = s.alpha_jet(u).value, b = s.beta_jet(v).value;
    return 1 + a * a + b * b;
}

LadderRecord eval_record(const SurfaceDef& s, const LadderContext& c, double u,
                         double v) {
    const Bindings at = s.bind(u, v);
    LadderRecord r;
    r.phi = eval(c.fu.phi, at);
    r.psi = eval(c.gv.phi, at);
    r.p_small = eval(c.fu.p, at);
    r.q_small = eval(c.gv.p, at);
    r.Fcap = eval(c.fu.F, at);
    r.Gcap = eval(c.gv.F, at);
    r.Pcap = eval(c.fu.P, at);
    r.Qcap = eval(c.gv.P, at);
    r.Acap = eval(c.fu.A, at);
    r.Bcap = eval(c.gv.A, at);
    r.a_small = eval(c.fu.a, at);
    r.b_small = eval(c.gv.a, at);
    for (double x : {r.phi, r.psi, r.p_small, r.q_small, r.Fcap, r.Gcap, r.Pcap,
                     r.Qcap, r.Acap, r.Bcap, r.a_small, r.b_small})
        if (!std::isfinite(x))
            throw UndefinedCurvatureError(u, v, "ladder quantity is not finite");
    return r;
}

// central-difference mixed partial, step 1e-4 per axis
template <typename Fn>
double mixed_partial(Fn&& f, double u, double v) {
    const double h = 1e-4;
    return (f(u + h, v + h) - f(u + h, v - h) - f(u - h, v + h) + f(u - h, v - h)) /
           (4 * h * h);
}

}  // namespace

LadderRecord ladder_record(const SurfaceDef& s, double u, double v) {
    LadderContext c = ladder_context(s, u, v);
    return eval_record(s, c, u, v);
}

IdentityPair ladder_identity_40(const SurfaceDef& s, double u, double v) {
    LadderContext c = ladder_context(s, u, v);
    auto S = [&](double uu, double vv) {
        const Bindings at = s.bind(uu, vv);
        const double d = delta_at(s, uu, vv);
        const double phi = eval(c.fu.phi, at), psi = eval(c.gv.phi, at);
        const double p = eval(c.fu.p, at), q = eval(c.gv.p, at);
        return -(2 / d) * (phi + psi) + (6 / (d * d)) * (p + q);
    };
    const double d = c.delta;
    // Δ⁴ balances the weights: the mixed partial of S carries Δ-degrees down
    // to -4, so only the fourth power clears every denominator.
    const double scale = d * d * d * d /
                         (8 * c.aj.value * c.aj.d1 * c.bj.value * c.bj.d1);
    LadderRecord r = eval_record(s, c, u, v);
    IdentityPair out;
    out.lhs = mixed_partial(S, u, v) * scale;
    out.rhs = (r.Fcap + r.Gcap) * d * d - 2 * (r.Pcap + r.Qcap) * d +
              18 * (r.p_small + r.q_small);
    return out;
}

IdentityRatio ladder_identity_41(const SurfaceDef& s, double u, double v) {
    LadderContext c = ladder_context(s, u, v);
    auto R = [&](double uu, double vv) {
        const Bindings at = s.bind(uu, vv);
        const double d = delta_at(s, uu, vv);
        const double F = eval(c.fu.F, at), G = eval(c.gv.F, at);
        const double P = eval(c.fu.P, at), Q = eval(c.gv.P, at);
        const double p = eval(c.fu.p, at), q = eval(c.gv.p, at);
        return (F + G) * d * d - 2 * (P + Q) * d + 18 * (p + q);
    };
    LadderRecord r = eval_record(s, c, u, v);
    IdentityRatio out;
    out.lhs = mixed_partial(R, u, v) /
              (4 * c.aj.value * c.aj.d1 * c.bj.value * c.bj.d1);
    out.rhs = (r.Acap + r.Bcap) * c.delta + r.a_small + r.b_small;
    if (std::abs(out.rhs) > 1e-12) out.ratio = out.lhs / out.rhs;
    return out;
}

double weingarten_residual(const SurfaceDef& s, double lambda, double u, double v) {
    FormBundle b = forms_at(s, u, v);
    return kii_specialized(b) - lambda * gauss_mean(b).second;
}

}  // namespace transurf
