#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace transurf {

using Rational = boost::multiprecision::cpp_rational;

// Sparse polynomials over exact rationals.  No zero coefficient is ever
// stored, so a polynomial is zero iff its map is empty and the leading term
// is the last map entry.
using Poly1 = std::map<int, Rational>;                    // degree -> coeff
using Poly2 = std::map<std::pair<int, int>, Rational>;    // (deg_u, deg_v) -> coeff

// Terms with exact rational exponents, for the power-function analysis.
using PowerTermMap = std::map<std::pair<Rational, Rational>, Rational>;

int degree(const Poly1& p);  // -1 for the zero polynomial

Poly1 add(const Poly1& a, const Poly1& b);
Poly1 negate(const Poly1& a);
Poly1 mul(const Poly1& a, const Poly1& b);
Poly1 derivative(const Poly1& a);
Rational eval(const Poly1& a, const Rational& x);

Poly2 lift_u(const Poly1& a);  // u-polynomial into the bivariate ring
Poly2 lift_v(const Poly1& a);
Poly2 add(const Poly2& a, const Poly2& b);
Poly2 negate(const Poly2& a);
Poly2 mul(const Poly2& a, const Poly2& b);
Poly2 scale(const Poly2& a, const Rational& c);
Rational eval(const Poly2& a, const Rational& u, const Rational& v);
bool is_zero(const Poly2& a);

// Exact bivariate expansion of the twelve-term second-curvature numerator for
// polynomial α(u) = f', β(v) = g'.
Poly2 num_poly(const Poly1& alpha, const Poly1& beta);

// Coefficient of u^{4m-2} v^{n-1} in num_poly, m = deg α > n = deg β >= 2.
// Equals -m·n·(m+1)·a_m⁴·b_n; callers check that law against this value.
std::pair<std::pair<int, int>, Rational> dominant_coefficient(const Poly1& alpha,
                                                              const Poly1& beta);

struct Theorem1Row {
    int m, n, draw;
    bool nonzero;
    std::pair<int, int> witness;  // lexicographically smallest monomial of num
    Rational coeff;               // its coefficient; 0 when num vanished
};

struct Theorem1Report {
    std::vector<Theorem1Row> rows;  // ordered by (m, n, draw)
    bool all_nonzero;
};

// For every degree pair 1 <= m <= max_m, 1 <= n <= max_n draws
// draws_per_shape random rational coefficient vectors (leading coefficients
// nonzero) and records whether num_poly vanished.  A vanishing numerator
// would be a II-flat polynomial translation surface, which must not exist.
// Deterministic for a fixed seed.
Theorem1Report theorem1_scan(int max_m, int max_n, int draws_per_shape,
                             std::uint64_t seed);

// num_poly minus the exact expansion of 2λα'β'(α' + β²α' + β' + α²β').
// The zero polynomial iff the surface satisfies K_II = λH identically.
Poly2 weingarten_poly_residual(const Poly1& alpha, const Poly1& beta,
                               const Rational& lambda);

// The six terms whose joint cancellation makes K_II vanish for power-type
// derivative pairs α = a·u^p, β = b·v^q:
//   a(3p-1)·u^p v   + a²b(3q-1)·u^{2p+1} v^q + a³(-p-1)·u^{3p} v
// + b(3q-1)·u v^q   + ab²(3p-1)·u^p v^{2q+1} + b³(-q-1)·u v^{3q},
// combined with exact exponent matching.  Empty map ⇔ total cancellation.
PowerTermMap power_terms(const Rational& p, const Rational& q, const Rational& a,
                         const Rational& b);

struct PowerSolution {
    Rational p, q, a, b;
};

std::vector<Rational> exponent_grid(int denominator, int max_numerator);
std::vector<Rational> coefficient_grid(int max_abs);

// All (p, q, a, b) in the grid product whose power_terms cancel completely,
// in loop order p, q, a, b.
std::vector<PowerSolution> power_scan(const std::vector<Rational>& exponents,
                                      const std::vector<Rational>& coeffs);

}  // namespace transurf
