#include "transurf/polynomial.hpp"

#include <random>
#include <stdexcept>

namespace transurf {

namespace {

template <typename Key>
void add_term(std::map<Key, Rational>& p, const Key& key, const Rational& c) {
    if (c == 0) return;
    auto it = p.find(key);
    if (it == p.end()) {
        p.emplace(key, c);
        return;
    }
    it->second += c;
    if (it->second == 0) p.erase(it);
}

}  // namespace

int degree(const Poly1& p) { return p.empty() ? -1 : p.rbegin()->first; }

Poly1 add(const Poly1& a, const Poly1& b) {
    Poly1 out = a;
    for (const auto& [d, c] : b) add_term(out, d, c);
    return out;
}

Poly1 negate(const Poly1& a) {
    Poly1 out;
    for (const auto& [d, c] : a) out.emplace(d, -c);
    return out;
}

Poly1 mul(const Poly1& a, const Poly1& b) {
    Poly1 out;
    for (const auto& [da, ca] : a)
        for (const auto& [db, cb] : b) add_term(out, da + db, ca * cb);
    return out;
}

Poly1 derivative(const Poly1& a) {
    Poly1 out;
    for (const auto& [d, c] : a)
        if (d > 0) out.emplace(d - 1, c * d);
    return out;
}

Rational eval(const Poly1& a, const Rational& x) {
    // Horner over the sparse map, highest degree first
    Rational acc = 0;
    int prev = -1;
    for (auto it = a.rbegin(); it != a.rend(); ++it) {
        if (prev >= 0)
            for (int k = it->first; k < prev; ++k) acc *= x;
        acc += it->second;
        prev = it->first;
    }
    if (prev > 0)
        for (int k = 0; k < prev; ++k) acc *= x;
    return acc;
}

Poly2 lift_u(const Poly1& a) {
    Poly2 out;
    for (const auto& [d, c] : a) out.emplace(std::pair{d, 0}, c);
    return out;
}

Poly2 lift_v(const Poly1& a) {
    Poly2 out;
    for (const auto& [d, c] : a) out.emplace(std::pair{0, d}, c);
    return out;
}

Poly2 add(const Poly2& a, const Poly2& b) {
    Poly2 out = a;
    for (const auto& [d, c] : b) add_term(out, d, c);
    return out;
}

Poly2 negate(const Poly2& a) {
    Poly2 out;
    for (const auto& [d, c] : a) out.emplace(d, -c);
    return out;
}

Poly2 mul(const Poly2& a, const Poly2& b) {
    Poly2 out;
    for (const auto& [da, ca] : a)
        for (const auto& [db, cb] : b)
            add_term(out, std::pair{da.first + db.first, da.second + db.second},
                     ca * cb);
    return out;
}

Poly2 scale(const Poly2& a, const Rational& c) {
    Poly2 out;
    if (c == 0) return out;
    for (const auto& [d, k] : a) out.emplace(d, k * c);
    return out;
}

Rational eval(const Poly2& a, const Rational& u, const Rational& v) {
    Rational acc = 0;
    for (const auto& [d, c] : a) {
        Rational term = c;
        for (int k = 0; k < d.first; ++k) term *= u;
        for (int k = 0; k < d.second; ++k) term *= v;
        acc += term;
    }
    return acc;
}

bool is_zero(const Poly2& a) { return a.empty(); }

Poly2 num_poly(const Poly1& alpha, const Poly1& beta) {
    const Poly2 A = lift_u(alpha), A1 = lift_u(derivative(alpha)),
                A2 = lift_u(derivative(derivative(alpha)));
    const Poly2 B = lift_v(beta), B1 = lift_v(derivative(beta)),
                B2 = lift_v(derivative(derivative(beta)));
    auto sq = [](const Poly2& p) { return mul(p, p); };

    Poly2 out;
    out = add(out, scale(mul(sq(A), mul(sq(A1), B1)), -2));
    out = add(out, scale(mul(A1, mul(sq(B), sq(B1))), -2));
    out = add(out, scale(mul(sq(A), mul(A1, sq(B1))), 2));
    out = add(out, scale(mul(sq(A1), mul(sq(B), B1)), 2));
    out = add(out, scale(mul(A1, sq(B1)), 2));
    out = add(out, scale(mul(sq(A1), B1), 2));
    out = add(out, mul(A1, mul(B, B2)));
    out = add(out, mul(A, mul(A2, B1)));
    out = add(out, mul(sq(A), mul(A1, mul(B, B2))));
    out = add(out, mul(A, mul(A2, mul(sq(B), B1))));
    out = add(out, mul(A1, mul(mul(sq(B), B), B2)));
    out = add(out, mul(mul(sq(A), A), mul(A2, B1)));
    return out;
}

std::pair<std::pair<int, int>, Rational> dominant_coefficient(const Poly1& alpha,
                                                              const Poly1& beta) {
    const int m = degree(alpha), n = degree(beta);
    if (!(m > n && n >= 2))
        throw std::invalid_argument(
            "dominant_coefficient requires deg(alpha) > deg(beta) >= 2");
    const std::pair<int, int> monomial{4 * m - 2, n - 1};
    const Poly2 num = num_poly(alpha, beta);
    auto it = num.find(monomial);
    return {monomial, it == num.end() ? Rational(0) : it->second};
}

namespace {

Rational draw_rational(std::mt19937_64& rng, bool nonzero_numerator) {
    static const int nz[6] = {-3, -2, -1, 1, 2, 3};
    const long long num = nonzero_numerator
                              ? nz[rng() % 6]
                              : static_cast<long long>(rng() % 7) - 3;
    const long long den = 1 + static_cast<long long>(rng() % 3);
    return Rational(num, den);
}

Poly1 draw_poly(std::mt19937_64& rng, int deg) {
    Poly1 p;
    add_term(p, deg, draw_rational(rng, true));
    for (int d = deg - 1; d >= 0; --d) add_term(p, d, draw_rational(rng, false));
    return p;
}

}  // namespace

Theorem1Report theorem1_scan(int max_m, int max_n, int draws_per_shape,
                             std::uint64_t seed) {
    if (max_m < 1 || max_n < 1 || draws_per_shape < 1)
        throw std::invalid_argument("theorem1_scan requires max_m, max_n, draws >= 1");
    std::mt19937_64 rng(seed);
    Theorem1Report report;
    report.all_nonzero = true;
    for (int m = 1; m <= max_m; ++m)
        for (int n = 1; n <= max_n; ++n)
            for (int draw = 0; draw < draws_per_shape; ++draw) {
                const Poly1 alpha = draw_poly(rng, m);
                const Poly1 beta = draw_poly(rng, n);
                const Poly2 num = num_poly(alpha, beta);
                Theorem1Row row;
                row.m = m;
                row.n = n;
                row.draw = draw;
                row.nonzero = !num.empty();
                if (row.nonzero) {
                    row.witness = num.begin()->first;
                    row.coeff = num.begin()->second;
                } else {
                    row.witness = {0, 0};
                    row.coeff = 0;
                    report.all_nonzero = false;
                }
                report.rows.push_back(std::move(row));
            }
    return report;
}

Poly2 weingarten_poly_residual(const Poly1& alpha, const Poly1& beta,
                               const Rational& lambda) {
    const Poly2 A = lift_u(alpha), A1 = lift_u(derivative(alpha));
    const Poly2 B = lift_v(beta), B1 = lift_v(derivative(beta));
    // 2λ α'β' (α' + β²α' + β' + α²β')
    Poly2 bracket = add(A1, mul(mul(B, B), A1));
    bracket = add(bracket, add(B1, mul(mul(A, A), B1)));
    const Poly2 rhs = scale(mul(mul(A1, B1), bracket), 2 * lambda);
    return add(num_poly(alpha, beta), negate(rhs));
}

PowerTermMap power_terms(const Rational& p, const Rational& q, const Rational& a,
                         const Rational& b) {
    if (a == 0 || b == 0 || p == 0 || q == 0)
        throw std::invalid_argument("power_terms requires nonzero p, q, a, b");
    PowerTermMap out;
    auto put = [&out](const Rational& eu, const Rational& ev, const Rational& c) {
        if (c == 0) return;
        auto key = std::pair{eu, ev};
        auto it = out.find(key);
        if (it == out.end()) {
            out.emplace(key, c);
            return;
        }
        it->second += c;
        if (it->second == 0) out.erase(it);
    };
    put(p, 1, a * (3 * p - 1));
    put(2 * p + 1, q, a * a * b * (3 * q - 1));
    put(3 * p, 1, -a * a * a * (p + 1));
    put(1, q, b * (3 * q - 1));
    put(p, 2 * q + 1, a * b * b * (3 * p - 1));
    put(1, 3 * q, -b * b * b * (q + 1));
    return out;
}

std::vector<Rational> exponent_grid(int denominator, int max_numerator) {
    std::vector<Rational> out;
    for (int k = -max_numerator; k <= max_numerator; ++k)
        if (k != 0) out.emplace_back(k, denominator);
    return out;
}

std::vector<Rational> coefficient_grid(int max_abs) {
    std::vector<Rational> out;
    for (int k = -max_abs; k <= max_abs; ++k)
        if (k != 0) out.emplace_back(k);
    return out;
}

std::vector<PowerSolution> power_scan(const std::vector<Rational>& exponents,
                                      const std::vector<Rational>& coeffs) {
    std::vector<PowerSolution> out;
    for (const auto& p : exponents)
        for (const auto& q : exponents)
            for (const auto& a : coeffs)
                for (const auto& b : coeffs)
                    if (power_terms(p, q, a, b).empty())
                        out.push_back({p, q, a, b});
    return out;
}

}  // namespace transurf
