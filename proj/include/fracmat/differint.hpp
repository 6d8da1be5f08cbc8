#pragma once

#include <array>
#include <cmath>

#include "fracmat/expression.hpp"
#include "fracmat/special_functions.hpp"

namespace fracmat {

namespace detail {

inline constexpr double factorial_small[4] = {1.0, 1.0, 2.0, 6.0};
inline constexpr double choose_small[4][4] = {
    {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};

} // namespace detail

// Exact m-fold d/dx on the power-log basis; the product rule sheds one log
// power per term and never leaves the basis.
inline Expression integer_derivative(const Expression& e, int m) {
    if (m < 0) throw domain_error("integer_derivative: negative order");
    Expression cur = e;
    for (int step = 0; step < m; ++step) {
        std::vector<PowerLogTerm> next;
        next.reserve(cur.terms().size() * 2);
        for (const auto& t : cur.terms()) {
            next.push_back(PowerLogTerm{t.coeff * t.exponent, t.exponent - 1.0, t.log_power});
            if (t.log_power > 0)
                next.push_back(PowerLogTerm{t.coeff * static_cast<double>(t.log_power),
                                            t.exponent - 1.0, t.log_power - 1});
        }
        cur = Expression(cur.base_point(), std::move(next));
    }
    return cur;
}

namespace detail {

// Core closed form: the k-th order-derivative of the differintegral of a
// single power-log term,
//
//   d^k/dl^k  D^l [ c (x-a)^p ln^m(x-a) ]
//     = c d^k/dl^k d^m/dp^m [ Gamma(p+1) * (1/Gamma)(p-l+1) * (x-a)^{p-l} ].
//
// Every p-derivative lands on one of the three factors and every l-derivative
// on one of the last two (with a sign), so the expansion is a pair of
// multinomial sums over the Gamma and 1/Gamma jets, collected by the power of
// ln(x-a) produced.
inline Expression differint_term_jet(const PowerLogTerm& t, Order lambda, int k,
                                     double base_point) {
    const int m = t.log_power;
    const int total = m + k;
    if (total > max_log_power)
        throw domain_error(
            "differintegral order-derivative: combined log power exceeds cap 3");
    const Complex p = t.exponent;
    const auto gam = gamma_derivatives(p + 1.0, m);
    const auto rec = recip_gamma_derivatives(p - lambda + 1.0, total);
    std::array<Complex, max_log_power + 1> bucket{};
    for (int u = 0; u <= m; ++u) {
        for (int v = 0; u + v <= m; ++v) {
            const int w = m - u - v;
            const double multinomial = factorial_small[m] /
                                       (factorial_small[u] * factorial_small[v] *
                                        factorial_small[w]);
            for (int r = 0; r <= k; ++r) {
                const int lhits = k - r;
                bucket[w + lhits] +=
                    multinomial * choose_small[k][r] * gam[u] * rec[v + r];
            }
        }
    }
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    std::vector<PowerLogTerm> out;
    for (int l = 0; l <= total; ++l) {
        const Complex c = t.coeff * sign * bucket[l];
        if (c != Complex(0.0, 0.0))
            out.push_back(PowerLogTerm{c, p - lambda, l});
    }
    return Expression(base_point, std::move(out));
}

} // namespace detail

// Riemann-Liouville differintegral of one term, order lambda, base point a.
// Whole nonnegative real orders route through the classical derivative so
// that D^0 is the identity and D^m coincides with integer_derivative exactly.
inline Expression differint_term(const PowerLogTerm& t, Order lambda, double base_point) {
    if (t.coeff == Complex(0.0, 0.0)) return Expression::zero(base_point);
    if (!(t.exponent.real() > -1.0))
        throw domain_error("differint: exponent must have real part > -1");
    if (near_integer(lambda) && nearest_integer(lambda) >= 0)
        return integer_derivative(Expression(base_point, {t}),
                                  static_cast<int>(nearest_integer(lambda)));
    return detail::differint_term_jet(t, lambda, 0, base_point);
}

// Termwise differintegral; linear by construction.
inline Expression differint_expr(const Expression& e, Order lambda) {
    Expression sum = Expression::zero(e.base_point());
    for (const auto& t : e.terms())
        sum += differint_term(t, lambda, e.base_point());
    return sum;
}

// Exact d^k/d lambda^k of differint_expr(e, lambda), expanded in the
// power-log basis. k = 0 reduces to the plain differintegral.
inline Expression lambda_derivative(const Expression& e, Order lambda, int k) {
    if (k < 0 || k > max_log_power)
        throw domain_error("lambda_derivative: order must be in {0,1,2,3}");
    if (k == 0) return differint_expr(e, lambda);
    Expression sum = Expression::zero(e.base_point());
    for (const auto& t : e.terms()) {
        if (t.coeff == Complex(0.0, 0.0)) continue;
        if (!(t.exponent.real() > -1.0))
            throw domain_error("differint: exponent must have real part > -1");
        sum += detail::differint_term_jet(t, lambda, k, e.base_point());
    }
    return sum;
}

// Terminating Leibniz series
//   sum_{j=0}^{J} C(q, j) * D^{q-j} f * d^j g / dx^j,
// exact when g is a polynomial and J >= deg(g).
inline Expression leibniz_series(const Expression& f, const Expression& g, Order q,
                                 int series_terms) {
    f.require_same_base(g);
    for (const auto& t : g.terms()) {
        if (t.log_power != 0 || !near_integer(t.exponent) || t.exponent.real() < -0.5)
            throw domain_error(
                "leibniz_series: g must be a polynomial (whole nonnegative exponents)");
    }
    Expression sum = Expression::zero(f.base_point());
    Expression gj = g;
    for (int j = 0; j <= series_terms; ++j) {
        if (j > 0) gj = integer_derivative(gj, 1);
        if (gj.is_zero()) break;
        const Complex cj = generalized_binomial(q, j);
        if (cj != Complex(0.0, 0.0))
            sum += cj * (differint_expr(f, q - static_cast<double>(j)) * gj);
    }
    return sum;
}

// Literal sequential composition D^p (D^q f).
inline Expression composition_lhs(Order p, Order q, const Expression& f) {
    return differint_expr(differint_expr(f, q), p);
}

namespace detail {

// Limit of a canonical expression as x -> a+ from the exponent signs alone.
// Positive real part vanishes (powers beat logs), an exponent that is exactly
// zero without logs contributes its coefficient, anything else diverges.
inline Complex boundary_limit(const Expression& e) {
    Complex value(0.0, 0.0);
    for (const auto& t : e.terms()) {
        if (t.exponent.real() > term_key_tol) continue;
        const bool zero_exponent = std::abs(t.exponent) <= term_key_tol;
        if (zero_exponent && t.log_power == 0) {
            value += t.coeff;
            continue;
        }
        throw boundary_error(
            "composition: boundary limit at the base point diverges");
    }
    return value;
}

} // namespace detail

// Composition through the boundary-term identity: for outer order p and inner
// order q with Re(q) > 0,
//
//   D^p D^q f = D^{p+q} f - sum_{j=1}^{k} [D^{q-j} f]_{x=a}
//                             * (x-a)^{-p-j} / Gamma(1-p-j),
//
// where k is the first whole number >= Re(q). The p < 0 variant is the same
// formula, so one implementation covers both. Boundary limits are resolved
// symbolically from exponent signs, never by sampling.
inline Expression composition_rhs(Order p, Order q, const Expression& f) {
    if (!(q.real() > 0.0))
        throw precondition_error("composition_rhs: Re(q) must be positive");
    const long k = static_cast<long>(std::ceil(q.real() - term_key_tol));
    Expression result = differint_expr(f, p + q);
    for (long j = 1; j <= k; ++j) {
        const Complex limit =
            detail::boundary_limit(differint_expr(f, q - static_cast<double>(j)));
        const Complex coeff =
            limit * recip_gamma(1.0 - p - static_cast<double>(j));
        if (coeff != Complex(0.0, 0.0))
            result -= Expression::power(f.base_point(), coeff,
                                        -p - static_cast<double>(j));
    }
    return result;
}

} // namespace fracmat
