#pragma once

#include <array>
#include <cmath>
#include <cstdlib>

#include "fracmat/complex_scalar.hpp"
#include "fracmat/errors.hpp"

namespace fracmat {

namespace detail {

// Lanczos rational approximation, g = 7, 9 coefficients.
// Valid for Re(z) >= 0.5; the rest of the plane is reached by the
// recurrence ln Gamma(z) = ln Gamma(z+1) - Log(z).
inline constexpr std::array<double, 9> lanczos_coeff = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

inline Complex lanczos_ln_gamma(const Complex& z) {
    // caller guarantees Re(z) >= 0.5
    const Complex w = z - 1.0;
    Complex series(lanczos_coeff[0], 0.0);
    for (std::size_t i = 1; i < lanczos_coeff.size(); ++i)
        series += lanczos_coeff[i] / (w + static_cast<double>(i));
    const Complex t = w + 7.5;
    const double half_log_two_pi = 0.91893853320467274178;
    return half_log_two_pi + (w + 0.5) * std::log(t) - t + std::log(series);
}

// Even Bernoulli numbers B_2, B_4, ..., B_24 for the polygamma tail.
inline constexpr std::array<double, 12> bernoulli_even = {
    1.0 / 6.0,        -1.0 / 30.0,       1.0 / 42.0,
    -1.0 / 30.0,      5.0 / 66.0,        -691.0 / 2730.0,
    7.0 / 6.0,        -3617.0 / 510.0,   43867.0 / 798.0,
    -174611.0 / 330.0, 854513.0 / 138.0, -236364091.0 / 2730.0,
};

// psi^{(m)}(z) for Re(z) > 8, via the standard asymptotic expansion of
// ln Gamma differentiated m+1 times.
inline Complex polygamma_asymptotic(int m, const Complex& z) {
    const Complex zr = 1.0 / z;
    const Complex zr2 = zr * zr;
    if (m == 0) {
        Complex sum = std::log(z) - 0.5 * zr;
        Complex zp = zr2;
        for (std::size_t k = 0; k < bernoulli_even.size(); ++k) {
            sum -= bernoulli_even[k] / (2.0 * (k + 1.0)) * zp;
            zp *= zr2;
        }
        return sum;
    }
    double fact_m1 = 1.0; // (m-1)!
    for (int i = 2; i < m; ++i) fact_m1 *= i;
    const double fact_m = fact_m1 * m;
    Complex zpm = std::pow(zr, m);
    Complex sum = fact_m1 * zpm + 0.5 * fact_m * zpm * zr;
    // B_{2k} * (2k+m-1)! / (2k)! * z^{-2k-m}
    Complex zp = zpm * zr2;
    for (std::size_t k = 0; k < bernoulli_even.size(); ++k) {
        const double two_k = 2.0 * (k + 1.0);
        double ratio = 1.0; // (2k+m-1)! / (2k)!
        for (int i = 1; i <= m - 1; ++i) ratio *= two_k + i;
        sum += bernoulli_even[k] * ratio * zp;
        zp *= zr2;
    }
    if (m % 2 == 0) sum = -sum;
    return sum;
}

} // namespace detail

// Principal branch of log Gamma. exp(ln_gamma(z)) reproduces Gamma(z)
// everywhere away from the poles.
inline Complex ln_gamma(Complex z) {
    if (near_gamma_pole(z))
        throw pole_error("ln_gamma: pole at nonpositive integer");
    Complex shift(0.0, 0.0);
    int guard = 0;
    while (z.real() < 0.5) {
        shift += std::log(z);
        z += 1.0;
        if (++guard > 100000)
            throw error("ln_gamma: argument too far into the left half-plane");
    }
    const Complex result = detail::lanczos_ln_gamma(z) - shift;
    require_finite(result, "ln_gamma");
    return result;
}

inline Complex gamma(const Complex& z) {
    const Complex lg = ln_gamma(z);
    if (lg.real() > 709.0) throw error("gamma: overflow");
    return std::exp(lg);
}

// Entire reciprocal 1/Gamma. Exactly zero at nonpositive integers, which
// is what makes pole cancellations in differintegral coefficients exact.
inline Complex recip_gamma(const Complex& z) {
    if (near_gamma_pole(z)) return Complex(0.0, 0.0);
    if (z.real() >= 0.5) return std::exp(-ln_gamma(z));
    // 1/Gamma(z) = sin(pi z) Gamma(1-z) / pi
    const Complex r = sin_pi(z) * gamma(1.0 - z) / 3.14159265358979323846;
    require_finite(r, "recip_gamma");
    return r;
}

// psi^{(order)}(z) for order in {0,1,2,3}; order 0 is the digamma.
inline Complex polygamma(int order, Complex z) {
    if (order < 0 || order > 3)
        throw domain_error("polygamma: order must be in {0,1,2,3}");
    if (near_gamma_pole(z))
        throw pole_error("polygamma: pole at nonpositive integer");
    // shift into the asymptotic region: psi_m(z) = psi_m(z+1) - (-1)^m m! z^{-m-1}
    double fact = 1.0;
    for (int i = 2; i <= order; ++i) fact *= i;
    const double sign = (order % 2 == 0) ? 1.0 : -1.0;
    Complex acc(0.0, 0.0);
    int guard = 0;
    while (z.real() <= 8.0) {
        acc -= sign * fact * std::pow(z, -(order + 1));
        z += 1.0;
        if (++guard > 100000)
            throw error("polygamma: argument too far into the left half-plane");
    }
    const Complex result = detail::polygamma_asymptotic(order, z) + acc;
    require_finite(result, "polygamma");
    return result;
}

// Generalized binomial coefficient C(q, j) = Gamma(q+1) / (j! Gamma(q-j+1)).
// Routed through recip_gamma so integer truncation (q whole, j > q) gives an
// exact zero; the doubly-degenerate case (q a negative integer) is the finite
// limit of the ratio and is computed as the falling-factorial product.
inline Complex generalized_binomial(const Complex& q, long j) {
    if (j < 0) return Complex(0.0, 0.0);
    if (near_gamma_pole(q + 1.0)) {
        Complex prod(1.0, 0.0);
        for (long i = 1; i <= j; ++i)
            prod *= (q - static_cast<double>(i - 1)) / static_cast<double>(i);
        return prod;
    }
    return gamma(q + 1.0) * recip_gamma(Complex(static_cast<double>(j + 1), 0.0)) *
           recip_gamma(q - static_cast<double>(j) + 1.0);
}

// --- derivative jets -------------------------------------------------------
//
// The symbolic engine needs d^k/dz^k of Gamma and of 1/Gamma up to k = 3 to
// expand differintegrals of log-carrying terms and order-derivatives.

// {Gamma, Gamma', Gamma'', Gamma'''} at z; requires z away from poles and is
// only used with Re(z) > 0 in practice.
inline std::array<Complex, 4> gamma_derivatives(const Complex& z, int kmax) {
    std::array<Complex, 4> d{};
    d[0] = gamma(z);
    if (kmax >= 1) {
        const Complex p0 = polygamma(0, z);
        d[1] = d[0] * p0;
        if (kmax >= 2) {
            const Complex p1 = polygamma(1, z);
            d[2] = d[0] * (p0 * p0 + p1);
            if (kmax >= 3) {
                const Complex p2 = polygamma(2, z);
                d[3] = d[0] * (p0 * p0 * p0 + 3.0 * p0 * p1 + p2);
            }
        }
    }
    return d;
}

// {W, W', W'', W'''} with W = 1/Gamma, valid at every point of the plane
// including the zeros at nonpositive integers.
inline std::array<Complex, 4> recip_gamma_derivatives(const Complex& s, int kmax) {
    std::array<Complex, 4> d{};
    if (s.real() >= 0.5) {
        const Complex w = std::exp(-ln_gamma(s));
        d[0] = w;
        if (kmax >= 1) {
            const Complex p0 = polygamma(0, s);
            d[1] = -p0 * w;
            if (kmax >= 2) {
                const Complex p1 = polygamma(1, s);
                d[2] = (p0 * p0 - p1) * w;
                if (kmax >= 3) {
                    const Complex p2 = polygamma(2, s);
                    d[3] = (-p0 * p0 * p0 + 3.0 * p0 * p1 - p2) * w;
                }
            }
        }
        return d;
    }
    // Left region: W(s) = sin(pi s)/pi * Gamma(1-s), differentiated by the
    // product rule. Both factors are smooth here (Re(1-s) > 0.5), so this
    // stays accurate straight through the zeros of W.
    const double pi = 3.14159265358979323846;
    const Complex sp = sin_pi(s);
    const Complex cp = cos_pi(s);
    const std::array<Complex, 4> u = {sp / pi, cp, -pi * sp, -pi * pi * cp};
    const std::array<Complex, 4> g = gamma_derivatives(1.0 - s, kmax);
    std::array<Complex, 4> v{};
    for (int k = 0; k <= kmax; ++k)
        v[k] = (k % 2 == 0 ? 1.0 : -1.0) * g[k];
    static constexpr int choose[4][4] = {
        {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
    for (int k = 0; k <= kmax; ++k) {
        Complex sum(0.0, 0.0);
        for (int j = 0; j <= k; ++j)
            sum += static_cast<double>(choose[k][j]) * u[j] * v[k - j];
        d[k] = sum;
    }
    return d;
}

} // namespace fracmat
