#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "fracmat/complex_scalar.hpp"
#include "fracmat/errors.hpp"
#include "fracmat/special_functions.hpp"

namespace fracmat {

// Pointwise evaluation rule on the declared domain (lower, upper].
struct SampledFunction {
    std::function<Complex(double)> rule;
    double lower = 0.0;
    double upper = 1e300;

    Complex operator()(double x) const {
        const Complex v = rule(x);
        if (!is_finite(v))
            throw error("SampledFunction: non-finite sample");
        return v;
    }
};

struct OracleConfig {
    long steps = 1 << 14;      // N, a power of two >= 16
    int richardson_levels = 1; // 0..2

    void validate() const {
        if (steps < 16 || (steps & (steps - 1)) != 0)
            throw domain_error("OracleConfig: steps must be a power of two >= 16");
        if (richardson_levels < 0 || richardson_levels > 2)
            throw domain_error("OracleConfig: richardson_levels must be 0..2");
    }
};

namespace detail {

// One Grunwald-Letnikov sum at fixed step count. The j = N endpoint sample
// f(a) is omitted: its weight vanishes in the limit and skipping it admits
// functions with an integrable singularity at the base point.
inline Complex gl_single(const SampledFunction& f, double a, double x, Order lambda,
                         long n) {
    const double h = (x - a) / static_cast<double>(n);
    Complex weight(1.0, 0.0);
    Complex sum = f(x);
    for (long j = 1; j < n; ++j) {
        weight *= (static_cast<double>(j) - 1.0 - lambda) / static_cast<double>(j);
        sum += weight * f(x - static_cast<double>(j) * h);
    }
    const Complex result = std::exp(-lambda * std::log(h)) * sum;
    if (!is_finite(result)) throw error("gl_differint: overflow");
    return result;
}

} // namespace detail

// Grunwald-Letnikov differintegral of order lambda, optionally Richardson
// extrapolated across N, 2N, 4N (the scheme is first order in h).
inline Complex gl_differint(const SampledFunction& f, double a, double x, Order lambda,
                            const OracleConfig& cfg = {}) {
    cfg.validate();
    if (!(x > a)) throw domain_error("gl_differint: x must exceed the base point");
    const int levels = cfg.richardson_levels;
    std::vector<Complex> row(levels + 1);
    for (int i = 0; i <= levels; ++i)
        row[i] = detail::gl_single(f, a, x, lambda, cfg.steps << i);
    for (int k = 1; k <= levels; ++k) {
        const double pow2k = static_cast<double>(1 << k);
        for (int i = 0; i + k <= levels; ++i)
            row[i] = (pow2k * row[i + 1] - row[i]) / (pow2k - 1.0);
    }
    return row[0];
}

namespace detail {

inline constexpr std::array<double, 8> gauss8_nodes = {
    -0.96028985649753617615, -0.79666647741362672797, -0.52553240991632899082,
    -0.18343464249564978008, 0.18343464249564978008,  0.52553240991632899082,
    0.79666647741362672797,  0.96028985649753617615};
inline constexpr std::array<double, 8> gauss8_weights = {
    0.10122853629037668888, 0.22238103445337434327, 0.31370664587788704702,
    0.36268378337836176817, 0.36268378337836176817, 0.31370664587788704702,
    0.22238103445337434327, 0.10122853629037668888};

// Composite 8-point Gauss over a two-sided graded mesh (grading exponent 3):
// cells cluster toward x, where the kernel is singular, and toward a, where
// f may be.
inline Complex rl_mesh_pass(const SampledFunction& f, double a, double x,
                            Order integral_order, long cells_per_side) {
    const double mid = 0.5 * (a + x);
    const Complex kernel_exp = integral_order - 1.0;
    Complex total(0.0, 0.0);
    auto add_cell = [&](double lo, double hi) {
        const double c = 0.5 * (lo + hi);
        const double r = 0.5 * (hi - lo);
        Complex cell(0.0, 0.0);
        for (int g = 0; g < 8; ++g) {
            const double xi = c + r * gauss8_nodes[g];
            cell += gauss8_weights[g] * f(xi) *
                    std::exp(kernel_exp * std::log(x - xi));
        }
        total += r * cell;
    };
    const double m = static_cast<double>(cells_per_side);
    for (long i = 0; i < cells_per_side; ++i) {
        const double t0 = static_cast<double>(i) / m;
        const double t1 = static_cast<double>(i + 1) / m;
        add_cell(a + (mid - a) * t0 * t0 * t0, a + (mid - a) * t1 * t1 * t1);
    }
    for (long i = cells_per_side; i > 0; --i) {
        const double t0 = static_cast<double>(i) / m;
        const double t1 = static_cast<double>(i - 1) / m;
        add_cell(x - (x - mid) * t0 * t0 * t0, x - (x - mid) * t1 * t1 * t1);
    }
    return total;
}

} // namespace detail

// Direct Riemann-Liouville integral of positive order: computes D^{-q} f for
// q = integral_order with Re(q) > 0,
//   (1/Gamma(q)) int_a^x f(xi) (x-xi)^{q-1} dxi.
// Two mesh refinements must agree or a convergence error is raised.
inline Complex rl_quadrature(const SampledFunction& f, double a, double x,
                             Order integral_order, long cells_per_side = 3072) {
    if (!(integral_order.real() > 0.0))
        throw precondition_error("rl_quadrature: Re(order) must be positive");
    if (!(x > a)) throw domain_error("rl_quadrature: x must exceed the base point");
    const Complex coarse = detail::rl_mesh_pass(f, a, x, integral_order, cells_per_side / 2);
    const Complex fine = detail::rl_mesh_pass(f, a, x, integral_order, cells_per_side);
    if (std::abs(fine - coarse) > 1e-5 * (1.0 + std::abs(fine)))
        throw convergence_error("rl_quadrature: mesh refinements disagree");
    const Complex result = fine * recip_gamma(integral_order);
    if (!is_finite(result)) throw error("rl_quadrature: overflow");
    return result;
}

// Central finite difference of gl_differint in the order parameter;
// k = 1 or 2, step within [1e-5, 1e-3].
inline Complex fd_lambda_derivative(const SampledFunction& f, double a, double x,
                                    Order lambda, int k, double h_lambda,
                                    const OracleConfig& cfg = {}) {
    if (k != 1 && k != 2)
        throw domain_error("fd_lambda_derivative: k must be 1 or 2");
    if (h_lambda < 1e-5 || h_lambda > 1e-3)
        throw domain_error("fd_lambda_derivative: step must lie in [1e-5, 1e-3]");
    const Complex up = gl_differint(f, a, x, lambda + h_lambda, cfg);
    const Complex down = gl_differint(f, a, x, lambda - h_lambda, cfg);
    if (k == 1) return (up - down) / (2.0 * h_lambda);
    const Complex center = gl_differint(f, a, x, lambda, cfg);
    return (up - 2.0 * center + down) / (h_lambda * h_lambda);
}

} // namespace fracmat
