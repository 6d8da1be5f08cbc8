#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include "fracmat/errors.hpp"

namespace fracmat {

using Complex = std::complex<double>;

// Differintegration order. Re < 0 integrates, Re >= 0 differentiates.
using Order = Complex;

inline bool is_finite(double x) { return std::isfinite(x); }

inline bool is_finite(const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline void require_finite(const Complex& z, const char* what) {
    if (!is_finite(z)) throw error(std::string(what) + ": non-finite result");
}

// True when z lies within `tol` of a nonpositive integer (a gamma pole).
inline bool near_gamma_pole(const Complex& z, double tol = 1e-12) {
    if (std::abs(z.imag()) > tol) return false;
    const double r = std::round(z.real());
    return r <= 0.5 && std::abs(z.real() - r) <= tol;
}

// True when z lies within `tol` of the real integer line.
inline bool near_integer(const Complex& z, double tol = 1e-12) {
    return std::abs(z.imag()) <= tol &&
           std::abs(z.real() - std::round(z.real())) <= tol;
}

inline long nearest_integer(const Complex& z) {
    return static_cast<long>(std::llround(z.real()));
}

// sin(pi z) with argument reduction on the real part, so zeros at
// integers come out exact instead of carrying the O(|z| eps) error of
// sin(pi * z) evaluated directly.
inline Complex sin_pi(const Complex& z) {
    const double m = std::round(z.real());
    const double r = z.real() - m;
    const double y = z.imag();
    const double sign = (static_cast<long long>(m) % 2 == 0) ? 1.0 : -1.0;
    const double pr = 3.14159265358979323846 * r;
    const double py = 3.14159265358979323846 * y;
    return sign * Complex(std::sin(pr) * std::cosh(py),
                          std::cos(pr) * std::sinh(py));
}

inline Complex cos_pi(const Complex& z) {
    const double m = std::round(z.real());
    const double r = z.real() - m;
    const double y = z.imag();
    const double sign = (static_cast<long long>(m) % 2 == 0) ? 1.0 : -1.0;
    const double pr = 3.14159265358979323846 * r;
    const double py = 3.14159265358979323846 * y;
    return sign * Complex(std::cos(pr) * std::cosh(py),
                          -std::sin(pr) * std::sinh(py));
}

} // namespace fracmat
