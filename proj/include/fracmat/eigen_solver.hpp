#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "fracmat/matrix.hpp"

namespace fracmat {

struct EigenDecomposition {
    std::vector<Complex> values; // sorted by (Re, Im) ascending
    CMatrix vectors;             // unit columns, values[i] <-> column i
};

namespace detail {

// Householder reduction to upper Hessenberg form (similarity, not stored).
inline CMatrix hessenberg(CMatrix h) {
    const std::size_t n = h.dim();
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double xnorm = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) xnorm += std::norm(h(i, k));
        xnorm = std::sqrt(xnorm);
        if (xnorm <= 1e-300) continue;
        const Complex x0 = h(k + 1, k);
        const Complex phase =
            std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex(1.0, 0.0);
        const Complex alpha = -phase * xnorm;
        CVector v(n, Complex(0.0, 0.0));
        for (std::size_t i = k + 1; i < n; ++i) v[i] = h(i, k);
        v[k + 1] -= alpha;
        const double vnorm = norm2(v);
        if (vnorm <= 1e-300) continue;
        for (auto& c : v) c /= vnorm;
        // H <- (I - 2 v v^H) H
        for (std::size_t j = 0; j < n; ++j) {
            Complex s(0.0, 0.0);
            for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * h(i, j);
            s *= 2.0;
            for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= s * v[i];
        }
        // H <- H (I - 2 v v^H)
        for (std::size_t i = 0; i < n; ++i) {
            Complex s(0.0, 0.0);
            for (std::size_t j = k + 1; j < n; ++j) s += h(i, j) * v[j];
            s *= 2.0;
            for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= s * std::conj(v[j]);
        }
        h(k + 1, k) = alpha;
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = Complex(0.0, 0.0);
    }
    return h;
}

// Eigenvalue of the trailing 2x2 of the active block closest to the corner.
inline Complex wilkinson_shift(const CMatrix& h, std::size_t hi) {
    const Complex a = h(hi - 1, hi - 1);
    const Complex b = h(hi - 1, hi);
    const Complex c = h(hi, hi - 1);
    const Complex d = h(hi, hi);
    const Complex half = 0.5 * (a - d);
    const Complex disc = std::sqrt(half * half + b * c);
    const Complex r1 = d + half + disc;
    const Complex r2 = d + half - disc;
    return std::abs(r1 - d) < std::abs(r2 - d) ? r1 : r2;
}

// Explicit single-shift QR sweep on the active Hessenberg block [lo, hi]
// using complex Givens rotations.
inline void qr_sweep(CMatrix& h, std::size_t lo, std::size_t hi, const Complex& shift) {
    const std::size_t n = h.dim();
    for (std::size_t i = lo; i <= hi; ++i) h(i, i) -= shift;
    std::vector<Complex> cs(hi), sn(hi);
    for (std::size_t k = lo; k < hi; ++k) {
        const Complex a = h(k, k);
        const Complex b = h(k + 1, k);
        const double r = std::sqrt(std::norm(a) + std::norm(b));
        Complex c(1.0, 0.0), s(0.0, 0.0);
        if (r > 0.0) {
            c = a / r;
            s = b / r;
        }
        cs[k] = c;
        sn[k] = s;
        for (std::size_t j = k; j < n; ++j) {
            const Complex t1 = h(k, j);
            const Complex t2 = h(k + 1, j);
            h(k, j) = std::conj(c) * t1 + std::conj(s) * t2;
            h(k + 1, j) = -s * t1 + c * t2;
        }
    }
    for (std::size_t k = lo; k < hi; ++k) {
        const std::size_t top = std::min(k + 2, hi);
        for (std::size_t i = 0; i <= top; ++i) {
            const Complex t1 = h(i, k);
            const Complex t2 = h(i, k + 1);
            h(i, k) = cs[k] * t1 + sn[k] * t2;
            h(i, k + 1) = -std::conj(sn[k]) * t1 + std::conj(cs[k]) * t2;
        }
    }
    for (std::size_t i = lo; i <= hi; ++i) h(i, i) += shift;
}

inline std::vector<Complex> qr_eigenvalues(CMatrix h) {
    const std::size_t n = h.dim();
    std::vector<Complex> values;
    values.reserve(n);
    if (n == 0) return values;
    if (n == 1) return {h(0, 0)};
    const double eps = 1e-15;
    std::size_t hi = n - 1;
    long stagnation = 0;
    long budget = static_cast<long>(60 * n);
    while (true) {
        // deflate negligible subdiagonals
        for (std::size_t l = 1; l <= hi; ++l)
            if (std::abs(h(l, l - 1)) <=
                eps * (std::abs(h(l - 1, l - 1)) + std::abs(h(l, l))))
                h(l, l - 1) = Complex(0.0, 0.0);
        while (hi > 0 && h(hi, hi - 1) == Complex(0.0, 0.0)) {
            values.push_back(h(hi, hi));
            --hi;
            stagnation = 0;
            if (hi == 0) break;
        }
        if (hi == 0) {
            values.push_back(h(0, 0));
            break;
        }
        std::size_t lo = hi;
        while (lo > 0 && h(lo, lo - 1) != Complex(0.0, 0.0)) --lo;
        Complex shift = wilkinson_shift(h, hi);
        if (++stagnation % 12 == 0) // rare cycling escape
            shift = h(hi, hi) + Complex(1.5 * std::abs(h(hi, hi - 1)),
                                        0.5 * std::abs(h(hi, hi - 1)));
        qr_sweep(h, lo, hi, shift);
        if (--budget < 0)
            throw convergence_error("eigen solver: QR iteration cap exceeded");
    }
    std::sort(values.begin(), values.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return values;
}

} // namespace detail

// Hessenberg reduction, shifted QR for the eigenvalues, inverse iteration on
// the original matrix for the eigenvectors. Repeated eigenvalues get
// perturbed shifts and fresh deterministic starts, so semisimple eigenspaces
// come out with independent columns; defective inputs simply repeat the
// eigenvector they have.
inline EigenDecomposition eigen_decompose(const CMatrix& a) {
    const std::size_t n = a.dim();
    if (n == 0 || n > 32)
        throw precondition_error("eigen_decompose: dimension must be 1..32");
    if (!a.all_finite()) throw domain_error("eigen_decompose: non-finite entries");
    EigenDecomposition out;
    out.values = detail::qr_eigenvalues(detail::hessenberg(a));
    out.vectors = CMatrix(n);
    const double scale = std::max(a.frobenius_norm(), 1e-300);
    std::mt19937 rng(0x5eed1234u);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t duplicates = 0;
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(out.values[j] - out.values[i]) <= 1e-8 * scale) ++duplicates;
        CVector v(n);
        double best_residual = 1e300;
        CVector best(n, Complex(0.0, 0.0));
        for (int attempt = 0; attempt < 4; ++attempt) {
            const double pert = 1e-11 * scale *
                                (1.0 + static_cast<double>(duplicates) +
                                 31.0 * static_cast<double>(attempt));
            const Complex mu = out.values[i] + Complex(pert, 0.5 * pert);
            CMatrix shifted = a;
            for (std::size_t d = 0; d < n; ++d) shifted(d, d) -= mu;
            const LUDecomposition lu(shifted);
            if (lu.singular()) continue;
            for (auto& c : v) c = Complex(u(rng), u(rng));
            // one solve usually lands on the wanted direction; extra steps can
            // wobble at the amplified rounding level, so keep the best iterate
            for (int iter = 0; iter < 3; ++iter) {
                v = lu.solve(v);
                const double nrm = norm2(v);
                if (!(nrm > 0.0) || !std::isfinite(nrm)) break;
                for (auto& c : v) c /= nrm;
                CVector av = a * v;
                for (std::size_t r = 0; r < n; ++r) av[r] -= out.values[i] * v[r];
                const double residual = norm2(av);
                if (residual < best_residual) {
                    best_residual = residual;
                    best = v;
                }
            }
            if (best_residual <= 1e-10 * scale) break;
        }
        if (best_residual > 1e-6 * scale)
            throw convergence_error("eigen_decompose: inverse iteration failed");
        // fix the phase so results are reproducible: largest entry real positive
        std::size_t argmax = 0;
        for (std::size_t r = 1; r < n; ++r)
            if (std::abs(best[r]) > std::abs(best[argmax])) argmax = r;
        if (std::abs(best[argmax]) > 0.0) {
            const Complex ph = std::abs(best[argmax]) / best[argmax];
            for (auto& c : best) c *= ph;
        }
        out.vectors.set_column(i, best);
    }
    return out;
}

} // namespace fracmat
