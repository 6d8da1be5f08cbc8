#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "fracmat/matrix.hpp"

namespace fracmat {

// A = U diag(sigma) V^*, singular values sorted descending.
struct SVDResult {
    CMatrix u;
    std::vector<double> sigma;
    CMatrix v;
};

// One-sided Jacobi: rotate column pairs of a working copy until they are
// mutually orthogonal, accumulating the rotations in V. Slow but accurate,
// which is the right trade for rank decisions at n <= 32.
inline SVDResult svd(const CMatrix& a, int max_sweeps = 60) {
    const std::size_t n = a.dim();
    CMatrix b = a;
    CMatrix v = CMatrix::identity(n);
    const double eps = 1e-15;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                Complex g(0.0, 0.0);
                double aii = 0.0, ajj = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    g += std::conj(b(r, i)) * b(r, j);
                    aii += std::norm(b(r, i));
                    ajj += std::norm(b(r, j));
                }
                if (std::abs(g) <= eps * std::sqrt(aii * ajj) || std::abs(g) == 0.0)
                    continue;
                rotated = true;
                // phase-align the column pair, then a real Jacobi rotation
                const Complex phase = g / std::abs(g);
                const double tau = (ajj - aii) / (2.0 * std::abs(g));
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                for (std::size_t r = 0; r < n; ++r) {
                    const Complex bi = b(r, i);
                    const Complex bj = b(r, j);
                    b(r, i) = cs * bi - sn * std::conj(phase) * bj;
                    b(r, j) = sn * phase * bi + cs * bj;
                    const Complex vi = v(r, i);
                    const Complex vj = v(r, j);
                    v(r, i) = cs * vi - sn * std::conj(phase) * vj;
                    v(r, j) = sn * phase * vi + cs * vj;
                }
            }
        }
        if (!rotated) break;
        if (sweep == max_sweeps - 1)
            throw convergence_error("svd: Jacobi sweeps did not converge");
    }

    std::vector<double> sigma(n);
    CMatrix u(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r) s += std::norm(b(r, j));
        sigma[j] = std::sqrt(s);
    }
    // sort descending, permuting U's future columns and V together
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });
    CMatrix bs(n), vs(n);
    std::vector<double> ss(n);
    for (std::size_t j = 0; j < n; ++j) {
        ss[j] = sigma[order[j]];
        bs.set_column(j, b.column(order[j]));
        vs.set_column(j, v.column(order[j]));
    }
    // normalized columns give U; vanished columns are completed to an
    // orthonormal basis from coordinate vectors
    for (std::size_t j = 0; j < n; ++j) {
        CVector c = bs.column(j);
        if (ss[j] > 1e-300) {
            for (auto& x : c) x /= ss[j];
        } else {
            for (std::size_t seed = 0; seed < n; ++seed) {
                CVector cand(n, Complex(0.0, 0.0));
                cand[seed] = Complex(1.0, 0.0);
                for (std::size_t k = 0; k < j; ++k) {
                    const CVector uk = u.column(k);
                    const Complex proj = dot_conj(uk, cand);
                    for (std::size_t r = 0; r < n; ++r) cand[r] -= proj * uk[r];
                }
                const double nrm = norm2(cand);
                if (nrm > 0.5) {
                    for (auto& x : cand) x /= nrm;
                    c = cand;
                    break;
                }
            }
        }
        u.set_column(j, c);
    }
    return SVDResult{std::move(u), std::move(ss), std::move(vs)};
}

inline std::size_t rank_from_singular_values(const std::vector<double>& sigma,
                                             double threshold) {
    std::size_t r = 0;
    for (double s : sigma)
        if (s > threshold) ++r;
    return r;
}

// Columns of V spanning the numerical null space (sigma <= threshold).
inline CMatrix null_space_basis(const SVDResult& s, double threshold,
                                std::size_t* rank_out = nullptr) {
    const std::size_t n = s.v.dim();
    const std::size_t r = rank_from_singular_values(s.sigma, threshold);
    if (rank_out) *rank_out = r;
    CMatrix basis(n); // only the first n-r columns are meaningful
    for (std::size_t j = r; j < n; ++j) basis.set_column(j - r, s.v.column(j));
    return basis;
}

inline double condition_number(const CMatrix& a) {
    const SVDResult s = svd(a);
    const double lo = s.sigma.back();
    if (lo <= 0.0) return std::numeric_limits<double>::infinity();
    return s.sigma.front() / lo;
}

} // namespace fracmat
