#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "fracmat/eigen_solver.hpp"
#include "fracmat/matrix.hpp"
#include "fracmat/svd.hpp"

namespace fracmat {

// Eigenvalues within cluster_tol * |A|_F count as one distinct eigenvalue.
inline constexpr double eigenvalue_cluster_tol = 1e-8;

enum class MatrixClass { Normal, DiagonalizableOnly, JordanOnly };

struct Classification {
    MatrixClass kind = MatrixClass::Normal;
    double commutator_residual = 0.0; // |AA* - A*A|_F / |A|_F^2
    double basis_condition = 1.0;     // eigenvector-basis condition estimate
    double tol = 0.0;                 // the tolerance the decision used
};

struct EigenCluster {
    Complex rep;                      // mean of the cluster members
    std::vector<std::size_t> members; // indices into the sorted eigenvalue list
    double spread = 0.0;              // max member distance to rep
};

struct SpectralData {
    std::vector<Complex> distinct_eigenvalues;
    std::vector<std::size_t> multiplicities;
    std::vector<CMatrix> projectors; // Frobenius covariants, same order
    CMatrix similarity;              // eigenspace bases, cluster by cluster
    std::vector<Complex> column_eigenvalues; // eigenvalue per similarity column
    double similarity_condition = 1.0;
    bool similarity_unitary = false;
};

struct JordanSegment {
    Complex eigenvalue;
    std::size_t size = 1;
};

struct JordanData {
    CMatrix similarity;
    std::vector<JordanSegment> segments;
    double similarity_condition = 1.0;
};

namespace detail {

inline std::vector<EigenCluster> cluster_eigenvalues(const std::vector<Complex>& values,
                                                     double tol) {
    std::vector<EigenCluster> clusters;
    for (std::size_t i = 0; i < values.size(); ++i) {
        EigenCluster* home = nullptr;
        for (auto& c : clusters)
            if (std::abs(values[i] - c.rep) <= tol) {
                home = &c;
                break;
            }
        if (!home) {
            clusters.push_back(EigenCluster{values[i], {i}, 0.0});
            continue;
        }
        home->members.push_back(i);
        Complex mean(0.0, 0.0);
        for (std::size_t m : home->members) mean += values[m];
        home->rep = mean / static_cast<double>(home->members.size());
    }
    for (auto& c : clusters)
        for (std::size_t m : c.members)
            c.spread = std::max(c.spread, std::abs(values[m] - c.rep));
    std::sort(clusters.begin(), clusters.end(),
              [](const EigenCluster& a, const EigenCluster& b) {
                  if (a.rep.real() != b.rep.real()) return a.rep.real() < b.rep.real();
                  return a.rep.imag() < b.rep.imag();
              });
    return clusters;
}

// Null-space dimension with an ambiguity guard: refuse the decision when
// singular values straddle the threshold within a factor of 10.
inline std::size_t guarded_null_dimension(const CMatrix& m, double tol, double scale) {
    const SVDResult s = svd(m);
    const double top = std::max(s.sigma.front(), 1e-300);
    const double threshold = std::max(tol * top, 1e-14 * scale);
    double below_max = 0.0, above_min = 1e300;
    std::size_t rank = 0;
    for (double sv : s.sigma) {
        if (sv > threshold) {
            ++rank;
            above_min = std::min(above_min, sv);
        } else {
            below_max = std::max(below_max, sv);
        }
    }
    if (rank < m.dim() && rank > 0 && below_max > 0.0 && above_min / below_max < 10.0)
        throw decomposition_error(
            "jordan_decompose: ambiguous rank (singular values straddle the "
            "threshold)");
    return m.dim() - rank;
}

// Orthonormal basis of the eigenspace of the (clustered) eigenvalue.
inline std::vector<CVector> eigenspace_basis(const CMatrix& a, const Complex& rep,
                                             double sv_threshold,
                                             std::size_t* rank_out = nullptr) {
    const std::size_t n = a.dim();
    CMatrix shifted = a;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= rep;
    const SVDResult s = svd(shifted);
    std::size_t rank = rank_from_singular_values(s.sigma, sv_threshold);
    if (rank_out) *rank_out = rank;
    std::vector<CVector> basis;
    for (std::size_t j = rank; j < n; ++j) basis.push_back(s.v.column(j));
    return basis;
}

} // namespace detail

// Normal / diagonalizable / Jordan-only decision. Always resolves.
inline Classification classify(const CMatrix& a, double tol = 1e-10) {
    const std::size_t n = a.dim();
    Classification out;
    out.tol = tol;
    const double scale = a.frobenius_norm();
    if (scale == 0.0) return out; // the zero matrix is normal
    const CMatrix commutator = a * a.adjoint() - a.adjoint() * a;
    out.commutator_residual = commutator.frobenius_norm() / (scale * scale);
    if (out.commutator_residual <= tol) return out;

    const EigenDecomposition eig = eigen_decompose(a);
    const double cluster_tol = eigenvalue_cluster_tol * scale;
    const auto clusters = detail::cluster_eigenvalues(eig.values, cluster_tol);
    bool semisimple = true;
    CMatrix basis(n);
    std::size_t col = 0;
    for (const auto& c : clusters) {
        std::size_t rank = 0;
        const auto space =
            detail::eigenspace_basis(a, c.rep, 10.0 * cluster_tol, &rank);
        if (space.size() < c.members.size()) {
            semisimple = false;
            break;
        }
        for (std::size_t j = 0; j < c.members.size(); ++j)
            basis.set_column(col++, space[j]);
    }
    if (semisimple) {
        out.basis_condition = condition_number(basis);
        if (out.basis_condition <= 1e8) {
            out.kind = MatrixClass::DiagonalizableOnly;
            return out;
        }
    }
    out.kind = MatrixClass::JordanOnly;
    return out;
}

// Frobenius covariants G_i = prod_{j != i} (A - l_j I) / (l_i - l_j) over the
// distinct eigenvalues, with the eigenspace similarity alongside.
inline SpectralData spectral_projectors(const CMatrix& a) {
    const std::size_t n = a.dim();
    const double scale = a.frobenius_norm();
    SpectralData out;
    if (scale == 0.0) { // zero matrix: single eigenvalue 0, projector I
        out.distinct_eigenvalues = {Complex(0.0, 0.0)};
        out.multiplicities = {n};
        out.projectors = {CMatrix::identity(n)};
        out.similarity = CMatrix::identity(n);
        out.column_eigenvalues.assign(n, Complex(0.0, 0.0));
        out.similarity_unitary = true;
        return out;
    }
    const EigenDecomposition eig = eigen_decompose(a);
    const double cluster_tol = eigenvalue_cluster_tol * scale;
    const auto clusters = detail::cluster_eigenvalues(eig.values, cluster_tol);

    out.similarity = CMatrix(n);
    std::size_t col = 0;
    for (const auto& c : clusters) {
        std::size_t rank = 0;
        const auto space =
            detail::eigenspace_basis(a, c.rep, 10.0 * cluster_tol, &rank);
        if (space.size() < c.members.size()) {
            if (c.spread > 1e-11 * scale)
                throw decomposition_error(
                    "spectral_projectors: clustered eigenvalues with distinct "
                    "eigenvectors (ambiguous spectrum)");
            throw decomposition_error("spectral_projectors: defective matrix");
        }
        out.distinct_eigenvalues.push_back(c.rep);
        out.multiplicities.push_back(c.members.size());
        for (std::size_t j = 0; j < c.members.size(); ++j) {
            out.similarity.set_column(col++, space[j]);
            out.column_eigenvalues.push_back(c.rep);
        }
    }

    const std::size_t k = out.distinct_eigenvalues.size();
    for (std::size_t i = 0; i < k; ++i) {
        CMatrix g = CMatrix::identity(n);
        for (std::size_t j = 0; j < k; ++j) {
            if (j == i) continue;
            CMatrix factor = a;
            for (std::size_t d = 0; d < n; ++d)
                factor(d, d) -= out.distinct_eigenvalues[j];
            factor *= Complex(1.0, 0.0) /
                      (out.distinct_eigenvalues[i] - out.distinct_eigenvalues[j]);
            g = g * factor;
        }
        out.projectors.push_back(std::move(g));
    }
    out.similarity_condition = condition_number(out.similarity);
    out.similarity_unitary =
        (out.similarity.adjoint() * out.similarity - CMatrix::identity(n))
            .frobenius_norm() <= 1e-10 * static_cast<double>(n);
    return out;
}

inline CMatrix jordan_matrix_from_segments(const std::vector<JordanSegment>& segments) {
    std::size_t n = 0;
    for (const auto& s : segments) n += s.size;
    CMatrix j(n);
    std::size_t at = 0;
    for (const auto& s : segments) {
        for (std::size_t r = 0; r < s.size; ++r) {
            j(at + r, at + r) = s.eigenvalue;
            if (r + 1 < s.size) j(at + r, at + r + 1) = Complex(1.0, 0.0);
        }
        at += s.size;
    }
    return j;
}

namespace detail {

// One structure hypothesis at a fixed eigenvalue clustering radius.
inline JordanData jordan_attempt(const CMatrix& a, const EigenDecomposition& eig,
                                 double tol, double cluster_tol) {
    const std::size_t n = a.dim();
    const double scale = a.frobenius_norm();
    JordanData out;
    const auto clusters = detail::cluster_eigenvalues(eig.values, cluster_tol);

    auto guarded_null_dim = [&](const CMatrix& m) -> std::size_t {
        return detail::guarded_null_dimension(m, tol, scale);
    };

    std::size_t col = 0;
    out.similarity = CMatrix(n);
    for (const auto& c : clusters) {
        const std::size_t mult = c.members.size();
        CMatrix m = a;
        for (std::size_t d = 0; d < n; ++d) m(d, d) -= c.rep;

        // null-space dimensions of successive powers give the Weyr data
        std::vector<std::size_t> null_dims{0};
        std::vector<CMatrix> powers{CMatrix::identity(n)};
        CMatrix mp = CMatrix::identity(n);
        std::size_t kmax = 0;
        for (std::size_t k = 1; k <= mult; ++k) {
            mp = mp * m;
            powers.push_back(mp);
            const std::size_t d = guarded_null_dim(mp);
            null_dims.push_back(d);
            if (d >= mult) {
                kmax = k;
                break;
            }
            if (k == mult)
                throw decomposition_error(
                    "jordan_decompose: generalized eigenspace short of the "
                    "algebraic multiplicity");
        }
        if (null_dims.back() > mult)
            throw decomposition_error(
                "jordan_decompose: rank threshold absorbed foreign directions");

        // chains, longest first
        struct Chain {
            CVector top;
            std::size_t length;
        };
        std::vector<Chain> chains;
        std::vector<CVector> used; // orthonormal, spans what new tops must avoid
        auto add_used = [&](CVector v) {
            for (const auto& q : used) {
                const Complex proj = dot_conj(q, v);
                for (std::size_t r = 0; r < n; ++r) v[r] -= proj * q[r];
            }
            const double nrm = norm2(v);
            if (nrm > 1e-12) {
                for (auto& x : v) x /= nrm;
                used.push_back(std::move(v));
            }
        };
        for (std::size_t k = kmax; k >= 1; --k) {
            const std::size_t w_k = null_dims[k] - null_dims[k - 1];
            const std::size_t w_k1 =
                k + 1 <= kmax ? null_dims[k + 1] - null_dims[k] : 0;
            const std::size_t new_chains = w_k - w_k1;
            if (new_chains == 0) continue;
            // forbidden span: null(M^{k-1}) plus level-k members of longer chains
            used.clear();
            {
                const SVDResult s = svd(powers[k - 1]);
                const double top = std::max(s.sigma.front(), 1e-300);
                const double threshold = std::max(tol * top, 1e-14 * scale);
                const std::size_t rank = rank_from_singular_values(s.sigma, threshold);
                for (std::size_t j = rank; j < n; ++j) add_used(s.v.column(j));
            }
            for (const auto& ch : chains) {
                CVector level = ch.top;
                for (std::size_t step = 0; step + k < ch.length; ++step)
                    level = m * level;
                add_used(level);
            }
            // candidates: null(M^k)
            const SVDResult s = svd(powers[k]);
            const double top = std::max(s.sigma.front(), 1e-300);
            const double threshold = std::max(tol * top, 1e-14 * scale);
            const std::size_t rank = rank_from_singular_values(s.sigma, threshold);
            std::size_t found = 0;
            for (std::size_t j = rank; j < n && found < new_chains; ++j) {
                CVector cand = s.v.column(j);
                for (const auto& q : used) {
                    const Complex proj = dot_conj(q, cand);
                    for (std::size_t r = 0; r < n; ++r) cand[r] -= proj * q[r];
                }
                const double nrm = norm2(cand);
                if (nrm < 1e-6) continue;
                for (auto& x : cand) x /= nrm;
                chains.push_back(Chain{cand, k});
                add_used(cand);
                ++found;
            }
            if (found < new_chains)
                throw decomposition_error(
                    "jordan_decompose: could not complete a generalized "
                    "eigenvector chain");
        }

        for (const auto& ch : chains) {
            // columns M^{L-1} v, ..., M v, v
            std::vector<CVector> members{ch.top};
            for (std::size_t step = 1; step < ch.length; ++step)
                members.push_back(m * members.back());
            for (std::size_t step = 0; step < ch.length; ++step)
                out.similarity.set_column(col++, members[ch.length - 1 - step]);
            out.segments.push_back(JordanSegment{c.rep, ch.length});
        }
    }

    out.similarity_condition = condition_number(out.similarity);
    const CMatrix j = jordan_matrix_from_segments(out.segments);
    const CMatrix recon = out.similarity * j * inverse(out.similarity);
    // strict residual: the right structure reconstructs at rounding level,
    // a mistaken one misses by orders of magnitude
    if ((recon - a).frobenius_norm() > std::max(tol, 1e-8) * scale * 10.0)
        throw decomposition_error("jordan_decompose: reconstruction check failed");
    return out;
}

} // namespace detail

// Jordan decomposition by generalized-eigenvector chains; n <= 8 because the
// structure decision is discontinuous in the entries. Rank decisions whose
// singular values straddle the threshold within a factor of 10 are refused.
// The eigenvalues of a defective block of size s are computed with an error
// of roughly eps^(1/s), far beyond the nominal clustering radius, so the
// radius escalates until a hypothesis survives the reconstruction check.
inline JordanData jordan_decompose(const CMatrix& a, double tol = 1e-8) {
    const std::size_t n = a.dim();
    if (n == 0 || n > 8)
        throw precondition_error("jordan_decompose: dimension must be 1..8");
    const double scale = a.frobenius_norm();
    if (scale == 0.0) {
        JordanData out;
        out.similarity = CMatrix::identity(n);
        out.segments.assign(n, JordanSegment{Complex(0.0, 0.0), 1});
        return out;
    }
    const EigenDecomposition eig = eigen_decompose(a);
    std::exception_ptr last;
    for (double widen : {1.0, 1e2, 1e4}) {
        try {
            return detail::jordan_attempt(a, eig, tol,
                                          eigenvalue_cluster_tol * scale * widen);
        } catch (const decomposition_error&) {
            last = std::current_exception();
        }
    }
    std::rethrow_exception(last);
}

} // namespace fracmat
