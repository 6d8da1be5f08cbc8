#pragma once

#include <cmath>
#include <initializer_list>
#include <utility>
#include <vector>

#include "fracmat/complex_scalar.hpp"
#include "fracmat/errors.hpp"

namespace fracmat {

using CVector = std::vector<Complex>;

// Square complex matrix, row-major.
class CMatrix {
public:
    CMatrix() = default;
    explicit CMatrix(std::size_t n) : n_(n), e_(n * n) {}

    CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
        n_ = rows.size();
        e_.reserve(n_ * n_);
        for (const auto& row : rows) {
            if (row.size() != n_) throw domain_error("CMatrix: ragged initializer");
            e_.insert(e_.end(), row.begin(), row.end());
        }
    }

    static CMatrix identity(std::size_t n) {
        CMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = Complex(1.0, 0.0);
        return m;
    }

    std::size_t dim() const { return n_; }

    Complex& operator()(std::size_t i, std::size_t j) { return e_[i * n_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return e_[i * n_ + j]; }

    CMatrix& operator+=(const CMatrix& o) {
        require_same_dim(o);
        for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
        return *this;
    }
    CMatrix& operator-=(const CMatrix& o) {
        require_same_dim(o);
        for (std::size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
        return *this;
    }
    CMatrix& operator*=(const Complex& c) {
        for (auto& v : e_) v *= c;
        return *this;
    }

    friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
    friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
    friend CMatrix operator*(CMatrix a, const Complex& c) { return a *= c; }
    friend CMatrix operator*(const Complex& c, CMatrix a) { return a *= c; }

    friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
        a.require_same_dim(b);
        const std::size_t n = a.n_;
        CMatrix r(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                const Complex aik = a(i, k);
                if (aik == Complex(0.0, 0.0)) continue;
                for (std::size_t j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }

    friend CVector operator*(const CMatrix& a, const CVector& x) {
        if (x.size() != a.n_) throw domain_error("CMatrix: dimension mismatch");
        CVector y(a.n_, Complex(0.0, 0.0));
        for (std::size_t i = 0; i < a.n_; ++i)
            for (std::size_t j = 0; j < a.n_; ++j) y[i] += a(i, j) * x[j];
        return y;
    }

    CMatrix transpose() const {
        CMatrix r(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    CMatrix adjoint() const {
        CMatrix r(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    Complex trace() const {
        Complex t(0.0, 0.0);
        for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& v : e_) s += std::norm(v);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : e_) m = std::max(m, std::abs(v));
        return m;
    }

    bool all_finite() const {
        for (const auto& v : e_)
            if (!is_finite(v)) return false;
        return true;
    }

    CVector column(std::size_t j) const {
        CVector c(n_);
        for (std::size_t i = 0; i < n_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    void set_column(std::size_t j, const CVector& c) {
        for (std::size_t i = 0; i < n_; ++i) (*this)(i, j) = c[i];
    }

    void require_same_dim(const CMatrix& o) const {
        if (n_ != o.n_) throw domain_error("CMatrix: dimension mismatch");
    }

private:
    std::size_t n_ = 0;
    std::vector<Complex> e_;
};

inline Complex dot_conj(const CVector& a, const CVector& b) {
    Complex s(0.0, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

inline double norm2(const CVector& a) {
    double s = 0.0;
    for (const auto& v : a) s += std::norm(v);
    return std::sqrt(s);
}

// LU decomposition with partial pivoting; factors stored packed.
class LUDecomposition {
public:
    explicit LUDecomposition(CMatrix a) : lu_(std::move(a)), perm_(lu_.dim()) {
        const std::size_t n = lu_.dim();
        for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t pivot = k;
            double best = std::abs(lu_(k, k));
            for (std::size_t i = k + 1; i < n; ++i)
                if (std::abs(lu_(i, k)) > best) {
                    best = std::abs(lu_(i, k));
                    pivot = i;
                }
            if (pivot != k) {
                for (std::size_t j = 0; j < n; ++j)
                    std::swap(lu_(k, j), lu_(pivot, j));
                std::swap(perm_[k], perm_[pivot]);
            }
            if (best == 0.0) {
                singular_ = true;
                continue;
            }
            for (std::size_t i = k + 1; i < n; ++i) {
                lu_(i, k) /= lu_(k, k);
                const Complex m = lu_(i, k);
                for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= m * lu_(k, j);
            }
        }
    }

    bool singular() const { return singular_; }

    CVector solve(const CVector& b) const {
        if (singular_) throw decomposition_error("LU solve: singular matrix");
        const std::size_t n = lu_.dim();
        CVector y(n);
        for (std::size_t i = 0; i < n; ++i) {
            Complex s = b[perm_[i]];
            for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * y[j];
            y[i] = s;
        }
        for (std::size_t ii = n; ii-- > 0;) {
            Complex s = y[ii];
            for (std::size_t j = ii + 1; j < n; ++j) s -= lu_(ii, j) * y[j];
            y[ii] = s / lu_(ii, ii);
        }
        return y;
    }

private:
    CMatrix lu_;
    std::vector<std::size_t> perm_;
    bool singular_ = false;
};

inline CMatrix inverse(const CMatrix& a) {
    const std::size_t n = a.dim();
    const LUDecomposition lu(a);
    CMatrix inv(n);
    CVector e(n, Complex(0.0, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = Complex(1.0, 0.0);
        inv.set_column(j, lu.solve(e));
        e[j] = Complex(0.0, 0.0);
    }
    return inv;
}

} // namespace fracmat
