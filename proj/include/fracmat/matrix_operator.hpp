#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fracmat/decomposition.hpp"
#include "fracmat/differint.hpp"
#include "fracmat/decomposition.hpp"

namespace fracmat {

// n x n array of expressions sharing one base point.
class MatrixExprFunction {
public:
    MatrixExprFunction() = default;
    MatrixExprFunction(std::size_t n, double base_point)
        : n_(n), base_point_(base_point), entries_(n * n, Expression(base_point)) {}

    static MatrixExprFunction scaled_identity(std::size_t n, const Expression& f) {
        MatrixExprFunction m(n, f.base_point());
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = f;
        return m;
    }

    std::size_t dim() const { return n_; }
    double base_point() const { return base_point_; }

    Expression& at(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }
    const Expression& at(std::size_t i, std::size_t j) const {
        return entries_[i * n_ + j];
    }

    CMatrix evaluate(double x) const {
        CMatrix m(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) m(i, j) = at(i, j).evaluate(x);
        return m;
    }

    MatrixExprFunction transpose() const {
        MatrixExprFunction t(n_, base_point_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    MatrixExprFunction& operator-=(const MatrixExprFunction& o) {
        for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
        return *this;
    }
    friend MatrixExprFunction operator-(MatrixExprFunction a,
                                        const MatrixExprFunction& b) {
        return a -= b;
    }

private:
    std::size_t n_ = 0;
    double base_point_ = 0.0;
    std::vector<Expression> entries_;
};

struct VectorExprFunction {
    double base_point = 0.0;
    std::vector<Expression> entries;
};

// Symbolic distance: the largest coefficient discrepancy over all entries.
inline double matrix_expr_distance(const MatrixExprFunction& a,
                                   const MatrixExprFunction& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            d = std::max(d, expr_distance(a.at(i, j), b.at(i, j)));
    return d;
}

// The operator-equality grid from the design contract: x in {0.5, 0.75, ..., 2.0}.
inline std::vector<double> standard_grid() {
    std::vector<double> g;
    for (double x = 0.5; x <= 2.0 + 1e-9; x += 0.25) g.push_back(x);
    return g;
}

inline double grid_residual(const MatrixExprFunction& a, const MatrixExprFunction& b) {
    double r = 0.0;
    for (double x : standard_grid()) r = std::max(r, (a.evaluate(x) - b.evaluate(x)).max_abs());
    return r;
}

// Complex-weighted combination of expression matrices: (w * m) then (m * w).
inline MatrixExprFunction weight_left(const CMatrix& w, const MatrixExprFunction& m) {
    const std::size_t n = m.dim();
    MatrixExprFunction r(n, m.base_point());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Expression acc(m.base_point());
            for (std::size_t k = 0; k < n; ++k) {
                if (w(i, k) == Complex(0.0, 0.0)) continue;
                acc += w(i, k) * m.at(k, j);
            }
            r.at(i, j) = std::move(acc);
        }
    return r;
}

inline MatrixExprFunction weight_right(const MatrixExprFunction& m, const CMatrix& w) {
    const std::size_t n = m.dim();
    MatrixExprFunction r(n, m.base_point());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Expression acc(m.base_point());
            for (std::size_t k = 0; k < n; ++k) {
                if (w(k, j) == Complex(0.0, 0.0)) continue;
                acc += w(k, j) * m.at(i, k);
            }
            r.at(i, j) = std::move(acc);
        }
    return r;
}

// The matrix-order differintegral: the order matrix together with the
// realization its classification selects. Diagonalizable orders carry both
// the similarity and the spectral form; defective orders carry Jordan data.
class MatrixOrderOperator {
public:
    MatrixOrderOperator(CMatrix order, double base_point, Classification cls,
                        std::optional<SpectralData> spectral,
                        std::optional<JordanData> jordan)
        : order_(std::move(order)), base_point_(base_point), cls_(cls),
          spectral_(std::move(spectral)), jordan_(std::move(jordan)) {}

    const CMatrix& order() const { return order_; }
    double base_point() const { return base_point_; }
    std::size_t dim() const { return order_.dim(); }
    const Classification& classification() const { return cls_; }
    bool is_jordan() const { return jordan_.has_value(); }
    const SpectralData& spectral() const {
        if (!spectral_) throw precondition_error("operator has no spectral realization");
        return *spectral_;
    }
    const JordanData& jordan() const {
        if (!jordan_) throw precondition_error("operator has no Jordan realization");
        return *jordan_;
    }

    double realization_condition() const {
        return jordan_ ? jordan_->similarity_condition : spectral_->similarity_condition;
    }

private:
    CMatrix order_;
    double base_point_;
    Classification cls_;
    std::optional<SpectralData> spectral_;
    std::optional<JordanData> jordan_;
};

inline MatrixOrderOperator build_operator(const CMatrix& order, double base_point) {
    if (!order.all_finite())
        throw domain_error("build_operator: non-finite order matrix");
    const Classification cls = classify(order);
    if (cls.kind == MatrixClass::JordanOnly) {
        JordanData j = jordan_decompose(order);
        bool has_block = false;
        for (const auto& seg : j.segments) has_block |= seg.size >= 2;
        if (!has_block)
            throw decomposition_error(
                "build_operator: Jordan realization without blocks of size >= 2");
        return MatrixOrderOperator(order, base_point, cls, std::nullopt, std::move(j));
    }
    return MatrixOrderOperator(order, base_point, cls, spectral_projectors(order),
                               std::nullopt);
}

namespace detail {

// Upper-triangular block of scalar actions for one Jordan segment: entry
// (r, r+k) holds the k-th order-derivative of the differintegral, over k!.
inline MatrixExprFunction jordan_block_action(const JordanData& jd, double base_point,
                                              const Expression& f) {
    std::size_t n = 0;
    for (const auto& seg : jd.segments) n += seg.size;
    MatrixExprFunction block(n, base_point);
    std::size_t at = 0;
    for (const auto& seg : jd.segments) {
        if (seg.size >= 2 && static_cast<int>(seg.size) - 1 > max_log_power)
            throw domain_error("apply: Jordan block size exceeds the depth cap 4");
        double factorial = 1.0;
        for (std::size_t k = 0; k < seg.size; ++k) {
            if (k > 0) factorial *= static_cast<double>(k);
            const Expression action =
                lambda_derivative(f, seg.eigenvalue, static_cast<int>(k)) *
                Complex(1.0 / factorial, 0.0);
            for (std::size_t r = 0; r + k < seg.size; ++r)
                block.at(at + r, at + r + k) = action;
        }
        at += seg.size;
    }
    return block;
}

} // namespace detail

// Spectral route (sum of projectors times scalar differintegrals) for
// diagonalizable orders, Jordan route otherwise.
inline MatrixExprFunction apply_scalar(const MatrixOrderOperator& op,
                                       const Expression& f) {
    if (f.base_point() != op.base_point())
        throw domain_error("apply_scalar: base-point mismatch");
    const std::size_t n = op.dim();
    if (op.is_jordan()) {
        const JordanData& jd = op.jordan();
        const MatrixExprFunction block =
            detail::jordan_block_action(jd, op.base_point(), f);
        return weight_right(weight_left(jd.similarity, block), inverse(jd.similarity));
    }
    const SpectralData& sd = op.spectral();
    MatrixExprFunction result(n, op.base_point());
    for (std::size_t i = 0; i < sd.distinct_eigenvalues.size(); ++i) {
        const Expression d = differint_expr(f, sd.distinct_eigenvalues[i]);
        if (d.is_zero()) continue;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) {
                if (sd.projectors[i](r, c) == Complex(0.0, 0.0)) continue;
                result.at(r, c) += sd.projectors[i](r, c) * d;
            }
    }
    return result;
}

// The general-similarity route P diag(D^{l_i}) P^{-1}, kept alongside the
// spectral route as a built-in cross-check for diagonalizable orders.
inline MatrixExprFunction apply_scalar_similarity(const MatrixOrderOperator& op,
                                                  const Expression& f) {
    const SpectralData& sd = op.spectral();
    const std::size_t n = op.dim();
    MatrixExprFunction diag(n, op.base_point());
    for (std::size_t i = 0; i < n; ++i)
        diag.at(i, i) = differint_expr(f, sd.column_eigenvalues[i]);
    return weight_right(weight_left(sd.similarity, diag), inverse(sd.similarity));
}

// Operator acting on a vector of expressions.
inline VectorExprFunction apply_vector(const MatrixOrderOperator& op,
                                       const VectorExprFunction& v) {
    const std::size_t n = op.dim();
    if (v.entries.size() != n) throw domain_error("apply_vector: dimension mismatch");
    for (const auto& e : v.entries)
        if (e.base_point() != op.base_point())
            throw domain_error("apply_vector: base-point mismatch");
    VectorExprFunction out{op.base_point(),
                           std::vector<Expression>(n, Expression(op.base_point()))};
    if (op.is_jordan()) {
        const JordanData& jd = op.jordan();
        const CMatrix pinv = inverse(jd.similarity);
        // w = P^{-1} v
        std::vector<Expression> w(n, Expression(op.base_point()));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) w[i] += pinv(i, j) * v.entries[j];
        // t = blockdiag(T) w
        std::vector<Expression> t(n, Expression(op.base_point()));
        std::size_t at = 0;
        for (const auto& seg : jd.segments) {
            double factorial = 1.0;
            std::vector<double> invfact{1.0};
            for (std::size_t k = 1; k < seg.size; ++k) {
                factorial *= static_cast<double>(k);
                invfact.push_back(1.0 / factorial);
            }
            for (std::size_t r = 0; r < seg.size; ++r)
                for (std::size_t k = 0; r + k < seg.size; ++k)
                    t[at + r] += Complex(invfact[k], 0.0) *
                                 lambda_derivative(w[at + r + k], seg.eigenvalue,
                                                   static_cast<int>(k));
            at += seg.size;
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out.entries[i] += jd.similarity(i, j) * t[j];
        return out;
    }
    const SpectralData& sd = op.spectral();
    for (std::size_t i = 0; i < sd.distinct_eigenvalues.size(); ++i) {
        std::vector<Expression> dv(n, Expression(op.base_point()));
        for (std::size_t j = 0; j < n; ++j)
            dv[j] = differint_expr(v.entries[j], sd.distinct_eigenvalues[i]);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) {
                if (sd.projectors[i](r, c) == Complex(0.0, 0.0)) continue;
                out.entries[r] += sd.projectors[i](r, c) * dv[c];
            }
    }
    return out;
}

// Operator applied entrywise to a matrix of expressions (column by column).
inline MatrixExprFunction apply_matrix(const MatrixOrderOperator& op,
                                       const MatrixExprFunction& m) {
    const std::size_t n = op.dim();
    if (m.dim() != n) throw domain_error("apply_matrix: dimension mismatch");
    MatrixExprFunction out(n, op.base_point());
    for (std::size_t c = 0; c < n; ++c) {
        VectorExprFunction col{op.base_point(), {}};
        col.entries.reserve(n);
        for (std::size_t r = 0; r < n; ++r) col.entries.push_back(m.at(r, c));
        const VectorExprFunction applied = apply_vector(op, col);
        for (std::size_t r = 0; r < n; ++r) out.at(r, c) = applied.entries[r];
    }
    return out;
}

// Literal sequential composition: the right operator acts first.
inline MatrixExprFunction compose_apply(const MatrixOrderOperator& op_a,
                                        const MatrixOrderOperator& op_b,
                                        const Expression& f) {
    if (op_a.base_point() != op_b.base_point())
        throw domain_error("compose_apply: base-point mismatch");
    if (op_a.dim() != op_b.dim())
        throw domain_error("compose_apply: dimension mismatch");
    return apply_matrix(op_a, apply_scalar(op_b, f));
}

// The spectral double sum over both projector families,
//   sum_i sum_j G_i H_j D^{l_i} D^{r_j} f,
// the expansion the sequential action must reproduce.
inline MatrixExprFunction compose_double_sum(const MatrixOrderOperator& op_a,
                                             const MatrixOrderOperator& op_b,
                                             const Expression& f) {
    const SpectralData& ga = op_a.spectral();
    const SpectralData& gb = op_b.spectral();
    const std::size_t n = op_a.dim();
    MatrixExprFunction out(n, op_a.base_point());
    for (std::size_t i = 0; i < ga.distinct_eigenvalues.size(); ++i)
        for (std::size_t j = 0; j < gb.distinct_eigenvalues.size(); ++j) {
            const Expression scalar = differint_expr(
                differint_expr(f, gb.distinct_eigenvalues[j]),
                ga.distinct_eigenvalues[i]);
            if (scalar.is_zero()) continue;
            const CMatrix w = ga.projectors[i] * gb.projectors[j];
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = 0; c < n; ++c) {
                    if (w(r, c) == Complex(0.0, 0.0)) continue;
                    out.at(r, c) += w(r, c) * scalar;
                }
        }
    return out;
}

// Both routes of the integer-shift law: the classical m-fold derivative of
// the applied operator, and the operator of order A + mI applied directly.
struct ShiftPair {
    MatrixExprFunction derivative_path;
    MatrixExprFunction shifted_operator_path;
};

inline ShiftPair shift_by_integer(const MatrixOrderOperator& op, int m,
                                  const Expression& f) {
    if (m < 0) throw domain_error("shift_by_integer: m must be whole");
    MatrixExprFunction lhs = apply_scalar(op, f);
    for (std::size_t i = 0; i < lhs.dim(); ++i)
        for (std::size_t j = 0; j < lhs.dim(); ++j)
            lhs.at(i, j) = integer_derivative(lhs.at(i, j), m);
    CMatrix shifted = op.order();
    for (std::size_t d = 0; d < shifted.dim(); ++d)
        shifted(d, d) += static_cast<double>(m);
    const MatrixOrderOperator op_shifted = build_operator(shifted, op.base_point());
    return ShiftPair{std::move(lhs), apply_scalar(op_shifted, f)};
}

namespace detail {

inline bool is_real_symmetric(const CMatrix& a, double tol) {
    const std::size_t n = a.dim();
    double dev = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            dev = std::max(dev, std::abs(a(i, j).imag()));
            dev = std::max(dev, std::abs(a(i, j) - a(j, i)));
        }
    return dev <= tol * std::max(1.0, a.max_abs());
}

} // namespace detail

// Transpose law: transpose(D^A D^B f) against D^B D^A f on the sample grid.
// Returns the largest pointwise deviation.
inline double transpose_check(const MatrixOrderOperator& op_a,
                              const MatrixOrderOperator& op_b, const Expression& f) {
    if (!detail::is_real_symmetric(op_a.order(), 1e-10) ||
        !detail::is_real_symmetric(op_b.order(), 1e-10))
        throw precondition_error("transpose_check: orders must be real symmetric");
    const MatrixExprFunction lhs = compose_apply(op_a, op_b, f).transpose();
    const MatrixExprFunction rhs = compose_apply(op_b, op_a, f);
    return grid_residual(lhs, rhs);
}

// Sequential fractional derivative: the scalar differintegrals of every
// eigenvalue (with multiplicity) applied one after another. The product is
// taken right-to-left over the deterministic eigenvalue order.
inline Expression determinant_sequential(const MatrixOrderOperator& op,
                                         const Expression& f) {
    if (op.is_jordan())
        throw precondition_error("determinant_sequential: order must be diagonalizable");
    const auto& columns = op.spectral().column_eigenvalues;
    Expression cur = f;
    for (std::size_t i = columns.size(); i-- > 0;)
        cur = differint_expr(cur, columns[i]);
    return cur;
}

// Trace law for integral-order operators: the sequential derivative must
// equal the scalar differintegral of order Tr(A). Returns the symbolic
// coefficient residual.
inline double trace_law_check(const MatrixOrderOperator& op, const Expression& f) {
    if (op.is_jordan())
        throw precondition_error("trace_law_check: order must be diagonalizable");
    for (const auto& l : op.spectral().column_eigenvalues)
        if (l.real() > 1e-12)
            throw precondition_error(
                "trace_law_check: all eigenvalues must have Re <= 0");
    const Expression lhs = determinant_sequential(op, f);
    const Expression rhs = differint_expr(f, op.order().trace());
    return expr_distance(lhs, rhs);
}

} // namespace fracmat
