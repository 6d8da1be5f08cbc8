#pragma once

#include <functional>
#include <vector>

#include "fracmat/decomposition.hpp"

namespace fracmat {

// g with as many derivative rules as the caller can supply; rules[k] is
// g^{(k)}. Defective arguments need derivatives up to (largest block) - 1.
struct FunctionWithDerivatives {
    std::vector<std::function<Complex(Complex)>> rules;

    const std::function<Complex(Complex)>& derivative(std::size_t k) const {
        if (k >= rules.size())
            throw domain_error(
                "matrix_function: derivative of the required order unavailable");
        return rules[k];
    }

    static FunctionWithDerivatives exponential(std::size_t depth = 8) {
        FunctionWithDerivatives f;
        for (std::size_t k = 0; k < depth; ++k)
            f.rules.push_back([](Complex z) { return std::exp(z); });
        return f;
    }
};

namespace detail {

inline CMatrix similarity_path(const CMatrix& p, const std::vector<Complex>& diag,
                               const FunctionWithDerivatives& g) {
    const std::size_t n = p.dim();
    CMatrix d(n);
    for (std::size_t i = 0; i < n; ++i) d(i, i) = g.derivative(0)(diag[i]);
    return p * d * inverse(p);
}

inline CMatrix spectral_path(const SpectralData& s, const FunctionWithDerivatives& g) {
    const std::size_t n = s.similarity.dim();
    CMatrix r(n);
    for (std::size_t i = 0; i < s.distinct_eigenvalues.size(); ++i)
        r += s.projectors[i] * g.derivative(0)(s.distinct_eigenvalues[i]);
    return r;
}

inline CMatrix jordan_path(const JordanData& j, const FunctionWithDerivatives& g) {
    const std::size_t n = j.similarity.dim();
    CMatrix block(n);
    std::size_t at = 0;
    for (const auto& seg : j.segments) {
        double factorial = 1.0;
        for (std::size_t k = 0; k < seg.size; ++k) {
            if (k > 0) factorial *= static_cast<double>(k);
            const Complex value = g.derivative(k)(seg.eigenvalue) / factorial;
            for (std::size_t r = 0; r + k < seg.size; ++r)
                block(at + r, at + r + k) = value;
        }
        at += seg.size;
    }
    return j.similarity * block * inverse(j.similarity);
}

} // namespace detail

// g(A) through the realization the classification picks: unitary or general
// similarity for diagonalizable inputs (cross-checked against the spectral
// sum), Jordan blocks with derivative superdiagonals otherwise.
inline CMatrix matrix_function(const CMatrix& a, const FunctionWithDerivatives& g) {
    const Classification cls = classify(a);
    if (cls.kind == MatrixClass::JordanOnly) {
        const JordanData j = jordan_decompose(a);
        return detail::jordan_path(j, g);
    }
    const SpectralData s = spectral_projectors(a);
    const CMatrix via_similarity =
        detail::similarity_path(s.similarity, s.column_eigenvalues, g);
    const CMatrix via_spectral = detail::spectral_path(s, g);
    const double span = std::max(1.0, via_similarity.frobenius_norm());
    const double budget =
        1e-9 * span * std::max(1.0, s.similarity_condition);
    if ((via_similarity - via_spectral).frobenius_norm() > budget)
        throw convergence_error(
            "matrix_function: similarity and spectral routes disagree");
    return via_similarity;
}

} // namespace fracmat
