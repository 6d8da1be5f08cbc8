#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "fracmat/complex_scalar.hpp"
#include "fracmat/errors.hpp"

namespace fracmat {

// Largest admissible power of ln(x-a). Matches the polygamma cap and covers
// Jordan blocks up to size 4.
inline constexpr int max_log_power = 3;

// Tolerance for treating two exponents as the same canonical key.
inline constexpr double term_key_tol = 1e-12;

// One basis function coeff * (x-a)^exponent * ln(x-a)^log_power for x > a.
// The base point a lives on the enclosing Expression.
struct PowerLogTerm {
    Complex coeff{0.0, 0.0};
    Complex exponent{0.0, 0.0};
    int log_power = 0;
};

inline bool same_term_key(const PowerLogTerm& s, const PowerLogTerm& t) {
    return s.log_power == t.log_power && std::abs(s.exponent - t.exponent) <= term_key_tol;
}

// Three-way key order; exponents within the key tolerance compare as equal
// and fall through to the log power.
inline int term_key_compare(const PowerLogTerm& s, const PowerLogTerm& t) {
    if (std::abs(s.exponent - t.exponent) <= term_key_tol) {
        if (s.log_power != t.log_power) return s.log_power < t.log_power ? -1 : 1;
        return 0;
    }
    if (s.exponent.real() != t.exponent.real())
        return s.exponent.real() < t.exponent.real() ? -1 : 1;
    return s.exponent.imag() < t.exponent.imag() ? -1 : 1;
}

// Finite sum of power-log terms anchored at one base point, kept canonical:
// terms sorted by (Re p, Im p, m), keys within tolerance merged, zero
// coefficients removed.
class Expression {
public:
    Expression() = default;
    explicit Expression(double base_point) : base_point_(base_point) {}
    Expression(double base_point, std::vector<PowerLogTerm> terms)
        : base_point_(base_point), terms_(std::move(terms)) {
        canonicalize();
    }

    static Expression zero(double base_point) { return Expression(base_point); }

    static Expression constant(double base_point, const Complex& c) {
        return Expression(base_point, {PowerLogTerm{c, {0.0, 0.0}, 0}});
    }

    // c * (x-a)^p * ln(x-a)^m
    static Expression power(double base_point, const Complex& c, const Complex& p,
                            int m = 0) {
        return Expression(base_point, {PowerLogTerm{c, p, m}});
    }

    double base_point() const { return base_point_; }
    const std::vector<PowerLogTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Complex evaluate(double x) const {
        if (!(x > base_point_))
            throw domain_error("Expression::evaluate: x must exceed the base point");
        const double dx = x - base_point_;
        const double lx = std::log(dx);
        Complex sum(0.0, 0.0);
        for (const auto& t : terms_) {
            Complex v = t.coeff * std::exp(t.exponent * std::log(dx));
            for (int i = 0; i < t.log_power; ++i) v *= lx;
            sum += v;
        }
        return sum;
    }

    Expression& operator+=(const Expression& other) {
        require_same_base(other);
        terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
        canonicalize();
        return *this;
    }

    Expression& operator-=(const Expression& other) {
        require_same_base(other);
        for (const auto& t : other.terms_)
            terms_.push_back(PowerLogTerm{-t.coeff, t.exponent, t.log_power});
        canonicalize();
        return *this;
    }

    Expression& operator*=(const Complex& c) {
        for (auto& t : terms_) t.coeff *= c;
        canonicalize();
        return *this;
    }

    friend Expression operator+(Expression a, const Expression& b) { return a += b; }
    friend Expression operator-(Expression a, const Expression& b) { return a -= b; }
    friend Expression operator*(Expression a, const Complex& c) { return a *= c; }
    friend Expression operator*(const Complex& c, Expression a) { return a *= c; }

    // Distributed product; exponents add, log powers add.
    friend Expression operator*(const Expression& a, const Expression& b) {
        a.require_same_base(b);
        std::vector<PowerLogTerm> prod;
        prod.reserve(a.terms_.size() * b.terms_.size());
        for (const auto& s : a.terms_)
            for (const auto& t : b.terms_) {
                const int m = s.log_power + t.log_power;
                if (m > max_log_power)
                    throw domain_error("Expression multiply: log power exceeds cap 3");
                prod.push_back(PowerLogTerm{s.coeff * t.coeff, s.exponent + t.exponent, m});
            }
        return Expression(a.base_point_, std::move(prod));
    }

    void require_same_base(const Expression& other) const {
        if (base_point_ != other.base_point_)
            throw domain_error("Expression: base-point mismatch");
    }

private:
    void canonicalize() {
        for (const auto& t : terms_) {
            if (!is_finite(t.coeff) || !is_finite(t.exponent))
                throw error("Expression: non-finite term");
            if (t.log_power < 0 || t.log_power > max_log_power)
                throw domain_error("Expression: log power out of range");
        }
        std::sort(terms_.begin(), terms_.end(),
                  [](const PowerLogTerm& s, const PowerLogTerm& t) {
                      if (s.exponent.real() != t.exponent.real())
                          return s.exponent.real() < t.exponent.real();
                      if (s.exponent.imag() != t.exponent.imag())
                          return s.exponent.imag() < t.exponent.imag();
                      return s.log_power < t.log_power;
                  });
        // cluster exponents within the key tolerance (the first exponent of a
        // cluster is its representative), then merge per log power
        std::vector<PowerLogTerm> merged;
        merged.reserve(terms_.size());
        std::size_t i = 0;
        while (i < terms_.size()) {
            const Complex rep = terms_[i].exponent;
            Complex by_log[max_log_power + 1] = {};
            std::size_t j = i;
            for (; j < terms_.size() && std::abs(terms_[j].exponent - rep) <= term_key_tol;
                 ++j)
                by_log[terms_[j].log_power] += terms_[j].coeff;
            for (int m = 0; m <= max_log_power; ++m)
                if (by_log[m] != Complex(0.0, 0.0))
                    merged.push_back(PowerLogTerm{by_log[m], rep, m});
            i = j;
        }
        terms_ = std::move(merged);
    }

    double base_point_ = 0.0;
    std::vector<PowerLogTerm> terms_;
};

// Alias for the operation name used by the symbolic engine's public surface.
inline Expression multiply(const Expression& a, const Expression& b) { return a * b; }

// Largest coefficient magnitude; zero expression gives 0.
inline double max_coeff_magnitude(const Expression& e) {
    double m = 0.0;
    for (const auto& t : e.terms()) m = std::max(m, std::abs(t.coeff));
    return m;
}

// Largest coefficient difference between two canonical expressions, walking
// the union of term keys; a key missing on one side counts with coefficient 0.
inline double expr_distance(const Expression& a, const Expression& b) {
    a.require_same_base(b);
    double dist = 0.0;
    std::size_t i = 0, j = 0;
    const auto& ta = a.terms();
    const auto& tb = b.terms();
    while (i < ta.size() || j < tb.size()) {
        int cmp;
        if (i == ta.size())
            cmp = 1;
        else if (j == tb.size())
            cmp = -1;
        else
            cmp = term_key_compare(ta[i], tb[j]);
        if (cmp == 0) {
            dist = std::max(dist, std::abs(ta[i].coeff - tb[j].coeff));
            ++i, ++j;
        } else if (cmp < 0) {
            dist = std::max(dist, std::abs(ta[i++].coeff));
        } else {
            dist = std::max(dist, std::abs(tb[j++].coeff));
        }
    }
    return dist;
}

// Canonical symbolic equality with mixed absolute/relative coefficient
// tolerance. This is the decidable equality used by every "exact after
// canonicalization" law check.
inline bool expr_equal(const Expression& a, const Expression& b, double tol = 1e-9) {
    const double scale = std::max({1.0, max_coeff_magnitude(a), max_coeff_magnitude(b)});
    return expr_distance(a, b) <= tol * scale;
}

} // namespace fracmat
