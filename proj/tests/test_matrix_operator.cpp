#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fracmat/matrix_operator.hpp"
#include "fracmat/oracle.hpp"
#include "test_support.hpp"

using fracmat::CMatrix;
using fracmat::Complex;
using fracmat::Expression;
using fracmat::MatrixExprFunction;
using fracmat::MatrixOrderOperator;
using fracmat::VectorExprFunction;

namespace {

const double kSqrtPi = 1.7724538509055160;

Expression monomial(double c, double p, int m = 0) {
    return Expression::power(0.0, {c, 0.0}, {p, 0.0}, m);
}

CMatrix diag2(Complex a, Complex b) {
    CMatrix m(2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

} // namespace

TEST_CASE("zero and identity orders act trivially") {
    const Expression f = monomial(1.0, 1.0) + Expression::constant(0.0, {2.0, 0.0});

    SECTION("zero order: f times the identity") {
        const auto op = fracmat::build_operator(CMatrix(3), 0.0);
        const MatrixExprFunction got = fracmat::apply_scalar(op, f);
        const MatrixExprFunction want = MatrixExprFunction::scaled_identity(3, f);
        CHECK(fracmat::matrix_expr_distance(got, want) == 0.0);
    }
    SECTION("identity order: derivative times the identity") {
        const auto op = fracmat::build_operator(CMatrix::identity(2), 0.0);
        const MatrixExprFunction got = fracmat::apply_scalar(op, f);
        const MatrixExprFunction want =
            MatrixExprFunction::scaled_identity(2, fracmat::integer_derivative(f, 1));
        CHECK(fracmat::matrix_expr_distance(got, want) < 1e-14);
    }
}

TEST_CASE("diagonal half orders follow the Euler rule per eigenvalue") {
    const auto op = fracmat::build_operator(diag2({0.5, 0.0}, {-0.5, 0.0}), 0.0);
    const MatrixExprFunction got = fracmat::apply_scalar(op, monomial(1.0, 1.0));
    const CMatrix at1 = got.evaluate(1.0);
    CHECK(std::abs(at1(0, 0) - Complex(1.1283791670955126, 0.0)) < 1e-12);
    CHECK(std::abs(at1(1, 1) - Complex(0.75225277806367505, 0.0)) < 1e-12);
    CHECK(std::abs(at1(0, 1)) == 0.0);
    CHECK(std::abs(at1(1, 0)) == 0.0);

    // zero input function gives the zero matrix function
    const MatrixExprFunction zero = fracmat::apply_scalar(op, Expression::zero(0.0));
    CHECK(fracmat::matrix_expr_distance(zero, MatrixExprFunction(2, 0.0)) == 0.0);
}

TEST_CASE("jordan block realization carries the order-derivative") {
    CMatrix a(2);
    a(0, 0) = a(1, 1) = Complex(0.5, 0.0);
    a(0, 1) = Complex(1.0, 0.0);
    const auto op = fracmat::build_operator(a, 0.0);
    REQUIRE(op.is_jordan());
    const Expression x = monomial(1.0, 1.0);
    const MatrixExprFunction got = fracmat::apply_scalar(op, x);

    // diagonal: D^{1/2} x; superdiagonal: its order-derivative
    const Expression diag_want = fracmat::differint_expr(x, {0.5, 0.0});
    const Expression super_want = fracmat::lambda_derivative(x, {0.5, 0.0}, 1);
    CHECK(fracmat::expr_equal(got.at(0, 0), diag_want, 1e-12));
    CHECK(fracmat::expr_equal(got.at(1, 1), diag_want, 1e-12));
    CHECK(fracmat::expr_equal(got.at(0, 1), super_want, 1e-12));
    CHECK(got.at(1, 0).is_zero());

    // cross-check the superdiagonal against the finite-difference oracle
    const fracmat::SampledFunction fx{[](double t) { return Complex(t, 0.0); }};
    for (double x0 : {0.5, 1.0, 2.0}) {
        const Complex numeric =
            fracmat::fd_lambda_derivative(fx, 0.0, x0, {0.5, 0.0}, 1, 1e-4, {1 << 14, 1});
        CHECK(std::abs(got.at(0, 1).evaluate(x0) - numeric) < 1e-4);
    }
}

TEST_CASE("oversized jordan blocks are refused at application") {
    std::vector<fracmat::JordanSegment> segs = {{Complex(0.5, 0.0), 5}};
    const CMatrix a = fracmat::jordan_matrix_from_segments(segs);
    const auto op = fracmat::build_operator(a, 0.0);
    CHECK_THROWS_AS(fracmat::apply_scalar(op, monomial(1.0, 1.0)), fracmat::domain_error);
}

TEST_CASE("realization consistency: similarity route equals spectral route") {
    std::mt19937 rng(340340u);
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t n = 2 + trial % 3;
        const CMatrix p = testsupport::random_similarity(rng, n);
        const auto values = testsupport::random_separated_eigenvalues(rng, n, -1.0, 1.4);
        const CMatrix a = testsupport::make_diagonalizable(p, values);
        const auto op = fracmat::build_operator(a, 0.0);
        const Expression f = monomial(1.0, 1.0 + 0.1 * trial);
        const MatrixExprFunction spectral = fracmat::apply_scalar(op, f);
        const MatrixExprFunction similarity = fracmat::apply_scalar_similarity(op, f);
        CAPTURE(trial, n);
        REQUIRE(fracmat::matrix_expr_distance(spectral, similarity) < 1e-9);
    }
}

TEST_CASE("apply_vector decouples on diagonal orders and mixes by projectors") {
    SECTION("zero order returns the vector") {
        const auto op = fracmat::build_operator(CMatrix(2), 0.0);
        VectorExprFunction v{0.0, {monomial(1.0, 2.0), monomial(3.0, 0.5)}};
        const auto got = fracmat::apply_vector(op, v);
        CHECK(fracmat::expr_distance(got.entries[0], v.entries[0]) == 0.0);
        CHECK(fracmat::expr_distance(got.entries[1], v.entries[1]) == 0.0);
    }
    SECTION("diagonal orders act componentwise") {
        const auto op = fracmat::build_operator(diag2({0.5, 0.0}, {-1.0, 0.0}), 0.0);
        VectorExprFunction v{0.0, {monomial(1.0, 1.0), monomial(1.0, 1.0)}};
        const auto got = fracmat::apply_vector(op, v);
        CHECK(fracmat::expr_equal(got.entries[0],
                                  fracmat::differint_expr(v.entries[0], {0.5, 0.0}),
                                  1e-13));
        CHECK(fracmat::expr_equal(got.entries[1],
                                  fracmat::differint_expr(v.entries[1], {-1.0, 0.0}),
                                  1e-13));
    }
    SECTION("integer spectrum against classical calculus") {
        const CMatrix a = {{{2.0, 0.0}, {1.0, 0.0}}, {{1.0, 0.0}, {2.0, 0.0}}};
        const auto op = fracmat::build_operator(a, 0.0);
        VectorExprFunction v{0.0, {monomial(1.0, 3.0), monomial(1.0, 3.0)}};
        const auto got = fracmat::apply_vector(op, v);
        // spectrum {1, 3}: (x^3, x^3) is in the lambda=3 eigenspace, so the
        // result is the plain third derivative, (6, 6)
        const Expression six = Expression::constant(0.0, {6.0, 0.0});
        CHECK(fracmat::expr_equal(got.entries[0], six, 1e-11));
        CHECK(fracmat::expr_equal(got.entries[1], six, 1e-11));
    }
    SECTION("dimension mismatch") {
        const auto op = fracmat::build_operator(CMatrix(2), 0.0);
        VectorExprFunction bad{0.0, {monomial(1.0, 1.0)}};
        CHECK_THROWS_AS(fracmat::apply_vector(op, bad), fracmat::domain_error);
    }
}

TEST_CASE("inverse pair reduces to the identity operator") {
    std::mt19937 rng(505050u);
    for (int trial = 0; trial < 8; ++trial) {
        const std::size_t n = 2 + trial % 3;
        const CMatrix p = testsupport::random_similarity(rng, n);
        const auto values =
            testsupport::random_separated_eigenvalues(rng, n, 0.0, 1.5, 0.3, 0.4);
        const CMatrix a = testsupport::make_diagonalizable(p, values);
        const CMatrix na = a * Complex(-1.0, 0.0);
        const auto op_a = fracmat::build_operator(a, 0.0);
        const auto op_na = fracmat::build_operator(na, 0.0);
        const Expression f =
            monomial(1.0, 1.0) + Expression::constant(0.0, {1.0, 0.0}); // x + 1
        const MatrixExprFunction got = fracmat::compose_apply(op_a, op_na, f);
        const MatrixExprFunction want = MatrixExprFunction::scaled_identity(n, f);
        CAPTURE(trial, n);
        REQUIRE(fracmat::grid_residual(got, want) <= 1e-8);
    }
}

TEST_CASE("commuting additivity and the zero-order neutral element") {
    std::mt19937 rng(606061u);
    for (int trial = 0; trial < 8; ++trial) {
        const std::size_t n = 2 + trial % 3;
        const CMatrix p = testsupport::random_similarity(rng, n);
        const auto la =
            testsupport::random_separated_eigenvalues(rng, n, -1.5, -0.1, 0.25, 0.3);
        const auto lb =
            testsupport::random_separated_eigenvalues(rng, n, -1.4, -0.2, 0.25, 0.3);
        const CMatrix a = testsupport::make_diagonalizable(p, la);
        const CMatrix b = testsupport::make_diagonalizable(p, lb);
        const auto op_a = fracmat::build_operator(a, 0.0);
        const auto op_b = fracmat::build_operator(b, 0.0);
        const auto op_sum = fracmat::build_operator(a + b, 0.0);
        const Expression f = monomial(1.0, 0.5 + 0.2 * trial);
        const MatrixExprFunction lhs = fracmat::compose_apply(op_a, op_b, f);
        const MatrixExprFunction rhs = fracmat::apply_scalar(op_sum, f);
        CAPTURE(trial, n);
        REQUIRE(fracmat::matrix_expr_distance(lhs, rhs) < 1e-9);
    }
    // composing with the zero order changes nothing
    const auto op = fracmat::build_operator(diag2({0.7, 0.0}, {-0.4, 0.0}), 0.0);
    const auto zero = fracmat::build_operator(CMatrix(2), 0.0);
    const Expression f = monomial(1.0, 1.5);
    CHECK(fracmat::matrix_expr_distance(fracmat::compose_apply(op, zero, f),
                                        fracmat::apply_scalar(op, f)) < 1e-13);
}

TEST_CASE("integer shift: both computation paths agree") {
    SECTION("m = 0 is the operator itself") {
        const auto op = fracmat::build_operator(diag2({0.5, 0.0}, {-0.5, 0.0}), 0.0);
        const auto pair = fracmat::shift_by_integer(op, 0, monomial(1.0, 1.0));
        CHECK(fracmat::matrix_expr_distance(pair.derivative_path,
                                            pair.shifted_operator_path) < 1e-13);
    }
    SECTION("double integrators shift to the identity") {
        const auto op =
            fracmat::build_operator(diag2({-1.0, 0.0}, {-1.0, 0.0}), 0.0);
        const auto pair =
            fracmat::shift_by_integer(op, 1, Expression::constant(0.0, {1.0, 0.0}));
        const MatrixExprFunction want = MatrixExprFunction::scaled_identity(
            2, Expression::constant(0.0, {1.0, 0.0}));
        CHECK(fracmat::matrix_expr_distance(pair.derivative_path, want) < 1e-13);
        CHECK(fracmat::matrix_expr_distance(pair.shifted_operator_path, want) < 1e-13);
    }
    SECTION("random diagonalizable orders, m in {1, 2}") {
        std::mt19937 rng(707070u);
        for (int trial = 0; trial < 8; ++trial) {
            const std::size_t n = 2 + trial % 2;
            const CMatrix p = testsupport::random_similarity(rng, n);
            const auto values =
                testsupport::random_separated_eigenvalues(rng, n, -1.0, 1.0, 0.3, 0.4);
            const CMatrix a = testsupport::make_diagonalizable(p, values);
            const auto op = fracmat::build_operator(a, 0.0);
            const Expression f = monomial(1.0, 1.25);
            for (int m : {1, 2}) {
                const auto pair = fracmat::shift_by_integer(op, m, f);
                CAPTURE(trial, m);
                REQUIRE(fracmat::matrix_expr_distance(pair.derivative_path,
                                                      pair.shifted_operator_path) <
                        1e-9);
            }
        }
    }
}

TEST_CASE("transpose law for real symmetric orders") {
    SECTION("equal operators give zero residual") {
        std::mt19937 rng(808080u);
        const CMatrix a = testsupport::make_symmetric(rng, {0.0, 1.0, 3.0});
        const auto op = fracmat::build_operator(a, 0.0);
        CHECK(fracmat::transpose_check(op, op, monomial(1.0, 3.0)) < 1e-10);
    }
    SECTION("integer and negative-real spectra") {
        const CMatrix a = {{{2.0, 0.0}, {1.0, 0.0}}, {{1.0, 0.0}, {2.0, 0.0}}};
        const CMatrix b = diag2({-1.0, 0.0}, {-2.0, 0.0});
        const auto op_a = fracmat::build_operator(a, 0.0);
        const auto op_b = fracmat::build_operator(b, 0.0);
        CHECK(fracmat::transpose_check(op_a, op_b, monomial(1.0, 3.0)) <= 1e-10);
    }
    SECTION("non-symmetric order is rejected") {
        const CMatrix bad = {{{0.0, 0.0}, {1.0, 0.0}}, {{0.0, 0.0}, {0.5, 0.0}}};
        const auto op_bad = fracmat::build_operator(bad, 0.0);
        const auto op_ok = fracmat::build_operator(CMatrix::identity(2), 0.0);
        CHECK_THROWS_AS(fracmat::transpose_check(op_bad, op_ok, monomial(1.0, 1.0)),
                        fracmat::precondition_error);
    }
}

TEST_CASE("determinant as a sequential fractional derivative") {
    SECTION("identity order twice differentiates x^3 to 6x") {
        const auto op = fracmat::build_operator(CMatrix::identity(2), 0.0);
        const Expression got = fracmat::determinant_sequential(op, monomial(1.0, 3.0));
        CHECK(fracmat::expr_equal(got, monomial(6.0, 1.0), 1e-13));
    }
    SECTION("two half-derivatives give the full derivative") {
        const auto op = fracmat::build_operator(diag2({0.5, 0.0}, {0.5, 0.0}), 0.0);
        const Expression got = fracmat::determinant_sequential(op, monomial(1.0, 1.0));
        CHECK(fracmat::expr_equal(got, Expression::constant(0.0, {1.0, 0.0}), 1e-12));
    }
    SECTION("two half-integrals integrate the constant") {
        const auto op = fracmat::build_operator(diag2({-0.5, 0.0}, {-0.5, 0.0}), 0.0);
        const Expression got =
            fracmat::determinant_sequential(op, Expression::constant(0.0, {1.0, 0.0}));
        CHECK(fracmat::expr_equal(got, monomial(1.0, 1.0), 1e-12));
    }
}

TEST_CASE("trace law on the integral-order family") {
    SECTION("double half-integrator") {
        const auto op = fracmat::build_operator(diag2({-0.5, 0.0}, {-0.5, 0.0}), 0.0);
        CHECK(fracmat::trace_law_check(op, Expression::constant(0.0, {1.0, 0.0})) <
              1e-12);
    }
    SECTION("triangular order matrix") {
        CMatrix a(2);
        a(0, 0) = Complex(-1.0, 0.0);
        a(0, 1) = Complex(0.3, 0.0);
        a(1, 1) = Complex(-0.5, 0.0);
        const auto op = fracmat::build_operator(a, 0.0);
        CHECK(fracmat::trace_law_check(op, monomial(1.0, 1.0)) < 1e-11);
    }
    SECTION("positive real part is rejected") {
        const auto op = fracmat::build_operator(diag2({0.5, 0.0}, {-0.5, 0.0}), 0.0);
        CHECK_THROWS_AS(fracmat::trace_law_check(op, monomial(1.0, 1.0)),
                        fracmat::precondition_error);
    }
}

TEST_CASE("noncommuting honesty: the double sum is right, plain addition is not") {
    const CMatrix a = {{{-1.0, 0.0}, {0.4, 0.0}}, {{0.0, 0.0}, {-0.5, 0.0}}};
    const CMatrix b = {{{-0.6, 0.0}, {0.0, 0.0}}, {{0.3, 0.0}, {-1.1, 0.0}}};
    REQUIRE((a * b - b * a).frobenius_norm() > 0.01);
    const auto op_a = fracmat::build_operator(a, 0.0);
    const auto op_b = fracmat::build_operator(b, 0.0);
    const Expression f = monomial(1.0, 1.0);
    const MatrixExprFunction sequential = fracmat::compose_apply(op_a, op_b, f);
    const MatrixExprFunction expansion = fracmat::compose_double_sum(op_a, op_b, f);
    CHECK(fracmat::grid_residual(sequential, expansion) <= 1e-10);
    const auto op_sum = fracmat::build_operator(a + b, 0.0);
    const MatrixExprFunction fused = fracmat::apply_scalar(op_sum, f);
    CHECK(fracmat::grid_residual(sequential, fused) > 1e-3);
}
