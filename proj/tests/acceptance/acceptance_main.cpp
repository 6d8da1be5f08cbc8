// Acceptance suite: every operator law the library promises, executed at its
// stated tolerance, one verdict line per criterion. Exit status 0 only when
// every criterion holds.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fracmat/matrix_operator.hpp"
#include "fracmat/oracle.hpp"
#include "fracmat/task.hpp"
#include "../test_support.hpp"

using fracmat::CMatrix;
using fracmat::Complex;
using fracmat::Expression;
using fracmat::MatrixExprFunction;
using fracmat::Order;

namespace {

int failures = 0;

void verdict(int index, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] %2d %-42s %s\n", pass ? "PASS" : "FAIL", index, name,
                detail.c_str());
    if (!pass) ++failures;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

Expression monomial(double c, double p, int m = 0) {
    return Expression::power(0.0, {c, 0.0}, {p, 0.0}, m);
}

// canonical symbolic equality at coefficient scale
double scaled_distance(const MatrixExprFunction& a, const MatrixExprFunction& b) {
    double coeff_scale = 1.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            coeff_scale = std::max({coeff_scale, fracmat::max_coeff_magnitude(a.at(i, j)),
                                    fracmat::max_coeff_magnitude(b.at(i, j))});
    return fracmat::matrix_expr_distance(a, b) / coeff_scale;
}

double scaled_distance(const Expression& a, const Expression& b) {
    const double coeff_scale = std::max(
        {1.0, fracmat::max_coeff_magnitude(a), fracmat::max_coeff_magnitude(b)});
    return fracmat::expr_distance(a, b) / coeff_scale;
}

std::vector<double> grid7() {
    std::vector<double> xs;
    for (int i = 0; i < 7; ++i) xs.push_back(0.5 + 1.5 * i / 6.0);
    return xs;
}

// --- criterion 1 ------------------------------------------------------------
void criterion_scalar_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    const fracmat::OracleConfig cfg{1 << 14, 1};
    const Order lambdas[] = {{0.5, 0.0}, {-0.5, 0.0}, {0.3, 0.2}};
    const double exponents[] = {0.0, 1.0, 2.0, 0.5};
    double worst = 0.0;
    for (const Order& lambda : lambdas) {
        for (double p : exponents) {
            const Expression f = monomial(1.0, p);
            const Expression closed = fracmat::differint_expr(f, lambda);
            const fracmat::SampledFunction sampled{
                [p](double x) { return Complex(std::pow(x, p), 0.0); }};
            for (double x : grid7()) {
                const Complex want = closed.evaluate(x);
                const Complex got = fracmat::gl_differint(sampled, 0.0, x, lambda, cfg);
                worst = std::max(worst,
                                 std::abs(got - want) / std::max(std::abs(want), 1e-30));
            }
        }
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    verdict(1, "scalar closed form vs GL oracle",
            worst <= 1e-4 && seconds < 10.0,
            "worst rel " + fmt(worst) + " <= 1e-4, " + fmt(seconds) + "s < 10s");
}

// --- criterion 2 ------------------------------------------------------------
void criterion_projector_laws() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(20240801u);
    std::uniform_int_distribution<std::size_t> dims(2, 6);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = dims(rng);
        const CMatrix p = testsupport::random_similarity(rng, n);
        const auto values =
            testsupport::random_separated_eigenvalues(rng, n, -2.0, 2.0);
        const CMatrix a = testsupport::make_diagonalizable(p, values);
        const auto s = fracmat::spectral_projectors(a);
        const std::size_t k = s.distinct_eigenvalues.size();
        CMatrix sum(n), weighted(n);
        for (std::size_t i = 0; i < k; ++i) {
            worst = std::max(worst, (s.projectors[i] * s.projectors[i] - s.projectors[i])
                                        .frobenius_norm());
            for (std::size_t j = 0; j < k; ++j)
                if (i != j)
                    worst = std::max(worst,
                                     (s.projectors[i] * s.projectors[j]).frobenius_norm());
            sum += s.projectors[i];
            weighted += s.projectors[i] * s.distinct_eigenvalues[i];
        }
        worst = std::max(worst, (sum - CMatrix::identity(n)).frobenius_norm());
        worst = std::max(worst, (weighted - a).frobenius_norm());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    verdict(2, "projector laws on 100 random matrices",
            worst <= 1e-10 && seconds < 5.0,
            "worst residual " + fmt(worst) + " <= 1e-10, " + fmt(seconds) + "s < 5s");
}

// --- criterion 3 ------------------------------------------------------------
void criterion_inverse_pair() {
    std::mt19937 rng(20240803u);
    double worst = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 2 + trial % 3;
        const CMatrix p = testsupport::random_similarity(rng, n);
        const auto values =
            testsupport::random_separated_eigenvalues(rng, n, 0.0, 1.5, 0.25, 0.4);
        const CMatrix a = testsupport::make_diagonalizable(p, values);
        const auto op = fracmat::build_operator(a, 0.0);
        const auto op_neg =
            fracmat::build_operator(a * Complex(-1.0, 0.0), 0.0);
        const Expression f = trial % 2 == 0 ? monomial(1.0, 1.0) : monomial(1.0, 2.0);
        const MatrixExprFunction got = fracmat::compose_apply(op, op_neg, f);
        const MatrixExprFunction want = MatrixExprFunction::scaled_identity(n, f);
        worst = std::max(worst, fracmat::grid_residual(got, want));
    }
    verdict(3, "inverse pair reduces to the identity", worst <= 1e-8,
            "worst grid residual " + fmt(worst) + " <= 1e-8 over 25 matrices");
}

// --- criterion 4 ------------------------------------------------------------
void criterion_additivity() {
    std::mt19937 rng(20240804u);
    double worst = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 2 + trial % 3;
        const CMatrix p = testsupport::random_similarity(rng, n);
        const auto la =
            testsupport::random_separated_eigenvalues(rng, n, -1.5, -0.05, 0.2, 0.3);
        const auto lb =
            testsupport::random_separated_eigenvalues(rng, n, -1.4, -0.1, 0.2, 0.3);
        const CMatrix a = testsupport::make_diagonalizable(p, la);
        const CMatrix b = testsupport::make_diagonalizable(p, lb);
        const auto op_a = fracmat::build_operator(a, 0.0);
        const auto op_b = fracmat::build_operator(b, 0.0);
        const Expression f = monomial(1.0, 0.5 + 0.1 * (trial % 5));
        const MatrixExprFunction lhs = fracmat::compose_apply(op_a, op_b, f);
        const MatrixExprFunction rhs =
            fracmat::apply_scalar(fracmat::build_operator(a + b, 0.0), f);
        worst = std::max(worst, scaled_distance(lhs, rhs));
    }
    verdict(4, "commuting additivity is canonically exact", worst <= 1e-9,
            "worst coefficient residual " + fmt(worst) + " <= 1e-9 over 25 pairs");
}

// --- criterion 5 ------------------------------------------------------------
void criterion_integer_shift() {
    std::mt19937 rng(20240805u);
    double worst = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 2 + trial % 2;
        const CMatrix p = testsupport::random_similarity(rng, n);
        const auto values =
            testsupport::random_separated_eigenvalues(rng, n, -1.0, 1.0, 0.3, 0.4);
        const CMatrix a = testsupport::make_diagonalizable(p, values);
        const auto op = fracmat::build_operator(a, 0.0);
        const Expression f = monomial(1.0, 1.0 + 0.25 * (trial % 4));
        for (int m : {1, 2}) {
            const auto pair = fracmat::shift_by_integer(op, m, f);
            worst = std::max(worst, scaled_distance(pair.derivative_path,
                                                    pair.shifted_operator_path));
        }
    }
    verdict(5, "integer shift: both paths agree exactly", worst <= 1e-9,
            "worst coefficient residual " + fmt(worst) + " <= 1e-9, m in {1,2}");
}

// --- criterion 6 ------------------------------------------------------------
void criterion_transpose_law() {
    std::mt19937 rng(20240806u);
    std::uniform_real_distribution<double> neg(-2.0, -0.1);
    double worst = 0.0;
    const Expression f = monomial(1.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + trial % 2;
        auto spectrum = [&](bool integer_kind) {
            std::vector<double> s;
            if (integer_kind) {
                // distinct whole orders from {0,1,2,3}
                std::vector<double> pool{0.0, 1.0, 2.0, 3.0};
                for (std::size_t i = 0; i < n; ++i) {
                    const std::size_t pick = rng() % pool.size();
                    s.push_back(pool[pick]);
                    pool.erase(pool.begin() + static_cast<long>(pick));
                }
            } else {
                for (std::size_t i = 0; i < n; ++i) s.push_back(neg(rng));
            }
            return s;
        };
        const CMatrix a = testsupport::make_symmetric(rng, spectrum(trial % 3 != 0));
        const CMatrix b = testsupport::make_symmetric(rng, spectrum(trial % 2 == 0));
        const auto op_a = fracmat::build_operator(a, 0.0);
        const auto op_b = fracmat::build_operator(b, 0.0);
        worst = std::max(worst, fracmat::transpose_check(op_a, op_b, f));
    }
    verdict(6, "transpose law on symmetric pairs", worst <= 1e-9,
            "worst grid residual " + fmt(worst) + " <= 1e-9 over 50 pairs");
}

// --- criterion 7 ------------------------------------------------------------
void criterion_trace_law() {
    std::mt19937 rng(20240807u);
    double worst = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 2 + trial % 3;
        const CMatrix p = testsupport::random_similarity(rng, n);
        const auto values =
            testsupport::random_separated_eigenvalues(rng, n, -1.5, -0.05, 0.2, 0.3);
        const CMatrix a = testsupport::make_diagonalizable(p, values);
        const auto op = fracmat::build_operator(a, 0.0);
        const Expression f =
            trial % 2 == 0 ? Expression::constant(0.0, {1.0, 0.0}) : monomial(1.0, 1.0);
        const Expression lhs = fracmat::determinant_sequential(op, f);
        const Expression rhs = fracmat::differint_expr(f, a.trace());
        worst = std::max(worst, scaled_distance(lhs, rhs));
    }
    verdict(7, "trace law on integral-order operators", worst <= 1e-9,
            "worst coefficient residual " + fmt(worst) + " <= 1e-9 over 25 matrices");
}

// --- criterion 8 ------------------------------------------------------------
void criterion_jordan_superdiagonal() {
    const fracmat::OracleConfig cfg{1 << 14, 1};
    const Expression f = monomial(1.0, 1.0);
    const fracmat::SampledFunction sampled{[](double x) { return Complex(x, 0.0); }};
    double worst = 0.0;
    for (double l : {0.5, -0.5}) {
        for (std::size_t size : {2u, 3u}) {
            std::vector<fracmat::JordanSegment> segs = {{Complex(l, 0.0), size}};
            const CMatrix a = fracmat::jordan_matrix_from_segments(segs);
            const auto op = fracmat::build_operator(a, 0.0);
            const MatrixExprFunction applied = fracmat::apply_scalar(op, f);
            for (std::size_t k = 1; k < size && k <= 2; ++k) {
                const double factorial = k == 2 ? 2.0 : 1.0;
                for (double x : grid7()) {
                    const Complex numeric =
                        fracmat::fd_lambda_derivative(sampled, 0.0, x, {l, 0.0},
                                                      static_cast<int>(k), 1e-4, cfg) /
                        factorial;
                    worst = std::max(worst,
                                     std::abs(applied.at(0, k).evaluate(x) - numeric));
                }
            }
        }
    }
    verdict(8, "Jordan superdiagonal vs FD order-derivative", worst <= 1e-4,
            "worst abs deviation " + fmt(worst) + " <= 1e-4, sizes {2,3}, l = +/-0.5");
}

// --- criterion 9 ------------------------------------------------------------
void criterion_leibniz() {
    double worst = 0.0;
    const Expression fs[] = {monomial(1.0, 1.0), monomial(1.0, 0.5)};
    const Expression one = Expression::constant(0.0, {1.0, 0.0});
    const Expression x = monomial(1.0, 1.0);
    const Expression gs[] = {
        one,
        one + 2.0 * x,
        x * x - one,
        0.5 * (x * x * x) + x,
    };
    for (const Expression& f : fs)
        for (const Expression& g : gs)
            for (double q : {0.5, -0.5}) {
                const Expression series = fracmat::leibniz_series(f, g, {q, 0.0}, 5);
                const Expression direct =
                    fracmat::differint_expr(fracmat::multiply(f, g), {q, 0.0});
                worst = std::max(worst, scaled_distance(series, direct));
            }
    verdict(9, "Leibniz series terminates exactly", worst <= 1e-9,
            "worst coefficient residual " + fmt(worst) +
                " <= 1e-9, g up to degree 3, q = +/-0.5");
}

// --- criterion 10 -----------------------------------------------------------
void criterion_composition() {
    std::mt19937 rng(20240810u);
    std::uniform_real_distribution<double> qu(0.1, 1.5);
    std::uniform_real_distribution<double> pu(-1.5, 1.5);
    double worst = 0.0;
    for (int trial = 0; trial < 40; ++trial) {
        const double q = qu(rng);
        // exponents keeping every Eq. (8)/(9) boundary limit finite
        std::uniform_real_distribution<double> su(std::max(0.05, q - 0.95), 3.0);
        const double s = su(rng);
        const double p = pu(rng);
        const Expression f = monomial(1.0, s);
        const Expression lhs = fracmat::composition_lhs({p, 0.0}, {q, 0.0}, f);
        const Expression rhs = fracmat::composition_rhs({p, 0.0}, {q, 0.0}, f);
        for (double x : grid7())
            worst = std::max(worst, std::abs(lhs.evaluate(x) - rhs.evaluate(x)));
    }
    // the witness for the strict inequality of the reversed composition
    const Expression witness = monomial(1.0, -0.5);
    const Expression lhs = fracmat::composition_lhs({-0.5, 0.0}, {0.5, 0.0}, witness);
    const Expression rhs = fracmat::composition_rhs({-0.5, 0.0}, {0.5, 0.0}, witness);
    double witness_gap = 1e300;
    double match = 0.0;
    for (double x : grid7()) {
        match = std::max(match, std::abs(lhs.evaluate(x) - rhs.evaluate(x)));
        witness_gap = std::min(witness_gap, std::abs(rhs.evaluate(x) - witness.evaluate(x)));
    }
    const bool pass = worst <= 1e-10 && match <= 1e-10 && witness_gap > 0.1;
    verdict(10, "composition with boundary terms", pass,
            "worst residual " + fmt(std::max(worst, match)) +
                " <= 1e-10; witness gap " + fmt(witness_gap) + " > 0.1");
}

// --- criterion 11 -----------------------------------------------------------
void criterion_noncommuting() {
    const CMatrix a = {{{-1.0, 0.0}, {0.4, 0.0}}, {{0.0, 0.0}, {-0.5, 0.0}}};
    const CMatrix b = {{{-0.6, 0.0}, {0.0, 0.0}}, {{0.3, 0.0}, {-1.1, 0.0}}};
    const auto op_a = fracmat::build_operator(a, 0.0);
    const auto op_b = fracmat::build_operator(b, 0.0);
    const Expression f = monomial(1.0, 1.0);
    const MatrixExprFunction sequential = fracmat::compose_apply(op_a, op_b, f);
    const MatrixExprFunction expansion = fracmat::compose_double_sum(op_a, op_b, f);
    const MatrixExprFunction fused =
        fracmat::apply_scalar(fracmat::build_operator(a + b, 0.0), f);
    const double expansion_residual = fracmat::grid_residual(sequential, expansion);
    const double fused_gap = fracmat::grid_residual(sequential, fused);
    verdict(11, "noncommuting honesty", expansion_residual <= 1e-10 && fused_gap > 1e-3,
            "double sum matches to " + fmt(expansion_residual) +
                "; naive sum differs by " + fmt(fused_gap) + " > 1e-3");
}

// --- criterion 12 -----------------------------------------------------------
std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_cli_golden() {
    const std::string cli = FRACMAT_CLI_PATH;
    const std::filesystem::path tasks = FRACMAT_TASK_DIR;
    const std::filesystem::path golden = FRACMAT_GOLDEN_DIR;
    const std::filesystem::path tmp =
        std::filesystem::temp_directory_path() / "fracmat_acceptance";
    std::filesystem::create_directories(tmp);

    struct Bundle {
        const char* name;
        int expected_exit;
    };
    const Bundle bundles[] = {
        {"apply_zero_order", 0},    {"apply_jordan_half", 0},
        {"compose_inverse_pair", 0}, {"verify_inverse_pair", 0},
        {"oracle_half_x", 0},       {"decompose_symmetric", 0},
        {"failing_oracle_tolerance", 1},
    };
    bool pass = true;
    std::string detail;
    for (const auto& b : bundles) {
        const auto out = tmp / (std::string(b.name) + ".json");
        const std::string cmd = cli + " --spec " + (tasks / (std::string(b.name) + ".json")).string() +
                                " --out " + out.string() + " 2>/dev/null";
        const int raw = std::system(cmd.c_str());
        const int exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
        if (exit_code != b.expected_exit) {
            pass = false;
            detail = std::string(b.name) + ": exit " + std::to_string(exit_code) +
                     " != " + std::to_string(b.expected_exit);
            break;
        }
        if (read_file(out) != read_file(golden / (std::string(b.name) + ".json"))) {
            pass = false;
            detail = std::string(b.name) + ": report differs from the golden file";
            break;
        }
    }
    if (pass) {
        // the CSV flattening is pinned by one golden as well
        const auto out = tmp / "apply_zero_order.csv";
        const std::string cmd = cli + " --spec " +
                                (tasks / "apply_zero_order.json").string() +
                                " --format csv --out " + out.string() + " 2>/dev/null";
        if (std::system(cmd.c_str()) != 0 ||
            read_file(out) != read_file(golden / "apply_zero_order.csv")) {
            pass = false;
            detail = "csv output differs from the golden file";
        }
    }
    if (pass) detail = "7 reports byte-identical, exit statuses correct";
    verdict(12, "CLI golden files and exit statuses", pass, detail);
}

} // namespace

int main() {
    std::printf("fracmat acceptance suite\n");
    criterion_scalar_oracle();
    criterion_projector_laws();
    criterion_inverse_pair();
    criterion_additivity();
    criterion_integer_shift();
    criterion_transpose_law();
    criterion_trace_law();
    criterion_jordan_superdiagonal();
    criterion_leibniz();
    criterion_composition();
    criterion_noncommuting();
    criterion_cli_golden();
    if (failures == 0) {
        std::printf("all 12 criteria passed\n");
        return 0;
    }
    std::printf("%d criteria FAILED\n", failures);
    return 1;
}
