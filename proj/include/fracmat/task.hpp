#pragma once

#include <chrono>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "fracmat/oracle.hpp"
#include "fracmat/serialization.hpp"

namespace fracmat {

struct GridSpec {
    double start = 0.5;
    double stop = 2.0;
    long points = 7;

    std::vector<double> sample() const {
        std::vector<double> xs;
        xs.reserve(points);
        for (long i = 0; i < points; ++i)
            xs.push_back(start + (stop - start) * static_cast<double>(i) /
                                     static_cast<double>(points - 1));
        return xs;
    }
};

struct TaskSpec {
    std::string kind; // apply | apply-vector | compose | verify | oracle | decompose
    std::string suite;
    double base_point = 0.0;
    std::optional<CMatrix> matrix;
    std::optional<CMatrix> matrix_b;
    std::optional<Expression> function;
    std::optional<Expression> function_g;
    std::vector<Expression> vector_fn;
    std::optional<Complex> order;
    std::optional<Complex> order_p;
    std::optional<Complex> order_q;
    int shift_m = 1;
    int leibniz_terms = 8;
    std::optional<GridSpec> grid;
    OracleConfig oracle;
    std::optional<double> tolerance; // overrides every check's default
};

struct Check {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = true;
};

struct Report {
    TaskSpec task;
    std::vector<double> grid_points;
    // values[point][row][col]
    std::vector<std::vector<std::vector<Complex>>> values;
    std::vector<double> point_residuals; // per grid point, oracle comparisons
    std::vector<Check> checks;
    bool pass = true;
    double timing_ms = 0.0;

    std::optional<MatrixExprFunction> symbolic;
    std::vector<Expression> symbolic_vector;
    std::optional<Expression> symbolic_scalar;
    std::string decomposition_json; // pre-rendered decompose payload
};

// ---------------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------------
namespace detail {

inline Expression parse_function_field(const nlohmann::json& j, double base_point,
                                       const std::string& path) {
    if (j.is_object() && j.contains("named")) {
        const std::string name = j.at("named").get<std::string>();
        if (name != "power" && name != "power-log")
            throw schema_error("unknown named function at " + path +
                               " (registry: power, power-log)");
        const Complex exponent =
            schema::complex(schema::require(j, "exponent", path), path + ".exponent");
        Complex coeff(1.0, 0.0);
        if (j.contains("coeff")) coeff = schema::complex(j.at("coeff"), path + ".coeff");
        int log_power = 0;
        if (j.contains("log_power"))
            log_power = static_cast<int>(
                schema::integer(j.at("log_power"), path + ".log_power"));
        if (name == "power-log" && log_power < 1)
            throw schema_error("power-log requires log_power >= 1 at " + path);
        return Expression::power(base_point, coeff, exponent, log_power);
    }
    return expression_from_json(j, path);
}

} // namespace detail

inline TaskSpec parse_task(const nlohmann::json& j) {
    TaskSpec t;
    t.kind = schema::require(j, "task", "$").get<std::string>();
    const bool known = t.kind == "apply" || t.kind == "apply-vector" ||
                       t.kind == "compose" || t.kind == "verify" ||
                       t.kind == "oracle" || t.kind == "decompose";
    if (!known) throw schema_error("unknown task kind at $.task: " + t.kind);

    if (j.contains("base_point"))
        t.base_point = schema::number(j.at("base_point"), "$.base_point");

    if (j.contains("matrix")) t.matrix = matrix_from_json(j.at("matrix"), "$.matrix");
    if (j.contains("matrix_b"))
        t.matrix_b = matrix_from_json(j.at("matrix_b"), "$.matrix_b");
    if (j.contains("function"))
        t.function = detail::parse_function_field(j.at("function"), t.base_point,
                                                  "$.function");
    if (j.contains("function_g"))
        t.function_g = detail::parse_function_field(j.at("function_g"), t.base_point,
                                                    "$.function_g");
    if (j.contains("vector")) {
        const auto& v = j.at("vector");
        if (!v.is_array()) throw schema_error("expected an array at $.vector");
        std::size_t idx = 0;
        for (const auto& e : v)
            t.vector_fn.push_back(detail::parse_function_field(
                e, t.base_point, "$.vector[" + std::to_string(idx++) + "]"));
    }
    if (j.contains("order")) t.order = schema::complex(j.at("order"), "$.order");
    if (j.contains("order_p")) t.order_p = schema::complex(j.at("order_p"), "$.order_p");
    if (j.contains("order_q")) t.order_q = schema::complex(j.at("order_q"), "$.order_q");
    if (j.contains("shift_m"))
        t.shift_m = static_cast<int>(schema::integer(j.at("shift_m"), "$.shift_m"));
    if (j.contains("leibniz_terms"))
        t.leibniz_terms = static_cast<int>(
            schema::integer(j.at("leibniz_terms"), "$.leibniz_terms"));
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        GridSpec gs;
        gs.start = schema::number(schema::require(g, "start", "$.grid"), "$.grid.start");
        gs.stop = schema::number(schema::require(g, "stop", "$.grid"), "$.grid.stop");
        gs.points =
            schema::integer(schema::require(g, "points", "$.grid"), "$.grid.points");
        if (gs.points < 2) throw schema_error("$.grid.points must be >= 2");
        if (!(gs.start > t.base_point))
            throw schema_error("$.grid.start must exceed the base point");
        if (!(gs.stop >= gs.start))
            throw schema_error("$.grid.stop must be >= $.grid.start");
        t.grid = gs;
    }
    if (j.contains("oracle")) {
        const auto& o = j.at("oracle");
        if (o.contains("steps"))
            t.oracle.steps = schema::integer(o.at("steps"), "$.oracle.steps");
        if (o.contains("richardson_levels"))
            t.oracle.richardson_levels = static_cast<int>(
                schema::integer(o.at("richardson_levels"), "$.oracle.richardson_levels"));
        t.oracle.validate();
    }
    if (j.contains("tolerance")) {
        t.tolerance = schema::number(j.at("tolerance"), "$.tolerance");
        if (!(*t.tolerance > 0.0)) throw schema_error("$.tolerance must be positive");
    }
    if (j.contains("suite")) t.suite = j.at("suite").get<std::string>();

    // task-specific required fields
    auto need = [&](bool ok, const char* what) {
        if (!ok) throw schema_error(std::string("task '") + t.kind + "' requires " + what);
    };
    if (t.kind == "apply") need(t.matrix && t.function && t.grid,
                                "$.matrix, $.function and $.grid");
    if (t.kind == "apply-vector")
        need(t.matrix && !t.vector_fn.empty() && t.grid,
             "$.matrix, $.vector and $.grid");
    if (t.kind == "compose")
        need(t.matrix && t.matrix_b && t.function && t.grid,
             "$.matrix, $.matrix_b, $.function and $.grid");
    if (t.kind == "oracle") need(t.function && t.order && t.grid,
                                 "$.function, $.order and $.grid");
    if (t.kind == "decompose") need(t.matrix.has_value(), "$.matrix");
    if (t.kind == "verify") {
        const bool suite_known =
            t.suite == "inverse-pair" || t.suite == "additivity" || t.suite == "shift" ||
            t.suite == "transpose" || t.suite == "trace" || t.suite == "jordan" ||
            t.suite == "leibniz" || t.suite == "composition";
        if (!suite_known)
            throw schema_error("unknown verify suite at $.suite: '" + t.suite + "'");
        if (t.suite == "leibniz")
            need(t.function && t.function_g && t.order_q,
                 "$.function, $.function_g and $.order_q");
        else if (t.suite == "composition")
            need(t.function && t.order_p && t.order_q,
                 "$.function, $.order_p and $.order_q");
        else if (t.suite == "additivity" || t.suite == "transpose")
            need(t.matrix && t.matrix_b && t.function,
                 "$.matrix, $.matrix_b and $.function");
        else
            need(t.matrix && t.function, "$.matrix and $.function");
    }
    return t;
}

// ---------------------------------------------------------------------------
// running
// ---------------------------------------------------------------------------
namespace detail {

inline double tolerance_scale_from_env() {
    const char* env = std::getenv("FRACMAT_TOL_SCALE");
    if (!env) return 1.0;
    const double v = std::atof(env);
    if (!(v >= 1.0)) throw schema_error("FRACMAT_TOL_SCALE must be a real >= 1");
    return v;
}

inline std::vector<double> task_grid(const TaskSpec& t) {
    if (t.grid) return t.grid->sample();
    return standard_grid();
}

inline void push_matrix_values(Report& r, const MatrixExprFunction& m) {
    for (double x : r.grid_points) {
        const CMatrix v = m.evaluate(x);
        std::vector<std::vector<Complex>> point(v.dim(),
                                                std::vector<Complex>(v.dim()));
        for (std::size_t i = 0; i < v.dim(); ++i)
            for (std::size_t j = 0; j < v.dim(); ++j) point[i][j] = v(i, j);
        r.values.push_back(std::move(point));
    }
}

inline void add_check(Report& r, const std::string& name, double residual,
                      double tolerance) {
    const bool ok = residual <= tolerance;
    r.checks.push_back(Check{name, residual, tolerance, ok});
    r.pass = r.pass && ok;
}

inline SampledFunction sample_expression(const Expression& e) {
    return SampledFunction{[e](double x) { return e.evaluate(x); }, e.base_point()};
}

inline void run_verify(const TaskSpec& t, Report& r, double tol_scale);

} // namespace detail

inline Report run(const TaskSpec& t) {
    const auto t0 = std::chrono::steady_clock::now();
    const double tol_scale = detail::tolerance_scale_from_env();
    Report r;
    r.task = t;

    if (t.kind == "apply") {
        const auto op = build_operator(*t.matrix, t.base_point);
        const MatrixExprFunction result = apply_scalar(op, *t.function);
        r.grid_points = detail::task_grid(t);
        detail::push_matrix_values(r, result);
        r.symbolic = result;
    } else if (t.kind == "apply-vector") {
        const auto op = build_operator(*t.matrix, t.base_point);
        VectorExprFunction v{t.base_point, t.vector_fn};
        const VectorExprFunction result = apply_vector(op, v);
        r.grid_points = detail::task_grid(t);
        for (double x : r.grid_points) {
            std::vector<std::vector<Complex>> point;
            for (const auto& e : result.entries)
                point.push_back({e.evaluate(x)});
            r.values.push_back(std::move(point));
        }
        r.symbolic_vector = result.entries;
    } else if (t.kind == "compose") {
        const auto op_a = build_operator(*t.matrix, t.base_point);
        const auto op_b = build_operator(*t.matrix_b, t.base_point);
        const MatrixExprFunction result = compose_apply(op_a, op_b, *t.function);
        r.grid_points = detail::task_grid(t);
        detail::push_matrix_values(r, result);
        r.symbolic = result;
    } else if (t.kind == "oracle") {
        const Expression& f = *t.function;
        const Expression closed = differint_expr(f, *t.order);
        const SampledFunction sampled = detail::sample_expression(f);
        r.grid_points = detail::task_grid(t);
        double worst = 0.0;
        for (double x : r.grid_points) {
            const Complex want = closed.evaluate(x);
            const Complex got = gl_differint(sampled, t.base_point, x, *t.order, t.oracle);
            const double resid = std::abs(got - want) / std::max(1.0, std::abs(want));
            r.point_residuals.push_back(resid);
            worst = std::max(worst, resid);
            r.values.push_back({{want}});
        }
        const double tol = (t.tolerance ? *t.tolerance : 1e-4) * tol_scale;
        detail::add_check(r, "oracle-closed-vs-gl", worst, tol);
        if (t.order->real() < 0.0) {
            double worst_rl = 0.0;
            for (double x : r.grid_points) {
                const Complex a = gl_differint(sampled, t.base_point, x, *t.order, t.oracle);
                const Complex b = rl_quadrature(sampled, t.base_point, x, -*t.order);
                worst_rl = std::max(worst_rl,
                                    std::abs(a - b) / std::max(1.0, std::abs(b)));
            }
            detail::add_check(r, "oracle-gl-vs-rl", worst_rl,
                              (t.tolerance ? *t.tolerance : 1e-4) * tol_scale);
        }
        r.symbolic_scalar = closed;
    } else if (t.kind == "decompose") {
        const CMatrix& a = *t.matrix;
        const Classification cls = classify(a);
        JsonWriter w;
        w.begin_object();
        w.key("operator");
        write_operator(w, build_operator(a, t.base_point));
        w.key("classification");
        w.value(cls.kind == MatrixClass::Normal
                    ? "normal"
                    : cls.kind == MatrixClass::DiagonalizableOnly ? "diagonalizable"
                                                                  : "jordan");
        if (cls.kind == MatrixClass::JordanOnly) {
            const JordanData jd = jordan_decompose(a);
            w.key("segments");
            w.begin_array();
            for (const auto& seg : jd.segments) {
                w.begin_object();
                w.key("eigenvalue");
                w.complex_value(seg.eigenvalue);
                w.key("size");
                w.value(seg.size);
                w.end_object();
            }
            w.end_array();
            w.key("similarity_condition");
            w.value(jd.similarity_condition);
            const CMatrix recon = jd.similarity *
                                  jordan_matrix_from_segments(jd.segments) *
                                  inverse(jd.similarity);
            const double resid =
                (recon - a).frobenius_norm() / std::max(1.0, a.frobenius_norm());
            detail::add_check(r, "jordan-reconstruction", resid,
                              (t.tolerance ? *t.tolerance : 1e-8) * tol_scale);
        } else {
            const SpectralData sd = spectral_projectors(a);
            w.key("eigenvalues");
            w.begin_array();
            for (const auto& l : sd.distinct_eigenvalues) w.complex_value(l);
            w.end_array();
            w.key("multiplicities");
            w.begin_array();
            for (auto m : sd.multiplicities) w.value(m);
            w.end_array();
            w.key("similarity_condition");
            w.value(sd.similarity_condition);
            w.key("similarity_unitary");
            w.value(sd.similarity_unitary);
            const std::size_t n = a.dim();
            const std::size_t k = sd.distinct_eigenvalues.size();
            double idem = 0.0, ortho = 0.0;
            CMatrix sum(n), weighted(n);
            for (std::size_t i = 0; i < k; ++i) {
                idem = std::max(idem, (sd.projectors[i] * sd.projectors[i] -
                                       sd.projectors[i])
                                          .frobenius_norm());
                for (std::size_t jj = 0; jj < k; ++jj)
                    if (i != jj)
                        ortho = std::max(ortho, (sd.projectors[i] * sd.projectors[jj])
                                                    .frobenius_norm());
                sum += sd.projectors[i];
                weighted += sd.projectors[i] * sd.distinct_eigenvalues[i];
            }
            const double tol = (t.tolerance ? *t.tolerance : 1e-10) * tol_scale;
            detail::add_check(r, "projector-idempotent", idem, tol);
            detail::add_check(r, "projector-orthogonal", ortho, tol);
            detail::add_check(r, "projector-sum-identity",
                              (sum - CMatrix::identity(n)).frobenius_norm(), tol);
            detail::add_check(r, "spectral-reconstruction",
                              (weighted - a).frobenius_norm() /
                                  std::max(1.0, a.frobenius_norm()),
                              tol);
        }
        w.end_object();
        r.decomposition_json = w.str();
    } else if (t.kind == "verify") {
        detail::run_verify(t, r, tol_scale);
    }

    const auto t1 = std::chrono::steady_clock::now();
    r.timing_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return r;
}

namespace detail {

inline void run_verify(const TaskSpec& t, Report& r, double tol_scale) {
    const std::string& s = t.suite;
    r.grid_points = task_grid(t);
    auto base_tol = [&](double def) {
        return (t.tolerance ? *t.tolerance : def) * tol_scale;
    };

    if (s == "inverse-pair") {
        const auto op = build_operator(*t.matrix, t.base_point);
        for (const auto& l : op.spectral().column_eigenvalues)
            if (l.real() < -1e-10)
                throw precondition_error(
                    "inverse-pair: order matrix needs Re(spectrum) >= 0");
        const CMatrix neg = *t.matrix * Complex(-1.0, 0.0);
        const auto op_neg = build_operator(neg, t.base_point);
        const MatrixExprFunction got = compose_apply(op, op_neg, *t.function);
        const MatrixExprFunction want =
            MatrixExprFunction::scaled_identity(op.dim(), *t.function);
        double resid = 0.0;
        for (double x : r.grid_points)
            resid = std::max(resid, (got.evaluate(x) - want.evaluate(x)).max_abs());
        add_check(r, "inverse-pair", resid,
                  base_tol(1e-8) * std::max(1.0, op.realization_condition()));
        push_matrix_values(r, got);
        r.symbolic = got;
    } else if (s == "additivity") {
        const CMatrix& a = *t.matrix;
        const CMatrix& b = *t.matrix_b;
        const double scale = std::max(1.0, a.frobenius_norm() * b.frobenius_norm());
        if ((a * b - b * a).frobenius_norm() > 1e-10 * scale)
            throw precondition_error("additivity: matrices must commute");
        const auto op_a = build_operator(a, t.base_point);
        const auto op_b = build_operator(b, t.base_point);
        for (const auto& op : {&op_a, &op_b})
            for (const auto& l : (*op).spectral().column_eigenvalues)
                if (l.real() > 1e-10)
                    throw precondition_error(
                        "additivity: spectra must satisfy Re <= 0");
        const MatrixExprFunction lhs = compose_apply(op_a, op_b, *t.function);
        const MatrixExprFunction rhs =
            apply_scalar(build_operator(a + b, t.base_point), *t.function);
        add_check(r, "additivity", matrix_expr_distance(lhs, rhs),
                  base_tol(1e-9) * std::max(1.0, op_a.realization_condition()));
        push_matrix_values(r, lhs);
        r.symbolic = lhs;
    } else if (s == "shift") {
        if (t.shift_m < 0 || t.shift_m > 3)
            throw schema_error("shift: $.shift_m must be in {0,1,2,3}");
        const auto op = build_operator(*t.matrix, t.base_point);
        const ShiftPair pair = shift_by_integer(op, t.shift_m, *t.function);
        add_check(r, "integer-shift",
                  matrix_expr_distance(pair.derivative_path, pair.shifted_operator_path),
                  base_tol(1e-9) * std::max(1.0, op.realization_condition()));
        push_matrix_values(r, pair.derivative_path);
        r.symbolic = pair.derivative_path;
    } else if (s == "transpose") {
        const auto op_a = build_operator(*t.matrix, t.base_point);
        const auto op_b = build_operator(*t.matrix_b, t.base_point);
        const double resid = transpose_check(op_a, op_b, *t.function);
        add_check(r, "transpose", resid,
                  base_tol(1e-9) * std::max(1.0, op_a.realization_condition()));
        const MatrixExprFunction shown = compose_apply(op_a, op_b, *t.function);
        push_matrix_values(r, shown);
        r.symbolic = shown;
    } else if (s == "trace") {
        const auto op = build_operator(*t.matrix, t.base_point);
        add_check(r, "trace-law", trace_law_check(op, *t.function),
                  base_tol(1e-9) * std::max(1.0, op.realization_condition()));
        const Expression seq = determinant_sequential(op, *t.function);
        r.symbolic_scalar = seq;
        for (double x : r.grid_points) r.values.push_back({{seq.evaluate(x)}});
    } else if (s == "jordan") {
        const auto op = build_operator(*t.matrix, t.base_point);
        if (!op.is_jordan())
            throw precondition_error("jordan: order matrix must be defective");
        const MatrixExprFunction applied = apply_scalar(op, *t.function);
        const SampledFunction sampled = sample_expression(*t.function);
        double resid = 0.0;
        for (const auto& seg : op.jordan().segments) {
            for (int k = 1; k < static_cast<int>(seg.size) && k <= 2; ++k) {
                double factorial = k == 2 ? 2.0 : 1.0;
                const Expression closed =
                    lambda_derivative(*t.function, seg.eigenvalue, k) *
                    Complex(1.0 / factorial, 0.0);
                for (double x : r.grid_points) {
                    const Complex numeric =
                        fd_lambda_derivative(sampled, t.base_point, x, seg.eigenvalue,
                                             k, 1e-4, t.oracle) /
                        factorial;
                    resid = std::max(resid, std::abs(closed.evaluate(x) - numeric));
                }
            }
        }
        add_check(r, "jordan-superdiagonal", resid, base_tol(1e-4));
        push_matrix_values(r, applied);
        r.symbolic = applied;
    } else if (s == "leibniz") {
        const Expression series =
            leibniz_series(*t.function, *t.function_g, *t.order_q, t.leibniz_terms);
        const Expression direct =
            differint_expr(multiply(*t.function, *t.function_g), *t.order_q);
        add_check(r, "leibniz", expr_distance(series, direct), base_tol(1e-9));
        r.symbolic_scalar = series;
        for (double x : r.grid_points) r.values.push_back({{series.evaluate(x)}});
    } else if (s == "composition") {
        const Expression lhs = composition_lhs(*t.order_p, *t.order_q, *t.function);
        const Expression rhs = composition_rhs(*t.order_p, *t.order_q, *t.function);
        double resid = 0.0;
        for (double x : r.grid_points)
            resid = std::max(resid, std::abs(lhs.evaluate(x) - rhs.evaluate(x)));
        add_check(r, "composition", resid, base_tol(1e-10));
        r.symbolic_scalar = lhs;
        for (double x : r.grid_points) r.values.push_back({{lhs.evaluate(x)}});
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// emitting
// ---------------------------------------------------------------------------
namespace detail {

inline void write_task_echo(JsonWriter& w, const TaskSpec& t) {
    w.begin_object();
    w.key("task");
    w.value(t.kind);
    if (!t.suite.empty()) {
        w.key("suite");
        w.value(t.suite);
    }
    w.key("base_point");
    w.value(t.base_point);
    if (t.matrix) {
        w.key("matrix");
        write_matrix(w, *t.matrix);
    }
    if (t.matrix_b) {
        w.key("matrix_b");
        write_matrix(w, *t.matrix_b);
    }
    if (t.function) {
        w.key("function");
        write_expression(w, *t.function);
    }
    if (t.function_g) {
        w.key("function_g");
        write_expression(w, *t.function_g);
    }
    if (!t.vector_fn.empty()) {
        w.key("vector");
        w.begin_array();
        for (const auto& e : t.vector_fn) write_expression(w, e);
        w.end_array();
    }
    if (t.order) {
        w.key("order");
        w.complex_value(*t.order);
    }
    if (t.order_p) {
        w.key("order_p");
        w.complex_value(*t.order_p);
    }
    if (t.order_q) {
        w.key("order_q");
        w.complex_value(*t.order_q);
    }
    if (t.kind == "verify" && t.suite == "shift") {
        w.key("shift_m");
        w.value(t.shift_m);
    }
    if (t.kind == "verify" && t.suite == "leibniz") {
        w.key("leibniz_terms");
        w.value(t.leibniz_terms);
    }
    if (t.grid) {
        w.key("grid");
        w.begin_object();
        w.key("start");
        w.value(t.grid->start);
        w.key("stop");
        w.value(t.grid->stop);
        w.key("points");
        w.value(t.grid->points);
        w.end_object();
    }
    if (t.kind == "oracle" || (t.kind == "verify" && t.suite == "jordan")) {
        w.key("oracle");
        w.begin_object();
        w.key("steps");
        w.value(t.oracle.steps);
        w.key("richardson_levels");
        w.value(t.oracle.richardson_levels);
        w.end_object();
    }
    if (t.tolerance) {
        w.key("tolerance");
        w.value(*t.tolerance);
    }
    w.end_object();
}

} // namespace detail

inline std::string emit_json(const Report& r, bool include_timing = false) {
    JsonWriter w;
    w.begin_object();
    w.key("task");
    detail::write_task_echo(w, r.task);
    w.key("grid");
    w.begin_array();
    for (double x : r.grid_points) w.value(x);
    w.end_array();
    w.key("values");
    w.begin_array();
    for (const auto& point : r.values) {
        w.begin_array();
        for (const auto& row : point) {
            w.begin_array();
            for (const auto& z : row) w.complex_value(z);
            w.end_array();
        }
        w.end_array();
    }
    w.end_array();
    if (r.symbolic) {
        w.key("result");
        write_matrix_expr(w, *r.symbolic);
    } else if (!r.symbolic_vector.empty()) {
        w.key("result");
        w.begin_array();
        for (const auto& e : r.symbolic_vector) write_expression(w, e);
        w.end_array();
    } else if (r.symbolic_scalar) {
        w.key("result");
        write_expression(w, *r.symbolic_scalar);
    }
    if (!r.decomposition_json.empty()) {
        w.key("decomposition");
        w.raw(r.decomposition_json);
    }
    w.key("checks");
    w.begin_array();
    for (const auto& c : r.checks) {
        w.begin_object();
        w.key("name");
        w.value(c.name);
        w.key("residual");
        w.value(c.residual);
        w.key("tolerance");
        w.value(c.tolerance);
        w.key("pass");
        w.value(c.pass);
        w.end_object();
    }
    w.end_array();
    w.key("pass");
    w.value(r.pass);
    if (include_timing) {
        w.key("timing_ms");
        w.value(r.timing_ms);
    }
    w.end_object();
    std::string out = w.str();
    out += '\n';
    return out;
}

inline std::string emit_csv(const Report& r) {
    std::string out = "x,row,col,re,im,residual\n";
    char buf[160];
    for (std::size_t p = 0; p < r.values.size(); ++p) {
        const double x = p < r.grid_points.size() ? r.grid_points[p] : 0.0;
        const double resid = p < r.point_residuals.size() ? r.point_residuals[p] : 0.0;
        for (std::size_t i = 0; i < r.values[p].size(); ++i)
            for (std::size_t j = 0; j < r.values[p][i].size(); ++j) {
                std::snprintf(buf, sizeof buf, "%.17g,%zu,%zu,%.17g,%.17g,%.17g\n", x, i,
                              j, r.values[p][i][j].real(), r.values[p][i][j].imag(),
                              resid);
                out += buf;
            }
    }
    return out;
}

} // namespace fracmat
