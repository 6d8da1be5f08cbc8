#pragma once

#include <cstdio>
#include <string>

#include <json.hpp>

#include "fracmat/expression.hpp"
#include "fracmat/matrix.hpp"
#include "fracmat/matrix_operator.hpp"

namespace fracmat {

// ---------------------------------------------------------------------------
// Deterministic JSON writer. Reports must be byte-stable across runs, so
// numbers are always printed with 17 significant digits (which also makes
// double -> text -> double round trips exact) and keys keep insertion order.
// ---------------------------------------------------------------------------
class JsonWriter {
public:
    void begin_object() { separator(); out_ += '{'; fresh_ = true; }
    void end_object() { out_ += '}'; fresh_ = false; }
    void begin_array() { separator(); out_ += '['; fresh_ = true; }
    void end_array() { out_ += ']'; fresh_ = false; }

    void key(const std::string& k) {
        separator();
        append_string(k);
        out_ += ':';
        fresh_ = true;
    }

    void value(double v) {
        separator();
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out_ += buf;
    }
    void value(long v) {
        separator();
        out_ += std::to_string(v);
    }
    void value(std::size_t v) { value(static_cast<long>(v)); }
    void value(int v) { value(static_cast<long>(v)); }
    void value(bool v) {
        separator();
        out_ += v ? "true" : "false";
    }
    void value(const std::string& v) {
        separator();
        append_string(v);
    }
    void value(const char* v) { value(std::string(v)); }

    void complex_value(const Complex& z) {
        begin_object();
        key("re");
        value(z.real());
        key("im");
        value(z.imag());
        end_object();
    }

    // splice an already-rendered JSON value
    void raw(const std::string& rendered) {
        separator();
        out_ += rendered;
    }

    const std::string& str() const { return out_; }

private:
    void separator() {
        if (!fresh_ && !out_.empty() && out_.back() != '{' && out_.back() != '[' &&
            out_.back() != ':')
            out_ += ',';
        fresh_ = false;
    }
    void append_string(const std::string& s) {
        out_ += '"';
        for (char c : s) {
            switch (c) {
            case '"': out_ += "\\\""; break;
            case '\\': out_ += "\\\\"; break;
            case '\n': out_ += "\\n"; break;
            case '\t': out_ += "\\t"; break;
            default: out_ += c;
            }
        }
        out_ += '"';
    }

    std::string out_;
    bool fresh_ = true;
};

// ---------------------------------------------------------------------------
// Parsing helpers with field-path diagnostics.
// ---------------------------------------------------------------------------
namespace schema {

inline const nlohmann::json& require(const nlohmann::json& j, const std::string& field,
                                     const std::string& path) {
    if (!j.is_object() || !j.contains(field))
        throw schema_error("missing field " + path + "." + field);
    return j.at(field);
}

inline double number(const nlohmann::json& j, const std::string& path) {
    if (!j.is_number()) throw schema_error("expected a number at " + path);
    return j.get<double>();
}

inline long integer(const nlohmann::json& j, const std::string& path) {
    if (!j.is_number_integer()) throw schema_error("expected an integer at " + path);
    return j.get<long>();
}

inline Complex complex(const nlohmann::json& j, const std::string& path) {
    return Complex(number(require(j, "re", path), path + ".re"),
                   number(require(j, "im", path), path + ".im"));
}

} // namespace schema

// --- Expression ------------------------------------------------------------

inline void write_expression(JsonWriter& w, const Expression& e) {
    w.begin_object();
    w.key("base_point");
    w.value(e.base_point());
    w.key("terms");
    w.begin_array();
    for (const auto& t : e.terms()) {
        w.begin_object();
        w.key("coeff");
        w.complex_value(t.coeff);
        w.key("exponent");
        w.complex_value(t.exponent);
        w.key("log_power");
        w.value(t.log_power);
        w.end_object();
    }
    w.end_array();
    w.end_object();
}

inline std::string expression_to_json(const Expression& e) {
    JsonWriter w;
    write_expression(w, e);
    return w.str();
}

inline Expression expression_from_json(const nlohmann::json& j,
                                       const std::string& path = "$") {
    const double base = schema::number(schema::require(j, "base_point", path),
                                       path + ".base_point");
    const auto& terms = schema::require(j, "terms", path);
    if (!terms.is_array()) throw schema_error("expected an array at " + path + ".terms");
    std::vector<PowerLogTerm> parsed;
    std::size_t idx = 0;
    for (const auto& t : terms) {
        const std::string tp = path + ".terms[" + std::to_string(idx++) + "]";
        PowerLogTerm term;
        term.coeff = schema::complex(schema::require(t, "coeff", tp), tp + ".coeff");
        term.exponent =
            schema::complex(schema::require(t, "exponent", tp), tp + ".exponent");
        term.log_power = static_cast<int>(
            schema::integer(schema::require(t, "log_power", tp), tp + ".log_power"));
        parsed.push_back(term);
    }
    return Expression(base, std::move(parsed));
}

// --- CMatrix ----------------------------------------------------------------

inline void write_matrix(JsonWriter& w, const CMatrix& m) {
    w.begin_object();
    w.key("n");
    w.value(m.dim());
    w.key("entries");
    w.begin_array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        w.begin_array();
        for (std::size_t j = 0; j < m.dim(); ++j) w.complex_value(m(i, j));
        w.end_array();
    }
    w.end_array();
    w.end_object();
}

inline std::string matrix_to_json(const CMatrix& m) {
    JsonWriter w;
    write_matrix(w, m);
    return w.str();
}

inline CMatrix matrix_from_json(const nlohmann::json& j, const std::string& path = "$") {
    const long n = schema::integer(schema::require(j, "n", path), path + ".n");
    if (n <= 0 || n > 32) throw schema_error("matrix dimension out of range at " + path);
    const auto& entries = schema::require(j, "entries", path);
    if (!entries.is_array() || entries.size() != static_cast<std::size_t>(n))
        throw schema_error("expected " + std::to_string(n) + " rows at " + path +
                           ".entries");
    CMatrix m(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < m.dim(); ++i) {
        const auto& row = entries.at(i);
        const std::string rp = path + ".entries[" + std::to_string(i) + "]";
        if (!row.is_array() || row.size() != static_cast<std::size_t>(n))
            throw schema_error("expected " + std::to_string(n) + " columns at " + rp);
        for (std::size_t k = 0; k < m.dim(); ++k)
            m(i, k) = schema::complex(row.at(k), rp + "[" + std::to_string(k) + "]");
    }
    if (!m.all_finite()) throw schema_error("non-finite matrix entry at " + path);
    return m;
}

// --- operator and matrix function --------------------------------------------

inline void write_operator(JsonWriter& w, const MatrixOrderOperator& op) {
    w.begin_object();
    w.key("base_point");
    w.value(op.base_point());
    w.key("matrix");
    write_matrix(w, op.order());
    w.key("realization_tag");
    w.value(op.is_jordan() ? "jordan" : "spectral");
    w.end_object();
}

inline void write_matrix_expr(JsonWriter& w, const MatrixExprFunction& m) {
    w.begin_object();
    w.key("n");
    w.value(m.dim());
    w.key("base_point");
    w.value(m.base_point());
    w.key("entries");
    w.begin_array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        w.begin_array();
        for (std::size_t j = 0; j < m.dim(); ++j) write_expression(w, m.at(i, j));
        w.end_array();
    }
    w.end_array();
    w.end_object();
}

inline MatrixExprFunction matrix_expr_from_json(const nlohmann::json& j,
                                                const std::string& path = "$") {
    const long n = schema::integer(schema::require(j, "n", path), path + ".n");
    const double base = schema::number(schema::require(j, "base_point", path),
                                       path + ".base_point");
    MatrixExprFunction m(static_cast<std::size_t>(n), base);
    const auto& entries = schema::require(j, "entries", path);
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t k = 0; k < m.dim(); ++k)
            m.at(i, k) = expression_from_json(
                entries.at(i).at(k),
                path + ".entries[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    return m;
}

} // namespace fracmat
