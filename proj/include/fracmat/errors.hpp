#pragma once

#include <stdexcept>
#include <string>

namespace fracmat {

// Base class for everything this library throws.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Gamma-family function evaluated at a nonpositive integer.
class pole_error : public error {
public:
    explicit pole_error(const std::string& msg) : error(msg) {}
};

// Input outside the admissible function/parameter domain
// (exponent at or below -1, base-point mismatch, log-power overflow, ...).
class domain_error : public error {
public:
    explicit domain_error(const std::string& msg) : error(msg) {}
};

// A boundary limit at the lower terminal diverges.
class boundary_error : public error {
public:
    explicit boundary_error(const std::string& msg) : error(msg) {}
};

// An iterative scheme failed to converge (QR sweep cap, quadrature refinement).
class convergence_error : public error {
public:
    explicit convergence_error(const std::string& msg) : error(msg) {}
};

// Matrix structure cannot be resolved: defective input where a
// diagonalizable one is required, ambiguous rank decisions, clustered
// eigenvalues with distinct eigenvectors.
class decomposition_error : public error {
public:
    explicit decomposition_error(const std::string& msg) : error(msg) {}
};

// An operation's stated precondition does not hold.
class precondition_error : public error {
public:
    explicit precondition_error(const std::string& msg) : error(msg) {}
};

// Malformed JSON input; message carries the offending field path.
class schema_error : public error {
public:
    explicit schema_error(const std::string& msg) : error(msg) {}
};

} // namespace fracmat
