#pragma once

#include <stdexcept>
#include <string>

namespace wg {

// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InputError : public Error {
public:
    using Error::Error;
};

class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, double s) : Error(what), s_(s) {}
    [[nodiscard]] double s() const noexcept { return s_; }

private:
    double s_;
};

// h ≤ 0 somewhere, or a‖κ₁‖∞ ≥ 1.
class EllipticityError : public Error {
public:
    EllipticityError(const std::string& what, double value, double s = 0.0, double u = 0.0)
        : Error(what), value_(value), s_(s), u_(u) {}
    [[nodiscard]] double value() const noexcept { return value_; }
    [[nodiscard]] double s() const noexcept { return s_; }
    [[nodiscard]] double u() const noexcept { return u_; }

private:
    double value_;
    double s_;
    double u_;
};

class SingularityError : public Error {
public:
    SingularityError(const std::string& what, double s, double u) : Error(what), s_(s), u_(u) {}
    [[nodiscard]] double s() const noexcept { return s_; }
    [[nodiscard]] double u() const noexcept { return u_; }

private:
    double s_;
    double u_;
};

class ResolutionError : public Error {
public:
    using Error::Error;
};

class TruncationError : public Error {
public:
    using Error::Error;
};

class CoverageError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    SolverError(const std::string& what, double best_residual)
        : Error(what), best_residual_(best_residual) {}
    [[nodiscard]] double best_residual() const noexcept { return best_residual_; }

private:
    double best_residual_;
};

class WindowError : public Error {
public:
    using Error::Error;
};

// Non-monotone convergence across a refinement ladder.
class DiagnosticsError : public Error {
public:
    DiagnosticsError(const std::string& what, std::string raw_ladder)
        : Error(what), raw_ladder_(std::move(raw_ladder)) {}
    [[nodiscard]] const std::string& raw_ladder() const noexcept { return raw_ladder_; }

private:
    std::string raw_ladder_;
};

class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line, std::string field)
        : Error(what), line_(line), field_(std::move(field)) {}
    [[nodiscard]] int line() const noexcept { return line_; }
    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    int line_;
    std::string field_;
};

} // namespace wg
