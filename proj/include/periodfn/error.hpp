#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace periodfn {

enum class ErrorKind {
    InvalidParameter,
    NonMonotoneEnergy,
    NoConvergence,
    StepUnderflow,
    AmbiguousBracket,
    SignViolation,
    DegenerateIsochronous,
    RangeExceeded,
    BracketFailure,
    EventMissed,
    ToleranceUnmet,
    Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries a kind so callers (and the CLI)
// can dispatch without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Raised when adaptive quadrature hits its depth cap; the best estimate is kept.
class NoConvergenceError : public Error {
public:
    NoConvergenceError(const std::string& what, double best_estimate, double err_est)
        : Error(ErrorKind::NoConvergence, what), best_(best_estimate), err_(err_est) {}

    double best_estimate() const noexcept { return best_; }
    double err_est() const noexcept { return err_; }

private:
    double best_;
    double err_;
};

} // namespace periodfn
