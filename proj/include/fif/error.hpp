#pragma once

#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace fif {

// Compact rendering of a real for diagnostics ("1e-13", "0.027").
inline std::string describe(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Base of every error thrown by the library. The CLI maps these to exit codes.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InvalidDataError : public Error {
  public:
    using Error::Error;
};

class InvalidScalingError : public Error {
  public:
    using Error::Error;
};

// Argument lies outside the set an operation is defined on.
class DomainError : public Error {
  public:
    using Error::Error;
};

class IndexError : public Error {
  public:
    using Error::Error;
};

class PolicyError : public Error {
  public:
    using Error::Error;
};

class ResourceError : public Error {
  public:
    using Error::Error;
};

class NonConvergenceError : public Error {
  public:
    NonConvergenceError(const std::string &what, double last_residual, std::size_t iterations)
        : Error(what), last_residual_(last_residual), iterations_(iterations) {}

    double last_residual() const noexcept { return last_residual_; }
    std::size_t iterations() const noexcept { return iterations_; }

  private:
    double last_residual_;
    std::size_t iterations_;
};

class ParseError : public Error {
  public:
    ParseError(const std::string &what, std::size_t line, std::size_t column)
        : Error(format(what, line, column)), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

  private:
    static std::string format(const std::string &what, std::size_t line, std::size_t column) {
        if (line == 0)
            return what;
        return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
    }

    std::size_t line_;
    std::size_t column_;
};

} // namespace fif
