#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jgw {

/// Coarse error category; the CLI maps each to a distinct exit code.
enum class ErrorKind { Usage, Data, Domain, Numeric };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

/// Malformed or inconsistent input data (CSV rows, config files, sample sets).
class DataError : public Error {
public:
    explicit DataError(const std::string& what, std::size_t line = 0)
        : Error(ErrorKind::Data, line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    /// 1-based source line, 0 when not tied to a line.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Fixed-point iteration stopped at max_iter without meeting the tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double last_iterate, double last_step)
        : Error(ErrorKind::Numeric, what), last_iterate_(last_iterate), last_step_(last_step) {}

    double last_iterate() const noexcept { return last_iterate_; }
    double last_step() const noexcept { return last_step_; }

private:
    double last_iterate_;
    double last_step_;
};

/// Intermediate magnitudes left the representable range.
class OverflowError : public Error {
public:
    explicit OverflowError(const std::string& what) : Error(ErrorKind::Numeric, what) {}
};

/// Population cap hit in branching simulation.
class PopulationCapError : public Error {
public:
    PopulationCapError(const std::string& what, std::size_t population)
        : Error(ErrorKind::Numeric, what), population_(population) {}

    std::size_t population() const noexcept { return population_; }

private:
    std::size_t population_;
};

}  // namespace jgw
