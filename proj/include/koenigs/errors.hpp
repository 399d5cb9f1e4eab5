#pragma once

#include <stdexcept>
#include <string>

namespace koenigs {

/// Base class for all errors thrown by this library.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// A point lies outside the domain an operation requires.
class domain_error : public error {
public:
    explicit domain_error(const std::string& what) : error(what) {}
};

/// Expression could not be evaluated (pole, branch cut, overflow).
class evaluation_error : public error {
public:
    explicit evaluation_error(const std::string& what) : error(what) {}
};

/// An iterative method (Newton, ODE stepper, refinement) did not converge.
class convergence_error : public error {
public:
    explicit convergence_error(const std::string& what) : error(what) {}
};

/// A semigroup/model consistency requirement was violated.
class model_error : public error {
public:
    explicit model_error(const std::string& what) : error(what) {}
};

/// Expression text does not conform to the grammar.
class parse_error : public error {
public:
    parse_error(const std::string& what, std::size_t line, std::size_t column)
        : error("parse error at " + std::to_string(line) + ":" + std::to_string(column) +
                ": " + what),
          line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

} // namespace koenigs
