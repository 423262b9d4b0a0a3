#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace specreg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The constraint set of a quadratic program has no feasible point.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// A return column has zero sample variance inside a window.
class DegenerateColumnError : public Error {
public:
    DegenerateColumnError(std::size_t column, const std::string& ticker)
        : Error("zero-variance column " + std::to_string(column) +
                (ticker.empty() ? std::string{} : " (" + ticker + ")")),
          column_(column),
          ticker_(ticker) {}

    std::size_t column() const noexcept { return column_; }
    const std::string& ticker() const noexcept { return ticker_; }

private:
    std::size_t column_;
    std::string ticker_;
};

}  // namespace specreg
