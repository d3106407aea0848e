#ifndef MARKETNET_ERRORS_HPP
#define MARKETNET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace marketnet {

/// Base class for all marketnet errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file (bad CSV cell, missing header, ...). Carries the
/// 1-based row/column of the offending cell when known.
class FormatError : public Error {
public:
    FormatError(const std::string& msg, std::size_t row = 0, std::size_t col = 0)
        : Error(locate(msg, row, col)), row_(row), col_(col) {}

    std::size_t row() const { return row_; }
    std::size_t col() const { return col_; }

private:
    static std::string locate(const std::string& msg, std::size_t row, std::size_t col) {
        if (row == 0) return msg;
        std::string s = msg + " (row " + std::to_string(row);
        if (col > 0) s += ", column " + std::to_string(col);
        return s + ")";
    }
    std::size_t row_;
    std::size_t col_;
};

/// Well-formed input that violates a data invariant (non-positive price,
/// zero-variance series, unordered dates, ...).
class DataError : public Error {
public:
    using Error::Error;
};

/// Too few observations for the requested computation.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Iterative method hit its iteration cap before reaching tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, double residual, long iterations)
        : Error(msg + " (residual " + std::to_string(residual) + " after " +
                std::to_string(iterations) + " iterations)"),
          residual_(residual),
          iterations_(iterations) {}

    double residual() const { return residual_; }
    long iterations() const { return iterations_; }

private:
    double residual_;
    long iterations_;
};

/// Optimization problem has no feasible solution under the given constraints.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

}  // namespace marketnet

#endif  // MARKETNET_ERRORS_HPP
