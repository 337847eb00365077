#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace symsel {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

class DomainError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "domain_error"; }
};

// Dimension mismatches and malformed model specifications.
class SpecError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "spec_error"; }
};

// Bad input data; row is zero-based when known.
class DataError : public Error {
public:
    DataError(const std::string& what, std::optional<std::size_t> row = std::nullopt)
        : Error(what), row_(row) {}
    std::optional<std::size_t> row() const noexcept { return row_; }
    const char* kind() const noexcept override { return "data_error"; }

private:
    std::optional<std::size_t> row_;
};

// Quadrature or iteration failed to reach its tolerance.
class NumericError : public Error {
public:
    NumericError(const std::string& what, double estimate = 0.0, double error_estimate = 0.0)
        : Error(what), estimate_(estimate), error_estimate_(error_estimate) {}
    double estimate() const noexcept { return estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }
    const char* kind() const noexcept override { return "numeric_error"; }

private:
    double estimate_;
    double error_estimate_;
};

class NonNormalizableError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "non_normalizable_generator"; }
};

// A log-likelihood term evaluated to NaN or an infinity.
class NonFiniteError : public Error {
public:
    NonFiniteError(const std::string& what, std::size_t row) : Error(what), row_(row) {}
    std::size_t row() const noexcept { return row_; }
    const char* kind() const noexcept override { return "non_finite"; }

private:
    std::size_t row_;
};

class InitializationError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "initialization_error"; }
};

class UnsupportedGeneratorError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "unsupported_generator"; }
};

class StudyError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "study_error"; }
};

class DiagnosticError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "diagnostic_error"; }
};

}  // namespace symsel
