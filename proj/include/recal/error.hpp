#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace recal {

// Invalid configuration: bad ranges, n = 0, pi0 outside (0,1], malformed grid.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A fitter could not produce a model (single class, too few distinct values,
// no converging smoothing parameter).
class FitError : public std::runtime_error {
public:
    explicit FitError(const std::string& what, std::string diagnostics = {})
        : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}

    const std::string& diagnostics() const noexcept { return diagnostics_; }

private:
    std::string diagnostics_;
};

// Malformed prediction file. row() is the 1-based line number (header is line 1),
// or 0 when the problem is not tied to a data row.
class IngestError : public std::runtime_error {
public:
    IngestError(const std::string& what, std::size_t row)
        : std::runtime_error(what), row_(row) {}

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

} // namespace recal
