#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cpz {

// Base of every error thrown by the library. `kind()` is a stable
// machine-readable tag used by the CLI's JSON error reports.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// Argument outside the mathematical domain of an operation (v <= 1, limit < 2, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& message) : Error("domain_error", message) {}
};

struct Violation {
    std::string field;
    std::string message;
};

class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Violation> violations)
        : Error("validation_error", summarize(violations)), violations_(std::move(violations)) {}

    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    static std::string summarize(const std::vector<Violation>& vs) {
        std::string out = "invalid input";
        for (const auto& v : vs) out += "; " + v.field + ": " + v.message;
        return out;
    }

    std::vector<Violation> violations_;
};

// Input is well formed but outside what the operation supports
// (e.g. non-strict coefficients on a classification path).
class UnsupportedError : public Error {
public:
    explicit UnsupportedError(const std::string& message) : Error("unsupported", message) {}
};

class LookupError : public Error {
public:
    explicit LookupError(const std::string& message) : Error("lookup_error", message) {}
};

class NotADistributionError : public Error {
public:
    explicit NotADistributionError(const std::string& message)
        : Error("not_a_distribution", message) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& message) : Error("parse_error", message) {}
};

}  // namespace cpz
