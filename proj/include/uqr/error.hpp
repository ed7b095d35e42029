#pragma once

#include <stdexcept>
#include <string>

namespace uqr {

/// Base class for every error raised by the library. `code()` is the
/// machine-readable tag surfaced by the CLI.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct InvalidParameter : Error {
    explicit InvalidParameter(const std::string& what) : Error("invalid-parameter", what) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error("domain-error", what) {}
};

struct BudgetExceeded : Error {
    explicit BudgetExceeded(const std::string& what) : Error("budget-exceeded", what) {}
};

struct UnsupportedOperation : Error {
    explicit UnsupportedOperation(const std::string& what) : Error("unsupported-operation", what) {}
};

struct ConstructionFailed : Error {
    explicit ConstructionFailed(const std::string& what) : Error("construction-failed", what) {}
};

}  // namespace uqr
