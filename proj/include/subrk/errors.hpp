#pragma once

#include <stdexcept>
#include <string>

namespace subrk {

// Exit codes used by the CLI; exceptions carry them so the dispatcher can map
// failures without string matching.
enum class ErrorCode : int { usage = 1, domain = 2, numerical = 3, suite = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error(ErrorCode::usage, what) {}
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(ErrorCode::domain, what) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(ErrorCode::numerical, what) {}
};

}  // namespace subrk
