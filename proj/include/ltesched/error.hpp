#pragma once

#include <stdexcept>
#include <string>

namespace ltesched {

/// Caller broke a documented precondition (negative weight, out-of-range CQI, ...).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Input rejected at an API boundary (unknown QCI label, oversized oracle instance, ...).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Bad experiment configuration. `line` is 0 when the problem is not tied to a line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

/// The simulator detected a broken internal invariant. Never swallowed.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace ltesched
