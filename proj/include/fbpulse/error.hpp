#pragma once

#include <stdexcept>
#include <string>

namespace fbpulse {

/// Raised when an argument violates a documented precondition.
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised by the readers. `where()` names the offending line or field.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string where, const std::string& what)
        : std::runtime_error(where + ": " + what), where_(std::move(where)) {}

    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

} // namespace fbpulse
