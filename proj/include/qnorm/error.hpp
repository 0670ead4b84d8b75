#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qnorm {

// Malformed user input (bad flags, algebra specs, condition expressions).
// Everything else surfaces as std::domain_error or another std::exception.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ParseError : public UsageError {
public:
    ParseError(const std::string& message, std::size_t position)
        : UsageError(message + " at position " + std::to_string(position)),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

}  // namespace qnorm
