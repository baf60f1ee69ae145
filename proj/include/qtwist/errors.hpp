#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qtwist {

/// Rejected input or violated precondition.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numeric guard tripped: a tail bound could not be met, a coefficient
/// table is too short, a split-residual gate failed.
class NumericGuardError : public std::runtime_error {
public:
    explicit NumericGuardError(const std::string& what, std::uint64_t required = 0)
        : std::runtime_error(what), required_(required) {}

    /// Table size or term count that would have been needed, 0 if not applicable.
    std::uint64_t required() const noexcept { return required_; }

private:
    std::uint64_t required_;
};

/// Malformed or unreadable file.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qtwist
