#pragma once

#include <stdexcept>
#include <string>

namespace centra {

/// Base for all library errors; `code()` is a stable machine-readable tag.
class error : public std::runtime_error {
public:
    error(std::string code, const std::string& msg)
        : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

/// Malformed input files / JSON. CLI exit code 2.
class parse_error : public error {
public:
    using error::error;
};

/// A mathematical precondition does not hold (NotSameIdeal, RadicalMismatch,
/// NotSymmetric, NotClosed, dimension mismatch, ...). CLI exit code 3.
class precondition_error : public error {
public:
    using error::error;
};

/// A supplied equivalence witness is invalid (CenterMembershipFailed, failed
/// reordering identity, ...). CLI exit code 4.
class witness_error : public error {
public:
    using error::error;
};

/// The randomized generator search in the idempotent splitter gave up.
/// CLI exit code 5.
class retry_limit_error : public error {
public:
    using error::error;
};

}  // namespace centra
