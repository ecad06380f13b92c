#pragma once

#include <stdexcept>
#include <string>

namespace cantorsaw {

// Failure categories. The CLI maps each one onto a process exit code.
enum class ErrorKind {
    InvalidArgument,      // malformed parameters, term syntax, mask data
    MalformedElement,     // element does not fit the group's normal form
    EmptyGeneratingSet,
    ResourceExhausted,    // ball or time budget exceeded
    FiniteGraph,          // mu undefined: some c_n vanished
    Precondition,         // operation called outside its domain
    TrivialSubgroup,      // N = {1} where a nontrivial N is required
    NoStabilization,      // horizon reached without stabilizing
    ConstructionFailure,  // no admissible modulus below m_limit
    InvariantViolation,   // an exact invariant failed: engine bug
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

} // namespace cantorsaw
