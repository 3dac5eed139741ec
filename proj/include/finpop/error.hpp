#pragma once

#include <stdexcept>
#include <string>

namespace finpop {

enum class ErrorCode {
    invalid_argument,   // domain/validation violation
    incompatible,       // prior support disjoint from the evidence support
    no_plan,            // plan-table lookup found no matching row
    cost_guard,         // exact enumeration requested above the size limit
    parse,              // malformed prior spec or plan table
    io,                 // file not readable
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace finpop
