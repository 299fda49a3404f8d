#pragma once

#include <stdexcept>
#include <string>

namespace kcurve {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid geometric input: bad radius, mismatched endpoints, malformed
// component data, out-of-domain query points.
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// A curve failed a structural validity check (joint continuity, curvature
// bound, chord consistency).
struct ValidationError : Error {
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// A requested deformation move cannot be applied to the given curve
// (no admissible window, endpoints would move, antiparallel condition
// violated, ...).
struct MoveError : Error {
    explicit MoveError(const std::string& msg) : Error(msg) {}
};

// A randomized construction exhausted its retry budget.
struct GenerationError : Error {
    explicit GenerationError(const std::string& msg) : Error(msg) {}
};

// Errors raised while parsing serialized curves / requests.
struct ParseError : Error {
    enum class Kind { Syntax, Schema, Validation };
    Kind kind;
    ParseError(Kind k, const std::string& msg) : Error(msg), kind(k) {}
};

}  // namespace kcurve
