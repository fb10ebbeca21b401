#pragma once

#include <stdexcept>
#include <string>

namespace hdx {

enum class ErrorKind {
    MalformedInput,
    GenerationFailed,
    UnknownFace,
    ParseError,
    MalformedWalk,
    NotAWalk,
    DegenerateRow,
    ConstructionMismatch,
    NotSelfAdjoint,
    DecompositionDegenerate,
    NotApplicable,
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::MalformedInput: return "MalformedInput";
        case ErrorKind::GenerationFailed: return "GenerationFailed";
        case ErrorKind::UnknownFace: return "UnknownFace";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::MalformedWalk: return "MalformedWalk";
        case ErrorKind::NotAWalk: return "NotAWalk";
        case ErrorKind::DegenerateRow: return "DegenerateRow";
        case ErrorKind::ConstructionMismatch: return "ConstructionMismatch";
        case ErrorKind::NotSelfAdjoint: return "NotSelfAdjoint";
        case ErrorKind::DecompositionDegenerate: return "DecompositionDegenerate";
        case ErrorKind::NotApplicable: return "NotApplicable";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(std::string(to_string(kind)) + ": " + msg), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
    throw Error(kind, msg);
}

} // namespace hdx
