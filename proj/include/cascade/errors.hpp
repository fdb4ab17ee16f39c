#pragma once

#include <stdexcept>
#include <string>

namespace cascade {

enum class ErrorKind {
    Domain,
    DimensionMismatch,
    NonFinite,
    NonPhysical,
    DegenerateGate,
    NoSuddenChange,
    NoDeathInRange,
    AlreadyDead,
    NotBracketed,
    Parse,
    Validation,
    Io,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NonPhysical: return "NonPhysical";
    case ErrorKind::DegenerateGate: return "DegenerateGate";
    case ErrorKind::NoSuddenChange: return "NoSuddenChange";
    case ErrorKind::NoDeathInRange: return "NoDeathInRange";
    case ErrorKind::AlreadyDead: return "AlreadyDead";
    case ErrorKind::NotBracketed: return "NotBracketed";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Validation: return "ValidationError";
    case ErrorKind::Io: return "IoError";
    }
    return "Error";
}

} // namespace cascade
