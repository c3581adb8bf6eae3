#pragma once

#include <stdexcept>
#include <string>

namespace fpres {

enum class ErrorKind {
    InvalidInput,
    Structural,
    Inconsistency,
    NotApplicable,
    IncompleteInput,
    ResourceLimit,
    FusionIntegrality,
    MalformedBundle,
    InvalidExtension,
    ResolutionInconsistency,
    Schema,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace fpres
