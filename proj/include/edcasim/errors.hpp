#pragma once

#include <stdexcept>
#include <string>

namespace edcasim {

// Problems in user-supplied scenario text or option values.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A counter or quantity would go negative.
struct UnderflowError : std::runtime_error {
    explicit UnderflowError(const std::string& what) : std::runtime_error(what) {}
};

// An argument is outside the domain of the operation.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// An event sequence violates the association protocol.
struct ProtocolError : std::runtime_error {
    explicit ProtocolError(const std::string& what) : std::runtime_error(what) {}
};

// A requested feature exists in the type system but has no behavior.
struct UnsupportedError : std::runtime_error {
    explicit UnsupportedError(const std::string& what) : std::runtime_error(what) {}
};

// A metric has no defined value for the given ledger (division by zero).
struct UndefinedError : std::runtime_error {
    explicit UndefinedError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem reads or writes failed.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace edcasim
