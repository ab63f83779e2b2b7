#pragma once

#include <stdexcept>
#include <string>

namespace relex {

// Error categories map 1:1 onto CLI exit codes.
enum class ErrorKind {
    config = 2,
    data = 3,
    backend = 4,
    internal = 5,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }
    int exit_code() const { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::config: return "config";
        case ErrorKind::data: return "data";
        case ErrorKind::backend: return "backend";
        case ErrorKind::internal: return "internal";
    }
    return "unknown";
}

} // namespace relex
