#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace infoflow {

enum class ErrorKind {
    domain,
    convergence,
    resource,
    degenerate,
    spectrum,
    numerical,
    step_size,
    usage,
    io,
};

std::string_view to_string(ErrorKind kind) noexcept;

// All library failures carry a category so the CLI can report a single
// machine-parseable line.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

} // namespace infoflow
