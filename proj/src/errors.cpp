#include "infoflow/errors.hpp"

namespace infoflow {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::resource: return "resource";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::spectrum: return "spectrum";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::step_size: return "step_size";
    case ErrorKind::usage: return "usage";
    case ErrorKind::io: return "io";
    }
    return "unknown";
}

} // namespace infoflow
