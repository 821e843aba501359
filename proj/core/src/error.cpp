#include "tzitzeica/error.hpp"

namespace tzitzeica {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::Alignment: return "alignment";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Range: return "range";
    case ErrorKind::Inapplicable: return "inapplicable";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::NoSolution: return "no-solution";
    case ErrorKind::Numerical: return "numerical";
    }
    return "unknown";
}

} // namespace tzitzeica
