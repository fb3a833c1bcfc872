#include "lsr/error.hpp"

namespace lsr {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::solver_failure: return "solver_failure";
    case ErrorKind::contraction_failure: return "contraction_failure";
    case ErrorKind::singular_system: return "singular_system";
    case ErrorKind::eigensolver_failure: return "eigensolver_failure";
    case ErrorKind::truncation: return "truncation";
    case ErrorKind::grid_mismatch: return "grid_mismatch";
    case ErrorKind::validation: return "validation";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

}  // namespace lsr
