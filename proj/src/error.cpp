#include "sampcap/error.hpp"

namespace sampcap {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::domain: return "domain";
    case ErrorKind::no_usable_spectrum: return "no_usable_spectrum";
    case ErrorKind::alias_window: return "alias_window";
    case ErrorKind::degenerate_sampler: return "degenerate_sampler";
    case ErrorKind::nonconvergence: return "nonconvergence";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::singular_noise: return "singular_noise";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::validation:
    case ErrorKind::domain: return 2;
    case ErrorKind::nonconvergence: return 3;
    case ErrorKind::infeasible: return 4;
    case ErrorKind::no_usable_spectrum: return 5;
    case ErrorKind::alias_window: return 6;
    case ErrorKind::degenerate_sampler: return 7;
    case ErrorKind::singular_noise: return 8;
  }
  return 1;
}

}  // namespace sampcap
