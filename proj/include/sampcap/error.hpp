#pragma once

#include <stdexcept>
#include <string>

namespace sampcap {

enum class ErrorKind {
  validation,         // malformed document or violated type invariant
  domain,             // argument outside the operation's domain
  no_usable_spectrum, // positive power but gamma vanishes on the set
  alias_window,       // alias truncation loses row energy
  degenerate_sampler, // sampler observes nothing
  nonconvergence,     // bisection did not reach tolerance
  infeasible,         // design constraints cannot be met
  singular_noise,     // noise covariance has no usable directions
};

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

const char* to_string(ErrorKind kind) noexcept;

// Process exit code for the CLI. Validation and domain errors share code 2.
int exit_code(ErrorKind kind) noexcept;

}  // namespace sampcap
