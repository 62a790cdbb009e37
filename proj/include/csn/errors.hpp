#pragma once

#include <stdexcept>
#include <string>

namespace csn {

// Contract violations are exceptions; negative mathematical verdicts
// (failed checks, infeasibility, incompatibility, decode failure) are
// ordinary return values.
enum class ErrKind {
  malformed_input,    // unparsable or ill-formed value (bad partition, bad matrix, ...)
  ambient_mismatch,   // operands built over different taxa sets
  incompatible,       // operation requires a compatible split system
  illegal_twist,      // twist axis crosses a diagonal or is not a chord
  not_representable,  // value violates a representation invariant
  capacity,           // exhaustive enumeration beyond the configured bound
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  ErrKind kind() const { return kind_; }

 private:
  ErrKind kind_;
};

[[noreturn]] inline void fail(ErrKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline const char* err_kind_name(ErrKind k) {
  switch (k) {
    case ErrKind::malformed_input: return "malformed_input";
    case ErrKind::ambient_mismatch: return "ambient_mismatch";
    case ErrKind::incompatible: return "incompatible";
    case ErrKind::illegal_twist: return "illegal_twist";
    case ErrKind::not_representable: return "not_representable";
    case ErrKind::capacity: return "capacity";
    case ErrKind::internal: return "internal";
  }
  return "unknown";
}

}  // namespace csn
