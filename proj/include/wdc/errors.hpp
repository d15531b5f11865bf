#pragma once

#include <stdexcept>
#include <string>

namespace wdc {

// Failure classes. The CLI maps Validation -> exit 2 and
// Regularity/Consistency -> exit 3.
enum class ErrorKind {
  Dimension,
  Validation,
  Unsupported,
  Unbounded,
  Regularity,
  Consistency,
  Limit,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Unbounded: return "unbounded";
    case ErrorKind::Regularity: return "regularity";
    case ErrorKind::Consistency: return "consistency";
    case ErrorKind::Limit: return "limit";
  }
  return "unknown";
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace wdc
