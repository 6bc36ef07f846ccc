#pragma once

#include <stdexcept>
#include <string>

namespace lpp {

// Stable error taxonomy shared by the core library and the C API header,
// which mirrors these values one-to-one.
enum class ErrorCode : int {
  Param = 1,        // invalid argument or configuration value
  Domain = 2,       // arguments well-formed but the requested object does not exist
  Capability = 3,   // operation not supported by this backend
  Io = 4,           // file, format, or serialization failure
  Truncated = 5,    // structure runs off the simulated window
  Inconsistent = 6, // computed data violates a structural invariant
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct ParamError : Error {
  explicit ParamError(const std::string& w) : Error(ErrorCode::Param, w) {}
};
struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(ErrorCode::Domain, w) {}
};
struct CapabilityError : Error {
  explicit CapabilityError(const std::string& w) : Error(ErrorCode::Capability, w) {}
};
struct IoError : Error {
  explicit IoError(const std::string& w) : Error(ErrorCode::Io, w) {}
};
struct TruncationError : Error {
  explicit TruncationError(const std::string& w) : Error(ErrorCode::Truncated, w) {}
};
struct InconsistencyError : Error {
  explicit InconsistencyError(const std::string& w) : Error(ErrorCode::Inconsistent, w) {}
};

}  // namespace lpp
