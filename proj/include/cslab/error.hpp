#pragma once

#include <stdexcept>
#include <string>

namespace cslab {

enum class ErrorCode {
  kParameter = 1,
  kEmptyRequest,
  kCapacity,
  kDomain,
  kDimension,
  kIndexRange,
  kGridMismatch,
  kConfig,
  kIo,
};

// Every failure in the library surfaces as this exception; the C API maps
// code() onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

}  // namespace cslab
