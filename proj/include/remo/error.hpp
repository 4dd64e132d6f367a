#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace remo {

/// Numeric values are part of the wire format.
enum class ErrorCode : std::uint8_t {
  NotFound = 1,
  UnknownObject = 2,
  UnknownFunction = 3,
  NotSerializable = 4,
  ContractViolation = 5,
  ExecutionError = 6,
  ProtocolError = 7,
};

std::string_view error_code_name(ErrorCode code);

/// Returns false for bytes outside 1..7.
bool error_code_from_byte(std::uint8_t b, ErrorCode &out);

/// An error with a wire-visible code, raised locally or relayed from a host.
class RemoteError : public std::runtime_error {
public:
  RemoteError(ErrorCode code, const std::string &detail)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + detail),
        code_(code), detail_(detail) {}

  ErrorCode code() const { return code_; }
  const std::string &detail() const { return detail_; }

private:
  ErrorCode code_;
  std::string detail_;
};

/// Connection-level failure: unreachable endpoint, reset, short read.
class TransportError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &detail) {
  throw RemoteError(code, detail);
}

} // namespace remo
