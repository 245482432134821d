#pragma once

#include <stdexcept>
#include <string>

namespace easic {

/// Diagnostic categories. Each maps to a stable string used in CLI output.
enum class ErrorCode {
  contract,          // precondition violated by the caller
  syntax,            // Verilog / JSON / bench syntax error
  multiple_drivers,  // a net driven by more than one instance
  width_mismatch,    // LUT width vs INIT width, or pin count mismatch
  combinational_cycle,
  undeclared_net,
  dangling_input,
  unknown_cell,
  unknown_instance,
  hash_collision,
  empty_input,
  io,
  verification_failed,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorCode::contract, what);
}

}  // namespace easic
