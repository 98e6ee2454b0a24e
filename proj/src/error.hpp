#pragma once

#include <stdexcept>
#include <string>

namespace qalpha {

// Error taxonomy mirrors the CLI exit codes: 1 argument, 2 I/O, 3 numeric.
enum class ErrorKind { argument = 1, io = 2, numeric = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string msg) : std::runtime_error(std::move(msg)), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail_arg(const std::string& msg) { throw Error(ErrorKind::argument, msg); }
[[noreturn]] inline void fail_io(const std::string& msg) { throw Error(ErrorKind::io, msg); }
[[noreturn]] inline void fail_numeric(const std::string& msg) { throw Error(ErrorKind::numeric, msg); }

}  // namespace qalpha
