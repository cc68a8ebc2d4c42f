#pragma once

#include <stdexcept>
#include <string>

namespace survkit {

// Error classes double as exit-code categories at the CLI boundary:
// config -> 2, io -> 3, degenerate -> 4, dim_mismatch -> 5.
enum class ErrKind {
  config,
  io,
  degenerate,
  dim_mismatch,
  invalid,
  internal,
};

class Error : public std::runtime_error {
public:
  Error(ErrKind kind, std::string msg) : std::runtime_error(std::move(msg)), kind_(kind) {}
  ErrKind kind() const { return kind_; }

private:
  ErrKind kind_;
};

[[noreturn]] inline void fail(ErrKind kind, const std::string& msg) { throw Error(kind, msg); }

inline void require(bool cond, ErrKind kind, const std::string& msg) {
  if (!cond) fail(kind, msg);
}

}  // namespace survkit
