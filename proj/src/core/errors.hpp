#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace musekit {

// Typed runtime failure. `kind` is a stable machine-readable tag; the set of
// tags used across the library is documented in the README.
struct MkError : std::runtime_error {
  std::string kind;
  MkError(std::string k, const std::string& msg)
      : std::runtime_error(msg), kind(std::move(k)) {}
};

[[noreturn]] inline void fail(const char* kind, const std::string& msg) {
  throw MkError(kind, msg);
}

}  // namespace musekit
