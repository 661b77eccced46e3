// Copyright 2026 The ktsieve Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace ktsieve {

enum class ErrorCode {
  validation,  // malformed input
  range,       // argument outside the table or domain
  resource,    // memory or expansion budget exceeded
  numeric,     // quadrature or eigensolver failure
  not_found,   // search exhausted its bound
  basis,       // Gram matrix not positive definite
  io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace ktsieve
