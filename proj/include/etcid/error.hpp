// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace etcid {

/// Failure categories. The CLI maps each one to a distinct exit code.
enum class ErrorKind {
  kInvalidArgument,  // parameter outside its documented range
  kDimension,        // image geometry unsuitable for the operation
  kFormat,           // malformed or unsupported bitstream / file
  kIo,               // file system failure
  kKey,              // seed or key file problem
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace etcid
