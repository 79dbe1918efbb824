#pragma once

#include <stdexcept>
#include <string>

namespace chartensor {

enum class ErrorKind {
  kInvalidInput,
  kInvalidParameter,
  kIo,
  kParse,
  kEmptyCanvas,
  kEmptyTable,
  kInvalidSpec,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Error raised inside a named pipeline stage; the stage tag is prefixed to
/// the message so that failures from `extract` can be traced back.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& inner)
      : Error(inner.kind(), "[" + stage + "] " + inner.what()),
        stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace chartensor
