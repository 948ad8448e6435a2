#pragma once

#include <stdexcept>
#include <string>

namespace nbcoll {

enum class ErrorKind {
  InvalidArgument,
  SingularConfiguration,
  Degenerate,
  FrameDegenerate,
  GimbalDegenerate,
  DivisionDegenerate,
  ChartSeam,
  ChartOrigin,
  SquareRootDomain,
  Asymmetry,
  SquareRootFailure,
  NoStableMode,
  InsufficientTail,
  StepFailure,
  NoConvergence,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers can map it
// to exit codes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace nbcoll
