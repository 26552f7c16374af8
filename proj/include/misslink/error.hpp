#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace misslink {

enum class ErrorKind {
  kIo,
  kParse,
  kInvalidArgument,
  kInfeasible,
  kNoPositives,
};

std::string_view to_string(ErrorKind kind);

/// Library-wide exception. `kind()` is stable and meant for machine consumption
/// (the CLI prints it as the first field of its error line).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace misslink
