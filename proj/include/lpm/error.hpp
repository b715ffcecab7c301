#pragma once

#include <stdexcept>
#include <string>

namespace lpm {

/// Base class of every error raised by the library. The message is prefixed
/// with the name of the module that raised it, e.g. "[event_log] log.xes:14: ...".
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& message)
      : std::runtime_error("[" + module + "] " + message), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// Malformed input file or stream.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent utility spec, run config, or model input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A bounded state-space search ran out of budget before reaching a verdict.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace lpm
