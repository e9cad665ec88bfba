#pragma once

#include <stdexcept>
#include <string>

namespace cotest {

// Bad input: malformed files, invalid experiment configs, unknown algorithm ids.
// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A caller broke an operation's contract (empty training set, missing
// confidences under aggressive selection, ...). CLI exit code 3.
class ContractError : public std::runtime_error {
 public:
  explicit ContractError(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public ConfigError {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : ConfigError(file + ":" + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace cotest
