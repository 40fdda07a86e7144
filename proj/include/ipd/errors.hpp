#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ipd {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters, ranges or configuration files.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Archetype parameter validation; `field` names the offending parameter.
class ValidationError : public ConfigError {
 public:
  ValidationError(std::string field, const std::string& what)
      : ConfigError(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Unknown strategy name.
class LookupError : public ConfigError {
 public:
  explicit LookupError(std::string name)
      : ConfigError("unknown strategy: " + name), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

// Malformed record file; `line` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line), detail_(what) {}
  std::size_t line() const { return line_; }
  // Message without the line prefix.
  const std::string& detail() const { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

// Analysis requested on too little data.
class InsufficientData : public Error {
 public:
  InsufficientData(const std::string& what, std::size_t required)
      : Error(what + " (need at least " + std::to_string(required) + ")"),
        required_(required) {}
  std::size_t required() const { return required_; }

 private:
  std::size_t required_;
};

}  // namespace ipd
