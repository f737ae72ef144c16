#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace agility {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An operation was called with inputs outside its documented domain
// (empty timeline, tau outside (0,1), oracle horizon too large, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A matrix value lies outside [0,1].
class DomainError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Carries every violation found, not just the first.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = std::to_string(v.size()) + " validation error(s)";
    for (const auto& s : v) out += "\n  " + s;
    return out;
  }

  std::vector<std::string> violations_;
};

}  // namespace agility
