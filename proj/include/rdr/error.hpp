#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rdr {

// Contract violations and invalid inputs. The message is the stable part of
// the contract (e.g. "degenerate hyperplane"); callers may append context.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File-system failures; the message names the path.
class IoError : public Error {
 public:
  using Error::Error;
};

// Text-format failures (config files, Matrix Market) carrying a 1-based line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace rdr
