#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace attrkws {

// Base class for every error caused by bad input (user-facing, exit code 1).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  explicit ParseError(const std::string& what) : Error(what), line_(0) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class UnknownSymbolError : public Error {
 public:
  UnknownSymbolError(std::string symbol, std::size_t position)
      : Error("unknown symbol '" + symbol + "' at position " + std::to_string(position)),
        symbol_(std::move(symbol)),
        position_(position) {}
  UnknownSymbolError(std::string symbol, std::size_t position, const std::string& context)
      : Error(context + "unknown symbol '" + symbol + "' at position " + std::to_string(position)),
        symbol_(std::move(symbol)),
        position_(position) {}
  explicit UnknownSymbolError(std::string symbol)
      : Error("unknown symbol '" + symbol + "'"), symbol_(std::move(symbol)), position_(0) {}
  const std::string& symbol() const noexcept { return symbol_; }
  std::size_t position() const noexcept { return position_; }

 private:
  std::string symbol_;
  std::size_t position_;
};

class DuplicateError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Non-finite activations, losses or gradients.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace attrkws
