#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace avcp {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class NotHermitianError : public Error {
public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
public:
  using Error::Error;
};

class NotRealError : public Error {
public:
  using Error::Error;
};

class NumericalFailureError : public Error {
public:
  using Error::Error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

// Parse failure with the byte offset of the offending token.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

class UnknownSymbolError : public Error {
public:
  using Error::Error;
};

class NonScalarCommutatorError : public Error {
public:
  using Error::Error;
};

// Raised by quantize() when a polynomial has a monomial mixing symbols
// whose operators do not commute. Carries printable offender monomials.
class NotSimpleError : public Error {
public:
  NotSimpleError(const std::string& what, std::vector<std::string> offenders)
      : Error(what), offenders_(std::move(offenders)) {}
  const std::vector<std::string>& offenders() const { return offenders_; }

private:
  std::vector<std::string> offenders_;
};

class FlagMissingError : public Error {
public:
  using Error::Error;
};

class IllConditionedError : public Error {
public:
  using Error::Error;
};

class UnknownLabelError : public Error {
public:
  using Error::Error;
};

class InvalidWidthError : public Error {
public:
  using Error::Error;
};

// Configuration file problems; `path` is a dotted field path into the config.
class ConfigError : public Error {
public:
  ConfigError(const std::string& what, const std::string& path)
      : Error(what + " [" + path + "]"), path_(path) {}
  const std::string& path() const { return path_; }

private:
  std::string path_;
};

}  // namespace avcp
