#pragma once

#include <stdexcept>
#include <string>

namespace beda {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition violated by the caller (unknown state, bad epsilon, size mismatch).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Input exceeds an enumeration guard.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Network failure after all retries were spent.
class TransportError : public Error {
 public:
  using Error::Error;
};

// Peer answered, but the answer violates the wire contract.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// A prompt template placeholder was left unfilled.
class TemplateError : public Error {
 public:
  using Error::Error;
};

// Malformed or incomplete dataset / transcript content.
class DataError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Failure reading a persisted JSONL file; carries the 1-based line number.
class LoadError : public Error {
 public:
  LoadError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace beda
