#pragma once

#include <stdexcept>
#include <string>

namespace wsum {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input text. Carries position info in the message.
struct ParseError : Error {
  ParseError(std::string msg, int line, int col)
      : Error("parse error at " + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line(line), col(col) {}
  int line, col;
};

// Structurally well-formed input that violates a static constraint
// (arity mismatch, duplicate rule, free variable escaping a rule head, ...).
struct ValidationError : Error {
  using Error::Error;
};

struct UnboundVariable : Error {
  explicit UnboundVariable(const std::string& var) : Error("unbound variable: " + var) {}
};

struct UnknownSymbol : Error {
  explicit UnknownSymbol(const std::string& sym) : Error("unknown symbol: " + sym) {}
};

struct UnknownBuiltin : Error {
  explicit UnknownBuiltin(const std::string& name) : Error("unknown builtin: " + name) {}
};

// A fixpoint iteration ran past its a-priori termination bound; this
// signals an evaluator bug, not a data condition.
struct IterationBoundExceeded : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct UnsupportedWeight : Error {
  using Error::Error;
};

struct PreconditionUnsatisfiable : Error {
  using Error::Error;
};

}  // namespace wsum
