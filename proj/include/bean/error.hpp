#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bean {

// Source position, 1-based. A zero line means "no location".
struct Span {
  int line = 0;
  int col = 0;
};

enum class ErrorCode {
  // syntax
  Lex,
  Syntax,
  DuplicateDef,
  DuplicateParam,
  UnknownMain,
  UnknownDef,
  Arity,
  ArgumentKind,
  // typecheck
  UnboundVariable,
  Linearity,
  Kind,
  TypeMismatch,
  BranchMismatch,
  AmbiguousInjection,
  // numerics / semantics
  Overflow,
  InvalidOperation,
  BackwardDomain,
  EnvMismatch,
  InputShape,
  Config,
};

// Stable machine-readable name, used in JSON diagnostics.
std::string_view code_name(ErrorCode code);

// True for diagnostics raised while parsing or expanding definitions.
bool is_parse_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, Span span = {})
      : std::runtime_error(std::move(message)), code_(code), span_(span) {}

  ErrorCode code() const { return code_; }
  const Span& span() const { return span_; }

  // "line:col: message" when a location is known.
  std::string describe() const;

 private:
  ErrorCode code_;
  Span span_;
};

}  // namespace bean
