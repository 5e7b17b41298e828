#include "bean/error.hpp"

namespace bean {

std::string_view code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Lex: return "lex-error";
    case ErrorCode::Syntax: return "syntax-error";
    case ErrorCode::DuplicateDef: return "duplicate-definition";
    case ErrorCode::DuplicateParam: return "duplicate-parameter";
    case ErrorCode::UnknownMain: return "unknown-main";
    case ErrorCode::UnknownDef: return "unknown-definition";
    case ErrorCode::Arity: return "arity-mismatch";
    case ErrorCode::ArgumentKind: return "argument-kind-mismatch";
    case ErrorCode::UnboundVariable: return "unbound-variable";
    case ErrorCode::Linearity: return "linearity-violation";
    case ErrorCode::Kind: return "kind-error";
    case ErrorCode::TypeMismatch: return "type-mismatch";
    case ErrorCode::BranchMismatch: return "branch-type-mismatch";
    case ErrorCode::AmbiguousInjection: return "ambiguous-injection";
    case ErrorCode::Overflow: return "overflow";
    case ErrorCode::InvalidOperation: return "invalid-operation";
    case ErrorCode::BackwardDomain: return "backward-domain";
    case ErrorCode::EnvMismatch: return "environment-mismatch";
    case ErrorCode::InputShape: return "input-shape-mismatch";
    case ErrorCode::Config: return "invalid-configuration";
  }
  return "unknown";
}

bool is_parse_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::Lex:
    case ErrorCode::Syntax:
    case ErrorCode::DuplicateDef:
    case ErrorCode::DuplicateParam:
    case ErrorCode::UnknownMain:
    case ErrorCode::UnknownDef:
    case ErrorCode::Arity:
    case ErrorCode::ArgumentKind:
      return true;
    default:
      return false;
  }
}

std::string Error::describe() const {
  if (span_.line == 0) return what();
  return std::to_string(span_.line) + ":" + std::to_string(span_.col) + ": " + what();
}

}  // namespace bean
