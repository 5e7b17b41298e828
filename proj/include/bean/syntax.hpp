#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bean/ast.hpp"

namespace bean {

// ---- lexing --------------------------------------------------------------

enum class Tok {
  Ident, Int, Let, DLet, In, Case, Of, Inl, Inr, Add, Sub, Mul, DMul, Div, NumTy, UnitTy,
  LParen, RParen, LBrace, RBrace, Comma, Eq, Define, Arrow, Bar, Bang, Colon, Star, Plus, Caret,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  Span span;
};

// Throws Error(Lex) on stray characters. `//` starts a comment.
std::vector<Token> lex(std::string_view source);

// ---- parsing -------------------------------------------------------------

// Definitions look like `name (x : ty) {z : ty} := body`; parentheses bind
// linear parameters and braces bind discrete ones. `main` defaults to the
// last definition.
Program parse_program(std::string_view source, std::optional<std::string> main = std::nullopt);
Type parse_type(std::string_view source);

// ---- printing ------------------------------------------------------------

std::string pretty_print(const Expr& e);
std::string pretty_print(const TopLevelDef& d);
std::string pretty_print(const Program& p);

// ---- desugaring ----------------------------------------------------------

struct Expanded {
  ExprPtr body;
  std::vector<Param> params;
};

// Inlines every call in main's body. Binders of inlined bodies are renamed
// apart from all names in the program.
Expanded expand_defs(const Program& p);

// Hoists non-variable primitive operands into lets (dlet for the first
// operand of dmul) and renames binders that shadow a variable in scope.
// Names free in `e` are treated as in scope.
ExprPtr desugar_ops(const ExprPtr& e);

// Parse, expand, desugar.
Expanded load_program(std::string_view source, std::optional<std::string> main = std::nullopt);

}  // namespace bean
