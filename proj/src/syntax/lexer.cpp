#include <cctype>
#include <unordered_map>

#include "bean/syntax.hpp"

namespace bean {

namespace {

const std::unordered_map<std::string_view, Tok>& keywords() {
  static const std::unordered_map<std::string_view, Tok> table = {
      {"let", Tok::Let},   {"dlet", Tok::DLet}, {"in", Tok::In},     {"case", Tok::Case},
      {"of", Tok::Of},     {"inl", Tok::Inl},   {"inr", Tok::Inr},   {"add", Tok::Add},
      {"sub", Tok::Sub},   {"mul", Tok::Mul},   {"dmul", Tok::DMul}, {"div", Tok::Div},
      {"num", Tok::NumTy}, {"unit", Tok::UnitTy},
  };
  return table;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

}  // namespace

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Span span{line, col};
    if (ident_start(c)) {
      size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      std::string word(src.substr(i, j - i));
      auto kw = keywords().find(word);
      out.push_back({kw == keywords().end() ? Tok::Ident : kw->second, word, span});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Int, std::string(src.substr(i, j - i)), span});
      advance(j - i);
      continue;
    }
    auto two = src.substr(i, 2);
    if (two == ":=") {
      out.push_back({Tok::Define, ":=", span});
      advance(2);
      continue;
    }
    if (two == "=>") {
      out.push_back({Tok::Arrow, "=>", span});
      advance(2);
      continue;
    }
    Tok kind;
    switch (c) {
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case '{': kind = Tok::LBrace; break;
      case '}': kind = Tok::RBrace; break;
      case ',': kind = Tok::Comma; break;
      case '=': kind = Tok::Eq; break;
      case '|': kind = Tok::Bar; break;
      case '!': kind = Tok::Bang; break;
      case ':': kind = Tok::Colon; break;
      case '*': kind = Tok::Star; break;
      case '+': kind = Tok::Plus; break;
      case '^': kind = Tok::Caret; break;
      default:
        throw Error(ErrorCode::Lex, std::string("unexpected character '") + c + "'", span);
    }
    out.push_back({kind, std::string(1, c), span});
    advance(1);
  }
  out.push_back({Tok::End, "", Span{line, col}});
  return out;
}

}  // namespace bean
