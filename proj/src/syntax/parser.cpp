#include <set>

#include "bean/syntax.hpp"

namespace bean {

namespace {

std::string describe(const Token& t) { return t.kind == Tok::End ? "end of input" : "'" + t.text + "'"; }

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  Program program(std::optional<std::string> main) {
    Program p;
    std::set<std::string> names;
    while (!at(Tok::End)) {
      TopLevelDef d = def();
      if (!names.insert(d.name).second)
        throw Error(ErrorCode::DuplicateDef, "duplicate definition '" + d.name + "'", d.span);
      p.defs.push_back(std::move(d));
    }
    if (p.defs.empty()) throw Error(ErrorCode::Syntax, "program has no definitions", peek().span);
    p.main = main ? *main : p.defs.back().name;
    if (!p.find(p.main)) throw Error(ErrorCode::UnknownMain, "no definition named '" + p.main + "'");
    return p;
  }

  Type type_only() {
    Type t = type();
    expect(Tok::End, "end of type");
    return t;
  }

 private:
  struct Binding {
    std::string name;
    bool discrete;
  };

  std::vector<Token> toks_;
  size_t pos_ = 0;
  std::vector<Binding> scope_;

  const Token& peek(size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at(Tok k) const { return peek().kind == k; }
  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  Token expect(Tok k, const char* what) {
    if (!at(k)) throw Error(ErrorCode::Syntax, std::string("expected ") + what + " but found " + describe(peek()),
                            peek().span);
    return take();
  }

  std::string ident(const char* what) { return expect(Tok::Ident, what).text; }

  const Binding* lookup(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->name == name) return &*it;
    return nullptr;
  }

  // An identifier followed by `:=`, `{`, or `( ident :` starts a definition.
  bool def_header_ahead() const {
    if (peek().kind != Tok::Ident) return false;
    Tok next = peek(1).kind;
    if (next == Tok::Define || next == Tok::LBrace) return true;
    return next == Tok::LParen && peek(2).kind == Tok::Ident && peek(3).kind == Tok::Colon;
  }

  TopLevelDef def() {
    TopLevelDef d;
    d.span = peek().span;
    d.name = ident("definition name");
    std::set<std::string> seen;
    while (at(Tok::LParen) || at(Tok::LBrace)) {
      bool discrete = at(Tok::LBrace);
      take();
      Param prm{"", Type::num(), discrete ? ParamKind::Discrete : ParamKind::Linear, peek().span};
      prm.name = ident("parameter name");
      expect(Tok::Colon, "':'");
      prm.type = type();
      expect(discrete ? Tok::RBrace : Tok::RParen, discrete ? "'}'" : "')'");
      if (!seen.insert(prm.name).second)
        throw Error(ErrorCode::DuplicateParam, "duplicate parameter '" + prm.name + "'", prm.span);
      d.params.push_back(std::move(prm));
    }
    expect(Tok::Define, "':='");
    scope_.clear();
    for (const auto& prm : d.params) scope_.push_back({prm.name, prm.kind == ParamKind::Discrete});
    d.body = expr();
    scope_.clear();
    if (!at(Tok::End) && !def_header_ahead())
      throw Error(ErrorCode::Syntax, "unexpected " + describe(peek()) + " after definition body", peek().span);
    return d;
  }

  // ---- patterns ----

  // A variable, or a tuple of patterns; (a, b, c) nests to the right.
  struct Pattern {
    std::string name;  // empty for tuples
    std::vector<Pattern> parts;
    Span span;
  };

  Pattern pattern() {
    Span s = peek().span;
    if (!at(Tok::LParen)) return Pattern{ident("variable"), {}, s};
    take();
    std::vector<Pattern> items{pattern()};
    while (at(Tok::Comma)) {
      take();
      items.push_back(pattern());
    }
    expect(Tok::RParen, "')'");
    if (items.size() < 2) throw Error(ErrorCode::Syntax, "a pattern needs at least two components", s);
    Pattern out = std::move(items.back());
    for (size_t k = items.size() - 1; k-- > 0;) out = Pattern{"", {std::move(items[k]), std::move(out)}, s};
    return out;
  }

  static void check_leaves(const Pattern& p, std::set<std::string>& seen) {
    if (p.parts.empty()) {
      if (!seen.insert(p.name).second) throw Error(ErrorCode::Syntax, "pattern binds '" + p.name + "' twice", p.span);
      return;
    }
    for (const auto& q : p.parts) check_leaves(q, seen);
  }

  static void leaf_names(const Pattern& p, std::string& out) {
    if (p.parts.empty()) {
      out += (out.empty() ? "" : "_") + p.name;
      return;
    }
    for (const auto& q : p.parts) leaf_names(q, out);
  }

  // Binder for a nested component: its leaf names joined, primed until unused.
  std::string component_name(const Pattern& p, const std::set<std::string>& leaves) const {
    if (p.parts.empty()) return p.name;
    std::string n;
    leaf_names(p, n);
    n += "'";
    while (leaves.count(n) || lookup(n)) n += "'";
    return n;
  }

  ExprPtr destructure(const Pattern& p, ExprPtr bound, ExprPtr body, bool discrete,
                      const std::set<std::string>& leaves, Span s) const {
    std::string a = component_name(p.parts[0], leaves);
    std::string b = component_name(p.parts[1], leaves);
    auto var = [&](const std::string& n) { return discrete ? mk::disc(n, s) : mk::lin(n, s); };
    if (!p.parts[1].parts.empty()) body = destructure(p.parts[1], var(b), body, discrete, leaves, s);
    if (!p.parts[0].parts.empty()) body = destructure(p.parts[0], var(a), body, discrete, leaves, s);
    return discrete ? mk::dlet_pair(a, b, bound, body, s) : mk::let_pair(a, b, bound, body, s);
  }

  // ---- expressions ----

  ExprPtr scoped(std::initializer_list<std::string> names, bool discrete) {
    for (const auto& n : names) scope_.push_back({n, discrete});
    ExprPtr body = expr();
    scope_.resize(scope_.size() - names.size());
    return body;
  }

  ExprPtr expr() {
    Span s = peek().span;
    if (at(Tok::Let) || at(Tok::DLet)) {
      bool discrete = take().kind == Tok::DLet;
      if (at(Tok::LParen)) {
        Pattern pat = pattern();
        std::set<std::string> leaves;
        check_leaves(pat, leaves);
        expect(Tok::Eq, "'='");
        ExprPtr bound = expr();
        expect(Tok::In, "'in'");
        for (const auto& n : leaves) scope_.push_back({n, discrete});
        ExprPtr body = expr();
        scope_.resize(scope_.size() - leaves.size());
        return destructure(pat, bound, body, discrete, leaves, s);
      }
      std::string x = ident("variable");
      expect(Tok::Eq, "'='");
      ExprPtr bound = expr();
      expect(Tok::In, "'in'");
      ExprPtr body = scoped({x}, discrete);
      return discrete ? mk::dlet(x, bound, body, s) : mk::let(x, bound, body, s);
    }
    if (at(Tok::Case)) {
      take();
      ExprPtr scrutinee = expr();
      expect(Tok::Of, "'of'");
      expect(Tok::Inl, "'inl'");
      std::string x = binder();
      expect(Tok::Arrow, "'=>'");
      ExprPtr lbody = scoped({x}, false);
      expect(Tok::Bar, "'|'");
      expect(Tok::Inr, "'inr'");
      std::string y = binder();
      expect(Tok::Arrow, "'=>'");
      ExprPtr rbody = scoped({y}, false);
      return mk::case_of(scrutinee, x, lbody, y, rbody, s);
    }
    return app();
  }

  std::string binder() {
    if (at(Tok::LParen)) {
      take();
      std::string x = ident("variable");
      expect(Tok::RParen, "')'");
      return x;
    }
    return ident("variable");
  }

  bool starts_atom() const {
    return (at(Tok::Ident) && !def_header_ahead()) || at(Tok::LParen) || at(Tok::Bang);
  }

  ExprPtr app() {
    Span s = peek().span;
    switch (peek().kind) {
      case Tok::Add:
      case Tok::Sub:
      case Tok::Mul:
      case Tok::DMul:
      case Tok::Div: {
        Tok k = take().kind;
        PrimOp op = k == Tok::Add   ? PrimOp::Add
                    : k == Tok::Sub ? PrimOp::Sub
                    : k == Tok::Mul ? PrimOp::Mul
                    : k == Tok::DMul ? PrimOp::DMul
                                     : PrimOp::Div;
        ExprPtr lhs = atom();
        ExprPtr rhs = atom();
        return mk::prim(op, lhs, rhs, s);
      }
      case Tok::Inl:
      case Tok::Inr: {
        bool left = take().kind == Tok::Inl;
        ExprPtr body = atom();
        std::optional<Type> annot;
        if (at(Tok::Colon)) {
          Span ts = take().span;
          annot = type();
          if (!annot->is(Type::Kind::Sum))
            throw Error(ErrorCode::Syntax, "injection annotation must be a sum type", ts);
        }
        return left ? mk::inl(body, annot, s) : mk::inr(body, annot, s);
      }
      case Tok::Ident:
        if (!lookup(peek().text)) {
          std::string name = take().text;
          std::vector<ExprPtr> args;
          while (starts_atom()) args.push_back(atom());
          return mk::call(name, std::move(args), s);
        }
        return atom();
      default:
        return atom();
    }
  }

  ExprPtr atom() {
    Span s = peek().span;
    if (at(Tok::Ident)) {
      std::string name = take().text;
      const Binding* b = lookup(name);
      if (!b) return mk::call(name, {}, s);
      return b->discrete ? mk::disc(name, s) : mk::lin(name, s);
    }
    if (at(Tok::Bang)) {
      take();
      return mk::bang(atom(), s);
    }
    if (at(Tok::LParen)) {
      take();
      if (at(Tok::RParen)) {
        take();
        return mk::unit(s);
      }
      std::vector<ExprPtr> items{expr()};
      while (at(Tok::Comma)) {
        take();
        items.push_back(expr());
      }
      expect(Tok::RParen, "')'");
      if (items.size() == 1) return items[0];
      // (a, b, c) is (a, (b, c))
      ExprPtr e = items.back();
      for (size_t i = items.size() - 1; i-- > 0;) e = mk::pair(items[i], e, s);
      return e;
    }
    throw Error(ErrorCode::Syntax, "expected an expression but found " + describe(peek()), s);
  }

  // ---- types ----
  // sum < tensor < power < prefix ! < atom; sums and tensors nest to the right.

  Type type() {
    Type l = tensor_type();
    if (at(Tok::Plus)) {
      take();
      return Type::sum(l, type());
    }
    return l;
  }

  Type tensor_type() {
    Type l = pow_type();
    if (at(Tok::Star)) {
      take();
      return Type::tensor(l, tensor_type());
    }
    return l;
  }

  Type pow_type() {
    Type t = prefix_type();
    while (at(Tok::Caret)) {
      take();
      Token n = expect(Tok::Int, "a vector length");
      long len = std::strtol(n.text.c_str(), nullptr, 10);
      if (len < 1 || len > 100000) throw Error(ErrorCode::Syntax, "vector length must be at least 1", n.span);
      t = Type::vec(t, static_cast<int>(len));
    }
    return t;
  }

  Type prefix_type() {
    if (at(Tok::Bang)) {
      take();
      return Type::disc(prefix_type());
    }
    if (at(Tok::NumTy)) {
      take();
      return Type::num();
    }
    if (at(Tok::UnitTy)) {
      take();
      return Type::unit();
    }
    if (at(Tok::LParen)) {
      take();
      Type t = type();
      expect(Tok::RParen, "')'");
      return t;
    }
    throw Error(ErrorCode::Syntax, "expected a type but found " + describe(peek()), peek().span);
  }
};

}  // namespace

Program parse_program(std::string_view source, std::optional<std::string> main) {
  return Parser(source).program(std::move(main));
}

Type parse_type(std::string_view source) { return Parser(source).type_only(); }

}  // namespace bean
