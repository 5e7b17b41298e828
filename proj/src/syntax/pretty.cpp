#include <sstream>

#include "bean/syntax.hpp"

namespace bean {

namespace {

class Printer {
 public:
  std::string str() const { return out_.str(); }

  void top(const Expr& e, int indent) {
    if (auto* n = e.as<node::Let>()) {
      out_ << "let " << n->var << " = ";
      top(*n->bound, indent + 2);
      out_ << " in";
      newline(indent);
      top(*n->body, indent);
    } else if (auto* n = e.as<node::DLet>()) {
      out_ << "dlet " << n->var << " = ";
      top(*n->bound, indent + 2);
      out_ << " in";
      newline(indent);
      top(*n->body, indent);
    } else if (auto* n = e.as<node::LetPair>()) {
      out_ << "let (" << n->var1 << ", " << n->var2 << ") = ";
      top(*n->bound, indent + 2);
      out_ << " in";
      newline(indent);
      top(*n->body, indent);
    } else if (auto* n = e.as<node::DLetPair>()) {
      out_ << "dlet (" << n->var1 << ", " << n->var2 << ") = ";
      top(*n->bound, indent + 2);
      out_ << " in";
      newline(indent);
      top(*n->body, indent);
    } else if (auto* n = e.as<node::Case>()) {
      out_ << "case ";
      guarded(*n->scrutinee, indent + 2);
      out_ << " of";
      newline(indent + 2);
      out_ << "inl " << n->lvar << " => ";
      guarded(*n->lbody, indent + 4);
      newline(indent + 2);
      out_ << "| inr " << n->rvar << " => ";
      guarded(*n->rbody, indent + 4);
    } else {
      app(e, indent);
    }
  }

 private:
  std::ostringstream out_;

  void newline(int indent) { out_ << '\n' << std::string(indent, ' '); }

  // Case inside case positions gets explicit parentheses.
  void guarded(const Expr& e, int indent) {
    if (e.is<node::Case>()) {
      out_ << "(";
      top(e, indent + 1);
      out_ << ")";
    } else {
      top(e, indent);
    }
  }

  static bool is_atom(const Expr& e) {
    if (e.is<node::LinVar>() || e.is<node::DiscVar>() || e.is<node::UnitVal>() || e.is<node::Pair>() ||
        e.is<node::Bang>())
      return true;
    if (auto* c = e.as<node::Call>()) return c->args.empty();
    return false;
  }

  void app(const Expr& e, int indent) {
    if (auto* n = e.as<node::Prim>()) {
      out_ << prim_name(n->op) << ' ';
      atom(*n->lhs, indent);
      out_ << ' ';
      atom(*n->rhs, indent);
    } else if (auto* n = e.as<node::Inl>()) {
      out_ << "inl ";
      atom(*n->body, indent);
      if (n->annot) out_ << " : " << n->annot->to_string();
    } else if (auto* n = e.as<node::Inr>()) {
      out_ << "inr ";
      atom(*n->body, indent);
      if (n->annot) out_ << " : " << n->annot->to_string();
    } else if (auto* n = e.as<node::Call>()) {
      out_ << n->name;
      for (const auto& a : n->args) {
        out_ << ' ';
        atom(*a, indent);
      }
    } else {
      atom(e, indent);
    }
  }

  void atom(const Expr& e, int indent) {
    if (auto* n = e.as<node::LinVar>()) {
      out_ << n->name;
    } else if (auto* n = e.as<node::DiscVar>()) {
      out_ << n->name;
    } else if (e.is<node::UnitVal>()) {
      out_ << "()";
    } else if (auto* n = e.as<node::Bang>()) {
      out_ << '!';
      atom(*n->body, indent);
    } else if (auto* n = e.as<node::Pair>()) {
      out_ << '(';
      top(*n->fst, indent + 1);
      out_ << ", ";
      top(*n->snd, indent + 1);
      out_ << ')';
    } else if (auto* n = e.as<node::Call>(); n && n->args.empty()) {
      out_ << n->name;
    } else {
      out_ << '(';
      top(e, indent + 1);
      out_ << ')';
    }
  }
};

std::string param_text(const Param& p) {
  bool discrete = p.kind == ParamKind::Discrete;
  return std::string(discrete ? "{" : "(") + p.name + " : " + p.type.to_string() + (discrete ? "}" : ")");
}

}  // namespace

std::string pretty_print(const Expr& e) {
  Printer p;
  p.top(e, 0);
  return p.str();
}

std::string pretty_print(const TopLevelDef& d) {
  std::string head = d.name;
  for (const auto& p : d.params) head += " " + param_text(p);
  Printer body;
  body.top(*d.body, 2);
  return head + " :=\n  " + body.str() + "\n";
}

std::string pretty_print(const Program& p) {
  std::string out;
  for (size_t i = 0; i < p.defs.size(); ++i) {
    if (i) out += "\n";
    out += pretty_print(p.defs[i]);
  }
  return out;
}

}  // namespace bean
