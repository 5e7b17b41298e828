#include "bean/ast.hpp"

#include <cassert>

namespace bean {

std::string_view prim_name(PrimOp op) {
  switch (op) {
    case PrimOp::Add: return "add";
    case PrimOp::Sub: return "sub";
    case PrimOp::Mul: return "mul";
    case PrimOp::DMul: return "dmul";
    case PrimOp::Div: return "div";
  }
  return "?";
}

namespace mk {

namespace {
ExprPtr make(Expr::Node n, Span s) { return std::make_shared<const Expr>(Expr{std::move(n), s}); }
}  // namespace

ExprPtr lin(std::string name, Span s) { return make(node::LinVar{std::move(name)}, s); }
ExprPtr disc(std::string name, Span s) { return make(node::DiscVar{std::move(name)}, s); }
ExprPtr unit(Span s) { return make(node::UnitVal{}, s); }
ExprPtr bang(ExprPtr body, Span s) { return make(node::Bang{std::move(body)}, s); }
ExprPtr pair(ExprPtr fst, ExprPtr snd, Span s) { return make(node::Pair{std::move(fst), std::move(snd)}, s); }
ExprPtr inl(ExprPtr body, std::optional<Type> annot, Span s) {
  return make(node::Inl{std::move(body), std::move(annot)}, s);
}
ExprPtr inr(ExprPtr body, std::optional<Type> annot, Span s) {
  return make(node::Inr{std::move(body), std::move(annot)}, s);
}
ExprPtr let(std::string var, ExprPtr bound, ExprPtr body, Span s) {
  return make(node::Let{std::move(var), std::move(bound), std::move(body)}, s);
}
ExprPtr let_pair(std::string v1, std::string v2, ExprPtr bound, ExprPtr body, Span s) {
  return make(node::LetPair{std::move(v1), std::move(v2), std::move(bound), std::move(body)}, s);
}
ExprPtr dlet(std::string var, ExprPtr bound, ExprPtr body, Span s) {
  return make(node::DLet{std::move(var), std::move(bound), std::move(body)}, s);
}
ExprPtr dlet_pair(std::string v1, std::string v2, ExprPtr bound, ExprPtr body, Span s) {
  return make(node::DLetPair{std::move(v1), std::move(v2), std::move(bound), std::move(body)}, s);
}
ExprPtr case_of(ExprPtr scrutinee, std::string lvar, ExprPtr lbody, std::string rvar, ExprPtr rbody, Span s) {
  return make(node::Case{std::move(scrutinee), std::move(lvar), std::move(lbody), std::move(rvar), std::move(rbody)},
              s);
}
ExprPtr prim(PrimOp op, ExprPtr lhs, ExprPtr rhs, Span s) {
  return make(node::Prim{op, std::move(lhs), std::move(rhs)}, s);
}
ExprPtr call(std::string name, std::vector<ExprPtr> args, Span s) {
  return make(node::Call{std::move(name), std::move(args)}, s);
}

}  // namespace mk

namespace {

bool same_annot(const std::optional<Type>& a, const std::optional<Type>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || *a == *b;
}

struct EqualVisitor {
  const Expr& other;

  bool operator()(const node::LinVar& a) const { return a.name == other.as<node::LinVar>()->name; }
  bool operator()(const node::DiscVar& a) const { return a.name == other.as<node::DiscVar>()->name; }
  bool operator()(const node::UnitVal&) const { return true; }
  bool operator()(const node::Bang& a) const { return equal(*a.body, *other.as<node::Bang>()->body); }
  bool operator()(const node::Pair& a) const {
    auto* b = other.as<node::Pair>();
    return equal(*a.fst, *b->fst) && equal(*a.snd, *b->snd);
  }
  bool operator()(const node::Inl& a) const {
    auto* b = other.as<node::Inl>();
    return same_annot(a.annot, b->annot) && equal(*a.body, *b->body);
  }
  bool operator()(const node::Inr& a) const {
    auto* b = other.as<node::Inr>();
    return same_annot(a.annot, b->annot) && equal(*a.body, *b->body);
  }
  bool operator()(const node::Let& a) const {
    auto* b = other.as<node::Let>();
    return a.var == b->var && equal(*a.bound, *b->bound) && equal(*a.body, *b->body);
  }
  bool operator()(const node::LetPair& a) const {
    auto* b = other.as<node::LetPair>();
    return a.var1 == b->var1 && a.var2 == b->var2 && equal(*a.bound, *b->bound) && equal(*a.body, *b->body);
  }
  bool operator()(const node::DLet& a) const {
    auto* b = other.as<node::DLet>();
    return a.var == b->var && equal(*a.bound, *b->bound) && equal(*a.body, *b->body);
  }
  bool operator()(const node::DLetPair& a) const {
    auto* b = other.as<node::DLetPair>();
    return a.var1 == b->var1 && a.var2 == b->var2 && equal(*a.bound, *b->bound) && equal(*a.body, *b->body);
  }
  bool operator()(const node::Case& a) const {
    auto* b = other.as<node::Case>();
    return a.lvar == b->lvar && a.rvar == b->rvar && equal(*a.scrutinee, *b->scrutinee) &&
           equal(*a.lbody, *b->lbody) && equal(*a.rbody, *b->rbody);
  }
  bool operator()(const node::Prim& a) const {
    auto* b = other.as<node::Prim>();
    return a.op == b->op && equal(*a.lhs, *b->lhs) && equal(*a.rhs, *b->rhs);
  }
  bool operator()(const node::Call& a) const {
    auto* b = other.as<node::Call>();
    if (a.name != b->name || a.args.size() != b->args.size()) return false;
    for (size_t i = 0; i < a.args.size(); ++i)
      if (!equal(*a.args[i], *b->args[i])) return false;
    return true;
  }
};

// Calls f on every direct subexpression.
template <typename F>
void for_each_child(const Expr& e, F&& f) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, node::Bang> || std::is_same_v<T, node::Inl> || std::is_same_v<T, node::Inr>) {
          f(*n.body);
        } else if constexpr (std::is_same_v<T, node::Pair>) {
          f(*n.fst);
          f(*n.snd);
        } else if constexpr (std::is_same_v<T, node::Let> || std::is_same_v<T, node::LetPair> ||
                             std::is_same_v<T, node::DLet> || std::is_same_v<T, node::DLetPair>) {
          f(*n.bound);
          f(*n.body);
        } else if constexpr (std::is_same_v<T, node::Case>) {
          f(*n.scrutinee);
          f(*n.lbody);
          f(*n.rbody);
        } else if constexpr (std::is_same_v<T, node::Prim>) {
          f(*n.lhs);
          f(*n.rhs);
        } else if constexpr (std::is_same_v<T, node::Call>) {
          for (const auto& a : n.args) f(*a);
        }
      },
      e.node);
}

void free_vars_into(const Expr& e, FreeVars& out);

// Free variables of `body` minus the given binders, merged into out.
void free_vars_under(const Expr& body, std::initializer_list<const std::string*> binders, FreeVars& out) {
  FreeVars inner;
  free_vars_into(body, inner);
  for (const std::string* b : binders) {
    inner.lin.erase(*b);
    inner.disc.erase(*b);
  }
  out.lin.merge(inner.lin);
  out.disc.merge(inner.disc);
}

void free_vars_into(const Expr& e, FreeVars& out) {
  if (auto* v = e.as<node::LinVar>()) {
    out.lin.insert(v->name);
  } else if (auto* v = e.as<node::DiscVar>()) {
    out.disc.insert(v->name);
  } else if (auto* n = e.as<node::Let>()) {
    free_vars_into(*n->bound, out);
    free_vars_under(*n->body, {&n->var}, out);
  } else if (auto* n = e.as<node::DLet>()) {
    free_vars_into(*n->bound, out);
    free_vars_under(*n->body, {&n->var}, out);
  } else if (auto* n = e.as<node::LetPair>()) {
    free_vars_into(*n->bound, out);
    free_vars_under(*n->body, {&n->var1, &n->var2}, out);
  } else if (auto* n = e.as<node::DLetPair>()) {
    free_vars_into(*n->bound, out);
    free_vars_under(*n->body, {&n->var1, &n->var2}, out);
  } else if (auto* n = e.as<node::Case>()) {
    free_vars_into(*n->scrutinee, out);
    free_vars_under(*n->lbody, {&n->lvar}, out);
    free_vars_under(*n->rbody, {&n->rvar}, out);
  } else {
    for_each_child(e, [&](const Expr& c) { free_vars_into(c, out); });
  }
}

}  // namespace

bool equal(const Expr& a, const Expr& b) {
  if (&a == &b) return true;
  if (a.node.index() != b.node.index()) return false;
  return std::visit(EqualVisitor{b}, a.node);
}

bool is_variable(const Expr& e) { return e.is<node::LinVar>() || e.is<node::DiscVar>(); }

const std::string& variable_name(const Expr& e) {
  if (auto* v = e.as<node::LinVar>()) return v->name;
  assert(e.is<node::DiscVar>());
  return e.as<node::DiscVar>()->name;
}

FreeVars free_vars(const Expr& e) {
  FreeVars out;
  free_vars_into(e, out);
  return out;
}

void collect_names(const Expr& e, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, node::LinVar> || std::is_same_v<T, node::DiscVar> ||
                      std::is_same_v<T, node::Call>) {
          out.insert(n.name);
        } else if constexpr (std::is_same_v<T, node::Let> || std::is_same_v<T, node::DLet>) {
          out.insert(n.var);
        } else if constexpr (std::is_same_v<T, node::LetPair> || std::is_same_v<T, node::DLetPair>) {
          out.insert(n.var1);
          out.insert(n.var2);
        } else if constexpr (std::is_same_v<T, node::Case>) {
          out.insert(n.lvar);
          out.insert(n.rvar);
        }
      },
      e.node);
  for_each_child(e, [&](const Expr& c) { collect_names(c, out); });
}

bool is_call_free(const Expr& e) {
  if (e.is<node::Call>()) return false;
  bool ok = true;
  for_each_child(e, [&](const Expr& c) { ok = ok && is_call_free(c); });
  return ok;
}

bool is_op_normal(const Expr& e) {
  if (auto* p = e.as<node::Prim>()) return is_variable(*p->lhs) && is_variable(*p->rhs);
  bool ok = true;
  for_each_child(e, [&](const Expr& c) { ok = ok && is_op_normal(c); });
  return ok;
}

int count_nodes(const Expr& e) {
  int n = 1;
  for_each_child(e, [&](const Expr& c) { n += count_nodes(c); });
  return n;
}

int count_ops(const Expr& e) {
  int n = e.is<node::Prim>() ? 1 : 0;
  for_each_child(e, [&](const Expr& c) { n += count_ops(c); });
  return n;
}

const TopLevelDef* Program::find(std::string_view name) const {
  for (const auto& d : defs)
    if (d.name == name) return &d;
  return nullptr;
}

const TopLevelDef& Program::main_def() const {
  const TopLevelDef* d = find(main);
  if (!d) throw Error(ErrorCode::UnknownMain, "no definition named '" + main + "'");
  return *d;
}

std::string FreshNames::fresh(const std::string& base) {
  if (taken_.insert(base).second) return base;
  for (int k = 1;; ++k) {
    std::string candidate = base + "_" + std::to_string(k);
    if (taken_.insert(candidate).second) return candidate;
  }
}

}  // namespace bean
