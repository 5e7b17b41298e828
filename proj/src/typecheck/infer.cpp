#include <optional>
#include <unordered_map>

#include "bean/typecheck.hpp"

namespace bean {

namespace {

// name -> stack of bindings, innermost last.
template <typename T>
class ScopedMap {
 public:
  void push(const std::string& name, T value) { map_[name].push_back(std::move(value)); }
  void pop(const std::string& name) {
    auto it = map_.find(name);
    it->second.pop_back();
    if (it->second.empty()) map_.erase(it);
  }
  const T* find(const std::string& name) const {
    auto it = map_.find(name);
    return it == map_.end() ? nullptr : &it->second.back();
  }

 private:
  std::unordered_map<std::string, std::vector<T>> map_;
};

struct Judgment {
  LinearContext ctx;
  Derivation d;
};

Error linearity(const std::string& name, Span span) {
  return Error(ErrorCode::Linearity, "linearity violation: " + name + " used twice", span);
}

// Disjoint union; fails on a shared name (strict linearity).
LinearContext disjoint_union(LinearContext a, LinearContext b, Span span) {
  if (a.size() < b.size()) std::swap(a, b);
  for (auto& entry : b) {
    auto [it, fresh] = a.emplace(entry.first, std::move(entry.second));
    if (!fresh) throw linearity(entry.first, span);
  }
  return a;
}

std::optional<Grade> take_grade(LinearContext& ctx, const std::string& name) {
  auto it = ctx.find(name);
  if (it == ctx.end()) return std::nullopt;
  Grade g = it->second.grade;
  ctx.erase(it);
  return g;
}

class Inferencer {
 public:
  Inferencer(const DiscreteContext& disc, const ContextSkeleton& skel) {
    for (const auto& [n, t] : disc) disc_.push(n, t);
    for (const auto& [n, t] : skel) lin_.push(n, t);
  }

  Judgment run(const Expr& e) {
    if (auto* v = e.as<node::LinVar>()) {
      const Type& t = lin_type(v->name, e.span);
      Judgment j{{}, Derivation{Rule::Var, t, {}, {v->name}, {}, {}, e.span}};
      j.ctx.emplace(v->name, LinBinding{t, Grade::zero()});
      j.d.local = j.ctx;
      return j;
    }
    if (auto* v = e.as<node::DiscVar>()) {
      const Type& t = disc_type(v->name, e.span);
      return Judgment{{}, Derivation{Rule::DVar, t, {}, {v->name}, {}, {}, e.span}};
    }
    if (e.is<node::UnitVal>()) return Judgment{{}, Derivation{Rule::Unit, Type::unit(), {}, {}, {}, {}, e.span}};
    if (auto* n = e.as<node::Bang>()) {
      Judgment body = run(*n->body);
      Type t = Type::disc(body.d.type);
      return wrap(Rule::Disc, t, std::move(body), e.span);
    }
    if (auto* n = e.as<node::Pair>()) {
      Judgment a = run(*n->fst);
      Judgment b = run(*n->snd);
      Derivation d{Rule::TensorI, Type::tensor(a.d.type, b.d.type), {}, {}, {}, {}, e.span};
      LinearContext ctx = disjoint_union(std::move(a.ctx), std::move(b.ctx), e.span);
      d.kids.push_back(std::move(a.d));
      d.kids.push_back(std::move(b.d));
      return Judgment{std::move(ctx), std::move(d)};
    }
    if (auto* n = e.as<node::Inl>()) return injection(*n->body, n->annot, true, e.span);
    if (auto* n = e.as<node::Inr>()) return injection(*n->body, n->annot, false, e.span);
    if (auto* n = e.as<node::Let>()) {
      Judgment bound = run(*n->bound);
      lin_.push(n->var, bound.d.type);
      Judgment body = run(*n->body);
      lin_.pop(n->var);
      Grade r = take_grade(body.ctx, n->var).value_or(Grade::zero());
      return combine(Rule::Let, r, {n->var}, std::move(bound), std::move(body), e.span);
    }
    if (auto* n = e.as<node::LetPair>()) {
      Judgment bound = run(*n->bound);
      const Type& t = bound.d.type;
      if (!t.is(Type::Kind::Tensor))
        throw Error(ErrorCode::TypeMismatch, "let-pair expects a tensor but the bound expression has type " +
                                                 t.to_string(), n->bound->span);
      lin_.push(n->var1, t.left());
      lin_.push(n->var2, t.right());
      Judgment body = run(*n->body);
      lin_.pop(n->var2);
      lin_.pop(n->var1);
      auto g1 = take_grade(body.ctx, n->var1);
      auto g2 = take_grade(body.ctx, n->var2);
      Grade r = Grade::max(g1.value_or(Grade::zero()), g2.value_or(Grade::zero()));
      return combine(Rule::TensorE, r, {n->var1, n->var2}, std::move(bound), std::move(body), e.span);
    }
    if (auto* n = e.as<node::DLet>()) {
      Judgment bound = run(*n->bound);
      if (!is_discrete(bound.d.type))
        throw Error(ErrorCode::Kind, "dlet needs a discrete value but the bound expression has type " +
                                         bound.d.type.to_string() + " (wrap it with !)", n->bound->span);
      disc_.push(n->var, bound.d.type);
      Judgment body = run(*n->body);
      disc_.pop(n->var);
      return combine(Rule::DLet, Grade::zero(), {n->var}, std::move(bound), std::move(body), e.span);
    }
    if (auto* n = e.as<node::DLetPair>()) {
      Judgment bound = run(*n->bound);
      auto parts = discrete_components(bound.d.type);
      if (!parts)
        throw Error(ErrorCode::Kind, "dlet-pair needs a pair of discrete values but the bound expression has type " +
                                         bound.d.type.to_string(), n->bound->span);
      disc_.push(n->var1, parts->first);
      disc_.push(n->var2, parts->second);
      Judgment body = run(*n->body);
      disc_.pop(n->var2);
      disc_.pop(n->var1);
      return combine(Rule::DTensorE, Grade::zero(), {n->var1, n->var2}, std::move(bound), std::move(body), e.span);
    }
    if (auto* n = e.as<node::Case>()) return case_of(*n, e.span);
    if (auto* n = e.as<node::Prim>()) return primitive(*n, e.span);
    throw Error(ErrorCode::UnknownDef, "call to '" + e.as<node::Call>()->name + "' was not expanded", e.span);
  }

 private:
  ScopedMap<Type> lin_;
  ScopedMap<Type> disc_;

  const Type& lin_type(const std::string& name, Span span) const {
    if (const Type* t = lin_.find(name)) return *t;
    if (disc_.find(name)) throw Error(ErrorCode::Kind, "'" + name + "' is discrete where a linear variable is expected", span);
    throw Error(ErrorCode::UnboundVariable, "unbound variable '" + name + "'", span);
  }

  const Type& disc_type(const std::string& name, Span span) const {
    if (const Type* t = disc_.find(name)) return *t;
    if (lin_.find(name)) throw Error(ErrorCode::Kind, "'" + name + "' is linear where a discrete variable is expected", span);
    throw Error(ErrorCode::UnboundVariable, "unbound variable '" + name + "'", span);
  }

  static Judgment wrap(Rule rule, Type t, Judgment child, Span span) {
    Derivation d{rule, std::move(t), {}, {}, {}, {}, span};
    d.kids.push_back(std::move(child.d));
    return Judgment{std::move(child.ctx), std::move(d)};
  }

  // (r + ctx(bound)), ctx(body) with the binders already removed from body.
  static Judgment combine(Rule rule, Grade r, std::vector<std::string> vars, Judgment bound, Judgment body,
                          Span span) {
    Derivation d{rule, body.d.type, r, std::move(vars), {}, {}, span};
    LinearContext ctx = disjoint_union(ctx_add_grade(r, std::move(bound.ctx)), std::move(body.ctx), span);
    d.kids.push_back(std::move(bound.d));
    d.kids.push_back(std::move(body.d));
    return Judgment{std::move(ctx), std::move(d)};
  }

  // a1 * a2 with discrete a1, a2; or m(s1 * s2), split into m(s1), m(s2).
  static std::optional<std::pair<Type, Type>> discrete_components(const Type& t) {
    if (t.is(Type::Kind::Tensor) && is_discrete(t.left()) && is_discrete(t.right()))
      return std::make_pair(t.left(), t.right());
    if (t.is(Type::Kind::Disc) && t.inner().is(Type::Kind::Tensor))
      return std::make_pair(Type::disc(t.inner().left()), Type::disc(t.inner().right()));
    return std::nullopt;
  }

  Judgment injection(const Expr& body, const std::optional<Type>& annot, bool left, Span span) {
    Judgment j = run(body);
    const Type& bt = j.d.type;
    Type t = left ? Type::sum(bt, Type::hole()) : Type::sum(Type::hole(), bt);
    if (annot) {
      auto joined = join_types(t, *annot);
      if (!joined)
        throw Error(ErrorCode::TypeMismatch, std::string(left ? "inl" : "inr") + " of type " + bt.to_string() +
                                                 " does not fit the annotation " + annot->to_string(), span);
      t = *joined;
    }
    return wrap(left ? Rule::SumIL : Rule::SumIR, t, std::move(j), span);
  }

  Judgment case_of(const node::Case& n, Span span) {
    Judgment scrut = run(*n.scrutinee);
    const Type& st = scrut.d.type;
    if (!st.is(Type::Kind::Sum))
      throw Error(ErrorCode::TypeMismatch, "case expects a sum but the scrutinee has type " + st.to_string(),
                  n.scrutinee->span);
    lin_.push(n.lvar, st.left());
    Judgment lb = run(*n.lbody);
    lin_.pop(n.lvar);
    lin_.push(n.rvar, st.right());
    Judgment rb = run(*n.rbody);
    lin_.pop(n.rvar);
    auto ty = join_types(lb.d.type, rb.d.type);
    if (!ty)
      throw Error(ErrorCode::BranchMismatch, "case branches disagree: " + lb.d.type.to_string() + " vs " +
                                                 rb.d.type.to_string(), span);
    Grade q = Grade::max(take_grade(lb.ctx, n.lvar).value_or(Grade::zero()),
                         take_grade(rb.ctx, n.rvar).value_or(Grade::zero()));
    LinearContext branches = ctx_max(lb.ctx, rb.ctx);
    Derivation d{Rule::SumE, *ty, q, {n.lvar, n.rvar}, {}, {}, span};
    LinearContext ctx = disjoint_union(ctx_add_grade(q, std::move(scrut.ctx)), std::move(branches), span);
    d.kids.push_back(std::move(scrut.d));
    d.kids.push_back(std::move(lb.d));
    d.kids.push_back(std::move(rb.d));
    return Judgment{std::move(ctx), std::move(d)};
  }

  void require_num(const Type& t, const std::string& name, PrimOp op, Span span) const {
    if (t == Type::num()) return;
    throw Error(ErrorCode::TypeMismatch, std::string(prim_name(op)) + " expects num but '" + name + "' has type " +
                                             t.to_string(), span);
  }

  Judgment primitive(const node::Prim& p, Span span) {
    if (!is_variable(*p.lhs) || !is_variable(*p.rhs))
      throw Error(ErrorCode::Syntax, "primitive operands must be variables (run desugar_ops first)", span);
    const std::string& x = variable_name(*p.lhs);
    const std::string& y = variable_name(*p.rhs);
    std::string op(prim_name(p.op));

    if (p.op == PrimOp::DMul) {
      if (!p.lhs->is<node::DiscVar>())
        throw Error(ErrorCode::Kind, "dmul needs a discrete first operand but '" + x + "' is linear", p.lhs->span);
      if (!p.rhs->is<node::LinVar>())
        throw Error(ErrorCode::Kind, "dmul needs a linear second operand but '" + y + "' is discrete", p.rhs->span);
      const Type& zt = disc_type(x, p.lhs->span);
      if (zt != Type::disc(Type::num()))
        throw Error(ErrorCode::TypeMismatch, "dmul expects !num but '" + x + "' has type " + zt.to_string(),
                    p.lhs->span);
      require_num(lin_type(y, p.rhs->span), y, p.op, p.rhs->span);
      Derivation d{Rule::DMul, Type::num(), {}, {x, y}, {}, {}, span};
      d.local.emplace(y, LinBinding{Type::num(), Grade::eps()});
      return Judgment{d.local, std::move(d)};
    }

    for (const Expr* operand : {p.lhs.get(), p.rhs.get()}) {
      if (operand->is<node::DiscVar>())
        throw Error(ErrorCode::Kind, op + " needs linear operands but '" + variable_name(*operand) + "' is discrete",
                    operand->span);
    }
    require_num(lin_type(x, p.lhs->span), x, p.op, p.lhs->span);
    require_num(lin_type(y, p.rhs->span), y, p.op, p.rhs->span);
    if (x == y) throw linearity(x, span);

    Rule rule = Rule::Add;
    Grade charge = Grade::eps();
    Type result = Type::num();
    switch (p.op) {
      case PrimOp::Add: rule = Rule::Add; break;
      case PrimOp::Sub: rule = Rule::Sub; break;
      case PrimOp::Mul:
        rule = Rule::Mul;
        charge = Grade::half_eps();
        break;
      case PrimOp::Div:
        rule = Rule::Div;
        charge = Grade::half_eps();
        result = Type::sum(Type::num(), Type::unit());
        break;
      case PrimOp::DMul: break;
    }
    Derivation d{rule, result, {}, {x, y}, {}, {}, span};
    d.local.emplace(x, LinBinding{Type::num(), charge});
    d.local.emplace(y, LinBinding{Type::num(), charge});
    return Judgment{d.local, std::move(d)};
  }
};

}  // namespace

InferenceResult infer(const DiscreteContext& disc, const ContextSkeleton& skel, const ExprPtr& e) {
  for (const auto& [name, t] : disc)
    if (skel.count(name))
      throw Error(ErrorCode::Linearity, "'" + name + "' is bound both linearly and discretely");
  Judgment j = Inferencer(disc, skel).run(*e);
  if (j.d.type.has_hole())
    throw Error(ErrorCode::AmbiguousInjection,
                "cannot infer the full type " + j.d.type.to_string() +
                    "; annotate an injection, e.g. `inl e : num + unit`",
                e->span);
  Type t = j.d.type;
  return InferenceResult{std::move(j.ctx), std::move(t), std::make_shared<const Derivation>(std::move(j.d))};
}

CheckResult check_declared(const DiscreteContext& disc, const LinearContext& declared, const ExprPtr& e) {
  InferenceResult r = infer(disc, skeleton(declared), e);
  bool ok = is_subcontext(r.ctx, declared);
  return CheckResult{ok, std::move(r)};
}

std::optional<Grade> ProgramJudgment::grade_of(const std::string& param) const {
  auto it = result.ctx.find(param);
  if (it == result.ctx.end()) return std::nullopt;
  return it->second.grade;
}

ProgramJudgment typecheck_program(Expanded program) {
  DiscreteContext disc;
  ContextSkeleton skel;
  for (const auto& p : program.params) {
    if (p.kind == ParamKind::Discrete)
      disc.emplace(p.name, p.binding_type());
    else
      skel.emplace(p.name, p.binding_type());
  }
  InferenceResult result = infer(disc, skel, program.body);
  return ProgramJudgment{std::move(program), std::move(disc), std::move(skel), std::move(result)};
}

ProgramJudgment typecheck_source(std::string_view source, std::optional<std::string> main) {
  return typecheck_program(load_program(source, std::move(main)));
}

}  // namespace bean
