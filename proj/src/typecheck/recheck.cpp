// Declarative re-checker: walks a derivation top-down, splitting the given
// context the way the declarative rules do, using only the grades recorded
// at Let / TensorE / SumE nodes. Free variables are recomputed here rather
// than trusted from inference.

#include <algorithm>
#include <set>
#include <unordered_map>

#include "bean/typecheck.hpp"

namespace bean {

namespace {

bool compatible(const Type& a, const Type& b) { return join_types(a, b).has_value(); }

class Rechecker {
 public:
  std::string failure;

  bool check(const Derivation& d, const DiscreteContext& phi, const LinearContext& gamma) {
    switch (d.rule) {
      case Rule::Var: {
        auto it = gamma.find(d.vars[0]);
        if (it == gamma.end()) return fail(d, "'" + d.vars[0] + "' missing from the linear context");
        if (!compatible(it->second.type, d.type)) return fail(d, "type of '" + d.vars[0] + "' disagrees");
        return true;
      }
      case Rule::DVar: {
        auto it = phi.find(d.vars[0]);
        if (it == phi.end()) return fail(d, "'" + d.vars[0] + "' missing from the discrete context");
        if (!compatible(it->second, d.type)) return fail(d, "type of '" + d.vars[0] + "' disagrees");
        return true;
      }
      case Rule::Unit:
        return compatible(d.type, Type::unit()) || fail(d, "unit has the wrong type");
      case Rule::Disc:
        if (!compatible(d.type, Type::disc(d.kids[0].type))) return fail(d, "! does not produce m(type)");
        return check(d.kids[0], phi, gamma);
      case Rule::SumIL:
      case Rule::SumIR: {
        if (!d.type.is(Type::Kind::Sum)) return fail(d, "injection without a sum type");
        const Type& side = d.rule == Rule::SumIL ? d.type.left() : d.type.right();
        if (!compatible(side, d.kids[0].type)) return fail(d, "injected value has the wrong type");
        return check(d.kids[0], phi, gamma);
      }
      case Rule::TensorI: {
        const auto& fv0 = fv(d.kids[0]);
        for (const auto& v : fv(d.kids[1]))
          if (fv0.count(v)) return fail(d, "'" + v + "' is used by both components");
        if (!compatible(d.type, Type::tensor(d.kids[0].type, d.kids[1].type)))
          return fail(d, "pair type disagrees with its components");
        auto [left, right] = split(gamma, fv0, Grade::zero(), d);
        if (!failure.empty()) return false;
        return check(d.kids[0], phi, left) && check(d.kids[1], phi, right);
      }
      case Rule::Let:
      case Rule::TensorE:
      case Rule::SumE: {
        const Derivation& bound = d.kids[0];
        const auto& fvb = fv(bound);
        std::set<std::string> binders(d.vars.begin(), d.vars.end());
        for (size_t k = 1; k < d.kids.size(); ++k)
          for (const auto& v : fv(d.kids[k]))
            if (!binders.count(v) && fvb.count(v)) return fail(d, "'" + v + "' is used on both sides");
        auto [head, rest] = split(gamma, fvb, d.grade, d);
        if (!failure.empty()) return false;
        if (!check(bound, phi, head)) return false;
        if (d.rule == Rule::Let) {
          if (!compatible(d.type, d.kids[1].type)) return fail(d, "let type disagrees with its body");
          return check(d.kids[1], phi, extend(rest, {{d.vars[0], bound.type}}, d.grade));
        }
        if (d.rule == Rule::TensorE) {
          if (!bound.type.is(Type::Kind::Tensor)) return fail(d, "let-pair of a non-tensor");
          if (!compatible(d.type, d.kids[1].type)) return fail(d, "let-pair type disagrees with its body");
          return check(d.kids[1], phi,
                       extend(rest, {{d.vars[0], bound.type.left()}, {d.vars[1], bound.type.right()}}, d.grade));
        }
        if (!bound.type.is(Type::Kind::Sum)) return fail(d, "case of a non-sum");
        if (!compatible(d.type, d.kids[1].type) || !compatible(d.type, d.kids[2].type))
          return fail(d, "case type disagrees with a branch");
        return check(d.kids[1], phi, extend(rest, {{d.vars[0], bound.type.left()}}, d.grade)) &&
               check(d.kids[2], phi, extend(rest, {{d.vars[1], bound.type.right()}}, d.grade));
      }
      case Rule::DLet:
      case Rule::DTensorE: {
        const Derivation& bound = d.kids[0];
        const auto& fvb = fv(bound);
        for (const auto& v : fv(d.kids[1]))
          if (fvb.count(v)) return fail(d, "'" + v + "' is used on both sides");
        auto [head, rest] = split(gamma, fvb, Grade::zero(), d);
        if (!failure.empty()) return false;
        if (!check(bound, phi, head)) return false;
        DiscreteContext inner = phi;
        const Type& t = bound.type;
        if (d.rule == Rule::DLet) {
          if (!is_discrete(t)) return fail(d, "dlet of a non-discrete value");
          inner.insert_or_assign(d.vars[0], t);
        } else if (t.is(Type::Kind::Tensor) && is_discrete(t.left()) && is_discrete(t.right())) {
          inner.insert_or_assign(d.vars[0], t.left());
          inner.insert_or_assign(d.vars[1], t.right());
        } else if (t.is(Type::Kind::Disc) && t.inner().is(Type::Kind::Tensor)) {
          inner.insert_or_assign(d.vars[0], Type::disc(t.inner().left()));
          inner.insert_or_assign(d.vars[1], Type::disc(t.inner().right()));
        } else {
          return fail(d, "dlet-pair of a non-discrete pair");
        }
        if (!compatible(d.type, d.kids[1].type)) return fail(d, "dlet type disagrees with its body");
        return check(d.kids[1], inner, rest);
      }
      case Rule::Add:
      case Rule::Sub:
      case Rule::Mul:
      case Rule::Div: {
        Grade need = d.rule == Rule::Add || d.rule == Rule::Sub ? Grade::eps() : Grade::half_eps();
        if (d.vars[0] == d.vars[1]) return fail(d, "operands must be distinct");
        for (const auto& v : d.vars)
          if (!has_num_at_least(gamma, v, need)) return fail(d, "'" + v + "' needs grade >= " + need.to_string());
        Type want = d.rule == Rule::Div ? Type::sum(Type::num(), Type::unit()) : Type::num();
        return compatible(d.type, want) || fail(d, "primitive result type disagrees");
      }
      case Rule::DMul: {
        auto it = phi.find(d.vars[0]);
        if (it == phi.end() || it->second != Type::disc(Type::num()))
          return fail(d, "'" + d.vars[0] + "' must be a discrete !num");
        if (!has_num_at_least(gamma, d.vars[1], Grade::eps()))
          return fail(d, "'" + d.vars[1] + "' needs grade >= 1 eps");
        return compatible(d.type, Type::num()) || fail(d, "dmul result type disagrees");
      }
    }
    return fail(d, "unknown rule");
  }

 private:
  std::unordered_map<const Derivation*, std::set<std::string>> fv_memo_;

  bool fail(const Derivation& d, const std::string& why) {
    if (failure.empty()) {
      failure = std::string(rule_name(d.rule)) + " at " + std::to_string(d.span.line) + ":" +
                std::to_string(d.span.col) + ": " + why;
    }
    return false;
  }

  static bool has_num_at_least(const LinearContext& g, const std::string& v, const Grade& need) {
    auto it = g.find(v);
    return it != g.end() && it->second.type == Type::num() && need <= it->second.grade;
  }

  // Linear variables free in the subterm a derivation types.
  const std::set<std::string>& fv(const Derivation& d) {
    auto it = fv_memo_.find(&d);
    if (it != fv_memo_.end()) return it->second;
    std::set<std::string> out;
    switch (d.rule) {
      case Rule::Var: out.insert(d.vars[0]); break;
      case Rule::DVar:
      case Rule::Unit: break;
      case Rule::Add:
      case Rule::Sub:
      case Rule::Mul:
      case Rule::Div: out.insert(d.vars.begin(), d.vars.end()); break;
      case Rule::DMul: out.insert(d.vars[1]); break;
      case Rule::Let:
      case Rule::TensorE: {
        out = fv(d.kids[0]);
        for (const auto& v : fv(d.kids[1]))
          if (std::find(d.vars.begin(), d.vars.end(), v) == d.vars.end()) out.insert(v);
        break;
      }
      case Rule::SumE: {
        out = fv(d.kids[0]);
        for (size_t k = 1; k <= 2; ++k)
          for (const auto& v : fv(d.kids[k]))
            if (v != d.vars[k - 1]) out.insert(v);
        break;
      }
      default:
        for (const auto& k : d.kids) {
          const auto& s = fv(k);
          out.insert(s.begin(), s.end());
        }
    }
    return fv_memo_.emplace(&d, std::move(out)).first->second;
  }

  // gamma = (r + head), rest where head covers `names`.
  std::pair<LinearContext, LinearContext> split(const LinearContext& gamma, const std::set<std::string>& names,
                                                const Grade& r, const Derivation& d) {
    LinearContext head, rest;
    for (const auto& [name, b] : gamma) {
      if (!names.count(name)) {
        rest.emplace(name, b);
        continue;
      }
      if (b.grade < r) {
        fail(d, "'" + name + "' has grade " + b.grade.to_string() + " below the required " + r.to_string());
        return {};
      }
      head.emplace(name, LinBinding{b.type, Grade(mpq_class(b.grade.coeff() - r.coeff()))});
    }
    for (const auto& name : names)
      if (!gamma.count(name)) {
        fail(d, "'" + name + "' missing from the linear context");
        return {};
      }
    return {std::move(head), std::move(rest)};
  }

  static LinearContext extend(LinearContext g, std::initializer_list<std::pair<std::string, Type>> vars,
                              const Grade& r) {
    for (const auto& [name, t] : vars) g.insert_or_assign(name, LinBinding{t, r});
    return g;
  }
};

}  // namespace

std::string recheck(const Derivation& d, const DiscreteContext& disc, const LinearContext& ctx) {
  Rechecker r;
  if (r.check(d, disc, ctx)) return "";
  return r.failure.empty() ? "re-check failed" : r.failure;
}

}  // namespace bean
