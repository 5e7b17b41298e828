#include <map>
#include <optional>

#include "bean/syntax.hpp"

namespace bean {

namespace {

class Desugarer {
 public:
  Desugarer(FreshNames fresh, std::set<std::string> in_scope)
      : fresh_(std::move(fresh)), in_scope_(std::move(in_scope)) {}

  ExprPtr run(const ExprPtr& e) {
    const Expr& x = *e;
    if (auto* v = x.as<node::LinVar>()) {
      const std::string& n = renamed(v->name);
      return n == v->name ? e : mk::lin(n, x.span);
    }
    if (auto* v = x.as<node::DiscVar>()) {
      const std::string& n = renamed(v->name);
      return n == v->name ? e : mk::disc(n, x.span);
    }
    if (x.is<node::UnitVal>()) return e;
    if (auto* n = x.as<node::Bang>()) return mk::bang(run(n->body), x.span);
    if (auto* n = x.as<node::Pair>()) {
      ExprPtr a = run(n->fst);
      return mk::pair(a, run(n->snd), x.span);
    }
    if (auto* n = x.as<node::Inl>()) return mk::inl(run(n->body), n->annot, x.span);
    if (auto* n = x.as<node::Inr>()) return mk::inr(run(n->body), n->annot, x.span);
    if (auto* n = x.as<node::Let>()) {
      ExprPtr bound = run(n->bound);
      Scope s(*this, {n->var});
      return mk::let(s.name(0), bound, run(n->body), x.span);
    }
    if (auto* n = x.as<node::DLet>()) {
      ExprPtr bound = run(n->bound);
      Scope s(*this, {n->var});
      return mk::dlet(s.name(0), bound, run(n->body), x.span);
    }
    if (auto* n = x.as<node::LetPair>()) {
      ExprPtr bound = run(n->bound);
      Scope s(*this, {n->var1, n->var2});
      return mk::let_pair(s.name(0), s.name(1), bound, run(n->body), x.span);
    }
    if (auto* n = x.as<node::DLetPair>()) {
      ExprPtr bound = run(n->bound);
      Scope s(*this, {n->var1, n->var2});
      return mk::dlet_pair(s.name(0), s.name(1), bound, run(n->body), x.span);
    }
    if (auto* n = x.as<node::Case>()) {
      ExprPtr scrut = run(n->scrutinee);
      ExprPtr lbody, rbody;
      std::string l, r;
      {
        Scope s(*this, {n->lvar});
        l = s.name(0);
        lbody = run(n->lbody);
      }
      {
        Scope s(*this, {n->rvar});
        r = s.name(0);
        rbody = run(n->rbody);
      }
      return mk::case_of(scrut, l, lbody, r, rbody, x.span);
    }
    if (auto* n = x.as<node::Prim>()) {
      ExprPtr lhs = run(n->lhs);
      ExprPtr rhs = run(n->rhs);
      std::optional<std::pair<std::string, ExprPtr>> hoist_l, hoist_r;
      if (!is_variable(*lhs)) {
        std::string t = fresh_.fresh("t");
        hoist_l.emplace(t, lhs);
        lhs = n->op == PrimOp::DMul ? mk::disc(t, lhs->span) : mk::lin(t, lhs->span);
      }
      if (!is_variable(*rhs)) {
        std::string t = fresh_.fresh("t");
        hoist_r.emplace(t, rhs);
        rhs = mk::lin(t, rhs->span);
      }
      ExprPtr out = mk::prim(n->op, lhs, rhs, x.span);
      if (hoist_r) out = mk::let(hoist_r->first, hoist_r->second, out, x.span);
      if (hoist_l) {
        out = n->op == PrimOp::DMul ? mk::dlet(hoist_l->first, hoist_l->second, out, x.span)
                                    : mk::let(hoist_l->first, hoist_l->second, out, x.span);
      }
      return out;
    }
    // Calls survive only when desugaring unexpanded code; arguments are still traversed.
    const auto& c = *x.as<node::Call>();
    std::vector<ExprPtr> args;
    for (const auto& a : c.args) args.push_back(run(a));
    return mk::call(c.name, std::move(args), x.span);
  }

 private:
  FreshNames fresh_;
  std::set<std::string> in_scope_;
  std::map<std::string, std::string> rename_;

  const std::string& renamed(const std::string& name) const {
    auto it = rename_.find(name);
    return it == rename_.end() ? name : it->second;
  }

  // Binds names for the lifetime of the object, renaming any that would
  // shadow a variable already in scope.
  class Scope {
   public:
    Scope(Desugarer& d, std::initializer_list<std::string> names) : d_(d) {
      for (const auto& n : names) {
        std::string out = d_.in_scope_.count(n) ? d_.fresh_.fresh(n) : n;
        auto it = d_.rename_.find(n);
        saved_.push_back({n, it == d_.rename_.end() ? std::nullopt : std::optional(it->second)});
        if (out == n)
          d_.rename_.erase(n);
        else
          d_.rename_[n] = out;
        d_.in_scope_.insert(out);
        out_.push_back(out);
      }
    }
    ~Scope() {
      for (size_t i = out_.size(); i-- > 0;) {
        d_.in_scope_.erase(out_[i]);
        if (saved_[i].second)
          d_.rename_[saved_[i].first] = *saved_[i].second;
        else
          d_.rename_.erase(saved_[i].first);
      }
    }
    const std::string& name(size_t i) const { return out_[i]; }

   private:
    Desugarer& d_;
    std::vector<std::pair<std::string, std::optional<std::string>>> saved_;
    std::vector<std::string> out_;
  };
};

}  // namespace

ExprPtr desugar_ops(const ExprPtr& e) {
  std::set<std::string> names;
  collect_names(*e, names);
  FreeVars fv = free_vars(*e);
  std::set<std::string> scope(fv.lin.begin(), fv.lin.end());
  scope.insert(fv.disc.begin(), fv.disc.end());
  return Desugarer(FreshNames(std::move(names)), std::move(scope)).run(e);
}

}  // namespace bean
