#include <map>

#include "bean/syntax.hpp"

namespace bean {

namespace {

class Expander {
 public:
  Expander(const Program& p, FreshNames& fresh) : prog_(p), fresh_(fresh) {}

  // `env` maps names visible in `e` to the expressions that replace them;
  // names missing from env are left alone (main's own variables).
  ExprPtr expand(const ExprPtr& e, const std::map<std::string, ExprPtr>& env, const TopLevelDef& owner) {
    const Expr& x = *e;
    if (auto* v = x.as<node::LinVar>()) return lookup(v->name, env, e);
    if (auto* v = x.as<node::DiscVar>()) return lookup(v->name, env, e);
    if (x.is<node::UnitVal>()) return e;
    if (auto* n = x.as<node::Bang>()) return mk::bang(expand(n->body, env, owner), x.span);
    if (auto* n = x.as<node::Pair>())
      return mk::pair(expand(n->fst, env, owner), expand(n->snd, env, owner), x.span);
    if (auto* n = x.as<node::Inl>()) return mk::inl(expand(n->body, env, owner), n->annot, x.span);
    if (auto* n = x.as<node::Inr>()) return mk::inr(expand(n->body, env, owner), n->annot, x.span);
    if (auto* n = x.as<node::Prim>())
      return mk::prim(n->op, expand(n->lhs, env, owner), expand(n->rhs, env, owner), x.span);
    if (auto* n = x.as<node::Let>()) {
      ExprPtr bound = expand(n->bound, env, owner);
      auto inner = env;
      std::string v = bind(n->var, inner, false);
      return mk::let(v, bound, expand(n->body, inner, owner), x.span);
    }
    if (auto* n = x.as<node::DLet>()) {
      ExprPtr bound = expand(n->bound, env, owner);
      auto inner = env;
      std::string v = bind(n->var, inner, true);
      return mk::dlet(v, bound, expand(n->body, inner, owner), x.span);
    }
    if (auto* n = x.as<node::LetPair>()) {
      ExprPtr bound = expand(n->bound, env, owner);
      auto inner = env;
      std::string a = bind(n->var1, inner, false);
      std::string b = bind(n->var2, inner, false);
      return mk::let_pair(a, b, bound, expand(n->body, inner, owner), x.span);
    }
    if (auto* n = x.as<node::DLetPair>()) {
      ExprPtr bound = expand(n->bound, env, owner);
      auto inner = env;
      std::string a = bind(n->var1, inner, true);
      std::string b = bind(n->var2, inner, true);
      return mk::dlet_pair(a, b, bound, expand(n->body, inner, owner), x.span);
    }
    if (auto* n = x.as<node::Case>()) {
      ExprPtr scrut = expand(n->scrutinee, env, owner);
      auto lenv = env;
      std::string l = bind(n->lvar, lenv, false);
      ExprPtr lbody = expand(n->lbody, lenv, owner);
      auto renv = env;
      std::string r = bind(n->rvar, renv, false);
      ExprPtr rbody = expand(n->rbody, renv, owner);
      return mk::case_of(scrut, l, lbody, r, rbody, x.span);
    }
    const auto& c = *x.as<node::Call>();
    return inline_call(c, x.span, env, owner);
  }

  bool renaming = false;  // set while expanding an inlined body

 private:
  const Program& prog_;
  FreshNames& fresh_;

  static ExprPtr lookup(const std::string& name, const std::map<std::string, ExprPtr>& env, const ExprPtr& self) {
    auto it = env.find(name);
    return it == env.end() ? self : it->second;
  }

  // Binders inside inlined bodies are renamed apart; main's binders keep
  // their names but still shadow outer replacements.
  std::string bind(const std::string& name, std::map<std::string, ExprPtr>& env, bool discrete) {
    if (!renaming) {
      env.erase(name);
      return name;
    }
    std::string fresh = fresh_.fresh(name);
    env[name] = discrete ? mk::disc(fresh) : mk::lin(fresh);
    return fresh;
  }

  ExprPtr inline_call(const node::Call& c, Span span, const std::map<std::string, ExprPtr>& env,
                      const TopLevelDef& owner) {
    const TopLevelDef* callee = nullptr;
    for (const auto& d : prog_.defs) {
      if (&d == &owner) break;  // only earlier definitions are callable
      if (d.name == c.name) callee = &d;
    }
    if (!callee) {
      if (c.args.empty() && !prog_.find(c.name))
        throw Error(ErrorCode::UnboundVariable, "unbound variable '" + c.name + "'", span);
      throw Error(ErrorCode::UnknownDef,
                  prog_.find(c.name) ? "'" + c.name + "' is not defined before '" + owner.name + "'"
                                     : "call to unknown definition '" + c.name + "'",
                  span);
    }
    if (callee->params.size() != c.args.size())
      throw Error(ErrorCode::Arity,
                  "'" + c.name + "' expects " + std::to_string(callee->params.size()) + " argument(s) but got " +
                      std::to_string(c.args.size()),
                  span);

    std::map<std::string, ExprPtr> callee_env;
    std::vector<std::pair<std::string, ExprPtr>> lets;  // compound arguments, bound before the body
    std::vector<bool> let_discrete;
    for (size_t i = 0; i < c.args.size(); ++i) {
      const Param& prm = callee->params[i];
      bool want_disc = prm.kind == ParamKind::Discrete;
      ExprPtr arg = expand(c.args[i], env, owner);
      if (is_variable(*arg)) {
        bool is_disc = arg->is<node::DiscVar>();
        if (is_disc != want_disc)
          throw Error(ErrorCode::ArgumentKind,
                      "argument " + std::to_string(i + 1) + " of '" + c.name + "' must be a " +
                          (want_disc ? "discrete" : "linear") + " variable but '" + variable_name(*arg) + "' is " +
                          (is_disc ? "discrete" : "linear"),
                      c.args[i]->span);
        callee_env[prm.name] = arg;
      } else {
        std::string v = fresh_.fresh(prm.name);
        callee_env[prm.name] = want_disc ? mk::disc(v) : mk::lin(v);
        lets.emplace_back(v, arg);
        let_discrete.push_back(want_disc);
      }
    }
    bool saved = renaming;
    renaming = true;
    ExprPtr body = expand(callee->body, callee_env, *callee);
    renaming = saved;
    for (size_t i = lets.size(); i-- > 0;)
      body = let_discrete[i] ? mk::dlet(lets[i].first, lets[i].second, body, span)
                             : mk::let(lets[i].first, lets[i].second, body, span);
    return body;
  }
};

}  // namespace

Expanded expand_defs(const Program& p) {
  const TopLevelDef& main = p.main_def();
  std::set<std::string> names;
  for (const auto& d : p.defs) {
    names.insert(d.name);
    for (const auto& prm : d.params) names.insert(prm.name);
    collect_names(*d.body, names);
  }
  // Calls in definitions that main never reaches are still checked.
  for (const auto& d : p.defs) {
    if (&d == &main) continue;
    FreshNames scratch(names);
    Expander(p, scratch).expand(d.body, {}, d);
  }
  FreshNames fresh(std::move(names));
  Expander ex(p, fresh);
  return Expanded{ex.expand(main.body, {}, main), main.params};
}

Expanded load_program(std::string_view source, std::optional<std::string> main) {
  Program p = parse_program(source, std::move(main));
  Expanded e = expand_defs(p);
  e.body = desugar_ops(e.body);
  return e;
}

}  // namespace bean
