#include "internal.hpp"

namespace bean {

namespace {

using detail::Scope;
using Moved = std::unordered_map<std::string, Value>;

class Backward {
 public:
  Backward(Scope& scope, int bits) : scope_(scope), bits_(bits) {}

  // Ideal values for the linear variables the subterm uses. Variables the
  // subterm leaves out keep their approximate values.
  Moved run(const Derivation& d, const Value& target) {
    switch (d.rule) {
      case Rule::Var: return Moved{{d.vars[0], target}};
      case Rule::DVar:
      case Rule::Unit: return {};
      case Rule::Disc: return run(d.kids[0], target);
      case Rule::TensorI: {
        if (!target.is(Value::Kind::Pair)) throw domain("pair target expected");
        Moved out = run(d.kids[0], target.fst());
        merge(out, run(d.kids[1], target.snd()));
        return out;
      }
      case Rule::SumIL:
      case Rule::SumIR: {
        auto want = d.rule == Rule::SumIL ? Value::Kind::Inl : Value::Kind::Inr;
        if (!target.is(want)) throw domain("target has the other injection tag");
        return run(d.kids[0], target.payload());
      }
      case Rule::Let: {
        Value v = approx(d.kids[0]);
        scope_.push(d.vars[0], v);
        Moved out = run(d.kids[1], target);
        scope_.pop(d.vars[0]);
        Value bound_target = take(out, d.vars[0], v);
        merge(out, run(d.kids[0], bound_target));
        return out;
      }
      case Rule::TensorE: {
        Value v = approx(d.kids[0]);
        scope_.push(d.vars[0], v.fst());
        scope_.push(d.vars[1], v.snd());
        Moved out = run(d.kids[1], target);
        scope_.pop(d.vars[1]);
        scope_.pop(d.vars[0]);
        Value a = take(out, d.vars[0], v.fst());
        Value b = take(out, d.vars[1], v.snd());
        merge(out, run(d.kids[0], Value::pair(std::move(a), std::move(b))));
        return out;
      }
      case Rule::DLet:
      case Rule::DTensorE: {
        // Discrete bindings must not move: the bound expression is pulled
        // back onto its own approximate value.
        Value v = approx(d.kids[0]);
        bool pair = d.rule == Rule::DTensorE;
        scope_.push(d.vars[0], pair ? v.fst() : v);
        if (pair) scope_.push(d.vars[1], v.snd());
        Moved out = run(d.kids[1], target);
        if (pair) scope_.pop(d.vars[1]);
        scope_.pop(d.vars[0]);
        merge(out, run(d.kids[0], v.to_ideal(bits_)));
        return out;
      }
      case Rule::SumE: {
        Value v = approx(d.kids[0]);
        bool left = v.is(Value::Kind::Inl);
        const std::string& var = d.vars[left ? 0 : 1];
        scope_.push(var, v.payload());
        Moved out = run(d.kids[left ? 1 : 2], target);
        scope_.pop(var);
        Value p = take(out, var, v.payload());
        merge(out, run(d.kids[0], left ? Value::inl(std::move(p)) : Value::inr(std::move(p))));
        return out;
      }
      case Rule::Add:
      case Rule::Sub:
      case Rule::Mul: {
        BigNum x1 = ideal_of(d.vars[0]);
        BigNum x2 = ideal_of(d.vars[1]);
        BigNum t = number(target);
        BigPair p = d.rule == Rule::Add   ? add_backward(x1, x2, t, bits_)
                    : d.rule == Rule::Sub ? sub_backward(x1, x2, t, bits_)
                                          : mul_backward(x1, x2, t, bits_);
        return Moved{{d.vars[0], Value::ideal(std::move(p.first))}, {d.vars[1], Value::ideal(std::move(p.second))}};
      }
      case Rule::Div: {
        BigPair p = div_backward(ideal_of(d.vars[0]), ideal_of(d.vars[1]), target, bits_);
        return Moved{{d.vars[0], Value::ideal(std::move(p.first))}, {d.vars[1], Value::ideal(std::move(p.second))}};
      }
      case Rule::DMul: {
        BigNum x = dmul_backward(ideal_of(d.vars[0]), ideal_of(d.vars[1]), number(target), bits_);
        return Moved{{d.vars[1], Value::ideal(std::move(x))}};
      }
    }
    throw domain("unknown rule");
  }

 private:
  Scope& scope_;
  int bits_;

  static Error domain(const std::string& what) { return Error(ErrorCode::BackwardDomain, what); }

  Value approx(const Derivation& d) { return detail::eval_in(d, scope_, detail::World{false, 53, nullptr}); }

  BigNum ideal_of(const std::string& name) const { return scope_.get(name).to_ideal(bits_).ideal_num(); }

  BigNum number(const Value& v) const {
    if (!v.is(Value::Kind::Num)) throw domain("numeric target expected");
    return v.to_ideal(bits_).ideal_num();
  }

  Value take(Moved& m, const std::string& name, const Value& fallback) const {
    auto it = m.find(name);
    if (it == m.end()) return fallback.to_ideal(bits_);
    Value v = std::move(it->second);
    m.erase(it);
    return v;
  }

  static void merge(Moved& into, Moved from) {
    if (into.size() < from.size()) std::swap(into, from);
    for (auto& [n, v] : from) into.insert_or_assign(n, std::move(v));
  }
};

}  // namespace

Env backward_eval(const Derivation& d, const Env& env, const Value& target, int bits) {
  Scope scope(env);
  Moved moved = Backward(scope, bits).run(d, target.to_ideal(bits));
  Env out;
  for (const auto& [n, v] : env.disc) out.disc.emplace(n, v.to_ideal(bits));
  for (const auto& [n, v] : env.lin) {
    auto it = moved.find(n);
    out.lin.emplace(n, it == moved.end() ? v.to_ideal(bits) : it->second);
  }
  return out;
}

}  // namespace bean
