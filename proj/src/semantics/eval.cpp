#include "internal.hpp"

namespace bean {

namespace detail {

namespace {

ArithOp arith(Rule r) {
  switch (r) {
    case Rule::Add: return ArithOp::Add;
    case Rule::Sub: return ArithOp::Sub;
    case Rule::Div: return ArithOp::Div;
    default: return ArithOp::Mul;  // Mul, DMul
  }
}

Value primitive(Rule rule, const Value& a, const Value& b, const World& w) {
  ArithOp op = arith(rule);
  if (w.ideal) {
    auto r = ideal_op(op, a.to_ideal(w.bits).ideal_num(), b.to_ideal(w.bits).ideal_num(), w.bits);
    if (!r) return Value::inr(Value::unit());
    return rule == Rule::Div ? Value::inl(Value::ideal(std::move(*r))) : Value::ideal(std::move(*r));
  }
  ApproxResult r = approx_op(op, a.approx_num(), b.approx_num());
  if (r.underflow && w.flags) w.flags->underflow = true;
  if (!r.value) return Value::inr(Value::unit());
  return rule == Rule::Div ? Value::inl(Value::approx(*r.value)) : Value::approx(*r.value);
}

}  // namespace

Value eval_in(const Derivation& d, Scope& scope, const World& w) {
  switch (d.rule) {
    case Rule::Var:
    case Rule::DVar: {
      const Value& v = scope.get(d.vars[0]);
      return w.ideal ? v.to_ideal(w.bits) : v;
    }
    case Rule::Unit: return Value::unit();
    case Rule::Disc: return eval_in(d.kids[0], scope, w);
    case Rule::TensorI: {
      Value a = eval_in(d.kids[0], scope, w);
      return Value::pair(std::move(a), eval_in(d.kids[1], scope, w));
    }
    case Rule::SumIL: return Value::inl(eval_in(d.kids[0], scope, w));
    case Rule::SumIR: return Value::inr(eval_in(d.kids[0], scope, w));
    case Rule::Let:
    case Rule::DLet: {
      Value v = eval_in(d.kids[0], scope, w);
      scope.push(d.vars[0], std::move(v));
      Value out = eval_in(d.kids[1], scope, w);
      scope.pop(d.vars[0]);
      return out;
    }
    case Rule::TensorE:
    case Rule::DTensorE: {
      Value v = eval_in(d.kids[0], scope, w);
      scope.push(d.vars[0], v.fst());
      scope.push(d.vars[1], v.snd());
      Value out = eval_in(d.kids[1], scope, w);
      scope.pop(d.vars[1]);
      scope.pop(d.vars[0]);
      return out;
    }
    case Rule::SumE: {
      Value v = eval_in(d.kids[0], scope, w);
      bool left = v.is(Value::Kind::Inl);
      const std::string& var = d.vars[left ? 0 : 1];
      scope.push(var, v.payload());
      Value out = eval_in(d.kids[left ? 1 : 2], scope, w);
      scope.pop(var);
      return out;
    }
    case Rule::Add:
    case Rule::Sub:
    case Rule::Mul:
    case Rule::Div:
    case Rule::DMul:
      return primitive(d.rule, scope.get(d.vars[0]), scope.get(d.vars[1]), w);
  }
  throw Error(ErrorCode::EnvMismatch, "unknown rule");
}

}  // namespace detail

Value eval_ideal(const Derivation& d, const Env& env, int bits) {
  detail::Scope scope(env);
  return detail::eval_in(d, scope, detail::World{true, bits, nullptr});
}

Value eval_approx(const Derivation& d, const Env& env, EvalFlags* flags) {
  detail::Scope scope(env);
  return detail::eval_in(d, scope, detail::World{false, 53, flags});
}

}  // namespace bean
