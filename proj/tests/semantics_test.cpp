#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "bean/semantics.hpp"
#include "random_programs.hpp"

using namespace bean;
using nlohmann::json;

namespace {

constexpr int kBits = 256;

ProgramJudgment load(const std::string& stem) {
  std::ifstream in(std::filesystem::path(BEAN_PROGRAMS_DIR) / (stem + ".bean"));
  std::ostringstream s;
  s << in.rdbuf();
  return typecheck_source(s.str());
}

Env env_from_json(const ProgramJudgment& j, const json& inputs) {
  Env env;
  for (const auto& p : j.program.params) {
    Value v = value_from_json(inputs.at(p.name), p.binding_type());
    (p.kind == ParamKind::Discrete ? env.disc : env.lin).emplace(p.name, v);
  }
  return env;
}

BigNum big(double x) { return BigNum(x, kBits); }
BigNum big(const char* s) { return BigNum::from_string(s, kBits); }
BigNum tol() { return big_pow2(-200, kBits); }

bool near(const BigNum& a, const BigNum& b) {
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  return rp_distance(a, b, kBits).at_most(tol());
}

BigNum exp_of(const BigNum& x) {
  BigNum r(kBits);
  mpfr_exp(r.raw(), x.get(), MPFR_RNDN);
  return r;
}

BigNum eps_big() { return BigNum::from_rational(eps_value(RoundingConfig{}), kBits); }

// Positive log-uniform draw in [0.1, 1000].
double draw(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> e(std::log(0.1), std::log(1000.0));
  return std::exp(e(rng));
}

}  // namespace

TEST(EvalIdeal, DotProd2IsExact) {
  ProgramJudgment j = load("DotProd2");
  Env env = env_from_json(j, json{{"x", {1, 2}}, {"y", {3, 4}}});
  Value v = eval_ideal(*j.result.derivation, env.to_ideal(kBits), kBits);
  EXPECT_TRUE(v.ideal_num() == big(11.0));
}

TEST(EvalIdeal, LinSolve) {
  ProgramJudgment j = load("LinSolve");
  Env env = env_from_json(j, json{{"A", {{2, 0}, {0, 2}}}, {"b", {2, 4}}});
  Value v = eval_ideal(*j.result.derivation, env.to_ideal(kBits), kBits);
  ASSERT_TRUE(v.is(Value::Kind::Inl));
  EXPECT_TRUE(v.payload().fst().ideal_num() == big(1.0));
  EXPECT_TRUE(v.payload().snd().ideal_num() == big(2.0));

  Env singular = env_from_json(j, json{{"A", {{0, 0}, {1, 2}}}, {"b", {2, 4}}});
  Value s = eval_ideal(*j.result.derivation, singular.to_ideal(kBits), kBits);
  ASSERT_TRUE(s.is(Value::Kind::Inr));
  EXPECT_TRUE(s.payload().is(Value::Kind::Unit));
  EXPECT_TRUE(eval_approx(*j.result.derivation, singular).is(Value::Kind::Inr));
}

TEST(EvalApprox, SumOfTenthsIsLeftFold) {
  std::string src = "S (x : num^10) := let (x0, x1, x2, x3, x4, x5, x6, x7, x8, x9) = x in "
                    "add (add (add (add (add (add (add (add (add x0 x1) x2) x3) x4) x5) x6) x7) x8) x9";
  ProgramJudgment j = typecheck_source(src);
  Env env = env_from_json(j, json{{"x", json(std::vector<double>(10, 0.1))}});
  EXPECT_EQ(eval_approx(*j.result.derivation, env).approx_num(), 0.9999999999999999);
}

TEST(EvalApprox, SmallCases) {
  ProgramJudgment add = typecheck_source("F (x : num) (y : num) := add x y");
  Env e1 = env_from_json(add, json{{"x", 1.0}, {"y", 1.0}});
  EXPECT_EQ(eval_approx(*add.result.derivation, e1).approx_num(), 2.0);

  ProgramJudgment dp = load("DotProd2");
  Env e2 = env_from_json(dp, json{{"x", {1, 1}}, {"y", {1, -1}}});
  EXPECT_EQ(eval_approx(*dp.result.derivation, e2).approx_num(), 0.0);
}

TEST(EvalApprox, Deterministic) {
  ProgramJudgment j = load("SMatVecMul");
  Env env = env_from_json(j, json{{"M", {{0.1, 0.7}, {1.3, 2.9}}},
                                  {"v", {3.3, 0.2}},
                                  {"u", {5.5, 6.1}},
                                  {"a", 0.3},
                                  {"b", 7.0}});
  Value a = eval_approx(*j.result.derivation, env);
  Value b = eval_approx(*j.result.derivation, env);
  EXPECT_TRUE(a == b);
}

TEST(EvalApprox, DmulIsMultiplication) {
  ProgramJudgment j = typecheck_source("F {z : num} (x : num) := dmul z x");
  Env env = env_from_json(j, json{{"z", 0.1}, {"x", 3.0}});
  EXPECT_EQ(eval_approx(*j.result.derivation, env).approx_num(), 0.1 * 3.0);
}

TEST(EvalApprox, OverflowPropagates) {
  ProgramJudgment j = typecheck_source("F (x : num) (y : num) := mul x y");
  Env env = env_from_json(j, json{{"x", 1e200}, {"y", 1e200}});
  try {
    eval_approx(*j.result.derivation, env);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Overflow);
  }
}

TEST(Lens, ClosedFormExamples) {
  BigPair a = add_backward(big(1.0), big(1.0), big(2.5), kBits);
  EXPECT_TRUE(a.first == big(1.25) && a.second == big(1.25));

  BigPair z = add_backward(big(0.0), big(0.0), big(0.0), kBits);
  EXPECT_TRUE(z.first.is_zero() && z.second.is_zero());

  BigNum root2 = big_sqrt(big(2.0), kBits);
  BigPair m = mul_backward(big(2.0), big(3.0), big(12.0), kBits);
  EXPECT_TRUE(near(m.first, big_mul(big(2.0), root2, kBits)));
  EXPECT_TRUE(near(m.second, big_mul(big(3.0), root2, kBits)));
  EXPECT_TRUE(near(big_mul(m.first, m.second, kBits), big(12.0)));

  EXPECT_TRUE(dmul_backward(big(2.0), big(3.0), big(8.0), kBits) == big(4.0));

  BigPair d = div_backward(big(1.0), big(4.0), Value::inl(Value::approx(0.5)), kBits);
  EXPECT_TRUE(near(d.first, root2));
  EXPECT_TRUE(near(d.second, big_mul(big(2.0), root2, kBits)));
  EXPECT_TRUE(near(big_div(d.first, d.second, kBits), big(0.5)));

  BigPair inr = div_backward(big(1.0), big(0.0), Value::inr(Value::unit()), kBits);
  EXPECT_TRUE(inr.first == big(1.0) && inr.second.is_zero());
}

TEST(Lens, SubExamples) {
  BigPair fixed = sub_backward(big(3.0), big(1.0), big(2.0), kBits);
  EXPECT_TRUE(fixed.first == big(3.0) && fixed.second == big(1.0));

  double t = 2.0000000000000004;
  BigPair s = sub_backward(big(3.0), big(1.0), big(t), kBits);
  BigNum k = big_div(big(t), big(2.0), kBits);
  EXPECT_TRUE(s.first == big_mul(big(3.0), k, kBits));
  EXPECT_TRUE(s.second == k);
  EXPECT_TRUE(near(big_sub(s.first, s.second, kBits), big(t)));

  BigPair zero = sub_backward(big(0.0), big(0.0), big(0.0), kBits);
  EXPECT_TRUE(zero.first.is_zero() && zero.second.is_zero());
}

TEST(Lens, SignMismatchIsRejected) {
  auto code = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Config;
  };
  EXPECT_EQ(code([] { add_backward(big(1.0), big(1.0), big(-2.0), kBits); }), ErrorCode::BackwardDomain);
  EXPECT_EQ(code([] { mul_backward(big(0.0), big(1.0), big(1.0), kBits); }), ErrorCode::BackwardDomain);
  EXPECT_EQ(code([] { div_backward(big(1.0), big(2.0), Value::inr(Value::unit()), kBits); }),
            ErrorCode::BackwardDomain);
  EXPECT_EQ(code([] { dmul_backward(big(2.0), big(1.0), big(-1.0), kBits); }), ErrorCode::BackwardDomain);
}

// Random same-sign instances: the target is the binary64 result moved by up
// to eps in rp, so each operand may move by the rule's grade plus that distance.
TEST(Lens, PrimitiveLawsOnRandomInstances) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const BigNum eps = eps_big();
  const ArithOp ops[] = {ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div};
  for (int i = 0; i < 20000; ++i) {
    ArithOp op = ops[i % 4];
    double x1 = draw(rng), x2 = draw(rng);
    if (op == ArithOp::Sub && x1 == x2) continue;
    double approx = *approx_op(op, x1, x2).value;
    BigNum shift = big_mul(eps, big(unit(rng)), kBits);
    BigNum target = big_mul(big(approx), exp_of(shift), kBits);
    BigNum half = op == ArithOp::Mul || op == ArithOp::Div ? big_div(eps, big(2.0), kBits) : eps;
    BigNum bound = big_add(big_add(half, big_abs(shift), kBits), tol(), kBits);

    BigPair b = op == ArithOp::Add   ? add_backward(big(x1), big(x2), target, kBits)
                : op == ArithOp::Sub ? sub_backward(big(x1), big(x2), target, kBits)
                : op == ArithOp::Mul ? mul_backward(big(x1), big(x2), target, kBits)
                                     : div_backward(big(x1), big(x2), Value::inl(Value::ideal(target)), kBits);
    BigNum forward = *ideal_op(op, b.first, b.second, kBits);
    ASSERT_TRUE(near(forward, target)) << i;
    EXPECT_TRUE(rp_distance(big(x1), b.first, kBits).at_most(bound)) << i;
    EXPECT_TRUE(rp_distance(big(x2), b.second, kBits).at_most(bound)) << i;
  }
}

TEST(Lens, DmulLawsOnRandomInstances) {
  std::mt19937_64 rng(78);
  const BigNum eps = eps_big();
  for (int i = 0; i < 5000; ++i) {
    double z = draw(rng), x = draw(rng);
    double approx = *approx_op(ArithOp::Mul, z, x).value;
    BigNum xb = dmul_backward(big(z), big(x), big(approx), kBits);
    EXPECT_TRUE(near(big_mul(big(z), xb, kBits), big(approx)));
    EXPECT_TRUE(rp_distance(big(x), xb, kBits).at_most(big_add(eps, tol(), kBits)));
  }
}

// backward_eval on a 3-op chain matches the composition done by hand.
TEST(Backward, ChainMatchesHandComposition) {
  ProgramJudgment j = typecheck_source(
      "F (a : num) (b : num) (c : num) (d : num) := let t = mul a b in let s = add t c in sub s d");
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    double a = draw(rng), b = draw(rng), c = draw(rng), d = draw(rng);
    Env env = env_from_json(j, json{{"a", a}, {"b", b}, {"c", c}, {"d", d}});
    double t = a * b, s = t + c, y = s - d;
    if (y == 0) continue;
    Value approx = eval_approx(*j.result.derivation, env);
    ASSERT_EQ(approx.approx_num(), y);

    BigPair p3 = sub_backward(big(s), big(d), big(y), kBits);
    BigPair p2 = add_backward(big(t), big(c), p3.first, kBits);
    BigPair p1 = mul_backward(big(a), big(b), p2.first, kBits);

    Env back = backward_eval(*j.result.derivation, env, approx, kBits);
    EXPECT_TRUE(back.lin.at("a").ideal_num() == p1.first);
    EXPECT_TRUE(back.lin.at("b").ideal_num() == p1.second);
    EXPECT_TRUE(back.lin.at("c").ideal_num() == p2.second);
    EXPECT_TRUE(back.lin.at("d").ideal_num() == p3.second);

    Value ideal = eval_ideal(*j.result.derivation, back, kBits);
    EXPECT_TRUE(near(ideal.ideal_num(), big(y)));
  }
}

TEST(Backward, LinSolveKeepsDiscreteAndTags) {
  ProgramJudgment j = load("LinSolve");
  Env env = env_from_json(j, json{{"A", {{3, 9}, {0.7, 11}}}, {"b", {1.1, 2.3}}});
  Value approx = eval_approx(*j.result.derivation, env);
  Env back = backward_eval(*j.result.derivation, env, approx, kBits);
  Value ideal = eval_ideal(*j.result.derivation, back, kBits);
  ASSERT_TRUE(ideal.is(Value::Kind::Inl));
  EXPECT_TRUE(near(ideal.payload().snd().ideal_num(), big(approx.payload().snd().approx_num())));

  Env singular = env_from_json(j, json{{"A", {{0, 9}, {0.7, 11}}}, {"b", {1.1, 2.3}}});
  Value inr = eval_approx(*j.result.derivation, singular);
  Env same = backward_eval(*j.result.derivation, singular, inr, kBits);
  DistanceReport r = distances(singular, same, j.skel, kBits);
  for (const auto& [name, dist] : r.lin) EXPECT_TRUE(dist.is_zero()) << name;
}

TEST(Backward, DiscreteInputsComeBackUnchanged) {
  ProgramJudgment j = load("SMatVecMul");
  Env env = env_from_json(j, json{{"M", {{0.1, 0.7}, {1.3, 2.9}}},
                                  {"v", {3.3, 0.2}},
                                  {"u", {5.5, 6.1}},
                                  {"a", 0.3},
                                  {"b", 7.0}});
  Value approx = eval_approx(*j.result.derivation, env);
  Env back = backward_eval(*j.result.derivation, env, approx, kBits);
  DistanceReport r = distances(env, back, j.skel, kBits);
  for (const auto& [name, changed] : r.disc_changed) EXPECT_FALSE(changed) << name;
  EXPECT_EQ(r.disc_changed.size(), 3u);
}

TEST(Distances, Examples) {
  ContextSkeleton skel{{"x", Type::num()}, {"p", Type::vec(Type::num(), 2)}};
  Env a;
  a.lin.emplace("x", Value::approx(1.0));
  a.lin.emplace("p", Value::pair(Value::approx(1.0), Value::approx(2.0)));
  a.disc.emplace("z", Value::approx(4.0));
  DistanceReport same = distances(a, a, skel, kBits);
  for (const auto& [n, d] : same.lin) EXPECT_TRUE(d.is_zero()) << n;
  EXPECT_FALSE(same.disc_changed.at("z"));

  BigNum delta = big("1e-16");
  Env b;
  b.lin.emplace("x", Value::ideal(exp_of(delta)));
  b.lin.emplace("p", Value::pair(Value::ideal(big(1.0)),
                                 Value::ideal(big_mul(big(2.0), exp_of(big_neg(delta)), kBits))));
  b.disc.emplace("z", Value::ideal(big(4.0)));
  DistanceReport r = distances(a, b, skel, kBits);
  EXPECT_TRUE(near(r.lin.at("x").value(), delta));
  EXPECT_TRUE(near(r.lin.at("p").value(), delta));
  EXPECT_FALSE(r.disc_changed.at("z"));

  Env c = b;
  c.disc.at("z") = Value::ideal(big(4.5));
  EXPECT_TRUE(distances(a, c, skel, kBits).disc_changed.at("z"));
}

TEST(Distances, TagsAndDisc) {
  Type t = Type::sum(Type::num(), Type::unit());
  EXPECT_TRUE(value_distance(Value::inl(Value::approx(1.0)), Value::inr(Value::unit()), t, kBits).is_infinite());
  EXPECT_TRUE(value_distance(Value::inr(Value::unit()), Value::inr(Value::unit()), t, kBits).is_zero());
  Type d = Type::disc(Type::num());
  EXPECT_TRUE(value_distance(Value::approx(1.0), Value::approx(1.0), d, kBits).is_zero());
  EXPECT_TRUE(value_distance(Value::approx(1.0), Value::approx(1.5), d, kBits).is_infinite());
}

TEST(Json, ValuesRoundTrip) {
  Type t = Type::sum(Type::tensor(Type::disc(Type::num()), Type::num()), Type::unit());
  Value v = Value::inl(Value::pair(Value::approx(0.1), Value::approx(-2.5)));
  json j = v.to_json();
  EXPECT_EQ(j, json::parse(R"({"inl": ["0.1", "-2.5"]})"));
  EXPECT_TRUE(value_from_json(j, t) == v);
  EXPECT_EQ(Value::inr(Value::unit()).to_json(), json::parse(R"({"inr": null})"));
  EXPECT_TRUE(value_from_json(json::parse("[1, 2, 3]"), Type::vec(Type::num(), 3)) ==
              Value::pair(Value::approx(1), Value::pair(Value::approx(2), Value::approx(3))));
  EXPECT_EQ(Value::ideal(big(0.1)).to_json(), json("0.1000000000000000055511151231257827021181583404541015625"));
}

TEST(Json, ShapeErrors) {
  auto code = [](const char* text, const Type& t) {
    try {
      value_from_json(json::parse(text), t);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Config;
  };
  EXPECT_EQ(code("[1, 2]", Type::vec(Type::num(), 3)), ErrorCode::InputShape);
  EXPECT_EQ(code("\"abc\"", Type::num()), ErrorCode::InputShape);
  EXPECT_EQ(code("{\"left\": 1}", Type::sum(Type::num(), Type::unit())), ErrorCode::InputShape);
  EXPECT_EQ(code("1", Type::unit()), ErrorCode::InputShape);
}

// On random well-typed programs the ideal run on the pulled-back inputs
// reproduces the approximate result, and every input stays within its grade.
TEST(Properties, RandomPrograms) {
  rnd::ProgramGen gen(31337);
  std::mt19937_64 rng(8);
  const BigNum eps = eps_big();
  int checked = 0;
  for (int i = 0; i < 600; ++i) {
    TopLevelDef def = gen.def(30);
    auto j = rnd::typed(def);
    if (!j) continue;
    Env env;
    for (const auto& p : j->program.params) {
      Type t = p.binding_type();
      json in = t == Type::num() || t == Type::disc(Type::num()) ? json(draw(rng)) : json{draw(rng), draw(rng)};
      (p.kind == ParamKind::Discrete ? env.disc : env.lin).emplace(p.name, value_from_json(in, t));
    }
    const Derivation& d = *j->result.derivation;
    Value approx = Value::unit();
    try {
      approx = eval_approx(d, env);
    } catch (const Error&) {
      continue;  // overflow
    }
    Env back = backward_eval(d, env, approx, kBits);
    Value ideal = eval_ideal(d, back, kBits);
    ASSERT_TRUE(value_distance(ideal, approx, j->result.type, kBits).at_most(tol()))
        << pretty_print(def) << "\napprox " << approx.to_string() << "\nideal " << ideal.to_string(30);
    DistanceReport r = distances(env, back, j->skel, kBits);
    for (const auto& [name, changed] : r.disc_changed) EXPECT_FALSE(changed) << name;
    for (const auto& [name, dist] : r.lin) {
      Grade g = j->grade_of(name).value_or(Grade::zero());
      BigNum bound = big_add(big_mul(BigNum::from_rational(g.coeff(), kBits), eps, kBits), tol(), kBits);
      EXPECT_TRUE(dist.at_most(bound)) << name << " moved " << dist.to_string() << " > " << g.to_string() << "\n"
                                       << pretty_print(def);
    }
    ++checked;
  }
  EXPECT_GT(checked, 200);
}
