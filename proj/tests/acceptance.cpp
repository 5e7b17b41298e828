// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "bean/harness.hpp"
#include "bean/stack.hpp"
#include "random_programs.hpp"

using namespace bean;

namespace {

constexpr int kBits = 256;

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s criterion %d: %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string slurp(const std::string& stem) {
  std::ifstream in(std::filesystem::path(BEAN_PROGRAMS_DIR) / (stem + ".bean"));
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// ---- 1 ----

Outcome bound_matrix() {
  struct Row {
    BenchmarkKind kind;
    int n;
    const char* bound;
  };
  const Row rows[] = {
      {BenchmarkKind::DotProd, 20, "2.22e-15"},   {BenchmarkKind::DotProd, 50, "5.55e-15"},
      {BenchmarkKind::DotProd, 100, "1.11e-14"},  {BenchmarkKind::DotProd, 500, "5.55e-14"},
      {BenchmarkKind::Horner, 20, "4.44e-15"},    {BenchmarkKind::Horner, 50, "1.11e-14"},
      {BenchmarkKind::Horner, 100, "2.22e-14"},   {BenchmarkKind::Horner, 500, "1.11e-13"},
      {BenchmarkKind::PolyVal, 10, "1.22e-15"},   {BenchmarkKind::PolyVal, 20, "2.33e-15"},
      {BenchmarkKind::PolyVal, 50, "5.66e-15"},   {BenchmarkKind::PolyVal, 100, "1.12e-14"},
      {BenchmarkKind::MatVecMul, 5, "5.55e-16"},  {BenchmarkKind::MatVecMul, 10, "1.11e-15"},
      {BenchmarkKind::MatVecMul, 20, "2.22e-15"}, {BenchmarkKind::MatVecMul, 50, "5.55e-15"},
      {BenchmarkKind::Sum, 50, "5.44e-15"},       {BenchmarkKind::Sum, 100, "1.10e-14"},
      {BenchmarkKind::Sum, 500, "5.54e-14"},      {BenchmarkKind::Sum, 1000, "1.11e-13"},
  };
  auto t0 = std::chrono::steady_clock::now();
  int ok = 0;
  std::string bad;
  for (const Row& r : rows) {
    BoundComparison c = compare_bounds({r.kind, r.n});
    if (c.inferred_text == r.bound && c.standard_text == r.bound && c.ops == op_count({r.kind, r.n}))
      ++ok;
    else
      bad += " " + std::string(benchmark_name(r.kind)) + "/" + std::to_string(r.n) + "=" + c.inferred_text + "|" +
             c.standard_text;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool in_time = secs < 300;
  return {ok == 20 && in_time, std::to_string(ok) + "/20 rows match at 3 significant digits" + bad +
                                   (in_time ? "" : ", over the 5 minute budget")};
}

// ---- 2 ----

Outcome forward_bounds() {
  RoundingConfig cfg;
  cfg.unit_roundoff = parse_roundoff("2^-52");
  struct Row {
    BenchmarkKind kind;
    int n;
    const char* bound;
  };
  const Row rows[] = {{BenchmarkKind::Sum, 500, "1.11e-13"},
                      {BenchmarkKind::DotProd, 500, "1.11e-13"},
                      {BenchmarkKind::Horner, 500, "2.22e-13"},
                      {BenchmarkKind::PolyVal, 100, "2.24e-14"}};
  int ok = 0;
  std::string bad;
  for (const Row& r : rows) {
    std::string got = forward_bound_from_kappa(compare_bounds({r.kind, r.n}, cfg).inferred, 1, cfg);
    if (got == r.bound)
      ++ok;
    else
      bad += " " + std::string(benchmark_name(r.kind)) + "=" + got;
  }
  return {ok == 4, std::to_string(ok) + "/4 forward bounds (kappa 1, u = 2^-52) match" + bad};
}

// ---- 3 ----

Outcome golden_judgments() {
  struct Golden {
    const char* program;
    std::vector<std::pair<const char*, Grade>> grades;
  };
  const std::vector<Golden> cases{
      {"DotProd2", {{"x", Grade(3, 2)}, {"y", Grade(3, 2)}}},
      {"ScaleVec", {{"x", Grade(1)}}},
      {"SVecAdd", {{"x", Grade(2)}, {"y", Grade(1)}}},
      {"InnerProduct", {{"u", Grade(2)}}},
      {"MatVecMul", {{"M", Grade(2)}}},
      {"SMatVecMul", {{"M", Grade(4)}, {"u", Grade(2)}}},
      {"PolyVal", {{"a", Grade(3)}}},
      {"Horner", {{"a", Grade(4)}}},
      {"PolyValAlt", {{"a0", Grade(2)}, {"a1", Grade(3)}, {"a2", Grade(3)}}},
      {"HornerAlt", {{"a0", Grade(1)}, {"a1", Grade(3)}, {"a2", Grade(4)}}},
      {"LinSolve", {{"A", Grade(5, 2)}, {"b", Grade(3, 2)}}},
  };
  int ok = 0;
  std::string bad;
  for (const auto& c : cases) {
    ProgramJudgment j = typecheck_source(slurp(c.program));
    bool match = j.result.ctx.size() == c.grades.size();
    for (const auto& [name, g] : c.grades) {
      auto got = j.grade_of(name);
      match = match && got && *got == g;
    }
    if (match)
      ++ok;
    else
      bad += std::string(" ") + c.program;
  }
  return {ok == static_cast<int>(cases.size()),
          std::to_string(ok) + "/" + std::to_string(cases.size()) + " judgments match exactly" + bad};
}

// ---- 4 ----

Outcome empirical_soundness() {
  struct Row {
    BenchmarkKind kind;
    int n;
    long trials;  // fewer on the largest programs to stay inside the time budget
  };
  const Row rows[] = {
      {BenchmarkKind::DotProd, 20, 800},   {BenchmarkKind::DotProd, 50, 800},  {BenchmarkKind::DotProd, 100, 800},
      {BenchmarkKind::Horner, 20, 800},    {BenchmarkKind::Horner, 50, 800},   {BenchmarkKind::Horner, 100, 800},
      {BenchmarkKind::PolyVal, 10, 800},   {BenchmarkKind::PolyVal, 20, 800},  {BenchmarkKind::PolyVal, 50, 500},
      {BenchmarkKind::PolyVal, 100, 200},  {BenchmarkKind::MatVecMul, 5, 800}, {BenchmarkKind::MatVecMul, 10, 800},
      {BenchmarkKind::MatVecMul, 20, 300}, {BenchmarkKind::Sum, 50, 800},      {BenchmarkKind::Sum, 100, 800},
      {BenchmarkKind::LinSolve2, 2, 800},
  };
  auto t0 = std::chrono::steady_clock::now();
  TrialReport total;
  std::uint64_t seed = 20240601;
  for (const Row& r : rows) {
    ProgramJudgment j = typecheck_source(gen_benchmark({r.kind, r.n}));
    total.merge(verify_soundness(j, r.trials, seed++));
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char slack[64];
  std::snprintf(slack, sizeof slack, "%.3f", total.max_slack);
  bool pass = total.trials >= 10000 && total.violations == 0 && total.skipped == 0 && total.max_slack <= 1 &&
              secs < 120;
  std::string detail = std::to_string(total.trials) + " trials, " + std::to_string(total.violations) +
                       " violations, max slack " + slack;
  if (total.skipped) detail += ", " + std::to_string(total.skipped) + " skipped";
  if (secs >= 120) detail += ", over the 2 minute budget";
  if (!total.first_failures.empty()) detail += "; first: " + total.first_failures[0];
  return {pass, detail};
}

// ---- 5 ----

BigNum big(double x) { return BigNum(x, kBits); }

BigNum exp_of(const BigNum& x) {
  BigNum r(kBits);
  mpfr_exp(r.raw(), x.get(), MPFR_RNDN);
  return r;
}

struct LensStats {
  long instances = 0;
  long failures = 0;  // instances with at least one broken law
  long last_failed = -1;
  std::string first;

  void fail(const std::string& why) {
    if (last_failed == instances) return;
    last_failed = instances;
    if (failures++ == 0) first = why;
  }
};

// Same-sign target within eps of the binary64 result; each operand may move
// by its rule's grade plus the target's own distance.
LensStats primitive_laws(ArithOp op, bool dmul, std::mt19937_64& rng, long count) {
  const BigNum eps = BigNum::from_rational(eps_value(RoundingConfig{}), kBits);
  const BigNum tol = big_pow2(-200, kBits);
  std::uniform_real_distribution<double> shift_dist(-1.0, 1.0);
  Prng draw(rng());
  LensStats s;
  while (s.instances < count) {
    double x1 = sample_number(draw, InputDistribution::SignedLogUniform);
    double x2 = sample_number(draw, InputDistribution::SignedLogUniform);
    double approx = *approx_op(op, x1, x2).value;
    if (approx == 0) continue;
    ++s.instances;
    BigNum shift = big_mul(eps, big(shift_dist(rng)), kBits);
    BigNum target = big_mul(big(approx), exp_of(shift), kBits);
    bool half = !dmul && (op == ArithOp::Mul || op == ArithOp::Div);
    BigNum grade = half ? big_div(eps, big(2.0), kBits) : eps;
    BigNum bound = big_add(big_add(grade, big_abs(shift), kBits), tol, kBits);

    BigNum b1 = big(x1), b2 = big(x2);
    if (dmul) {
      b2 = dmul_backward(big(x1), big(x2), target, kBits);
    } else {
      BigPair p = op == ArithOp::Add   ? add_backward(big(x1), big(x2), target, kBits)
                  : op == ArithOp::Sub ? sub_backward(big(x1), big(x2), target, kBits)
                  : op == ArithOp::Mul ? mul_backward(big(x1), big(x2), target, kBits)
                                       : div_backward(big(x1), big(x2), Value::inl(Value::ideal(target)), kBits);
      b1 = p.first;
      b2 = p.second;
    }
    BigNum forward = *ideal_op(op, b1, b2, kBits);
    char buf[160];
    std::snprintf(buf, sizeof buf, "x1=%.17g x2=%.17g", x1, x2);
    if (!rp_distance(forward, target, kBits).at_most(tol)) s.fail(std::string("round trip off at ") + buf);
    if (dmul) {
      if (!(b1 == big(x1))) s.fail(std::string("discrete operand moved at ") + buf);
    } else if (!rp_distance(big(x1), b1, kBits).at_most(bound)) {
      s.fail(std::string("first operand over its grade at ") + buf);
    }
    if (!rp_distance(big(x2), b2, kBits).at_most(bound)) s.fail(std::string("second operand over its grade at ") + buf);
  }
  return s;
}

// Random straight-line chains of three primitives over four inputs, checked
// against composition done by hand and against both lens laws.
LensStats chain_laws(std::mt19937_64& rng, long count) {
  const char* names[] = {"add", "sub", "mul"};
  const ArithOp ops[] = {ArithOp::Add, ArithOp::Sub, ArithOp::Mul};
  const BigNum eps = BigNum::from_rational(eps_value(RoundingConfig{}), kBits);
  const BigNum tol = big_pow2(-200, kBits);
  Prng draw(rng());
  LensStats s;
  std::vector<ProgramJudgment> programs;
  std::vector<std::array<int, 3>> shapes;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        std::string src = std::string("C (p : num) (q : num) (r : num) (w : num) := let t = ") + names[a] +
                          " p q in let s = " + names[b] + " t r in " + names[c] + " s w";
        programs.push_back(typecheck_source(src));
        shapes.push_back({a, b, c});
      }
  auto backward = [&](ArithOp op, const BigNum& x1, const BigNum& x2, const BigNum& t) {
    return op == ArithOp::Add ? add_backward(x1, x2, t, kBits)
           : op == ArithOp::Sub ? sub_backward(x1, x2, t, kBits)
                                : mul_backward(x1, x2, t, kBits);
  };
  while (s.instances < count) {
    size_t k = static_cast<size_t>(rng() % programs.size());
    const ProgramJudgment& j = programs[k];
    auto [a, b, c] = shapes[k];
    double p = sample_number(draw, InputDistribution::PositiveLogUniform);
    double q = sample_number(draw, InputDistribution::PositiveLogUniform);
    double r = sample_number(draw, InputDistribution::PositiveLogUniform);
    double w = sample_number(draw, InputDistribution::PositiveLogUniform);
    double t = *approx_op(ops[a], p, q).value;
    double sv = *approx_op(ops[b], t, r).value;
    double y = *approx_op(ops[c], sv, w).value;
    if (t == 0 || sv == 0 || y == 0) continue;
    ++s.instances;
    Env env;
    env.lin.emplace("p", Value::approx(p));
    env.lin.emplace("q", Value::approx(q));
    env.lin.emplace("r", Value::approx(r));
    env.lin.emplace("w", Value::approx(w));
    const Derivation& d = *j.result.derivation;
    Value approx = eval_approx(d, env);
    Env back = backward_eval(d, env, approx, kBits);

    BigPair p3 = backward(ops[c], big(sv), big(w), big(y));
    BigPair p2 = backward(ops[b], big(t), big(r), p3.first);
    BigPair p1 = backward(ops[a], big(p), big(q), p2.first);
    bool same = back.lin.at("p").ideal_num() == p1.first && back.lin.at("q").ideal_num() == p1.second &&
                back.lin.at("r").ideal_num() == p2.second && back.lin.at("w").ideal_num() == p3.second;
    if (!same) s.fail("composite differs from nested composition for shape " + std::to_string(k));

    Value ideal = eval_ideal(d, back, kBits);
    if (!value_distance(ideal, approx, Type::num(), kBits).at_most(tol))
      s.fail("chain round trip off for shape " + std::to_string(k));
    DistanceReport rep = distances(env, back, j.skel, kBits);
    for (const auto& [name, dist] : rep.lin) {
      BigNum bound = big_add(big_mul(BigNum::from_rational(j.grade_of(name)->coeff(), kBits), eps, kBits), tol, kBits);
      if (!dist.at_most(bound)) s.fail("'" + name + "' over its grade in shape " + std::to_string(k));
    }
  }
  return s;
}

Outcome lens_laws() {
  std::mt19937_64 rng(4242);
  const long per_primitive = 100000;
  struct Case {
    const char* name;
    ArithOp op;
    bool dmul;
  };
  const Case cases[] = {{"add", ArithOp::Add, false},
                        {"sub", ArithOp::Sub, false},
                        {"mul", ArithOp::Mul, false},
                        {"div", ArithOp::Div, false},
                        {"dmul", ArithOp::Mul, true}};
  std::string detail;
  bool pass = true;
  for (const Case& c : cases) {
    LensStats s = primitive_laws(c.op, c.dmul, rng, per_primitive);
    detail += std::string(c.name) + " " + std::to_string(s.instances - s.failures) + "/" + std::to_string(s.instances) + ", ";
    if (s.failures) {
      pass = false;
      detail += "(" + s.first + ") ";
    }
  }
  LensStats chains = chain_laws(rng, 10000);
  detail += "3-op chains " + std::to_string(chains.instances - chains.failures) + "/" + std::to_string(chains.instances);
  if (chains.failures) {
    pass = false;
    detail += " (" + chains.first + ")";
  }
  return {pass, detail};
}

// ---- 6 ----

Outcome negative_tests() {
  struct Case {
    const char* what;
    const char* source;
    ErrorCode expected;
  };
  const Case cases[] = {
      {"add x x", "f (x : num) := add x x", ErrorCode::Linearity},
      {"pair component reuse", "f (p : num^2) := let (a, b) = p in let c = add a b in add c a", ErrorCode::Linearity},
      {"dmul with linear first operand", "f (x : num) (y : num) := dmul x y", ErrorCode::Kind},
      {"x*y + y", "f (x : num) (y : num) := add (mul x y) y", ErrorCode::Linearity},
  };
  int ok = 0;
  std::string bad;
  for (const Case& c : cases) {
    ErrorCode got = ErrorCode::Config;
    bool threw = false;
    try {
      typecheck_source(c.source);
    } catch (const Error& e) {
      threw = true;
      got = e.code();
    }
    if (threw && got == c.expected)
      ++ok;
    else
      bad += std::string("; ") + c.what + (threw ? " gave " + std::string(code_name(got)) : " was accepted");
  }
  return {ok == 4, std::to_string(ok) + "/4 rejected with the expected code" + bad};
}

// ---- 7 ----

Outcome algorithmic_cross_check() {
  rnd::ProgramGen gen(777);
  std::mt19937_64 rng(778);
  const int wanted = 1000;
  int programs = 0, generated = 0, ok = 0;
  std::string first;
  while (programs < wanted && generated < 100 * wanted) {
    ++generated;
    TopLevelDef d = gen.def(30);
    auto j = rnd::typed(d);
    if (!j) continue;
    ++programs;
    const auto& r = j->result;
    std::string why = recheck(*r.derivation, j->disc, r.ctx);
    if (why.empty() && !is_subskeleton(skeleton(r.ctx), j->skel)) why = "inferred skeleton not within the input";
    if (why.empty()) {
      // A random weakening: larger grades on used names plus unused parameters.
      LinearContext declared = r.ctx;
      for (auto& [name, b] : declared) b.grade += Grade(static_cast<long>(rng() % 4), 2);
      for (const auto& [name, t] : j->skel) declared.emplace(name, LinBinding{t, Grade(static_cast<long>(rng() % 3))});
      CheckResult c = check_declared(j->disc, declared, j->program.body);
      if (!c.ok) why = "declared weakening rejected";
      else if (!is_subcontext(c.inferred.ctx, declared)) why = "inferred context not below the declared one";
      else if (!recheck(*r.derivation, j->disc, declared).empty()) why = "re-checker rejects the weakening";
    }
    if (why.empty())
      ++ok;
    else if (first.empty())
      first = why + " in:\n" + pretty_print(d);
  }
  bool pass = programs == wanted && ok == wanted;
  return {pass, std::to_string(ok) + "/" + std::to_string(programs) + " random well-typed programs (" +
                    std::to_string(generated) + " generated) pass" + (first.empty() ? "" : "; " + first)};
}

}  // namespace

int main() {
  return run_with_large_stack([] {
    criterion(1, "backward bounds for the 20-row benchmark matrix", bound_matrix);
    criterion(2, "forward bounds from kappa", forward_bounds);
    criterion(3, "golden typing judgments", golden_judgments);
    criterion(4, "empirical backward error soundness", empirical_soundness);
    criterion(5, "lens laws for primitives and 3-op chains", lens_laws);
    criterion(6, "negative typing tests", negative_tests);
    criterion(7, "inference agrees with the declarative rules", algorithmic_cross_check);
    std::printf("%d of 7 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
  });
}
