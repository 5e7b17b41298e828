#include <chrono>
#include <sstream>

#include "bean/harness.hpp"

namespace bean {

namespace {

constexpr BenchmarkKind kAllKinds[] = {BenchmarkKind::DotProd, BenchmarkKind::Horner,    BenchmarkKind::PolyVal,
                                       BenchmarkKind::MatVecMul, BenchmarkKind::Sum, BenchmarkKind::LinSolve2};

// Emits `let` lines into a stream; the body expression is written last.
class Emitter {
 public:
  void line(const std::string& s) { out_ << "  " << s << "\n"; }

  // Binds prefix0 .. prefix{n-1} to the components of a right-nested
  // n-tuple held in `var`. Discrete tuples are split with dlet.
  void unpack(const std::string& var, const std::string& prefix, int n, bool discrete = false) {
    std::string kw = discrete ? "dlet" : "let";
    if (n == 1) {
      line(kw + " " + prefix + "0 = " + var + " in");
      return;
    }
    std::string rest = var;
    for (int k = 0; k + 1 < n; ++k) {
      std::string tail = k + 2 == n ? prefix + std::to_string(k + 1) : prefix + "_rest" + std::to_string(k);
      line(kw + " (" + prefix + std::to_string(k) + ", " + tail + ") = " + rest + " in");
      rest = tail;
    }
  }

  // Sequential left fold of `add` over the given terms; returns the name
  // holding the result.
  std::string fold_add(const std::vector<std::string>& terms, const std::string& acc) {
    std::string cur = terms[0];
    for (size_t k = 1; k < terms.size(); ++k) {
      std::string next = acc + std::to_string(k);
      line("let " + next + " = add " + cur + " " + terms[k] + " in");
      cur = next;
    }
    return cur;
  }

  std::string finish(const std::string& header, const std::string& result) {
    return header + " :=\n" + out_.str() + "  " + result + "\n";
  }

 private:
  std::ostringstream out_;
};

std::string vec_type(int n) { return n == 1 ? "num" : "num^" + std::to_string(n); }

std::string dot_prod(int n) {
  Emitter e;
  e.unpack("x", "x", n);
  e.unpack("y", "y", n, true);
  std::vector<std::string> terms;
  for (int k = 0; k < n; ++k) {
    std::string p = "p" + std::to_string(k);
    e.line("let " + p + " = dmul y" + std::to_string(k) + " x" + std::to_string(k) + " in");
    terms.push_back(p);
  }
  return e.finish("DotProd (x : " + vec_type(n) + ") {y : " + vec_type(n) + "}", e.fold_add(terms, "s"));
}

std::string sum(int n) {
  Emitter e;
  e.unpack("x", "x", n);
  std::vector<std::string> terms;
  for (int k = 0; k < n; ++k) terms.push_back("x" + std::to_string(k));
  return e.finish("Sum (x : " + vec_type(n) + ")", e.fold_add(terms, "s"));
}

// Coefficients a0 .. aN, highest degree innermost.
std::string horner(int n) {
  Emitter e;
  e.unpack("a", "a", n + 1);
  std::string y = "a" + std::to_string(n);
  for (int k = n - 1; k >= 0; --k) {
    std::string t = "t" + std::to_string(k), next = "y" + std::to_string(k);
    e.line("let " + t + " = dmul z " + y + " in");
    e.line("let " + next + " = add a" + std::to_string(k) + " " + t + " in");
    y = next;
  }
  return e.finish("Horner (a : " + vec_type(n + 1) + ") {z : num}", y);
}

// Naive scheme: a_k z^k as k successive dmuls, then a left fold.
std::string poly_val(int n) {
  Emitter e;
  e.unpack("a", "a", n + 1);
  std::vector<std::string> terms{"a0"};
  for (int k = 1; k <= n; ++k) {
    std::string cur = "a" + std::to_string(k);
    for (int j = 1; j <= k; ++j) {
      std::string next = "m" + std::to_string(k) + "_" + std::to_string(j);
      e.line("let " + next + " = dmul z " + cur + " in");
      cur = next;
    }
    terms.push_back(cur);
  }
  return e.finish("PolyVal (a : " + vec_type(n + 1) + ") {z : num}", e.fold_add(terms, "s"));
}

std::string mat_vec_mul(int n) {
  Emitter e;
  e.unpack("v", "v", n, true);
  e.unpack("M", "m", n);
  std::string result;
  for (int i = 0; i < n; ++i) {
    std::string row = "m" + std::to_string(i), r = "r" + std::to_string(i) + "_";
    e.unpack(row, row + "_", n);
    std::vector<std::string> terms;
    for (int j = 0; j < n; ++j) {
      std::string p = "p" + std::to_string(i) + "_" + std::to_string(j);
      e.line("let " + p + " = dmul v" + std::to_string(j) + " " + row + "_" + std::to_string(j) + " in");
      terms.push_back(p);
    }
    std::string u = "u" + std::to_string(i);
    e.line("let " + u + " = " + e.fold_add(terms, r) + " in");
    result += (i ? ", " : "") + u;
  }
  if (n > 1) result = "(" + result + ")";
  std::string ty = n == 1 ? "num" : "(" + vec_type(n) + ")^" + std::to_string(n);
  return e.finish("MatVecMul (M : " + ty + ") {v : " + vec_type(n) + "}", result);
}

std::string lin_solve() {
  return R"(LinSolve (A : (num^2)^2) (b : num^2) :=
  let ((a00, a01), (a10, a11)) = A in
  let (b0, b1) = b in
  let x0_or_err = div b0 a00 in
  case x0_or_err of
    inl (x0) =>
      dlet d_x0 = !x0 in
      let s0 = dmul d_x0 a10 in
      let s1 = sub b1 s0 in
      let x1_or_err = div s1 a11 in
      case x1_or_err of
        inl (x1) => inl (d_x0, x1)
      | inr (err) => inr err
  | inr (err) => inr err
)";
}

}  // namespace

std::string_view benchmark_name(BenchmarkKind k) {
  switch (k) {
    case BenchmarkKind::DotProd: return "DotProd";
    case BenchmarkKind::Horner: return "Horner";
    case BenchmarkKind::PolyVal: return "PolyVal";
    case BenchmarkKind::MatVecMul: return "MatVecMul";
    case BenchmarkKind::Sum: return "Sum";
    case BenchmarkKind::LinSolve2: return "LinSolve2";
  }
  return "?";
}

std::optional<BenchmarkKind> benchmark_from_name(std::string_view name) {
  for (BenchmarkKind k : kAllKinds)
    if (benchmark_name(k) == name) return k;
  return std::nullopt;
}

std::string BenchmarkSpec::linear_input() const {
  switch (kind) {
    case BenchmarkKind::DotProd:
    case BenchmarkKind::Sum: return "x";
    case BenchmarkKind::Horner:
    case BenchmarkKind::PolyVal: return "a";
    case BenchmarkKind::MatVecMul: return "M";
    case BenchmarkKind::LinSolve2: return "A";
  }
  return "";
}

std::string gen_benchmark(const BenchmarkSpec& spec) {
  int n = spec.n;
  auto bad = [&] {
    return Error(ErrorCode::Config, "unsupported size " + std::to_string(n) + " for " +
                                        std::string(benchmark_name(spec.kind)));
  };
  switch (spec.kind) {
    case BenchmarkKind::DotProd:
      if (n < 1 || n > 100000) throw bad();
      return dot_prod(n);
    case BenchmarkKind::Sum:
      if (n < 1 || n > 100000) throw bad();
      return sum(n);
    case BenchmarkKind::Horner:
      if (n < 1 || n > 100000) throw bad();
      return horner(n);
    case BenchmarkKind::PolyVal:
      if (n < 1 || n > 1000) throw bad();
      return poly_val(n);
    case BenchmarkKind::MatVecMul:
      if (n < 1 || n > 300) throw bad();
      return mat_vec_mul(n);
    case BenchmarkKind::LinSolve2:
      if (n != 2) throw bad();
      return lin_solve();
  }
  throw bad();
}

long op_count(const BenchmarkSpec& spec) {
  long n = spec.n;
  switch (spec.kind) {
    case BenchmarkKind::DotProd: return 2 * n - 1;
    case BenchmarkKind::Sum: return n - 1;
    case BenchmarkKind::Horner: return 2 * n;
    case BenchmarkKind::PolyVal: return n * (n + 3) / 2;
    case BenchmarkKind::MatVecMul: return 2 * n * n - n;
    case BenchmarkKind::LinSolve2: return 4;
  }
  return 0;
}

Grade standard_bound(const BenchmarkSpec& spec) {
  long n = spec.n;
  switch (spec.kind) {
    case BenchmarkKind::DotProd: return Grade(n, 1);
    case BenchmarkKind::Sum: return Grade(n - 1, 1);
    case BenchmarkKind::Horner: return Grade(2 * n, 1);
    case BenchmarkKind::MatVecMul: return Grade(n, 1);
    case BenchmarkKind::PolyVal: return Grade(n + 1, 1);
    // Substitution on an n x n triangular system: gamma_n per entry.
    case BenchmarkKind::LinSolve2: return Grade(2, 1);
  }
  return Grade::zero();
}

BoundComparison compare_bounds(const BenchmarkSpec& spec, const RoundingConfig& cfg) {
  std::string src = gen_benchmark(spec);
  auto start = std::chrono::steady_clock::now();
  ProgramJudgment j = typecheck_source(src);
  auto stop = std::chrono::steady_clock::now();
  Grade inferred = j.grade_of(spec.linear_input()).value_or(Grade::zero());
  Grade standard = standard_bound(spec);
  BoundComparison out{spec,
                      inferred,
                      standard,
                      grade_to_decimal(inferred, cfg),
                      grade_to_decimal(standard, cfg),
                      op_count(spec),
                      std::chrono::duration<double, std::milli>(stop - start).count()};
  long counted = count_ops(*j.program.body);
  if (counted != out.ops)
    throw Error(ErrorCode::Config, std::string(benchmark_name(spec.kind)) + " generator emitted " +
                                       std::to_string(counted) + " ops, expected " + std::to_string(out.ops));
  return out;
}

std::string forward_bound_from_kappa(const Grade& backward, const mpq_class& kappa, const RoundingConfig& cfg) {
  if (kappa < 0) throw Error(ErrorCode::Config, "kappa must be nonnegative");
  mpq_class v = kappa * backward.coeff() * eps_value(cfg);
  return format_sig3(v);
}

std::vector<BenchmarkSpec> default_bench_matrix() {
  std::vector<BenchmarkSpec> out;
  auto add = [&](BenchmarkKind k, std::initializer_list<int> sizes) {
    for (int n : sizes) out.push_back({k, n});
  };
  add(BenchmarkKind::DotProd, {20, 50, 100, 500});
  add(BenchmarkKind::Horner, {20, 50, 100, 500});
  add(BenchmarkKind::PolyVal, {10, 20, 50, 100});
  add(BenchmarkKind::MatVecMul, {5, 10, 20, 50});
  add(BenchmarkKind::Sum, {50, 100, 500, 1000});
  return out;
}

}  // namespace bean
