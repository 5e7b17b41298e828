#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bean/numerics.hpp"
#include "bean/semantics.hpp"
#include "bean/typecheck.hpp"

namespace bean {

enum class BenchmarkKind { DotProd, Horner, PolyVal, MatVecMul, Sum, LinSolve2 };

std::string_view benchmark_name(BenchmarkKind k);
std::optional<BenchmarkKind> benchmark_from_name(std::string_view name);

struct BenchmarkSpec {
  BenchmarkKind kind;
  int n;  // vector length, polynomial degree, or matrix side; 2 for LinSolve2

  // Name of the parameter that carries the backward error.
  std::string linear_input() const;
};

// Bean source for the benchmark. Vectors are right-nested tensors, sums
// are sequential left folds. Throws Config for unsupported sizes.
std::string gen_benchmark(const BenchmarkSpec& spec);

// Arithmetic operations the generated program performs.
long op_count(const BenchmarkSpec& spec);

// Worst-case bound from the numerical analysis literature.
Grade standard_bound(const BenchmarkSpec& spec);

struct BoundComparison {
  BenchmarkSpec spec;
  Grade inferred;
  Grade standard;
  std::string inferred_text;
  std::string standard_text;
  long ops = 0;
  double elapsed_ms = 0;  // parse + inference

  bool match() const { return inferred_text == standard_text; }
};

BoundComparison compare_bounds(const BenchmarkSpec& spec, const RoundingConfig& cfg = {});

// kappa * backward at 3 significant digits.
std::string forward_bound_from_kappa(const Grade& backward, const mpq_class& kappa, const RoundingConfig& cfg);

// The twenty (benchmark, size) rows of the reference table.
std::vector<BenchmarkSpec> default_bench_matrix();

// ---- randomized soundness -------------------------------------------------

// The generator is pinned so a seed reproduces the same inputs everywhere.
using Prng = std::mt19937_64;
inline constexpr std::string_view kPrngName = "mt19937_64 v1";

enum class InputDistribution { PositiveLogUniform, SignedLogUniform };

// Log-uniform in [0.1, 1000], negated with probability 1/2 in signed mode.
// Computed with correctly rounded MPFR exp/log so results are portable.
double sample_number(Prng& rng, InputDistribution dist);
Value sample_value(Prng& rng, const Type& type, InputDistribution dist);
Env sample_env(Prng& rng, const ProgramJudgment& j, InputDistribution dist);

struct TrialReport {
  long trials = 0;
  long violations = 0;
  double max_slack = 0;  // largest observed distance / inferred grade
  long underflow_trials = 0;
  long skipped = 0;      // signed mode only: zero approximate output
  std::vector<std::string> first_failures;  // at most a few, for diagnostics

  void merge(const TrialReport& other);
};

struct TrialOutcome {
  bool violation = false;
  bool underflow = false;
  bool skipped = false;
  double slack = 0;
  std::string failure;
};

// One run of the approx / backward / ideal pipeline on fixed inputs.
TrialOutcome run_trial(const ProgramJudgment& j, const Env& env, const RoundingConfig& cfg);

TrialReport verify_soundness(const ProgramJudgment& j, long trials, std::uint64_t seed, const RoundingConfig& cfg = {},
                             InputDistribution dist = InputDistribution::PositiveLogUniform);

}  // namespace bean
