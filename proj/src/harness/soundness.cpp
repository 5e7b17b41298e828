#include "bean/harness.hpp"

namespace bean {

namespace {

constexpr long kTolExponent = -200;
constexpr size_t kKeptFailures = 5;

// On the round trip a discrete output is compared numerically: the ideal
// re-run reproduces it only up to rounding at the ideal precision.
Type strip_disc(const Type& t) {
  switch (t.kind()) {
    case Type::Kind::Disc: return strip_disc(t.inner());
    case Type::Kind::Tensor: return Type::tensor(strip_disc(t.left()), strip_disc(t.right()));
    case Type::Kind::Sum: return Type::sum(strip_disc(t.left()), strip_disc(t.right()));
    default: return t;
  }
}

}  // namespace

void TrialReport::merge(const TrialReport& other) {
  trials += other.trials;
  violations += other.violations;
  max_slack = std::max(max_slack, other.max_slack);
  underflow_trials += other.underflow_trials;
  skipped += other.skipped;
  for (const auto& f : other.first_failures)
    if (first_failures.size() < kKeptFailures) first_failures.push_back(f);
}

TrialOutcome run_trial(const ProgramJudgment& j, const Env& env, const RoundingConfig& cfg) {
  const Derivation& d = *j.result.derivation;
  const int bits = cfg.ideal_bits;
  const BigNum tol = big_pow2(kTolExponent, bits);
  TrialOutcome out;

  EvalFlags flags;
  Value approx = Value::unit();
  try {
    approx = eval_approx(d, env, &flags);
  } catch (const Error& e) {
    // Overflow or an invalid operation: no approximate result to explain.
    out.skipped = true;
    out.failure = e.what();
    return out;
  }
  out.underflow = flags.underflow;

  Env perturbed;
  try {
    perturbed = backward_eval(d, env, approx, bits);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::BackwardDomain) throw;
    // A result flushed to zero is not at finite distance from its exact value.
    if (flags.underflow) {
      out.skipped = true;
      return out;
    }
    out.violation = true;
    out.failure = std::string("backward map failed: ") + e.what();
    return out;
  }

  Value ideal = eval_ideal(d, perturbed, bits);
  Distance reproduced = value_distance(ideal, approx, strip_disc(j.result.type), bits);
  if (!reproduced.at_most(tol)) {
    out.violation = true;
    out.failure = "ideal result on perturbed inputs is " + ideal.to_string(20) + ", approximate result is " +
                  approx.to_string() + " (distance " + reproduced.to_string() + ")";
    return out;
  }

  DistanceReport report = distances(env, perturbed, j.skel, bits);
  for (const auto& [name, changed] : report.disc_changed) {
    if (!changed) continue;
    out.violation = true;
    out.failure = "discrete input '" + name + "' changed";
    return out;
  }
  mpq_class eps = eps_value(cfg);
  for (const auto& [name, dist] : report.lin) {
    Grade g = j.grade_of(name).value_or(Grade::zero());
    BigNum bound = BigNum::from_rational(g.coeff() * eps, bits);
    if (!dist.at_most(big_add(bound, tol, bits))) {
      out.violation = true;
      out.failure = "'" + name + "' moved by " + dist.to_string() + ", more than its bound " + g.to_string();
      return out;
    }
    if (!dist.is_zero() && !g.is_zero()) out.slack = std::max(out.slack, dist.to_double() / bound.to_double());
  }
  return out;
}

TrialReport verify_soundness(const ProgramJudgment& j, long trials, std::uint64_t seed, const RoundingConfig& cfg,
                             InputDistribution dist) {
  cfg.validate();
  Prng rng(seed);
  TrialReport report;
  for (long t = 0; t < trials; ++t) {
    Env env = sample_env(rng, j, dist);
    TrialOutcome o = run_trial(j, env, cfg);
    ++report.trials;
    if (o.underflow) ++report.underflow_trials;
    if (o.skipped) {
      ++report.skipped;
      continue;
    }
    report.max_slack = std::max(report.max_slack, o.slack);
    if (o.violation) {
      ++report.violations;
      if (report.first_failures.size() < kKeptFailures)
        report.first_failures.push_back("trial " + std::to_string(t) + ": " + o.failure);
    }
  }
  return report;
}

}  // namespace bean
