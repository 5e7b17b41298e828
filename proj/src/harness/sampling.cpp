#include "bean/harness.hpp"

namespace bean {

namespace {

// 53 random bits as a double in [0, 1); avoids the implementation-defined
// std::uniform_real_distribution so draws match across standard libraries.
double unit_interval(Prng& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

// ln 0.1 and ln 1000 - ln 0.1 at 128 bits, computed once.
struct LogRange {
  mpfr_t lo, span;
  LogRange() {
    mpfr_inits2(128, lo, span, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_d(lo, 0.1, MPFR_RNDN);
    mpfr_log(lo, lo, MPFR_RNDN);
    mpfr_set_ui(span, 1000, MPFR_RNDN);
    mpfr_log(span, span, MPFR_RNDN);
    mpfr_sub(span, span, lo, MPFR_RNDN);
  }
  ~LogRange() { mpfr_clears(lo, span, static_cast<mpfr_ptr>(nullptr)); }
};

}  // namespace

double sample_number(Prng& rng, InputDistribution dist) {
  static const LogRange range;
  double u = unit_interval(rng);
  // exp(ln 0.1 + u (ln 1000 - ln 0.1)), correctly rounded at each step.
  mpfr_t x;
  mpfr_init2(x, 128);
  mpfr_mul_d(x, range.span, u, MPFR_RNDN);
  mpfr_add(x, x, range.lo, MPFR_RNDN);
  mpfr_exp(x, x, MPFR_RNDN);
  double out = mpfr_get_d(x, MPFR_RNDN);
  mpfr_clear(x);
  if (dist == InputDistribution::SignedLogUniform && (rng() >> 63)) out = -out;
  return out;
}

Value sample_value(Prng& rng, const Type& type, InputDistribution dist) {
  switch (type.kind()) {
    case Type::Kind::Num: return Value::approx(sample_number(rng, dist));
    case Type::Kind::Unit: return Value::unit();
    case Type::Kind::Disc: return sample_value(rng, type.inner(), dist);
    case Type::Kind::Tensor: {
      Value a = sample_value(rng, type.left(), dist);
      return Value::pair(std::move(a), sample_value(rng, type.right(), dist));
    }
    case Type::Kind::Sum:
      if (rng() >> 63) return Value::inr(sample_value(rng, type.right(), dist));
      return Value::inl(sample_value(rng, type.left(), dist));
    case Type::Kind::Hole: break;
  }
  throw Error(ErrorCode::Config, "cannot sample a value of type " + type.to_string());
}

Env sample_env(Prng& rng, const ProgramJudgment& j, InputDistribution dist) {
  Env env;
  for (const auto& p : j.program.params) {
    Value v = sample_value(rng, p.binding_type(), dist);
    (p.kind == ParamKind::Discrete ? env.disc : env.lin).emplace(p.name, std::move(v));
  }
  return env;
}

}  // namespace bean
