#include "bean/numerics.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "bean/error.hpp"

namespace bean {

// ---------------------------------------------------------------------------
// RoundingConfig

mpq_class RoundingConfig::default_roundoff() {
  mpz_class den = 1;
  den <<= 53;
  return mpq_class(mpz_class(1), den);
}

void RoundingConfig::validate() const {
  if (sgn(unit_roundoff) <= 0 || unit_roundoff >= 1)
    throw Error(ErrorCode::Config, "unit roundoff must lie strictly between 0 and 1");
  if (ideal_bits < 128) throw Error(ErrorCode::Config, "ideal precision must be at least 128 bits");
  if (ideal_bits > 1 << 20) throw Error(ErrorCode::Config, "ideal precision is unreasonably large");
}

mpq_class eps_value(const RoundingConfig& cfg) {
  mpq_class e = cfg.unit_roundoff / (1 - cfg.unit_roundoff);
  e.canonicalize();
  return e;
}

mpq_class parse_roundoff(std::string_view text) {
  auto caret = text.find('^');
  if (caret != std::string_view::npos) {
    std::string base_text(text.substr(0, caret));
    std::string exp_text(text.substr(caret + 1));
    char* end = nullptr;
    long base = std::strtol(base_text.c_str(), &end, 10);
    if (base_text.empty() || *end != '\0' || base < 2)
      throw Error(ErrorCode::Config, "bad roundoff base in '" + std::string(text) + "'");
    long e = std::strtol(exp_text.c_str(), &end, 10);
    if (exp_text.empty() || *end != '\0' || e < -100000 || e > 100000)
      throw Error(ErrorCode::Config, "bad roundoff exponent in '" + std::string(text) + "'");
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(std::labs(e)));
    return e < 0 ? mpq_class(mpz_class(1), p) : mpq_class(p);
  }
  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    mpq_class num = parse_decimal_rational(text.substr(0, slash));
    mpq_class den = parse_decimal_rational(text.substr(slash + 1));
    if (sgn(den) == 0) throw Error(ErrorCode::Config, "zero denominator in roundoff");
    mpq_class q = num / den;
    q.canonicalize();
    return q;
  }
  return parse_decimal_rational(text);
}

std::string format_sig3(const mpq_class& value) {
  if (sgn(value) == 0) return "0.00e0";
  mpfr_t tmp;
  mpfr_init2(tmp, 256);
  mpfr_set_q(tmp, value.get_mpq_t(), MPFR_RNDN);
  mpfr_exp_t exp10 = 0;
  char* digits = mpfr_get_str(nullptr, &exp10, 10, 3, tmp, MPFR_RNDN);
  std::string d(digits);
  mpfr_free_str(digits);
  mpfr_clear(tmp);
  std::string sign;
  if (!d.empty() && d[0] == '-') {
    sign = "-";
    d.erase(0, 1);
  }
  // mpfr_get_str yields 0.ddd x 10^exp10
  return sign + d.substr(0, 1) + "." + d.substr(1) + "e" + std::to_string(static_cast<long>(exp10) - 1);
}

std::string grade_to_decimal(const Grade& g, const RoundingConfig& cfg) {
  return format_sig3(mpq_class(g.coeff() * eps_value(cfg)));
}

// ---------------------------------------------------------------------------
// BigNum

namespace {

void check_finite(mpfr_srcptr v) {
  if (mpfr_nan_p(v)) throw Error(ErrorCode::InvalidOperation, "NaN produced in ideal arithmetic");
  if (mpfr_inf_p(v)) throw Error(ErrorCode::Overflow, "infinite value in ideal arithmetic");
}

}  // namespace

BigNum::BigNum(int bits) {
  mpfr_init2(v_, bits);
  mpfr_set_zero(v_, 1);
}

BigNum::BigNum(double value, int bits) {
  if (!std::isfinite(value)) throw Error(ErrorCode::InvalidOperation, "non-finite number");
  mpfr_init2(v_, bits);
  mpfr_set_d(v_, value == 0.0 ? 0.0 : value, MPFR_RNDN);
}

BigNum BigNum::from_rational(const mpq_class& q, int bits) {
  BigNum r(bits);
  mpfr_set_q(r.v_, q.get_mpq_t(), MPFR_RNDN);
  return r;
}

BigNum BigNum::from_string(std::string_view decimal, int bits) {
  BigNum r(bits);
  std::string s(decimal);
  char* end = nullptr;
  mpfr_strtofr(r.v_, s.c_str(), &end, 10, MPFR_RNDN);
  if (end == s.c_str() || *end != '\0')
    throw Error(ErrorCode::InputShape, "not a number: '" + s + "'");
  check_finite(r.v_);
  if (mpfr_zero_p(r.v_)) mpfr_set_zero(r.v_, 1);
  return r;
}

BigNum BigNum::adopt(mpfr_t raw) {
  BigNum r(static_cast<int>(mpfr_get_prec(raw)));
  mpfr_swap(r.v_, raw);
  mpfr_clear(raw);
  check_finite(r.v_);
  if (mpfr_zero_p(r.v_)) mpfr_set_zero(r.v_, 1);
  return r;
}

BigNum::BigNum(const BigNum& other) {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

BigNum::BigNum(BigNum&& other) noexcept {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_swap(v_, other.v_);
}

BigNum& BigNum::operator=(const BigNum& other) {
  if (this != &other) {
    mpfr_set_prec(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

BigNum& BigNum::operator=(BigNum&& other) noexcept {
  mpfr_swap(v_, other.v_);
  return *this;
}

BigNum::~BigNum() { mpfr_clear(v_); }

bool BigNum::is_double() const {
  double d = mpfr_get_d(v_, MPFR_RNDN);
  return std::isfinite(d) && mpfr_cmp_d(v_, d) == 0;
}

std::string BigNum::to_string(int digits) const {
  if (is_zero()) return "0";
  if (digits <= 0) digits = static_cast<int>(std::ceil(precision() * 0.30102999566398120)) + 1;
  char* out = nullptr;
  mpfr_asprintf(&out, "%.*Rg", digits, v_);
  std::string s(out);
  mpfr_free_str(out);
  return s;
}

namespace {

template <typename F>
BigNum compute(int bits, F&& f) {
  mpfr_t r;
  mpfr_init2(r, bits);
  f(r);
  return BigNum::adopt(r);
}

}  // namespace

BigNum big_add(const BigNum& a, const BigNum& b, int bits) {
  return compute(bits, [&](mpfr_ptr r) { mpfr_add(r, a.get(), b.get(), MPFR_RNDN); });
}
BigNum big_sub(const BigNum& a, const BigNum& b, int bits) {
  return compute(bits, [&](mpfr_ptr r) { mpfr_sub(r, a.get(), b.get(), MPFR_RNDN); });
}
BigNum big_mul(const BigNum& a, const BigNum& b, int bits) {
  return compute(bits, [&](mpfr_ptr r) { mpfr_mul(r, a.get(), b.get(), MPFR_RNDN); });
}
BigNum big_div(const BigNum& a, const BigNum& b, int bits) {
  if (b.is_zero()) throw Error(ErrorCode::InvalidOperation, "division by zero");
  return compute(bits, [&](mpfr_ptr r) { mpfr_div(r, a.get(), b.get(), MPFR_RNDN); });
}
BigNum big_sqrt(const BigNum& a, int bits) {
  if (a.sign() < 0) throw Error(ErrorCode::InvalidOperation, "square root of a negative number");
  return compute(bits, [&](mpfr_ptr r) { mpfr_sqrt(r, a.get(), MPFR_RNDN); });
}
BigNum big_abs(const BigNum& a) {
  return compute(a.precision(), [&](mpfr_ptr r) { mpfr_abs(r, a.get(), MPFR_RNDN); });
}
BigNum big_neg(const BigNum& a) {
  return compute(a.precision(), [&](mpfr_ptr r) { mpfr_neg(r, a.get(), MPFR_RNDN); });
}
BigNum big_pow2(long exponent, int bits) {
  return compute(bits, [&](mpfr_ptr r) { mpfr_set_si_2exp(r, 1, exponent, MPFR_RNDN); });
}

// ---------------------------------------------------------------------------
// Distance

double Distance::to_double() const {
  return value_ ? value_->to_double() : std::numeric_limits<double>::infinity();
}

std::string Distance::to_string(int digits) const {
  return value_ ? value_->to_string(digits) : "inf";
}

Distance operator+(const Distance& a, const Distance& b) {
  if (a.is_infinite() || b.is_infinite()) return Distance::infinity();
  int bits = std::max(a.value().precision(), b.value().precision());
  return Distance(big_add(a.value(), b.value(), bits));
}

Distance max(const Distance& a, const Distance& b) { return a < b ? b : a; }

bool operator<(const Distance& a, const Distance& b) {
  if (a.is_infinite()) return false;
  if (b.is_infinite()) return true;
  return a.value() < b.value();
}

Distance rp_distance(const BigNum& x, const BigNum& y, int bits) {
  int sx = x.sign(), sy = y.sign();
  if (sx == 0 && sy == 0) return Distance::zero(bits);
  if (sx == 0 || sy == 0 || sx != sy) return Distance::infinity();
  // Guard bits keep the quotient's rounding error far below the result's ulp.
  int work = bits + 64;
  BigNum q = big_div(x, y, work);
  return Distance(compute(bits, [&](mpfr_ptr r) {
    mpfr_log(r, q.get(), MPFR_RNDN);
    mpfr_abs(r, r, MPFR_RNDN);
  }));
}

Distance rp_distance(double x, double y, int bits) {
  return rp_distance(BigNum(x, 64), BigNum(y, 64), bits);
}

// ---------------------------------------------------------------------------
// Primitive operations

ApproxResult approx_op(ArithOp op, double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b))
    throw Error(ErrorCode::InvalidOperation, "non-finite operand");
  double r = 0.0;
  bool flushed = false;
  switch (op) {
    case ArithOp::Add: r = a + b; break;
    case ArithOp::Sub: r = a - b; break;
    case ArithOp::Mul:
      r = a * b;
      flushed = r == 0.0 && a != 0.0 && b != 0.0;
      break;
    case ArithOp::Div:
      if (b == 0.0) return ApproxResult{};
      r = a / b;
      flushed = r == 0.0 && a != 0.0;
      break;
  }
  if (std::isnan(r)) throw Error(ErrorCode::InvalidOperation, "NaN produced in binary64 arithmetic");
  if (std::isinf(r)) throw Error(ErrorCode::Overflow, "binary64 overflow");
  if (r == 0.0) r = 0.0;  // drop the sign of zero
  ApproxResult out;
  out.value = r;
  out.underflow = flushed || (r != 0.0 && std::fabs(r) < std::numeric_limits<double>::min());
  return out;
}

std::optional<BigNum> ideal_op(ArithOp op, const BigNum& a, const BigNum& b, int bits) {
  switch (op) {
    case ArithOp::Add: return big_add(a, b, bits);
    case ArithOp::Sub: return big_sub(a, b, bits);
    case ArithOp::Mul: return big_mul(a, b, bits);
    case ArithOp::Div:
      if (b.is_zero()) return std::nullopt;
      return big_div(a, b, bits);
  }
  return std::nullopt;
}

}  // namespace bean
