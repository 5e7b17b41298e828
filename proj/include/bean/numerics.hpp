#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <optional>
#include <string>
#include <string_view>

#include "bean/grade.hpp"

namespace bean {

// Unit roundoff and the precision used for the ideal semantics.
struct RoundingConfig {
  mpq_class unit_roundoff = default_roundoff();
  int ideal_bits = 256;

  static mpq_class default_roundoff();  // 2^-53
  void validate() const;                // 0 < u < 1, ideal_bits >= 128
};

// eps = u / (1 - u), exactly.
mpq_class eps_value(const RoundingConfig& cfg);

// "2^-53", "1/9007199254740992" or a decimal literal.
mpq_class parse_roundoff(std::string_view text);

// Three significant digits in the "5.55e-14" style; zero is "0.00e0".
std::string format_sig3(const mpq_class& value);
std::string grade_to_decimal(const Grade& g, const RoundingConfig& cfg);

// Binary floating point value with a fixed number of significand bits,
// rounding to nearest. NaN and infinities are rejected on construction.
class BigNum {
 public:
  explicit BigNum(int bits = 256);
  BigNum(double value, int bits);
  static BigNum from_rational(const mpq_class& q, int bits);
  static BigNum from_string(std::string_view decimal, int bits);
  // Takes ownership of a freshly computed mpfr value; throws if it is not finite.
  static BigNum adopt(mpfr_t raw);

  BigNum(const BigNum& other);
  BigNum(BigNum&& other) noexcept;
  BigNum& operator=(const BigNum& other);
  BigNum& operator=(BigNum&& other) noexcept;
  ~BigNum();

  int precision() const { return static_cast<int>(mpfr_get_prec(v_)); }
  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  // Exact when the value is representable as a double.
  bool is_double() const;

  // Decimal text; digits = 0 picks enough digits to round-trip.
  std::string to_string(int digits = 0) const;

  mpfr_srcptr get() const { return v_; }
  mpfr_ptr raw() { return v_; }

  friend bool operator==(const BigNum& a, const BigNum& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator!=(const BigNum& a, const BigNum& b) { return !(a == b); }
  friend bool operator<(const BigNum& a, const BigNum& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const BigNum& a, const BigNum& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }

 private:
  mpfr_t v_;
};

BigNum big_add(const BigNum& a, const BigNum& b, int bits);
BigNum big_sub(const BigNum& a, const BigNum& b, int bits);
BigNum big_mul(const BigNum& a, const BigNum& b, int bits);
BigNum big_div(const BigNum& a, const BigNum& b, int bits);  // b != 0
BigNum big_sqrt(const BigNum& a, int bits);                   // a >= 0
BigNum big_abs(const BigNum& a);
BigNum big_neg(const BigNum& a);
BigNum big_pow2(long exponent, int bits);

// Nonnegative extended real: a finite BigNum or +infinity.
class Distance {
 public:
  static Distance infinity() { return Distance(); }
  static Distance zero(int bits) { return Distance(BigNum(bits)); }
  explicit Distance(BigNum finite) : value_(std::move(finite)) {}

  bool is_infinite() const { return !value_.has_value(); }
  const BigNum& value() const { return *value_; }
  bool is_zero() const { return value_ && value_->is_zero(); }

  bool at_most(const BigNum& bound) const { return value_ && *value_ <= bound; }
  double to_double() const;
  std::string to_string(int digits = 6) const;

  // infinity absorbs finite summands.
  friend Distance operator+(const Distance& a, const Distance& b);
  friend Distance max(const Distance& a, const Distance& b);
  friend bool operator<(const Distance& a, const Distance& b);
  friend bool operator<=(const Distance& a, const Distance& b) { return !(b < a); }

 private:
  Distance() = default;
  std::optional<BigNum> value_;
};

// Relative precision metric |ln(x/y)|; 0 at (0,0); infinite across signs or
// when exactly one side is zero. Negative zero counts as zero.
Distance rp_distance(const BigNum& x, const BigNum& y, int bits);
Distance rp_distance(double x, double y, int bits = 256);

enum class ArithOp { Add, Sub, Mul, Div };

struct ApproxResult {
  std::optional<double> value;  // empty: division by zero
  bool underflow = false;       // subnormal result, or a nonzero result flushed to zero
};

// Hardware binary64, round to nearest even. Throws on overflow or NaN.
ApproxResult approx_op(ArithOp op, double a, double b);

// The same operation rounded to `bits` significand bits. Empty on division by zero.
std::optional<BigNum> ideal_op(ArithOp op, const BigNum& a, const BigNum& b, int bits);

}  // namespace bean
