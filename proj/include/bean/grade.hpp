#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace bean {

// A backward error bound, stored as an exact rational multiple of eps.
class Grade {
 public:
  Grade() = default;
  explicit Grade(mpq_class coeff);
  Grade(long num, long den) : Grade(mpq_class(num, den)) {}

  static Grade zero() { return Grade(); }
  static Grade eps() { return Grade(1, 1); }
  static Grade half_eps() { return Grade(1, 2); }

  // Accepts "3/2", "2", "1.25" (decimals are converted exactly).
  static Grade parse(std::string_view text);

  const mpq_class& coeff() const { return coeff_; }
  bool is_zero() const { return sgn(coeff_) == 0; }

  Grade operator+(const Grade& other) const { return Grade(mpq_class(coeff_ + other.coeff_)); }
  Grade& operator+=(const Grade& other);

  friend bool operator==(const Grade& a, const Grade& b) { return a.coeff_ == b.coeff_; }
  friend bool operator!=(const Grade& a, const Grade& b) { return a.coeff_ != b.coeff_; }
  friend bool operator<(const Grade& a, const Grade& b) { return a.coeff_ < b.coeff_; }
  friend bool operator<=(const Grade& a, const Grade& b) { return a.coeff_ <= b.coeff_; }

  static const Grade& max(const Grade& a, const Grade& b) { return a < b ? b : a; }

  // "3/2 eps", "0 eps".
  std::string to_string() const;

 private:
  mpq_class coeff_{0};
};

// Exact rational from a decimal literal such as "1.5e-3" or "-2".
mpq_class parse_decimal_rational(std::string_view text);

}  // namespace bean
