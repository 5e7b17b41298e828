#include "bean/grade.hpp"

#include <cctype>

#include "bean/error.hpp"

namespace bean {

Grade::Grade(mpq_class coeff) : coeff_(std::move(coeff)) {
  coeff_.canonicalize();
  if (sgn(coeff_) < 0) throw Error(ErrorCode::Config, "grades must be nonnegative");
}

Grade& Grade::operator+=(const Grade& other) {
  coeff_ += other.coeff_;
  return *this;
}

std::string Grade::to_string() const { return coeff_.get_str() + " eps"; }

mpq_class parse_decimal_rational(std::string_view text) {
  auto fail = [&] {
    return Error(ErrorCode::Config, "not a decimal number: '" + std::string(text) + "'");
  };
  size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';
  mpz_class digits = 0;
  long scale = 0;  // value = digits * 10^scale
  bool any = false, dot = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = digits * 10 + (c - '0');
      if (dot) --scale;
      any = true;
    } else if (c == '.' && !dot) {
      dot = true;
    } else {
      break;
    }
  }
  if (!any) throw fail();
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) eneg = text[i++] == '-';
    if (i == text.size()) throw fail();
    long e = 0;
    for (; i < text.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i])) || e > 100000) throw fail();
      e = e * 10 + (text[i] - '0');
    }
    scale += eneg ? -e : e;
  }
  if (i != text.size()) throw fail();
  mpz_class p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  mpq_class q = scale < 0 ? mpq_class(digits, p10) : mpq_class(digits * p10);
  q.canonicalize();
  return negative ? mpq_class(-q) : q;
}

Grade Grade::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Grade(parse_decimal_rational(text));
  mpq_class num = parse_decimal_rational(text.substr(0, slash));
  mpq_class den = parse_decimal_rational(text.substr(slash + 1));
  if (sgn(den) == 0) throw Error(ErrorCode::Config, "zero denominator in grade");
  return Grade(mpq_class(num / den));
}

}  // namespace bean
