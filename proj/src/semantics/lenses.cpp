// Closed-form backward maps. Each one scales the inputs by a common factor
// so that both move by the same relative amount and the ideal operation
// lands on the target (up to rounding at `bits`).

#include "bean/semantics.hpp"

namespace bean {

namespace {

Error domain(const std::string& what) { return Error(ErrorCode::BackwardDomain, what); }

BigNum ratio(const BigNum& target, const BigNum& current, int bits, const char* op) {
  BigNum k = big_div(target, current, bits);
  if (k.sign() <= 0) throw domain(std::string(op) + ": target has a different sign than the result");
  return k;
}

// Zero result: only a zero target is at finite distance; inputs stay put.
void require_zero(const BigNum& target, const char* op) {
  if (!target.is_zero()) throw domain(std::string(op) + ": nonzero target for a zero result");
}

BigPair scale_sum(const BigNum& x1, const BigNum& x2, const BigNum& s, const BigNum& target, int bits,
                  const char* op) {
  if (s.is_zero()) {
    require_zero(target, op);
    return {x1, x2};
  }
  BigNum k = ratio(target, s, bits, op);
  return {big_mul(x1, k, bits), big_mul(x2, k, bits)};
}

}  // namespace

BigPair add_backward(const BigNum& x1, const BigNum& x2, const BigNum& target, int bits) {
  return scale_sum(x1, x2, big_add(x1, x2, bits), target, bits, "add");
}

BigPair sub_backward(const BigNum& x1, const BigNum& x2, const BigNum& target, int bits) {
  return scale_sum(x1, x2, big_sub(x1, x2, bits), target, bits, "sub");
}

BigPair mul_backward(const BigNum& x1, const BigNum& x2, const BigNum& target, int bits) {
  BigNum p = big_mul(x1, x2, bits);
  if (p.is_zero()) {
    require_zero(target, "mul");
    return {x1, x2};
  }
  BigNum k = big_sqrt(ratio(target, p, bits, "mul"), bits);
  return {big_mul(x1, k, bits), big_mul(x2, k, bits)};
}

BigPair div_backward(const BigNum& x1, const BigNum& x2, const Value& target, int bits) {
  if (target.is(Value::Kind::Inr)) {
    if (!x2.is_zero()) throw domain("div: inr target for a nonzero divisor");
    return {x1, x2};
  }
  if (!target.is(Value::Kind::Inl)) throw domain("div: target is not an injection");
  if (x2.is_zero()) throw domain("div: inl target for a zero divisor");
  BigNum t = target.payload().to_ideal(bits).ideal_num();
  if (x1.is_zero()) {
    require_zero(t, "div");
    return {x1, x2};
  }
  // (x1 k) / (x2 / k) = (x1 / x2) k^2
  BigNum k = big_sqrt(ratio(t, big_div(x1, x2, bits), bits, "div"), bits);
  return {big_mul(x1, k, bits), big_div(x2, k, bits)};
}

BigNum dmul_backward(const BigNum& z, const BigNum& x, const BigNum& target, int bits) {
  if (z.is_zero() || x.is_zero()) {
    require_zero(target, "dmul");
    return x;
  }
  BigNum next = big_div(target, z, bits);
  if (next.sign() != x.sign()) throw domain("dmul: target has a different sign than the result");
  return next;
}

}  // namespace bean
