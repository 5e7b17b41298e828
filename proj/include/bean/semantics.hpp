#pragma once

#include <map>
#include <memory>
#include <string>

#include "bean/numerics.hpp"
#include "bean/typecheck.hpp"
#include "json.hpp"

namespace bean {

// Runtime value. Numbers are either binary64 (approximate world) or BigNum
// (ideal world); a well-formed tree uses one kind throughout.
class Value {
 public:
  enum class Kind { Num, Unit, Pair, Inl, Inr };

  static Value approx(double x);
  static Value ideal(BigNum x);
  static Value unit();
  static Value pair(Value a, Value b);
  static Value inl(Value v);
  static Value inr(Value v);

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }
  bool is_ideal_num() const;
  double approx_num() const;       // Num, approximate
  const BigNum& ideal_num() const; // Num, ideal
  const Value& fst() const;
  const Value& snd() const;
  const Value& payload() const;    // Inl, Inr

  // Exact conversion of every approximate number to `bits` precision.
  Value to_ideal(int bits) const;

  // "inl (1, 2)"-style rendering; ideal numbers use `digits` significant digits.
  std::string to_string(int digits = 17) const;

  // Numbers as decimal strings with full precision, pairs as arrays,
  // {"inl": v} / {"inr": v}, unit as null.
  nlohmann::json to_json() const;

  friend bool operator==(const Value& a, const Value& b);  // exact, same precision kind
  friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }

 private:
  struct Rep;
  explicit Value(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const Rep> rep_;
};

// Reads an approximate value of the given type from JSON. Tensors accept a
// two-element array, or a flat array that fills a right-nested chain
// ([1, 2, 3] for num^3). Numbers may be JSON numbers or decimal strings.
Value value_from_json(const nlohmann::json& j, const Type& type);

struct Env {
  std::map<std::string, Value> disc;
  std::map<std::string, Value> lin;

  Env to_ideal(int bits) const;
};

struct EvalFlags {
  bool underflow = false;
};

// Big-step evaluation over a derivation. dmul evaluates as multiplication
// and !e as e; division by zero yields inr ().
Value eval_ideal(const Derivation& d, const Env& env, int bits);
Value eval_approx(const Derivation& d, const Env& env, EvalFlags* flags = nullptr);

// Backward map: given approximate inputs and a target output at finite
// distance from the approximate result, returns ideal inputs on which the
// ideal semantics produces the target. Discrete inputs come back unchanged.
Env backward_eval(const Derivation& d, const Env& env, const Value& target, int bits);

// Closed-form backward maps of the primitives, at `bits` precision.
struct BigPair {
  BigNum first, second;
};
BigPair add_backward(const BigNum& x1, const BigNum& x2, const BigNum& target, int bits);
BigPair sub_backward(const BigNum& x1, const BigNum& x2, const BigNum& target, int bits);
BigPair mul_backward(const BigNum& x1, const BigNum& x2, const BigNum& target, int bits);
// `target` is inl k or inr ().
BigPair div_backward(const BigNum& x1, const BigNum& x2, const Value& target, int bits);
// Returns the new linear operand; the discrete operand z is never changed.
BigNum dmul_backward(const BigNum& z, const BigNum& x, const BigNum& target, int bits);

// Componentwise rp distance, folded with max. Sum values with different tags
// are infinitely far apart; under a Disc type any difference is infinite.
Distance value_distance(const Value& a, const Value& b, const Type& type, int bits);

struct DistanceReport {
  std::map<std::string, Distance> lin;
  std::map<std::string, bool> disc_changed;
};

DistanceReport distances(const Env& original, const Env& perturbed, const ContextSkeleton& lin_types, int bits);

}  // namespace bean
