#include <charconv>
#include <cmath>
#include <cstdlib>

#include "bean/semantics.hpp"

namespace bean {

struct Value::Rep {
  Kind kind;
  double approx = 0.0;
  std::optional<BigNum> ideal;
  std::optional<Value> a, b;
};

Value Value::approx(double x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::InputShape, "numbers must be finite");
  auto r = std::make_shared<Rep>();
  r->kind = Kind::Num;
  r->approx = x == 0.0 ? 0.0 : x;
  return Value(std::move(r));
}

Value Value::ideal(BigNum x) {
  auto r = std::make_shared<Rep>();
  r->kind = Kind::Num;
  r->ideal = std::move(x);
  return Value(std::move(r));
}

Value Value::unit() {
  static const Value u = [] {
    auto r = std::make_shared<Rep>();
    r->kind = Kind::Unit;
    return Value(std::move(r));
  }();
  return u;
}

Value Value::pair(Value a, Value b) {
  auto r = std::make_shared<Rep>();
  r->kind = Kind::Pair;
  r->a = std::move(a);
  r->b = std::move(b);
  return Value(std::move(r));
}

Value Value::inl(Value v) {
  auto r = std::make_shared<Rep>();
  r->kind = Kind::Inl;
  r->a = std::move(v);
  return Value(std::move(r));
}

Value Value::inr(Value v) {
  auto r = std::make_shared<Rep>();
  r->kind = Kind::Inr;
  r->a = std::move(v);
  return Value(std::move(r));
}

Value::Kind Value::kind() const { return rep_->kind; }
bool Value::is_ideal_num() const { return rep_->kind == Kind::Num && rep_->ideal.has_value(); }

double Value::approx_num() const {
  if (rep_->kind != Kind::Num) throw Error(ErrorCode::InputShape, "expected a number");
  return rep_->ideal ? rep_->ideal->to_double() : rep_->approx;
}

const BigNum& Value::ideal_num() const {
  if (!is_ideal_num()) throw Error(ErrorCode::InputShape, "expected an ideal number");
  return *rep_->ideal;
}

const Value& Value::fst() const {
  if (rep_->kind != Kind::Pair) throw Error(ErrorCode::InputShape, "expected a pair");
  return *rep_->a;
}

const Value& Value::snd() const {
  if (rep_->kind != Kind::Pair) throw Error(ErrorCode::InputShape, "expected a pair");
  return *rep_->b;
}

const Value& Value::payload() const {
  if (rep_->kind != Kind::Inl && rep_->kind != Kind::Inr) throw Error(ErrorCode::InputShape, "expected an injection");
  return *rep_->a;
}

Value Value::to_ideal(int bits) const {
  switch (rep_->kind) {
    case Kind::Num: return is_ideal_num() ? *this : Value::ideal(BigNum(rep_->approx, bits));
    case Kind::Unit: return *this;
    case Kind::Pair: return pair(rep_->a->to_ideal(bits), rep_->b->to_ideal(bits));
    case Kind::Inl: return inl(rep_->a->to_ideal(bits));
    case Kind::Inr: return inr(rep_->a->to_ideal(bits));
  }
  return *this;
}

namespace {

// Shortest text that reads back as the same double.
std::string shortest(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string num_text(const Value& v, int digits) {
  return v.is_ideal_num() ? v.ideal_num().to_string(digits) : shortest(v.approx_num());
}

}  // namespace

std::string Value::to_string(int digits) const {
  switch (rep_->kind) {
    case Kind::Num: return num_text(*this, digits);
    case Kind::Unit: return "()";
    case Kind::Pair: return "(" + rep_->a->to_string(digits) + ", " + rep_->b->to_string(digits) + ")";
    case Kind::Inl:
    case Kind::Inr: {
      const Value& p = *rep_->a;
      std::string inner = p.to_string(digits);
      if (p.is(Kind::Inl) || p.is(Kind::Inr)) inner = "(" + inner + ")";
      return std::string(rep_->kind == Kind::Inl ? "inl " : "inr ") + inner;
    }
  }
  return "?";
}

nlohmann::json Value::to_json() const {
  switch (rep_->kind) {
    case Kind::Num: return num_text(*this, 0);
    case Kind::Unit: return nullptr;
    case Kind::Pair: return nlohmann::json::array({rep_->a->to_json(), rep_->b->to_json()});
    case Kind::Inl: return nlohmann::json{{"inl", rep_->a->to_json()}};
    case Kind::Inr: return nlohmann::json{{"inr", rep_->a->to_json()}};
  }
  return nullptr;
}

bool operator==(const Value& a, const Value& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Value::Kind::Num:
      if (!a.is_ideal_num() && !b.is_ideal_num()) return a.approx_num() == b.approx_num();
      return a.to_ideal(53).ideal_num() == b.to_ideal(53).ideal_num();
    case Value::Kind::Unit: return true;
    case Value::Kind::Pair: return a.fst() == b.fst() && a.snd() == b.snd();
    case Value::Kind::Inl:
    case Value::Kind::Inr: return a.payload() == b.payload();
  }
  return false;
}

namespace {

// Components of a right-nested tensor chain: 3 for num^3, 2 for (num^2)^2.
size_t chain_length(const Type& t) {
  return t.kind() == Type::Kind::Tensor ? 1 + chain_length(t.right()) : 1;
}

double json_number(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string& s = j.get_ref<const std::string&>();
    char* end = nullptr;
    double x = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0') throw Error(ErrorCode::InputShape, "'" + s + "' is not a number");
    if (!std::isfinite(x)) throw Error(ErrorCode::InputShape, "'" + s + "' is not a finite binary64 number");
    return x;
  }
  throw Error(ErrorCode::InputShape, "expected a number, got " + j.dump());
}

}  // namespace

Value value_from_json(const nlohmann::json& j, const Type& type) {
  switch (type.kind()) {
    case Type::Kind::Num: return Value::approx(json_number(j));
    case Type::Kind::Unit:
      if (j.is_null() || (j.is_array() && j.empty())) return Value::unit();
      throw Error(ErrorCode::InputShape, "expected null for unit, got " + j.dump());
    case Type::Kind::Disc: return value_from_json(j, type.inner());
    case Type::Kind::Tensor: {
      if (!j.is_array() || j.size() < 2)
        throw Error(ErrorCode::InputShape, "expected an array for " + type.to_string() + ", got " + j.dump());
      size_t n = chain_length(type);
      bool nested_pair = j.size() == 2 && (n == 2 || j[1].is_array());
      if (!nested_pair && j.size() != n)
        throw Error(ErrorCode::InputShape, "expected " + std::to_string(n) + " components for " + type.to_string() +
                                               ", got " + std::to_string(j.size()));
      if (j.size() == 2) return Value::pair(value_from_json(j[0], type.left()), value_from_json(j[1], type.right()));
      // Flat spelling of a right-nested chain.
      nlohmann::json rest(j.begin() + 1, j.end());
      return Value::pair(value_from_json(j[0], type.left()), value_from_json(rest, type.right()));
    }
    case Type::Kind::Sum: {
      if (j.is_object() && j.size() == 1) {
        if (j.contains("inl")) return Value::inl(value_from_json(j["inl"], type.left()));
        if (j.contains("inr")) return Value::inr(value_from_json(j["inr"], type.right()));
      }
      throw Error(ErrorCode::InputShape, "expected {\"inl\": v} or {\"inr\": v} for " + type.to_string());
    }
    case Type::Kind::Hole: break;
  }
  throw Error(ErrorCode::InputShape, "cannot read a value of type " + type.to_string());
}

Env Env::to_ideal(int bits) const {
  Env out;
  for (const auto& [n, v] : disc) out.disc.emplace(n, v.to_ideal(bits));
  for (const auto& [n, v] : lin) out.lin.emplace(n, v.to_ideal(bits));
  return out;
}

Distance value_distance(const Value& a, const Value& b, const Type& type, int bits) {
  switch (type.kind()) {
    case Type::Kind::Num:
      return rp_distance(a.to_ideal(bits).ideal_num(), b.to_ideal(bits).ideal_num(), bits);
    case Type::Kind::Unit: return Distance::zero(bits);
    case Type::Kind::Disc: return a == b ? Distance::zero(bits) : Distance::infinity();
    case Type::Kind::Tensor:
      return max(value_distance(a.fst(), b.fst(), type.left(), bits),
                 value_distance(a.snd(), b.snd(), type.right(), bits));
    case Type::Kind::Sum:
      if (a.kind() != b.kind()) return Distance::infinity();
      return value_distance(a.payload(), b.payload(), a.is(Value::Kind::Inl) ? type.left() : type.right(), bits);
    case Type::Kind::Hole: break;
  }
  throw Error(ErrorCode::InputShape, "no distance on type " + type.to_string());
}

DistanceReport distances(const Env& original, const Env& perturbed, const ContextSkeleton& lin_types, int bits) {
  DistanceReport out;
  for (const auto& [name, t] : lin_types) {
    auto a = original.lin.find(name);
    auto b = perturbed.lin.find(name);
    if (a == original.lin.end() || b == perturbed.lin.end()) continue;
    out.lin.emplace(name, value_distance(a->second, b->second, t, bits));
  }
  for (const auto& [name, v] : original.disc) {
    auto b = perturbed.disc.find(name);
    out.disc_changed[name] = b == perturbed.disc.end() || !(b->second == v);
  }
  return out;
}

}  // namespace bean
