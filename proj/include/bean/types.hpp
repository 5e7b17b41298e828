#pragma once

#include <memory>
#include <optional>
#include <string>

namespace bean {

// Immutable, structurally compared type expression. Copies share structure.
//
// Hole is an inference-internal placeholder for the unknown component of an
// unannotated injection; it never appears in parsed source.
class Type {
 public:
  enum class Kind { Num, Unit, Tensor, Sum, Disc, Hole };

  static Type num();
  static Type unit();
  static Type tensor(Type left, Type right);
  static Type sum(Type left, Type right);
  static Type disc(Type inner);  // Disc(Disc t) collapses to Disc t
  static Type hole();
  // Right-nested tensor of n copies: vec(t,1) = t, vec(t,n) = t * vec(t,n-1).
  static Type vec(const Type& elem, int n);

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }
  const Type& left() const;   // Tensor, Sum
  const Type& right() const;  // Tensor, Sum
  const Type& inner() const;  // Disc

  bool has_hole() const;
  std::string to_string() const;

  friend bool operator==(const Type& a, const Type& b);
  friend bool operator!=(const Type& a, const Type& b) { return !(a == b); }

 private:
  struct Node;
  explicit Type(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Types usable for discrete variables: m(sigma).
inline bool is_discrete(const Type& t) { return t.is(Type::Kind::Disc); }

// Most specific common type, treating Hole as unknown. Empty if incompatible.
std::optional<Type> join_types(const Type& a, const Type& b);

}  // namespace bean
