#include "bean/types.hpp"

#include <cassert>

namespace bean {

struct Type::Node {
  Kind kind;
  std::optional<Type> a, b;
  bool hole = false;
};

Type Type::num() {
  static const Type t(std::make_shared<const Node>(Node{Kind::Num}));
  return t;
}

Type Type::unit() {
  static const Type t(std::make_shared<const Node>(Node{Kind::Unit}));
  return t;
}

Type Type::hole() {
  static const Type t(std::make_shared<const Node>(Node{Kind::Hole, std::nullopt, std::nullopt, true}));
  return t;
}

Type Type::tensor(Type left, Type right) {
  bool h = left.has_hole() || right.has_hole();
  return Type(std::make_shared<const Node>(Node{Kind::Tensor, std::move(left), std::move(right), h}));
}

Type Type::sum(Type left, Type right) {
  bool h = left.has_hole() || right.has_hole();
  return Type(std::make_shared<const Node>(Node{Kind::Sum, std::move(left), std::move(right), h}));
}

Type Type::disc(Type inner) {
  if (inner.is(Kind::Disc)) return inner;
  bool h = inner.has_hole();
  return Type(std::make_shared<const Node>(Node{Kind::Disc, std::move(inner), std::nullopt, h}));
}

Type Type::vec(const Type& elem, int n) {
  assert(n >= 1);
  Type t = elem;
  for (int i = 1; i < n; ++i) t = tensor(elem, t);
  return t;
}

Type::Kind Type::kind() const { return node_->kind; }
const Type& Type::left() const { return *node_->a; }
const Type& Type::right() const { return *node_->b; }
const Type& Type::inner() const { return *node_->a; }
bool Type::has_hole() const { return node_->hole; }

bool operator==(const Type& x, const Type& y) {
  if (x.node_ == y.node_) return true;
  if (x.kind() != y.kind()) return false;
  switch (x.kind()) {
    case Type::Kind::Num:
    case Type::Kind::Unit:
    case Type::Kind::Hole:
      return true;
    case Type::Kind::Disc:
      return x.inner() == y.inner();
    case Type::Kind::Tensor:
    case Type::Kind::Sum:
      return x.left() == y.left() && x.right() == y.right();
  }
  return false;
}

namespace {

enum Prec { kSum = 0, kTensor = 1, kPow = 2, kPrefix = 3, kAtom = 4 };

std::string render(const Type& t, int ctx);

// n > 1 when t is the right-nested tensor of n copies of its left component.
int vector_length(const Type& t) {
  if (!t.is(Type::Kind::Tensor)) return 1;
  const Type& elem = t.left();
  int n = 0;
  const Type* cur = &t;
  while (cur->is(Type::Kind::Tensor) && cur->left() == elem) {
    ++n;
    cur = &cur->right();
  }
  return *cur == elem ? n + 1 : 1;
}

std::string wrap(std::string s, bool paren) { return paren ? "(" + s + ")" : s; }

std::string render(const Type& t, int ctx) {
  switch (t.kind()) {
    case Type::Kind::Num: return "num";
    case Type::Kind::Unit: return "unit";
    case Type::Kind::Hole: return "?";
    case Type::Kind::Disc: return wrap("!" + render(t.inner(), kPrefix), ctx > kPrefix);
    case Type::Kind::Sum:
      return wrap(render(t.left(), kTensor) + " + " + render(t.right(), kSum), ctx > kSum);
    case Type::Kind::Tensor: {
      int n = vector_length(t);
      if (n > 1) return wrap(render(t.left(), kAtom) + "^" + std::to_string(n), ctx > kPow);
      return wrap(render(t.left(), kPow) + " * " + render(t.right(), kTensor), ctx > kTensor);
    }
  }
  return "?";
}

}  // namespace

std::string Type::to_string() const { return render(*this, kSum); }

std::optional<Type> join_types(const Type& a, const Type& b) {
  if (a.is(Type::Kind::Hole)) return b;
  if (b.is(Type::Kind::Hole)) return a;
  if (a.kind() != b.kind()) return std::nullopt;
  switch (a.kind()) {
    case Type::Kind::Num:
    case Type::Kind::Unit:
    case Type::Kind::Hole:
      return a;
    case Type::Kind::Disc: {
      auto in = join_types(a.inner(), b.inner());
      if (!in) return std::nullopt;
      return Type::disc(*in);
    }
    case Type::Kind::Tensor:
    case Type::Kind::Sum: {
      auto l = join_types(a.left(), b.left());
      auto r = join_types(a.right(), b.right());
      if (!l || !r) return std::nullopt;
      return a.is(Type::Kind::Tensor) ? Type::tensor(*l, *r) : Type::sum(*l, *r);
    }
  }
  return std::nullopt;
}

}  // namespace bean
