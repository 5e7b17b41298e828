#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "bean/error.hpp"
#include "bean/types.hpp"

namespace bean {

enum class PrimOp { Add, Sub, Mul, DMul, Div };

std::string_view prim_name(PrimOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

namespace node {

struct LinVar { std::string name; };
struct DiscVar { std::string name; };
struct UnitVal {};
struct Bang { ExprPtr body; };
struct Pair { ExprPtr fst, snd; };
// `annot`, when present, is the full sum type of the injection.
struct Inl { ExprPtr body; std::optional<Type> annot; };
struct Inr { ExprPtr body; std::optional<Type> annot; };
struct Let { std::string var; ExprPtr bound, body; };
struct LetPair { std::string var1, var2; ExprPtr bound, body; };
struct DLet { std::string var; ExprPtr bound, body; };
struct DLetPair { std::string var1, var2; ExprPtr bound, body; };
struct Case {
  ExprPtr scrutinee;
  std::string lvar;
  ExprPtr lbody;
  std::string rvar;
  ExprPtr rbody;
};
// Operands are arbitrary expressions in source; after desugar_ops they are
// LinVar/DiscVar nodes.
struct Prim { PrimOp op; ExprPtr lhs, rhs; };
// Call of a top-level definition; removed by expand_defs.
struct Call { std::string name; std::vector<ExprPtr> args; };

}  // namespace node

struct Expr {
  using Node = std::variant<node::LinVar, node::DiscVar, node::UnitVal, node::Bang, node::Pair, node::Inl,
                            node::Inr, node::Let, node::LetPair, node::DLet, node::DLetPair, node::Case,
                            node::Prim, node::Call>;
  Node node;
  Span span;

  template <typename T>
  const T* as() const { return std::get_if<T>(&node); }
  template <typename T>
  bool is() const { return std::holds_alternative<T>(node); }
};

// Builders. Spans default to "unknown".
namespace mk {
ExprPtr lin(std::string name, Span s = {});
ExprPtr disc(std::string name, Span s = {});
ExprPtr unit(Span s = {});
ExprPtr bang(ExprPtr body, Span s = {});
ExprPtr pair(ExprPtr fst, ExprPtr snd, Span s = {});
ExprPtr inl(ExprPtr body, std::optional<Type> annot = std::nullopt, Span s = {});
ExprPtr inr(ExprPtr body, std::optional<Type> annot = std::nullopt, Span s = {});
ExprPtr let(std::string var, ExprPtr bound, ExprPtr body, Span s = {});
ExprPtr let_pair(std::string v1, std::string v2, ExprPtr bound, ExprPtr body, Span s = {});
ExprPtr dlet(std::string var, ExprPtr bound, ExprPtr body, Span s = {});
ExprPtr dlet_pair(std::string v1, std::string v2, ExprPtr bound, ExprPtr body, Span s = {});
ExprPtr case_of(ExprPtr scrutinee, std::string lvar, ExprPtr lbody, std::string rvar, ExprPtr rbody, Span s = {});
ExprPtr prim(PrimOp op, ExprPtr lhs, ExprPtr rhs, Span s = {});
ExprPtr call(std::string name, std::vector<ExprPtr> args, Span s = {});
}  // namespace mk

// Structural equality, ignoring spans.
bool equal(const Expr& a, const Expr& b);
inline bool equal(const ExprPtr& a, const ExprPtr& b) { return equal(*a, *b); }

bool is_variable(const Expr& e);
const std::string& variable_name(const Expr& e);  // pre: is_variable(e)

// Free linear and discrete variable names (kept apart).
struct FreeVars {
  std::set<std::string> lin, disc;
};
FreeVars free_vars(const Expr& e);

// Every identifier occurring anywhere (binders, uses, call heads).
void collect_names(const Expr& e, std::set<std::string>& out);

bool is_call_free(const Expr& e);
// Every primitive operand is a variable.
bool is_op_normal(const Expr& e);
int count_nodes(const Expr& e);
int count_ops(const Expr& e);

enum class ParamKind { Linear, Discrete };

struct Param {
  std::string name;
  Type type;  // as written; discrete parameters are bound at Disc(type)
  ParamKind kind;
  Span span;

  Type binding_type() const { return kind == ParamKind::Discrete ? Type::disc(type) : type; }
};

struct TopLevelDef {
  std::string name;
  std::vector<Param> params;
  ExprPtr body;
  Span span;
};

struct Program {
  std::vector<TopLevelDef> defs;
  std::string main;

  const TopLevelDef* find(std::string_view name) const;
  const TopLevelDef& main_def() const;
};

// Generates identifiers that avoid a given set of names and each other.
class FreshNames {
 public:
  FreshNames() = default;
  explicit FreshNames(std::set<std::string> taken) : taken_(std::move(taken)) {}
  void reserve(const std::string& name) { taken_.insert(name); }
  // `base` itself when free, otherwise base_1, base_2, ...
  std::string fresh(const std::string& base);

 private:
  std::set<std::string> taken_;
};

}  // namespace bean
