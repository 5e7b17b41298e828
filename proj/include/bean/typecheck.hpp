#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bean/ast.hpp"
#include "bean/grade.hpp"
#include "bean/syntax.hpp"
#include "bean/types.hpp"

namespace bean {

struct LinBinding {
  Type type;
  Grade grade;

  friend bool operator==(const LinBinding& a, const LinBinding& b) {
    return a.type == b.type && a.grade == b.grade;
  }
};

// Graded linear context, ordered by name.
using LinearContext = std::map<std::string, LinBinding>;
using DiscreteContext = std::map<std::string, Type>;
using ContextSkeleton = std::map<std::string, Type>;

LinearContext ctx_add_grade(const Grade& q, LinearContext g);
// Union with pointwise max; throws TypeMismatch if a shared name has different types.
LinearContext ctx_max(const LinearContext& g1, const LinearContext& g2);
bool is_subcontext(const LinearContext& g1, const LinearContext& g2);
ContextSkeleton skeleton(const LinearContext& g);
// dom(a) within dom(b) with equal types.
bool is_subskeleton(const ContextSkeleton& a, const ContextSkeleton& b);
std::string to_string(const LinearContext& g);

enum class Rule {
  Var, DVar, Unit, Disc, TensorI, TensorE, DTensorE, SumIL, SumIR, SumE, Let, DLet,
  Add, Sub, Mul, Div, DMul,
};

std::string_view rule_name(Rule r);

// One node per rule instance.
//  vars: Var/DVar [x]; Let/DLet [x]; TensorE/DTensorE [x, y]; SumE [x, y];
//        primitives [lhs, rhs].
//  grade: r of Let/TensorE, q of SumE, zero elsewhere.
//  local: for Var and primitive leaves, the context the rule demands
//         ({x :_0 s} for Var, operand charges for primitives).
struct Derivation {
  Rule rule;
  Type type;
  Grade grade;
  std::vector<std::string> vars;
  std::vector<Derivation> kids;
  LinearContext local;
  Span span;
};

struct InferenceResult {
  LinearContext ctx;  // only the variables actually used
  Type type;
  std::shared_ptr<const Derivation> derivation;
};

// Bottom-up bound inference. `e` must be call-free and in operand normal form.
InferenceResult infer(const DiscreteContext& disc, const ContextSkeleton& skel, const ExprPtr& e);

struct CheckResult {
  bool ok;
  InferenceResult inferred;
};

// Infers against skeleton(declared) and tests inferred.ctx against declared.
CheckResult check_declared(const DiscreteContext& disc, const LinearContext& declared, const ExprPtr& e);

// Replays the declarative rules over a derivation with the given context.
// Returns an empty string on success, otherwise a description of the first
// failing rule instance.
std::string recheck(const Derivation& d, const DiscreteContext& disc, const LinearContext& ctx);

// Typing information for a loaded program's main definition.
struct ProgramJudgment {
  Expanded program;
  DiscreteContext disc;
  ContextSkeleton skel;
  InferenceResult result;

  // Grade of a linear parameter; nullopt when the parameter is unused.
  std::optional<Grade> grade_of(const std::string& param) const;
};

ProgramJudgment typecheck_program(Expanded program);
ProgramJudgment typecheck_source(std::string_view source, std::optional<std::string> main = std::nullopt);

}  // namespace bean
