#include "bean/typecheck.hpp"

namespace bean {

LinearContext ctx_add_grade(const Grade& q, LinearContext g) {
  if (q.is_zero()) return g;
  for (auto& [name, b] : g) b.grade += q;
  return g;
}

LinearContext ctx_max(const LinearContext& g1, const LinearContext& g2) {
  LinearContext out = g1;
  for (const auto& [name, b] : g2) {
    auto [it, fresh] = out.emplace(name, b);
    if (fresh) continue;
    auto joined = join_types(it->second.type, b.type);
    if (!joined)
      throw Error(ErrorCode::TypeMismatch, "'" + name + "' has type " + it->second.type.to_string() + " and " +
                                               b.type.to_string() + " in different branches");
    it->second.type = *joined;
    it->second.grade = Grade::max(it->second.grade, b.grade);
  }
  return out;
}

bool is_subcontext(const LinearContext& g1, const LinearContext& g2) {
  for (const auto& [name, b] : g1) {
    auto it = g2.find(name);
    if (it == g2.end() || it->second.type != b.type || !(b.grade <= it->second.grade)) return false;
  }
  return true;
}

ContextSkeleton skeleton(const LinearContext& g) {
  ContextSkeleton out;
  for (const auto& [name, b] : g) out.emplace(name, b.type);
  return out;
}

bool is_subskeleton(const ContextSkeleton& a, const ContextSkeleton& b) {
  for (const auto& [name, t] : a) {
    auto it = b.find(name);
    if (it == b.end() || it->second != t) return false;
  }
  return true;
}

std::string to_string(const LinearContext& g) {
  std::string out;
  for (const auto& [name, b] : g) {
    if (!out.empty()) out += ", ";
    out += name + " :_{" + b.grade.to_string() + "} " + b.type.to_string();
  }
  return "{" + out + "}";
}

std::string_view rule_name(Rule r) {
  switch (r) {
    case Rule::Var: return "Var";
    case Rule::DVar: return "DVar";
    case Rule::Unit: return "Unit";
    case Rule::Disc: return "Disc";
    case Rule::TensorI: return "TensorI";
    case Rule::TensorE: return "TensorE";
    case Rule::DTensorE: return "DTensorE";
    case Rule::SumIL: return "SumIL";
    case Rule::SumIR: return "SumIR";
    case Rule::SumE: return "SumE";
    case Rule::Let: return "Let";
    case Rule::DLet: return "DLet";
    case Rule::Add: return "Add";
    case Rule::Sub: return "Sub";
    case Rule::Mul: return "Mul";
    case Rule::Div: return "Div";
    case Rule::DMul: return "DMul";
  }
  return "?";
}

}  // namespace bean
