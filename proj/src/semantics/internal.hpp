#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "bean/semantics.hpp"

namespace bean::detail {

// Variable environment with shadowing; innermost binding last.
class Scope {
 public:
  explicit Scope(const Env& env) {
    for (const auto& [n, v] : env.disc) push(n, v);
    for (const auto& [n, v] : env.lin) push(n, v);
  }
  void push(const std::string& name, Value v) { map_[name].push_back(std::move(v)); }
  void pop(const std::string& name) {
    auto it = map_.find(name);
    it->second.pop_back();
    if (it->second.empty()) map_.erase(it);
  }
  const Value& get(const std::string& name) const {
    auto it = map_.find(name);
    if (it == map_.end()) throw Error(ErrorCode::EnvMismatch, "no value for '" + name + "'");
    return it->second.back();
  }

 private:
  std::unordered_map<std::string, std::vector<Value>> map_;
};

struct World {
  bool ideal;
  int bits;
  EvalFlags* flags;
};

Value eval_in(const Derivation& d, Scope& scope, const World& w);

}  // namespace bean::detail
