#include "fjl/subtyping.hpp"

#include <algorithm>

namespace fjl {

bool subtype(const ClassTable& ct, const PreType& tau, const PreType& sigma) {
  if (tau.is_boolean() || sigma.is_boolean()) return tau.is_boolean() && sigma.is_boolean();
  return std::all_of(sigma.atoms().begin(), sigma.atoms().end(), [&](const Name& want) {
    return std::any_of(tau.atoms().begin(), tau.atoms().end(),
                       [&](const Name& have) { return ct.nominal_subtype(have, want); });
  });
}

bool equiv(const ClassTable& ct, const PreType& tau, const PreType& sigma) {
  return subtype(ct, tau, sigma) && subtype(ct, sigma, tau);
}

Name class_component(const ClassTable& ct, const PreType& t) {
  return ct.class_head(t).value_or(kObject);
}

std::optional<PreType> lub(const ClassTable& ct, const PreType& a, const PreType& b) {
  if (a.is_boolean() || b.is_boolean()) {
    if (a.is_boolean() && b.is_boolean()) return PreType::boolean();
    return std::nullopt;
  }
  // Walk up the first class chain until the second class is below.
  Name cls = class_component(ct, a);
  const Name other = class_component(ct, b);
  while (!ct.nominal_subtype(other, cls)) cls = ct.find_class(cls)->superclass;

  auto common = [&](const Name& n) {
    PreType p = PreType::nominal(n);
    return subtype(ct, a, p) && subtype(ct, b, p);
  };
  std::vector<Name> shared;
  for (const auto& n : ct.nominal_names()) {
    if (ct.is_interface(n) && common(n)) shared.push_back(n);
  }
  std::vector<Name> minimal;
  for (const auto& j : shared) {
    bool below = std::any_of(shared.begin(), shared.end(), [&](const Name& k) {
      return k != j && ct.nominal_subtype(k, j);
    });
    if (!below) minimal.push_back(j);
  }
  if (minimal.empty()) return PreType::nominal(cls);
  if (cls != kObject) minimal.insert(minimal.begin(), cls);
  return PreType::intersection(std::move(minimal));
}

}  // namespace fjl
