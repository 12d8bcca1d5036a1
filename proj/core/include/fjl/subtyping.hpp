#pragma once

#include <optional>

#include "fjl/class_table.hpp"

namespace fjl {

/// tau <: sigma. Intersections on the right are split componentwise; an
/// atom on the right is reached from some atom on the left. `boolean` is
/// related only to itself. Throws LookupError on undeclared names.
bool subtype(const ClassTable& ct, const PreType& tau, const PreType& sigma);

/// Mutual subtyping.
bool equiv(const ClassTable& ct, const PreType& tau, const PreType& sigma);

/// Leftmost class of `t`, or Object when `t` has none.
Name class_component(const ClassTable& ct, const PreType& t);

/// Least common superclass intersected with the minimal common
/// super-interfaces, in declaration order. Object is dropped when at least
/// one interface remains. Empty when exactly one side is `boolean`.
std::optional<PreType> lub(const ClassTable& ct, const PreType& a, const PreType& b);

}  // namespace fjl
