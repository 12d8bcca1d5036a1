#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fjl/class_table.hpp"
#include "fjl/evaluator.hpp"

namespace fjl::testing {

// Subtyping as the least relation over a finite universe closed under the
// declared edges, reflexivity, the Object rule, the left and right
// intersection rules and transitivity. The universe holds every pre-type
// of the table with at most `max_atoms` atoms, in every atom order.
class SubtypeClosure {
 public:
  explicit SubtypeClosure(const ClassTable& ct, std::size_t max_atoms = 3);

  const std::vector<PreType>& universe() const { return universe_; }
  bool contains(const PreType& t) const { return index_.count(t) > 0; }
  // Empty when either side is outside the universe.
  std::optional<bool> subtype(const PreType& a, const PreType& b) const;

  // Minimal elements (up to equivalence, one representative each) among the
  // universe's common supertypes of `a` and `b`.
  std::vector<PreType> minimal_common_supertypes(const PreType& a, const PreType& b) const;

  // The join by enumeration: the class below every common superclass,
  // intersected with the common super-interfaces that have no common
  // super-interface strictly below them, in declaration order. Object is
  // dropped when an interface remains.
  std::optional<PreType> enumerated_lub(const ClassTable& ct, const PreType& a,
                                        const PreType& b) const;

 private:
  bool holds(std::size_t i, std::size_t j) const { return (rows_[i][j / 64] >> (j % 64)) & 1U; }
  bool set(std::size_t i, std::size_t j);

  std::vector<PreType> universe_;
  std::map<PreType, std::size_t> index_;
  std::vector<std::vector<std::uint64_t>> rows_;
};

// One way a term can step: the computational rule that fires and the result.
struct Reduction {
  std::string rule;
  Term result;
};

// Every reduction the rules allow, found by trying each computational rule
// at every position the congruence rules reach. Independent of the
// evaluator's search order.
std::vector<Reduction> all_reductions(const ClassTable& ct, const Term& t);

}  // namespace fjl::testing
