#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fjl/class_table.hpp"
#include "fjl/harness/generator.hpp"

namespace fjl::harness {

enum class Property {
  SubjectReduction,
  Progress,
  Substitution,
  LookupLemmas,
  /// Progress for programs typed with up/down casts: stuck terms must be
  /// failed casts.
  StuckClassification,
};

/// "subject-reduction", "progress", "substitution", "lookup-lemmas",
/// "stuck-classification".
std::string to_string(Property p);
std::optional<Property> parse_property(std::string_view name);
std::vector<Property> all_properties();

enum class Verdict {
  Pass,
  Fail,
  /// Step budget exhausted before the property could be decided.
  Inconclusive,
  /// The input does not meet the property's precondition.
  Excluded,
};

std::string to_string(Verdict v);

struct Outcome {
  Verdict verdict = Verdict::Pass;
  /// For Fail and Excluded: what went wrong, e.g. the successor whose type
  /// is not below its predecessor's.
  std::string witness;

  bool failed() const { return verdict == Verdict::Fail; }
};

/// Every step of the trace types at a subtype of the previous step's type,
/// and no step leaves an undecorated lambda in an eliminator position.
/// Excluded when `t` is not closed and typable without T-UDCAST;
/// Inconclusive when the step budget runs out or a step grows beyond
/// `max_term_size` nodes.
Outcome check_subject_reduction(const ClassTable& ct, const Term& t, std::size_t budget = 10000,
                                std::size_t max_term_size = 2000);

/// Evaluation ends in a proper value. Excluded when `t` is not typable
/// without T-UDCAST; Inconclusive on budget exhaustion.
Outcome check_progress(const ClassTable& ct, const Term& t, std::size_t budget = 10000);

/// Evaluation ends in a proper value or is stuck on a failed cast.
/// Excluded when `t` is not typable.
Outcome check_stuck_classification(const ClassTable& ct, const Term& t,
                                   std::size_t budget = 10000);

/// Both clauses: checking against the original type is preserved, and the
/// synthesised type of the substituted term is below the original one.
Outcome check_substitution_lemma(const ClassTable& ct, const SubstitutionInstance& inst);

/// Field prefixes along class subtyping, header monotonicity along
/// subtyping, and typability of every looked-up body under its provider.
Outcome check_lookup_lemmas(const ClassTable& ct);

/// All types of `ct` with at most `max_atoms` atoms, up to atom order:
/// nominal names, then class-or-interface heads with ascending interfaces.
std::vector<PreType> type_universe(const ClassTable& ct, std::size_t max_atoms = 3);

/// The first field access or invocation whose receiver is a pure lambda.
std::optional<Term> undecorated_eliminator(const Term& t);

}  // namespace fjl::harness
