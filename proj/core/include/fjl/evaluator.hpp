#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fjl/class_table.hpp"

namespace fjl {

/// Decorates a pure lambda with `target`, pushing through conditional
/// branches; every other term is returned unchanged.
Term decorate(const Term& t, const PreType& target);

/// Capture-avoiding simultaneous substitution. Lambda parameters shadow the
/// bindings; a parameter that would capture a free variable of a substituted
/// term is renamed.
Term substitute(const Term& t, const std::map<Name, Term>& bindings);

enum class StuckKind { FailedObjectCast, FailedLambdaCast, Other };

struct StuckReason {
  StuckKind kind = StuckKind::Other;
  /// Cast target, for failed casts.
  std::optional<PreType> target;
  /// Runtime class or lambda target, for failed casts.
  std::optional<PreType> source;
  std::string detail;
};

std::string to_string(StuckKind k);
std::string describe(const StuckReason& r);

struct StepResult {
  enum class Kind { Stepped, Value, Stuck };

  Kind kind = Kind::Value;
  /// The successor for Stepped, the term itself otherwise.
  Term term;
  /// Computational rule that fired, e.g. "E-InvkNew".
  std::string rule;
  /// Congruence rules from the outside in.
  std::vector<std::string> congruence;
  std::optional<StuckReason> stuck;
};

struct EvalOptions {
  std::size_t max_steps = 10000;
  /// Evaluation also gives up once a term has more nodes than this; 0
  /// disables the limit.
  std::size_t max_term_size = 1000000;
  /// Make a typed lambda whose annotations disagree with the abstract
  /// signature of its target stuck instead of ignoring the annotations.
  bool check_annotations = false;
};

struct EvalResult {
  enum class Outcome { Value, Stuck, BudgetExhausted };

  Outcome outcome = Outcome::Value;
  Term final;
  /// Every term visited, the initial one included.
  std::vector<Term> trace;
  /// Computational rule of each step.
  std::vector<std::string> rules;
  std::optional<StuckReason> stuck;
  /// Set when BudgetExhausted came from the term size limit.
  bool term_too_large = false;

  std::size_t steps() const { return rules.size(); }
};

std::string to_string(EvalResult::Outcome o);

class Evaluator {
 public:
  explicit Evaluator(ClassTable ct, EvalOptions options = {});

  /// One reduction step. Throws OpenTermError when `t` has free variables.
  StepResult step(const Term& t) const;
  EvalResult eval(const Term& t) const;
  EvalResult eval(const Term& t, std::size_t max_steps) const;

  const EvalOptions& options() const { return options_; }

 private:
  StepResult reduce(const Term& t) const;

  ClassTable ct_;
  EvalOptions options_;
};

}  // namespace fjl
