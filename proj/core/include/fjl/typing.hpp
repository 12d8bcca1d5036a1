#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fjl/class_table.hpp"

namespace fjl {

enum class TypeErrorKind {
  UnboundVar,
  NoSuchField,
  NoSuchMethod,
  ArgMismatch,
  LambdaNeedsTarget,
  TargetNotFunctional,
  ArityMismatch,
  ParamAnnotationMismatch,
  BadCast,
  CondBranchMismatch,
  NotBooleanGuard,
  /// A lambda body whose type is not below the functional result type.
  BodyMismatch,
  /// A class or interface name that the table does not declare.
  UnknownType,
};

/// Kebab-case name, e.g. "unbound-var".
std::string to_string(TypeErrorKind k);

struct TypeError {
  TypeErrorKind kind;
  SourcePos pos;
  std::string detail;
  /// Rule whose premise failed.
  std::string rule;
};

/// A node of the algorithmic derivation. Checking nodes are named "⊢⊢*" and
/// have the synthesis derivation of the decorated term as their only premise.
struct Derivation {
  std::string rule;
  Term term;
  PreType type;
  std::vector<std::shared_ptr<const Derivation>> premises;
};

struct Judgement {
  Term term;
  TypeEnv env;
  std::variant<PreType, TypeError> result;
  /// Present when typing succeeded with derivations enabled.
  std::shared_ptr<const Derivation> derivation;
  /// Rules of the derivation in post-order; empty on failure, where the
  /// error names the rule instead.
  std::vector<std::string> rule_trace;

  bool ok() const { return std::holds_alternative<PreType>(result); }
  const PreType& type() const { return std::get<PreType>(result); }
  const TypeError& error() const { return std::get<TypeError>(result); }
  bool uses_rule(const std::string& rule) const;
};

struct TypingOptions {
  /// Replace the related-classes condition on downcasts by "any cast whose
  /// checked form fails".
  bool stupid_cast = false;
  /// When false only the type or error is computed; derivation and
  /// rule_trace stay empty.
  bool derivations = true;
};

class TypeChecker {
 public:
  explicit TypeChecker(ClassTable ct, TypingOptions options = {});

  /// Synthesis.
  Judgement infer(const TypeEnv& env, const Term& t) const;
  /// Checking against an expected type: decorate, synthesise, compare.
  Judgement check(const TypeEnv& env, const Term& t, const PreType& expected) const;

  void set_stupid_cast_mode(bool on) { options_.stupid_cast = on; }
  const TypingOptions& options() const { return options_; }
  const ClassTable& table() const { return ct_; }

 private:
  ClassTable ct_;
  TypingOptions options_;
};

Judgement t_inf(const ClassTable& ct, const TypeEnv& env, const Term& t,
                TypingOptions options = {});
Judgement t_ck(const ClassTable& ct, const TypeEnv& env, const Term& t, const PreType& expected,
               TypingOptions options = {});

}  // namespace fjl
