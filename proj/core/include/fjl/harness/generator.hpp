#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fjl/class_table.hpp"
#include "fjl/error.hpp"
#include "fjl/typing.hpp"

namespace fjl::harness {

struct Features {
  bool lambdas = true;
  bool defaults = true;
  bool intersections = true;
  bool casts = true;
  bool conditionals = true;
  bool udcast = false;

  friend bool operator==(const Features&, const Features&) = default;
};

/// Parses a comma-separated list such as "+udcast,-lambdas". A bare name
/// enables the feature. Throws std::invalid_argument on unknown names.
Features parse_features(const std::string& spec, Features base = {});
std::string to_string(const Features& f);

/// Relative weights of the term productions.
struct Weights {
  int var = 4;
  int create = 3;
  int lambda = 3;
  int field = 2;
  int invoke = 3;
  int cast = 2;
  int cond = 1;
};

struct GenConfig {
  std::uint64_t seed = 1;
  int max_classes = 4;
  int max_interfaces = 3;
  int max_hierarchy_depth = 3;
  int max_term_depth = 4;
  int max_fields = 2;
  int max_methods = 4;
  int max_params = 2;
  int max_attempts = 25;
  Features features;
  Weights weights;
};

/// Generation gave up after exhausting its attempts.
class GenerationError : public Error {
 public:
  using Error::Error;
};

/// A random well-formed class table. Deterministic in `cfg`.
ClassTable gen_table(const GenConfig& cfg);

struct TypedTerm {
  Term term;
  /// Synthesised type under the environment it was generated for.
  PreType type;
};

/// An open-term instance for the substitution lemma: `term` is typed under
/// `env`, which binds `var` to `var_type`; `value` is a closed value
/// checking against `var_type`.
struct SubstitutionInstance {
  TypeEnv env;
  Name var;
  PreType var_type;
  Term term;
  PreType term_type;
  Term value;
};

/// Type-directed generator for a fixed table.
class TermGenerator {
 public:
  TermGenerator(ClassTable ct, GenConfig cfg, std::uint64_t seed);

  /// A closed term and its synthesised type.
  TypedTerm typed_term();
  /// A term typed under `env`, synthesisable (never a bare lambda).
  TypedTerm typed_term(const TypeEnv& env, int depth);
  /// A term that checks against `goal` under `env`; may be a lambda.
  TypedTerm checked_term(const TypeEnv& env, const PreType& goal, int depth);
  /// A closed value checking against `goal`.
  Term value(const PreType& goal, int depth);
  SubstitutionInstance substitution_instance();

  /// Types with a closed inhabitant, nominal names first.
  const std::vector<PreType>& inhabited_types() const;
  /// Size of the smallest closed inhabitant; empty when there is none.
  std::optional<int> cost(const PreType& t) const;
  const ClassTable& table() const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

/// Convenience: a closed typed term for `ct`, seeded from `cfg.seed`.
TypedTerm gen_typed_term(const GenConfig& cfg, const ClassTable& ct);

}  // namespace fjl::harness
