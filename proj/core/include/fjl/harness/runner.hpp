#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fjl/harness/generator.hpp"
#include "fjl/harness/properties.hpp"

namespace fjl::harness {

struct CounterExample {
  Property property = Property::SubjectReduction;
  /// Declarations only, in concrete syntax.
  std::string table_source;
  /// Empty for table-level properties.
  std::string term_source;
  /// Open-term instances: the environment as "x : T, y : U" and the
  /// substituted variable and value.
  std::string environment;
  std::string variable;
  std::string value_source;
  std::string witness;
  bool shrunk = false;
  std::uint64_t seed = 0;
};

/// Re-checks a counterexample from its sources.
Outcome replay(const CounterExample& ce, std::size_t budget = 10000);

/// Greedy shrinking: drops declarations, replaces method bodies and term
/// subtrees by smaller terms, keeping each candidate only if it still
/// fails the same property.
CounterExample shrink(const CounterExample& ce, std::size_t budget = 10000);
/// The same greedy search with an arbitrary criterion: a candidate replaces
/// the current input when `keep` accepts it. Candidates that fail to parse
/// or build are skipped.
CounterExample shrink_while(const CounterExample& ce,
                            const std::function<bool(const CounterExample&)>& keep);

std::string to_json(const CounterExample& ce);
/// Writes `<stem>.fjl` and `<stem>.json` under `dir`; returns both paths.
std::vector<std::filesystem::path> save(const CounterExample& ce,
                                        const std::filesystem::path& dir);
/// Reads a counterexample written by save from its JSON file.
CounterExample load(const std::filesystem::path& json_file);

struct RunConfig {
  Property property = Property::SubjectReduction;
  std::uint64_t seed = 1;
  int runs = 100;
  GenConfig gen;
  std::size_t budget = 10000;
  /// 0 picks the hardware concurrency.
  unsigned threads = 0;
  bool shrink = true;
  /// Where counterexamples are saved, if anywhere.
  std::optional<std::filesystem::path> corpus_dir;
};

struct RunReport {
  int runs = 0;
  int passed = 0;
  int inconclusive = 0;
  /// Generation gave up or the sample did not meet the precondition.
  int skipped = 0;
  std::vector<CounterExample> counterexamples;
  std::vector<std::filesystem::path> saved;

  bool ok() const { return counterexamples.empty(); }
};

/// Seed of run `index`; independent of thread scheduling.
std::uint64_t run_seed(std::uint64_t base, int index);

/// Throws std::invalid_argument when the configuration cannot meet the
/// property's precondition (udcast with subject reduction or progress).
RunReport run_property(const RunConfig& cfg);

/// Source text of a table's declarations.
std::string table_source(const ClassTable& ct);

}  // namespace fjl::harness
