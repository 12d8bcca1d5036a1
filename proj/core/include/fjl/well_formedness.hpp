#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fjl/class_table.hpp"
#include "fjl/parser.hpp"
#include "fjl/typing.hpp"

namespace fjl {

/// Names of the premises ok_table can report.
namespace premise {
inline constexpr const char* kConstructorShape = "constructor-shape";
inline constexpr const char* kFieldForwarding = "field-forwarding";
inline constexpr const char* kMhUndefined = "mh-undefined";
inline constexpr const char* kMethodBody = "method-body";
inline constexpr const char* kUnimplementedMethod = "unimplemented-method";
inline constexpr const char* kAmbiguousDefault = "ambiguous-default";
inline constexpr const char* kUnknownType = "unknown-type";
inline constexpr const char* kDuplicateMember = "duplicate-member";
inline constexpr const char* kMalformedHeader = "malformed-header";
}  // namespace premise

struct WellFormednessError {
  Name decl;
  /// Empty when the violation is not tied to one method.
  Name method;
  std::string premise;
  std::string detail;
  SourcePos pos;
};

std::string describe(const WellFormednessError& e);

/// Every violated premise of the class and interface rules, in declaration
/// order. Empty iff the table is well formed.
std::vector<WellFormednessError> ok_table(const ClassTable& ct, TypingOptions options = {});

struct ProgramCheck {
  /// Set when the table could not be built at all.
  std::optional<std::string> table_error;
  std::vector<WellFormednessError> table_findings;
  /// Judgement of the main term under the empty environment, if there is one.
  std::optional<Judgement> judgement;

  bool ok() const {
    return !table_error && table_findings.empty() && (!judgement || judgement->ok());
  }
};

ProgramCheck check_program(const ClassTable& ct, const Term& t, TypingOptions options = {});
ProgramCheck check_program(const SourceProgram& program, TypingOptions options = {});

}  // namespace fjl
