#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fjl/syntax.hpp"

namespace fjl {

/// A class table source plus an optional `main = <term>;` clause.
struct SourceProgram {
  std::vector<Decl> decls;
  std::optional<Term> main;

  friend bool operator==(const SourceProgram&, const SourceProgram&) = default;
};

/// Throws ParseError on the first lexical or syntax error.
SourceProgram parse_program(std::string_view text);
Term parse_term(std::string_view text);
PreType parse_pretype(std::string_view text);

std::string pretty(const Term& t);
std::string pretty(const PreType& t);
std::string pretty(const MethodHeader& h);
std::string pretty(const Decl& d);
std::string pretty(const SourceProgram& p);

}  // namespace fjl
