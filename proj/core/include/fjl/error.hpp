#pragma once

#include <stdexcept>
#include <string>

#include "fjl/syntax.hpp"

namespace fjl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ParseErrorKind { Lexical, Syntax, DuplicateDeclaration, MixedLambdaParams };

class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, SourcePos pos, const std::string& message);

  ParseErrorKind kind() const { return kind_; }
  SourcePos pos() const { return pos_; }
  /// Message without the position prefix.
  const std::string& message() const { return message_; }

 private:
  ParseErrorKind kind_;
  SourcePos pos_;
  std::string message_;
};

enum class TableErrorKind { DuplicateDeclaration, ReservedName, UnknownName, WrongKind, Cycle };

/// Raised while building a class table.
class TableError : public Error {
 public:
  TableError(TableErrorKind kind, Name decl, const std::string& message);

  TableErrorKind kind() const { return kind_; }
  const Name& decl() const { return decl_; }

 private:
  TableErrorKind kind_;
  Name decl_;
};

enum class LookupErrorKind { UnknownName, NotAClass, AmbiguousBody };

/// Raised by lookup functions. A missing method or an undefined header union
/// is not an error; those are reported as empty optionals.
class LookupError : public Error {
 public:
  LookupError(LookupErrorKind kind, const std::string& message)
      : Error(message), kind_(kind) {}

  LookupErrorKind kind() const { return kind_; }

 private:
  LookupErrorKind kind_;
};

/// Evaluation was asked to reduce a term with free variables.
class OpenTermError : public Error {
 public:
  using Error::Error;
};

}  // namespace fjl
