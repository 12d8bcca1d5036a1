#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace fjl {

/// Identifier of a class, interface, method, field or variable. `this` is an
/// ordinary variable name.
using Name = std::string;

inline const Name kObject = "Object";
inline const Name kThis = "this";

/// Source position attached to parsed nodes. Positions never take part in
/// structural equality.
struct SourcePos {
  int line = 0;
  int column = 0;

  friend bool operator==(SourcePos, SourcePos) { return true; }
};

bool is_reserved_word(const std::string& text);
bool is_identifier(const std::string& text);

/// A syntactic type: `boolean`, a nominal name, or an intersection
/// `T1 & ... & Tn`. Whether the leftmost atom is a class is a property of the
/// class table, so the atoms are kept verbatim and in order: `I & E` and
/// `E & I` are different pre-types.
class PreType {
 public:
  static PreType boolean();
  static PreType nominal(Name name);
  static PreType intersection(std::vector<Name> atoms);

  bool is_boolean() const { return boolean_; }
  bool is_nominal() const { return !boolean_ && atoms_.size() == 1; }
  bool is_intersection() const { return !boolean_ && atoms_.size() > 1; }

  /// Empty for `boolean`.
  const std::vector<Name>& atoms() const { return atoms_; }
  /// The sole atom of a nominal pre-type.
  const Name& name() const { return atoms_.front(); }

  friend bool operator==(const PreType&, const PreType&) = default;
  friend auto operator<=>(const PreType&, const PreType&) = default;

 private:
  PreType(bool boolean, std::vector<Name> atoms)
      : boolean_(boolean), atoms_(std::move(atoms)) {}

  bool boolean_ = false;
  std::vector<Name> atoms_;
};

struct Param {
  Name name;
  std::optional<PreType> type;

  friend bool operator==(const Param&, const Param&) = default;
};

struct Var;
struct FieldAccess;
struct Invoke;
struct New;
struct Cast;
struct PureLambda;
struct DecoratedLambda;
struct Cond;
struct BoolLit;
struct TermNode;

/// Immutable, shareable term handle.
class Term {
 public:
  using Variant = std::variant<Var, FieldAccess, Invoke, New, Cast, PureLambda,
                               DecoratedLambda, Cond, BoolLit>;

  template <class Node>
    requires(!std::is_same_v<std::remove_cvref_t<Node>, Term>)
  explicit Term(Node node, SourcePos pos = {});

  const Variant& node() const;
  SourcePos pos() const;
  const TermNode& rep() const { return *rep_; }

  template <class Node>
  const Node* as() const;
  template <class Node>
  bool is() const;

  /// Structural equality; positions are ignored.
  friend bool operator==(const Term& a, const Term& b);

 private:
  std::shared_ptr<const TermNode> rep_;
};

struct Var {
  Name name;
  friend bool operator==(const Var&, const Var&) = default;
};

struct FieldAccess {
  Term object;
  Name field;
  friend bool operator==(const FieldAccess&, const FieldAccess&) = default;
};

struct Invoke {
  Term receiver;
  Name method;
  std::vector<Term> args;
  friend bool operator==(const Invoke&, const Invoke&) = default;
};

struct New {
  Name class_name;
  std::vector<Term> args;
  friend bool operator==(const New&, const New&) = default;
};

struct Cast {
  PreType type;
  Term operand;
  friend bool operator==(const Cast&, const Cast&) = default;
};

struct PureLambda {
  std::vector<Param> params;
  Term body;
  friend bool operator==(const PureLambda&, const PureLambda&) = default;
};

/// Runtime form of a lambda annotated with its target type.
struct DecoratedLambda {
  std::vector<Param> params;
  Term body;
  PreType target;
  friend bool operator==(const DecoratedLambda&, const DecoratedLambda&) = default;
};

struct Cond {
  Term guard;
  Term then_branch;
  Term else_branch;
  friend bool operator==(const Cond&, const Cond&) = default;
};

struct BoolLit {
  bool value = false;
  friend bool operator==(const BoolLit&, const BoolLit&) = default;
};

struct TermNode {
  Term::Variant node;
  SourcePos pos;
  // Computed once at construction from the children.
  bool proper_value = false;
  std::size_t size = 1;  // saturates at SIZE_MAX
};

std::shared_ptr<const TermNode> make_term_node(Term::Variant node, SourcePos pos);

template <class Node>
  requires(!std::is_same_v<std::remove_cvref_t<Node>, Term>)
Term::Term(Node node, SourcePos pos)
    : rep_(make_term_node(Term::Variant(std::move(node)), pos)) {}

inline const Term::Variant& Term::node() const { return rep_->node; }
inline SourcePos Term::pos() const { return rep_->pos; }

template <class Node>
const Node* Term::as() const {
  return std::get_if<Node>(&rep_->node);
}

template <class Node>
bool Term::is() const {
  return as<Node>() != nullptr;
}

Term make_var(Name name, SourcePos pos = {});
Term make_field(Term object, Name field, SourcePos pos = {});
Term make_invoke(Term receiver, Name method, std::vector<Term> args, SourcePos pos = {});
Term make_new(Name class_name, std::vector<Term> args = {}, SourcePos pos = {});
Term make_cast(PreType type, Term operand, SourcePos pos = {});
Term make_lambda(std::vector<Param> params, Term body, SourcePos pos = {});
Term make_decorated(std::vector<Param> params, Term body, PreType target, SourcePos pos = {});
Term make_cond(Term guard, Term then_branch, Term else_branch, SourcePos pos = {});
Term make_bool(bool value, SourcePos pos = {});

bool is_pure_lambda(const Term& t);
/// v ::= w | pure lambda
bool is_value(const Term& t);
/// w ::= new C(v...) | decorated lambda | true | false
bool is_proper_value(const Term& t);
std::set<Name> free_vars(const Term& t);
/// Number of nodes of the tree, saturating at SIZE_MAX. Terms share subterms,
/// so the tree size can be exponential in the memory used. Constant time.
std::size_t term_size(const Term& t);
bool term_size_exceeds(const Term& t, std::size_t limit);

struct TypedName {
  PreType type;
  Name name;
  friend bool operator==(const TypedName&, const TypedName&) = default;
};

struct MethodHeader {
  PreType result;
  Name name;
  std::vector<TypedName> params;
  SourcePos pos;

  std::vector<PreType> param_types() const;
  std::vector<Name> param_names() const;

  friend bool operator==(const MethodHeader&, const MethodHeader&) = default;
};

/// Header equality used by the header union: name, result and parameter
/// types, ignoring parameter names.
bool same_signature(const MethodHeader& a, const MethodHeader& b);

struct MethodDecl {
  MethodHeader header;
  Term body;
  friend bool operator==(const MethodDecl&, const MethodDecl&) = default;
};

/// `C(T f, ...) { super(g, ...); this.f = f; ... }`
struct CtorDecl {
  Name name;
  std::vector<TypedName> params;
  std::vector<Name> super_args;
  std::vector<std::pair<Name, Name>> assignments;  // this.first = second
  SourcePos pos;
  friend bool operator==(const CtorDecl&, const CtorDecl&) = default;
};

struct ClassDecl {
  Name name;
  Name superclass = kObject;
  std::vector<Name> interfaces;
  std::vector<TypedName> fields;
  CtorDecl ctor;
  std::vector<MethodDecl> methods;
  SourcePos pos;
  friend bool operator==(const ClassDecl&, const ClassDecl&) = default;
};

/// Interface methods with a body are default methods.
struct InterfaceDecl {
  Name name;
  std::vector<Name> extends;
  std::vector<MethodHeader> abstracts;
  std::vector<MethodDecl> defaults;
  SourcePos pos;
  friend bool operator==(const InterfaceDecl&, const InterfaceDecl&) = default;
};

using Decl = std::variant<ClassDecl, InterfaceDecl>;

const Name& decl_name(const Decl& d);
SourcePos decl_pos(const Decl& d);

/// Builds the canonical constructor for `fields` given the inherited ones.
CtorDecl canonical_ctor(const Name& cls, const std::vector<TypedName>& inherited,
                        const std::vector<TypedName>& own);

/// Finite, ordered map from variables to types. Extending with a bound
/// variable replaces its binding, so no variable occurs twice.
class TypeEnv {
 public:
  TypeEnv() = default;

  const PreType* lookup(const Name& x) const;
  TypeEnv extended(const Name& x, PreType type) const;
  void bind(const Name& x, PreType type);
  bool contains(const Name& x) const { return lookup(x) != nullptr; }
  bool empty() const { return bindings_.empty(); }
  const std::vector<std::pair<Name, PreType>>& bindings() const { return bindings_; }

  friend bool operator==(const TypeEnv&, const TypeEnv&) = default;

 private:
  std::vector<std::pair<Name, PreType>> bindings_;
};

}  // namespace fjl
