#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fjl/syntax.hpp"

namespace fjl {

/// Method headers with at most one header per method name; compared as sets.
class HeaderSet {
 public:
  HeaderSet() = default;

  const std::vector<MethodHeader>& headers() const { return headers_; }
  std::size_t size() const { return headers_.size(); }
  bool empty() const { return headers_.empty(); }
  const MethodHeader* find(const Name& method) const;
  /// Membership up to parameter names.
  bool contains(const MethodHeader& h) const;
  bool subset_of(const HeaderSet& other) const;
  std::set<Name> names() const;

  /// Adds `h`; false when a different header with the same name is present.
  bool insert(const MethodHeader& h);

  friend bool operator==(const HeaderSet& a, const HeaderSet& b);

 private:
  std::vector<MethodHeader> headers_;
};

enum class ConflictKind {
  /// The same method name with two different signatures.
  HeaderClash,
  /// A name that is abstract along one path and default along another.
  AbstractDefaultClash,
  /// Two unrelated interfaces both providing a default for the same name.
  DefaultAmbiguity,
  /// Not a pre-type of the table: two classes, a class not leftmost, a
  /// repeated interface, or `boolean`.
  Malformed,
};

std::string to_string(ConflictKind k);

struct HeaderConflict {
  ConflictKind kind;
  Name method;
  std::string detail;
};

/// Result of a header lookup: headers when the union is defined, otherwise
/// the reason it is not.
struct HeaderLookup {
  std::optional<HeaderSet> headers;
  std::optional<HeaderConflict> conflict;

  bool defined() const { return headers.has_value(); }
};

struct Signature {
  std::vector<PreType> params;
  PreType result;
  friend bool operator==(const Signature&, const Signature&) = default;
};

struct MethodBody {
  std::vector<Name> params;
  Term body;
  /// Class or interface whose declaration supplies the body.
  Name provider;
};

/// Immutable class table. Copies share the declarations and the lookup cache;
/// the cache is safe under concurrent readers.
class ClassTable {
 public:
  /// Validates names, kinds of referenced declarations, and acyclicity of the
  /// inheritance graph. Throws TableError.
  explicit ClassTable(std::vector<Decl> decls = {});

  const std::vector<Decl>& decls() const;

  bool contains(const Name& n) const;
  bool is_class(const Name& n) const;
  bool is_interface(const Name& n) const;
  const ClassDecl* find_class(const Name& n) const;
  const InterfaceDecl* find_interface(const Name& n) const;
  /// `Object` first, then declarations in source order.
  std::vector<Name> nominal_names() const;
  /// Position of `n` in nominal_names().
  std::size_t declaration_index(const Name& n) const;

  /// Strict nominal supertypes of `n`, including Object for every name
  /// other than Object itself.
  const std::set<Name>& supertypes(const Name& n) const;
  /// Reflexive nominal subtyping from declared extends/implements.
  bool nominal_subtype(const Name& a, const Name& b) const;

  /// Empty when `t` is a pre-type of this table (at most one class, leftmost,
  /// no repeated interface); otherwise the reason. Throws on unknown names.
  std::optional<std::string> shape_error(const PreType& t) const;
  /// The leftmost class of `t`, if it has one.
  std::optional<Name> class_head(const PreType& t) const;
  /// The interface atoms of `t` in order.
  std::vector<Name> interface_part(const PreType& t) const;

  HeaderLookup mh_lookup(const PreType& t) const;
  std::optional<HeaderSet> mh(const PreType& t) const;
  /// Recomputes without consulting the cache.
  std::optional<HeaderSet> mh_uncached(const PreType& t) const;
  HeaderLookup a_mh_lookup(const PreType& t) const;
  HeaderLookup d_mh_lookup(const PreType& t) const;
  std::optional<HeaderSet> a_mh(const PreType& t) const;
  std::optional<HeaderSet> d_mh(const PreType& t) const;
  /// Header union over a list of interfaces.
  HeaderLookup mh_of_interfaces(const std::vector<Name>& interfaces) const;

  /// `boolean`, or a pre-type whose header union is defined.
  bool is_type(const PreType& t) const;
  /// The single abstract header of an interface-only type, if any.
  std::optional<MethodHeader> functional_header(const PreType& t) const;

  /// Inherited fields first. Throws LookupError for unknown names and
  /// interfaces. The reference lives as long as any copy of the table.
  const std::vector<TypedName>& fields(const Name& cls) const;

  std::optional<Signature> mtype(const Name& m, const PreType& t) const;
  std::optional<Signature> a_mtype(const Name& m, const PreType& t) const;
  std::optional<Signature> d_mtype(const Name& m, const PreType& t) const;

  /// Empty when `m` has no implementation; throws LookupError with
  /// AmbiguousBody when no unique most specific provider exists.
  std::optional<MethodBody> mbody(const Name& m, const PreType& t) const;
  std::optional<MethodBody> mbody_of_interfaces(const Name& m,
                                                const std::vector<Name>& interfaces) const;

 private:
  struct Impl;
  struct Cache;

  const HeaderLookup& cached(char kind, const PreType& t) const;
  HeaderLookup compute_split(char kind, const PreType& t) const;
  HeaderLookup compute_mh(const PreType& t, bool cached) const;
  HeaderLookup compute_class(const Name& c, bool cached) const;
  HeaderLookup compute_list(const std::vector<Name>& is, bool cached) const;
  HeaderLookup compute_abstract(const std::vector<Name>& is, bool cached) const;
  HeaderLookup compute_default(const std::vector<Name>& is, bool cached) const;
  const Name& require(const Name& n) const;

  std::shared_ptr<const Impl> impl_;
  std::shared_ptr<Cache> cache_;
};

}  // namespace fjl
