#include "fjl/class_table.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "fjl/error.hpp"
#include "fjl/parser.hpp"

namespace fjl {

const MethodHeader* HeaderSet::find(const Name& method) const {
  for (const auto& h : headers_) {
    if (h.name == method) return &h;
  }
  return nullptr;
}

bool HeaderSet::contains(const MethodHeader& h) const {
  const MethodHeader* mine = find(h.name);
  return mine != nullptr && same_signature(*mine, h);
}

bool HeaderSet::subset_of(const HeaderSet& other) const {
  return std::all_of(headers_.begin(), headers_.end(),
                     [&](const MethodHeader& h) { return other.contains(h); });
}

std::set<Name> HeaderSet::names() const {
  std::set<Name> out;
  for (const auto& h : headers_) out.insert(h.name);
  return out;
}

bool HeaderSet::insert(const MethodHeader& h) {
  if (const MethodHeader* mine = find(h.name)) return same_signature(*mine, h);
  headers_.push_back(h);
  return true;
}

bool operator==(const HeaderSet& a, const HeaderSet& b) {
  return a.size() == b.size() && a.subset_of(b);
}

std::string to_string(ConflictKind k) {
  switch (k) {
    case ConflictKind::HeaderClash:
      return "header-clash";
    case ConflictKind::AbstractDefaultClash:
      return "abstract-default-clash";
    case ConflictKind::DefaultAmbiguity:
      return "default-ambiguity";
    case ConflictKind::Malformed:
      return "malformed-pretype";
  }
  return "unknown";
}

TableError::TableError(TableErrorKind kind, Name decl, const std::string& message)
    : Error(message), kind_(kind), decl_(std::move(decl)) {}

struct ClassTable::Impl {
  std::vector<Decl> decls;
  std::unordered_map<Name, std::size_t> index;  // into decls
  std::vector<Name> order;                      // Object first
  std::unordered_map<Name, std::set<Name>> ancestors;
};

struct ClassTable::Cache {
  std::shared_mutex mutex;
  std::map<std::pair<char, std::vector<Name>>, HeaderLookup> headers;
  // Whole pre-types; entries are never erased, so references stay valid.
  std::map<std::pair<char, std::vector<Name>>, HeaderLookup> types;
  std::map<Name, std::vector<TypedName>> fields;
};

namespace {

HeaderLookup defined(HeaderSet s) { return HeaderLookup{std::move(s), std::nullopt}; }

HeaderLookup undefined(ConflictKind k, Name m, std::string detail) {
  return HeaderLookup{std::nullopt, HeaderConflict{k, std::move(m), std::move(detail)}};
}

// acc ⊎ more, recording a clash.
bool merge_into(HeaderLookup& acc, const HeaderSet& more, const std::string& where) {
  for (const auto& h : more.headers()) {
    if (!acc.headers->insert(h)) {
      const MethodHeader* mine = acc.headers->find(h.name);
      acc = undefined(ConflictKind::HeaderClash, h.name,
                      "method '" + h.name + "' has headers '" + pretty(*mine) + "' and '" +
                          pretty(h) + "' in " + where);
      return false;
    }
  }
  return true;
}

}  // namespace

ClassTable::ClassTable(std::vector<Decl> decls) : cache_(std::make_shared<Cache>()) {
  auto impl = std::make_shared<Impl>();
  impl->decls = std::move(decls);
  impl->order.push_back(kObject);
  for (std::size_t i = 0; i < impl->decls.size(); ++i) {
    const Name& n = decl_name(impl->decls[i]);
    if (n == kObject || is_reserved_word(n) || !is_identifier(n)) {
      throw TableError(TableErrorKind::ReservedName, n, "'" + n + "' cannot be declared");
    }
    if (!impl->index.emplace(n, i).second) {
      throw TableError(TableErrorKind::DuplicateDeclaration, n, "duplicate declaration of '" + n + "'");
    }
    impl->order.push_back(n);
  }

  auto kind_of = [&](const Name& n) -> int {  // 0 unknown, 1 class, 2 interface
    if (n == kObject) return 1;
    auto it = impl->index.find(n);
    if (it == impl->index.end()) return 0;
    return std::holds_alternative<ClassDecl>(impl->decls[it->second]) ? 1 : 2;
  };
  auto need = [&](const Name& owner, const Name& ref, int kind, const char* role) {
    int k = kind_of(ref);
    if (k == 0) {
      throw TableError(TableErrorKind::UnknownName, owner,
                       "'" + owner + "' refers to undeclared " + role + " '" + ref + "'");
    }
    if (k != kind) {
      throw TableError(TableErrorKind::WrongKind, owner,
                       "'" + owner + "' expects " + role + " but '" + ref + "' is not one");
    }
  };

  std::unordered_map<Name, std::vector<Name>> parents;
  for (const auto& d : impl->decls) {
    const Name& n = decl_name(d);
    auto& ps = parents[n];
    if (const auto* c = std::get_if<ClassDecl>(&d)) {
      need(n, c->superclass, 1, "a class");
      if (c->superclass != kObject) ps.push_back(c->superclass);
      for (const auto& i : c->interfaces) {
        need(n, i, 2, "an interface");
        ps.push_back(i);
      }
    } else {
      for (const auto& i : std::get<InterfaceDecl>(d).extends) {
        need(n, i, 2, "an interface");
        ps.push_back(i);
      }
    }
  }

  // Depth-first closure; a grey node reached again closes a cycle.
  std::unordered_map<Name, int> colour;
  std::function<void(const Name&)> visit = [&](const Name& n) {
    colour[n] = 1;
    std::set<Name> acc{kObject};
    for (const auto& p : parents[n]) {
      if (colour[p] == 1) {
        throw TableError(TableErrorKind::Cycle, n,
                         "inheritance cycle through '" + n + "' and '" + p + "'");
      }
      if (colour[p] == 0) visit(p);
      acc.insert(p);
      const auto& up = impl->ancestors[p];
      acc.insert(up.begin(), up.end());
    }
    impl->ancestors[n] = std::move(acc);
    colour[n] = 2;
  };
  for (const auto& d : impl->decls) {
    if (colour[decl_name(d)] == 0) visit(decl_name(d));
  }
  impl->ancestors[kObject] = {};
  impl_ = std::move(impl);
}

const std::vector<Decl>& ClassTable::decls() const { return impl_->decls; }

bool ClassTable::contains(const Name& n) const {
  return n == kObject || impl_->index.contains(n);
}

bool ClassTable::is_class(const Name& n) const {
  return n == kObject || find_class(n) != nullptr;
}

bool ClassTable::is_interface(const Name& n) const { return find_interface(n) != nullptr; }

const ClassDecl* ClassTable::find_class(const Name& n) const {
  auto it = impl_->index.find(n);
  if (it == impl_->index.end()) return nullptr;
  return std::get_if<ClassDecl>(&impl_->decls[it->second]);
}

const InterfaceDecl* ClassTable::find_interface(const Name& n) const {
  auto it = impl_->index.find(n);
  if (it == impl_->index.end()) return nullptr;
  return std::get_if<InterfaceDecl>(&impl_->decls[it->second]);
}

std::vector<Name> ClassTable::nominal_names() const { return impl_->order; }

std::size_t ClassTable::declaration_index(const Name& n) const {
  if (n == kObject) return 0;
  return impl_->index.at(require(n)) + 1;
}

const Name& ClassTable::require(const Name& n) const {
  if (!contains(n)) throw LookupError(LookupErrorKind::UnknownName, "unknown type '" + n + "'");
  return n;
}

const std::set<Name>& ClassTable::supertypes(const Name& n) const {
  return impl_->ancestors.at(require(n));
}

bool ClassTable::nominal_subtype(const Name& a, const Name& b) const {
  return a == b || b == kObject || supertypes(a).contains(b);
}

std::optional<std::string> ClassTable::shape_error(const PreType& t) const {
  if (t.is_boolean()) return std::nullopt;
  std::set<Name> seen;
  for (std::size_t i = 0; i < t.atoms().size(); ++i) {
    const Name& a = require(t.atoms()[i]);
    if (is_class(a) && i > 0) {
      return "class '" + a + "' must be the leftmost component of an intersection";
    }
    if (!seen.insert(a).second) return "'" + a + "' occurs twice in the intersection";
  }
  return std::nullopt;
}

std::optional<Name> ClassTable::class_head(const PreType& t) const {
  if (t.is_boolean()) return std::nullopt;
  const Name& first = require(t.atoms().front());
  if (is_class(first)) return first;
  return std::nullopt;
}

std::vector<Name> ClassTable::interface_part(const PreType& t) const {
  std::vector<Name> out;
  for (const auto& a : t.atoms()) {
    if (is_interface(require(a))) out.push_back(a);
  }
  return out;
}

HeaderLookup ClassTable::compute_class(const Name& c, bool cached) const {
  if (c == kObject) return defined(HeaderSet{});
  auto key = std::make_pair('C', std::vector<Name>{c});
  if (cached) {
    std::shared_lock lock(cache_->mutex);
    auto it = cache_->headers.find(key);
    if (it != cache_->headers.end()) return it->second;
  }
  const ClassDecl* decl = find_class(require(c));
  if (decl == nullptr) throw LookupError(LookupErrorKind::NotAClass, "'" + c + "' is not a class");
  HeaderLookup acc = defined(HeaderSet{});
  HeaderSet own;
  bool ok = true;
  for (const auto& m : decl->methods) {
    if (!own.insert(m.header)) {
      acc = undefined(ConflictKind::HeaderClash, m.header.name,
                      "class '" + c + "' declares '" + m.header.name + "' twice");
      ok = false;
      break;
    }
  }
  if (ok) ok = merge_into(acc, own, "class '" + c + "'");
  if (ok) {
    HeaderLookup sup = compute_class(decl->superclass, cached);
    if (!sup.defined()) {
      acc = sup;
      ok = false;
    } else {
      ok = merge_into(acc, *sup.headers, "class '" + c + "' and superclass '" + decl->superclass + "'");
    }
  }
  if (ok && !decl->interfaces.empty()) {
    HeaderLookup is = compute_list(decl->interfaces, cached);
    if (!is.defined()) {
      acc = is;
    } else {
      merge_into(acc, *is.headers, "class '" + c + "' and its interfaces");
    }
  }
  if (cached) {
    std::unique_lock lock(cache_->mutex);
    cache_->headers.emplace(key, acc);
  }
  return acc;
}

HeaderLookup ClassTable::compute_abstract(const std::vector<Name>& is, bool cached) const {
  auto key = std::make_pair('A', is);
  if (cached) {
    std::shared_lock lock(cache_->mutex);
    auto it = cache_->headers.find(key);
    if (it != cache_->headers.end()) return it->second;
  }
  HeaderLookup acc = defined(HeaderSet{});
  if (is.size() == 1) {
    const InterfaceDecl* decl = find_interface(require(is.front()));
    if (decl == nullptr) {
      throw LookupError(LookupErrorKind::UnknownName, "'" + is.front() + "' is not an interface");
    }
    bool ok = true;
    for (const auto& h : decl->abstracts) {
      if (!acc.headers->insert(h)) {
        acc = undefined(ConflictKind::HeaderClash, h.name,
                        "interface '" + decl->name + "' declares '" + h.name + "' twice");
        ok = false;
        break;
      }
    }
    if (ok && !decl->extends.empty()) {
      HeaderLookup up = compute_abstract(decl->extends, cached);
      if (!up.defined()) {
        acc = up;
      } else {
        merge_into(acc, *up.headers, "interface '" + decl->name + "'");
      }
    }
  } else {
    for (const auto& i : is) {
      HeaderLookup one = compute_abstract({i}, cached);
      if (!one.defined()) {
        acc = one;
        break;
      }
      if (!merge_into(acc, *one.headers, "the abstract headers of the interfaces")) break;
    }
  }
  if (cached) {
    std::unique_lock lock(cache_->mutex);
    cache_->headers.emplace(key, acc);
  }
  return acc;
}

HeaderLookup ClassTable::compute_default(const std::vector<Name>& is, bool cached) const {
  auto key = std::make_pair('D', is);
  if (cached) {
    std::shared_lock lock(cache_->mutex);
    auto it = cache_->headers.find(key);
    if (it != cache_->headers.end()) return it->second;
  }
  HeaderLookup acc = defined(HeaderSet{});
  if (is.size() == 1) {
    const InterfaceDecl* decl = find_interface(require(is.front()));
    if (decl == nullptr) {
      throw LookupError(LookupErrorKind::UnknownName, "'" + is.front() + "' is not an interface");
    }
    bool ok = true;
    for (const auto& m : decl->defaults) {
      if (!acc.headers->insert(m.header)) {
        acc = undefined(ConflictKind::HeaderClash, m.header.name,
                        "interface '" + decl->name + "' declares '" + m.header.name + "' twice");
        ok = false;
        break;
      }
    }
    if (ok && !decl->extends.empty()) {
      HeaderLookup up = compute_default(decl->extends, cached);
      if (!up.defined()) {
        acc = up;
      } else {
        merge_into(acc, *up.headers, "interface '" + decl->name + "'");
      }
    }
  } else {
    std::vector<HeaderSet> parts;
    for (const auto& i : is) {
      HeaderLookup one = compute_default({i}, cached);
      if (!one.defined()) {
        acc = one;
        break;
      }
      parts.push_back(*one.headers);
    }
    // Two interfaces may both provide a default for a name only when one
    // is a subtype of the other.
    for (std::size_t j = 0; acc.defined() && j < parts.size(); ++j) {
      for (std::size_t l = j + 1; acc.defined() && l < parts.size(); ++l) {
        if (nominal_subtype(is[j], is[l]) || nominal_subtype(is[l], is[j])) continue;
        for (const auto& h : parts[j].headers()) {
          if (parts[l].find(h.name) != nullptr) {
            acc = undefined(ConflictKind::DefaultAmbiguity, h.name,
                            "unrelated interfaces '" + is[j] + "' and '" + is[l] +
                                "' both provide a default for '" + h.name + "'");
            break;
          }
        }
      }
    }
    for (std::size_t j = 0; acc.defined() && j < parts.size(); ++j) {
      if (!merge_into(acc, parts[j], "the default headers of the interfaces")) break;
    }
  }
  if (cached) {
    std::unique_lock lock(cache_->mutex);
    cache_->headers.emplace(key, acc);
  }
  return acc;
}

HeaderLookup ClassTable::compute_list(const std::vector<Name>& is, bool cached) const {
  HeaderLookup a = compute_abstract(is, cached);
  if (!a.defined()) return a;
  HeaderLookup d = compute_default(is, cached);
  if (!d.defined()) return d;
  for (const auto& h : a.headers->headers()) {
    if (d.headers->find(h.name) != nullptr) {
      return undefined(ConflictKind::AbstractDefaultClash, h.name,
                       "'" + h.name + "' is both abstract and default");
    }
  }
  merge_into(a, *d.headers, "the interfaces");
  return a;
}

HeaderLookup ClassTable::compute_mh(const PreType& t, bool cached) const {
  if (t.is_boolean()) {
    return undefined(ConflictKind::Malformed, "", "boolean has no method headers");
  }
  if (auto err = shape_error(t)) return undefined(ConflictKind::Malformed, "", *err);
  auto head = class_head(t);
  std::vector<Name> rest = interface_part(t);
  if (!head) return compute_list(rest, cached);
  HeaderLookup acc = compute_class(*head, cached);
  if (!acc.defined() || rest.empty()) return acc;
  HeaderLookup is = compute_list(rest, cached);
  if (!is.defined()) return is;
  merge_into(acc, *is.headers, "'" + pretty(t) + "'");
  return acc;
}

const HeaderLookup& ClassTable::cached(char kind, const PreType& t) const {
  auto key = std::make_pair(kind, t.atoms());
  {
    std::shared_lock lock(cache_->mutex);
    auto it = cache_->types.find(key);
    if (it != cache_->types.end()) return it->second;
  }
  HeaderLookup r = kind == 'T' ? compute_mh(t, true) : compute_split(kind, t);
  std::unique_lock lock(cache_->mutex);
  return cache_->types.emplace(std::move(key), std::move(r)).first->second;
}

HeaderLookup ClassTable::compute_split(char kind, const PreType& t) const {
  if (t.is_boolean()) return undefined(ConflictKind::Malformed, "", "boolean has no method headers");
  if (auto err = shape_error(t)) return undefined(ConflictKind::Malformed, "", *err);
  auto is = interface_part(t);
  if (is.empty()) return defined(HeaderSet{});
  return kind == 'A' ? compute_abstract(is, true) : compute_default(is, true);
}

HeaderLookup ClassTable::mh_lookup(const PreType& t) const { return cached('T', t); }

std::optional<HeaderSet> ClassTable::mh(const PreType& t) const { return cached('T', t).headers; }

std::optional<HeaderSet> ClassTable::mh_uncached(const PreType& t) const {
  return compute_mh(t, false).headers;
}

HeaderLookup ClassTable::mh_of_interfaces(const std::vector<Name>& interfaces) const {
  if (interfaces.empty()) return defined(HeaderSet{});
  return compute_list(interfaces, true);
}

HeaderLookup ClassTable::a_mh_lookup(const PreType& t) const { return cached('A', t); }

HeaderLookup ClassTable::d_mh_lookup(const PreType& t) const { return cached('D', t); }

std::optional<HeaderSet> ClassTable::a_mh(const PreType& t) const { return cached('A', t).headers; }

std::optional<HeaderSet> ClassTable::d_mh(const PreType& t) const { return cached('D', t).headers; }

bool ClassTable::is_type(const PreType& t) const {
  return t.is_boolean() || cached('T', t).defined();
}

std::optional<MethodHeader> ClassTable::functional_header(const PreType& t) const {
  if (t.is_boolean() || class_head(t) || !is_type(t)) return std::nullopt;
  auto abstract = a_mh(t);
  if (!abstract || abstract->size() != 1) return std::nullopt;
  return abstract->headers().front();
}

const std::vector<TypedName>& ClassTable::fields(const Name& cls) const {
  {
    std::shared_lock lock(cache_->mutex);
    auto it = cache_->fields.find(cls);
    if (it != cache_->fields.end()) return it->second;
  }
  std::vector<TypedName> out;
  if (cls != kObject) {
    const ClassDecl* decl = find_class(require(cls));
    if (decl == nullptr) {
      throw LookupError(LookupErrorKind::NotAClass, "'" + cls + "' is not a class");
    }
    out = fields(decl->superclass);
    out.insert(out.end(), decl->fields.begin(), decl->fields.end());
  }
  std::unique_lock lock(cache_->mutex);
  return cache_->fields.emplace(cls, std::move(out)).first->second;
}

namespace {

std::optional<Signature> signature_in(const HeaderLookup& l, const Name& m) {
  const auto& hs = l.headers;
  if (!hs) return std::nullopt;
  const MethodHeader* h = hs->find(m);
  if (h == nullptr) return std::nullopt;
  return Signature{h->param_types(), h->result};
}

}  // namespace

std::optional<Signature> ClassTable::mtype(const Name& m, const PreType& t) const {
  if (t.is_boolean()) return std::nullopt;
  return signature_in(cached('T', t), m);
}

std::optional<Signature> ClassTable::a_mtype(const Name& m, const PreType& t) const {
  if (t.is_boolean()) return std::nullopt;
  return signature_in(cached('A', t), m);
}

std::optional<Signature> ClassTable::d_mtype(const Name& m, const PreType& t) const {
  if (t.is_boolean()) return std::nullopt;
  return signature_in(cached('D', t), m);
}

namespace {

std::optional<MethodBody> declared_body(const std::vector<MethodDecl>& methods, const Name& m,
                                        const Name& provider) {
  for (const auto& md : methods) {
    if (md.header.name == m) return MethodBody{md.header.param_names(), md.body, provider};
  }
  return std::nullopt;
}

}  // namespace

std::optional<MethodBody> ClassTable::mbody_of_interfaces(const Name& m,
                                                          const std::vector<Name>& interfaces) const {
  std::vector<std::pair<Name, MethodBody>> found;
  for (const auto& i : interfaces) {
    const InterfaceDecl* decl = find_interface(require(i));
    if (decl == nullptr) {
      throw LookupError(LookupErrorKind::UnknownName, "'" + i + "' is not an interface");
    }
    auto body = declared_body(decl->defaults, m, i);
    if (!body) body = mbody_of_interfaces(m, decl->extends);
    if (body) found.emplace_back(i, std::move(*body));
  }
  if (found.empty()) return std::nullopt;
  for (const auto& [candidate, body] : found) {
    bool smallest = std::all_of(found.begin(), found.end(), [&](const auto& other) {
      return nominal_subtype(candidate, other.first);
    });
    if (smallest) return body;
  }
  std::string names;
  for (const auto& [candidate, body] : found) {
    names += (names.empty() ? "'" : ", '") + candidate + "'";
  }
  throw LookupError(LookupErrorKind::AmbiguousBody,
                    "no unique most specific implementation of '" + m + "' among " + names);
}

std::optional<MethodBody> ClassTable::mbody(const Name& m, const PreType& t) const {
  if (t.is_boolean()) return std::nullopt;
  auto head = class_head(t);
  if (!head) return mbody_of_interfaces(m, t.atoms());
  // Own methods, then the superclass chain, then the class's interfaces.
  std::function<std::optional<MethodBody>(const Name&)> in_class =
      [&](const Name& c) -> std::optional<MethodBody> {
    if (c == kObject) return std::nullopt;
    const ClassDecl* decl = find_class(c);
    if (auto body = declared_body(decl->methods, m, c)) return body;
    if (auto body = in_class(decl->superclass)) return body;
    return mbody_of_interfaces(m, decl->interfaces);
  };
  if (auto body = in_class(*head)) return body;
  return mbody_of_interfaces(m, interface_part(t));
}

}  // namespace fjl
