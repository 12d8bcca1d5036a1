#include "fjl/syntax.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>

#include "fjl/error.hpp"

namespace fjl {

namespace {

constexpr std::array kReserved = {"true",    "false",      "this",    "super",
                                  "new",     "return",     "class",   "interface",
                                  "extends", "implements", "default", "boolean"};

}  // namespace

bool is_reserved_word(const std::string& text) {
  return std::find(kReserved.begin(), kReserved.end(), text) != kReserved.end();
}

bool is_identifier(const std::string& text) {
  if (text.empty() || !std::isalpha(static_cast<unsigned char>(text[0]))) return false;
  return std::all_of(text.begin(), text.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

PreType PreType::boolean() { return PreType(true, {}); }

PreType PreType::nominal(Name name) { return PreType(false, {std::move(name)}); }

PreType PreType::intersection(std::vector<Name> atoms) {
  if (atoms.empty()) throw Error("intersection needs at least one atom");
  return PreType(false, std::move(atoms));
}

bool operator==(const Term& a, const Term& b) {
  if (a.rep_ == b.rep_) return true;
  return a.node() == b.node();
}

Term make_var(Name name, SourcePos pos) { return Term(Var{std::move(name)}, pos); }

Term make_field(Term object, Name field, SourcePos pos) {
  return Term(FieldAccess{std::move(object), std::move(field)}, pos);
}

Term make_invoke(Term receiver, Name method, std::vector<Term> args, SourcePos pos) {
  return Term(Invoke{std::move(receiver), std::move(method), std::move(args)}, pos);
}

Term make_new(Name class_name, std::vector<Term> args, SourcePos pos) {
  return Term(New{std::move(class_name), std::move(args)}, pos);
}

Term make_cast(PreType type, Term operand, SourcePos pos) {
  return Term(Cast{std::move(type), std::move(operand)}, pos);
}

Term make_lambda(std::vector<Param> params, Term body, SourcePos pos) {
  return Term(PureLambda{std::move(params), std::move(body)}, pos);
}

Term make_decorated(std::vector<Param> params, Term body, PreType target, SourcePos pos) {
  return Term(DecoratedLambda{std::move(params), std::move(body), std::move(target)}, pos);
}

Term make_cond(Term guard, Term then_branch, Term else_branch, SourcePos pos) {
  return Term(Cond{std::move(guard), std::move(then_branch), std::move(else_branch)}, pos);
}

Term make_bool(bool value, SourcePos pos) { return Term(BoolLit{value}, pos); }

bool is_pure_lambda(const Term& t) { return t.is<PureLambda>(); }

bool is_value(const Term& t) { return is_pure_lambda(t) || is_proper_value(t); }

bool is_proper_value(const Term& t) { return t.rep().proper_value; }

namespace {

void collect_free(const Term& t, std::set<Name>& bound, std::set<Name>& out);

void collect_lambda(const std::vector<Param>& params, const Term& body, std::set<Name>& bound,
                    std::set<Name>& out) {
  std::vector<Name> added;
  for (const auto& p : params) {
    if (bound.insert(p.name).second) added.push_back(p.name);
  }
  collect_free(body, bound, out);
  for (const auto& n : added) bound.erase(n);
}

void collect_free(const Term& t, std::set<Name>& bound, std::set<Name>& out) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Var>) {
          if (!bound.contains(n.name)) out.insert(n.name);
        } else if constexpr (std::is_same_v<N, FieldAccess>) {
          collect_free(n.object, bound, out);
        } else if constexpr (std::is_same_v<N, Invoke>) {
          collect_free(n.receiver, bound, out);
          for (const auto& a : n.args) collect_free(a, bound, out);
        } else if constexpr (std::is_same_v<N, New>) {
          for (const auto& a : n.args) collect_free(a, bound, out);
        } else if constexpr (std::is_same_v<N, Cast>) {
          collect_free(n.operand, bound, out);
        } else if constexpr (std::is_same_v<N, PureLambda> || std::is_same_v<N, DecoratedLambda>) {
          collect_lambda(n.params, n.body, bound, out);
        } else if constexpr (std::is_same_v<N, Cond>) {
          collect_free(n.guard, bound, out);
          collect_free(n.then_branch, bound, out);
          collect_free(n.else_branch, bound, out);
        }
      },
      t.node());
}

}  // namespace

std::set<Name> free_vars(const Term& t) {
  std::set<Name> bound;
  std::set<Name> out;
  collect_free(t, bound, out);
  return out;
}

std::size_t term_size(const Term& t) { return t.rep().size; }

bool term_size_exceeds(const Term& t, std::size_t limit) { return term_size(t) > limit; }

namespace {

void add_size(std::size_t& total, const Term& t) {
  const std::size_t s = t.rep().size;
  total = s > SIZE_MAX - total ? SIZE_MAX : total + s;
}

bool all_values(const std::vector<Term>& ts) {
  return std::all_of(ts.begin(), ts.end(), [](const Term& a) { return is_value(a); });
}

}  // namespace

std::shared_ptr<const TermNode> make_term_node(Term::Variant node, SourcePos pos) {
  auto rep = std::make_shared<TermNode>(TermNode{std::move(node), pos});
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        std::size_t& size = rep->size;
        if constexpr (std::is_same_v<N, FieldAccess>) {
          add_size(size, n.object);
        } else if constexpr (std::is_same_v<N, Invoke>) {
          add_size(size, n.receiver);
          for (const auto& a : n.args) add_size(size, a);
        } else if constexpr (std::is_same_v<N, New>) {
          for (const auto& a : n.args) add_size(size, a);
          rep->proper_value = all_values(n.args);
        } else if constexpr (std::is_same_v<N, Cast>) {
          add_size(size, n.operand);
        } else if constexpr (std::is_same_v<N, PureLambda>) {
          add_size(size, n.body);
        } else if constexpr (std::is_same_v<N, DecoratedLambda>) {
          add_size(size, n.body);
          rep->proper_value = true;
        } else if constexpr (std::is_same_v<N, Cond>) {
          add_size(size, n.guard);
          add_size(size, n.then_branch);
          add_size(size, n.else_branch);
        } else if constexpr (std::is_same_v<N, BoolLit>) {
          rep->proper_value = true;
        }
      },
      rep->node);
  return rep;
}

std::vector<PreType> MethodHeader::param_types() const {
  std::vector<PreType> out;
  out.reserve(params.size());
  for (const auto& p : params) out.push_back(p.type);
  return out;
}

std::vector<Name> MethodHeader::param_names() const {
  std::vector<Name> out;
  out.reserve(params.size());
  for (const auto& p : params) out.push_back(p.name);
  return out;
}

bool same_signature(const MethodHeader& a, const MethodHeader& b) {
  return a.name == b.name && a.result == b.result && a.param_types() == b.param_types();
}

const Name& decl_name(const Decl& d) {
  return std::visit([](const auto& x) -> const Name& { return x.name; }, d);
}

SourcePos decl_pos(const Decl& d) {
  return std::visit([](const auto& x) { return x.pos; }, d);
}

CtorDecl canonical_ctor(const Name& cls, const std::vector<TypedName>& inherited,
                        const std::vector<TypedName>& own) {
  CtorDecl k;
  k.name = cls;
  for (const auto& f : inherited) {
    k.params.push_back(f);
    k.super_args.push_back(f.name);
  }
  for (const auto& f : own) {
    k.params.push_back(f);
    k.assignments.emplace_back(f.name, f.name);
  }
  return k;
}

const PreType* TypeEnv::lookup(const Name& x) const {
  for (const auto& [name, type] : bindings_) {
    if (name == x) return &type;
  }
  return nullptr;
}

TypeEnv TypeEnv::extended(const Name& x, PreType type) const {
  TypeEnv out = *this;
  out.bind(x, std::move(type));
  return out;
}

void TypeEnv::bind(const Name& x, PreType type) {
  for (auto& [name, t] : bindings_) {
    if (name == x) {
      t = std::move(type);
      return;
    }
  }
  bindings_.emplace_back(x, std::move(type));
}

}  // namespace fjl
