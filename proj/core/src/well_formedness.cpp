#include "fjl/well_formedness.hpp"

#include <set>

#include "fjl/error.hpp"

namespace fjl {

std::string describe(const WellFormednessError& e) {
  std::string where = e.decl;
  if (!e.method.empty()) where += "." + e.method;
  return where + ": " + e.premise + ": " + e.detail;
}

namespace {

class Checker {
 public:
  Checker(const ClassTable& ct, TypingOptions options)
      : ct_(ct), typing_(ct, options) {}

  std::vector<WellFormednessError> run() {
    for (const auto& d : ct_.decls()) {
      try {
        if (const auto* c = std::get_if<ClassDecl>(&d)) {
          check_class(*c);
        } else {
          check_interface(std::get<InterfaceDecl>(d));
        }
      } catch (const LookupError& e) {
        report(decl_name(d), "", premise::kUnknownType, e.what(), decl_pos(d));
      }
    }
    return std::move(out_);
  }

 private:
  void report(const Name& decl, const Name& method, const char* premise, std::string detail,
              SourcePos pos) {
    out_.push_back(WellFormednessError{decl, method, premise, std::move(detail), pos});
  }

  bool known(const PreType& t) const {
    for (const auto& a : t.atoms()) {
      if (!ct_.contains(a)) return false;
    }
    return true;
  }

  // Field, parameter and result types are `boolean` or a single name.
  bool check_slot(const Name& decl, const Name& method, const PreType& t, const std::string& what,
                  SourcePos pos) {
    if (t.is_intersection()) {
      report(decl, method, premise::kMalformedHeader,
             what + " has intersection type " + pretty(t), pos);
      return false;
    }
    if (!known(t)) {
      report(decl, method, premise::kUnknownType, what + " has unknown type " + pretty(t), pos);
      return false;
    }
    return true;
  }

  bool check_header(const Name& decl, const MethodHeader& h) {
    bool ok = check_slot(decl, h.name, h.result, "result", h.pos);
    std::set<Name> seen;
    for (const auto& p : h.params) {
      ok = check_slot(decl, h.name, p.type, "parameter '" + p.name + "'", h.pos) && ok;
      if (p.name == kThis || !seen.insert(p.name).second) {
        report(decl, h.name, premise::kMalformedHeader,
               "parameter name '" + p.name + "' is reserved or repeated", h.pos);
        ok = false;
      }
    }
    return ok;
  }

  void check_unique(const Name& decl, const std::vector<Name>& names, const std::string& what,
                    SourcePos pos) {
    std::set<Name> seen;
    for (const auto& n : names) {
      if (!seen.insert(n).second) {
        report(decl, "", premise::kDuplicateMember, what + " '" + n + "' occurs twice", pos);
      }
    }
  }

  void check_body(const Name& decl, const MethodDecl& m, const PreType& self) {
    TypeEnv env;
    for (const auto& p : m.header.params) env.bind(p.name, p.type);
    env.bind(kThis, self);
    Judgement j = typing_.check(env, m.body, m.header.result);
    if (!j.ok()) {
      report(decl, m.header.name, premise::kMethodBody,
             to_string(j.error().kind) + ": " + j.error().detail, m.header.pos);
    }
  }

  bool check_mh(const Name& decl, SourcePos pos) {
    HeaderLookup mh = ct_.mh_lookup(PreType::nominal(decl));
    if (mh.defined()) return true;
    const auto& c = *mh.conflict;
    report(decl, c.method,
           c.kind == ConflictKind::DefaultAmbiguity ? premise::kAmbiguousDefault
                                                    : premise::kMhUndefined,
           c.detail, pos);
    return false;
  }

  void check_class(const ClassDecl& c) {
    std::vector<Name> names;
    for (const auto& f : ct_.fields(c.name)) names.push_back(f.name);
    check_unique(c.name, names, "field", c.pos);
    names.clear();
    for (const auto& m : c.methods) names.push_back(m.header.name);
    check_unique(c.name, names, "method", c.pos);
    check_unique(c.name, c.interfaces, "interface", c.pos);

    bool typed = true;
    for (const auto& f : c.fields) {
      typed = check_slot(c.name, "", f.type, "field '" + f.name + "'", c.pos) && typed;
    }
    for (const auto& m : c.methods) typed = check_header(c.name, m.header) && typed;

    check_ctor(c);
    if (!check_mh(c.name, c.pos)) return;
    PreType self = PreType::nominal(c.name);
    if (typed) {
      for (const auto& m : c.methods) check_body(c.name, m, self);
    }
    const auto self_headers = *ct_.mh(self);
    for (const auto& h : self_headers.headers()) {
      try {
        if (!ct_.mbody(h.name, self)) {
          report(c.name, h.name, premise::kUnimplementedMethod,
                 "no implementation of '" + pretty(h) + "'", c.pos);
        }
      } catch (const LookupError& e) {
        if (e.kind() != LookupErrorKind::AmbiguousBody) throw;
        report(c.name, h.name, premise::kAmbiguousDefault, e.what(), c.pos);
      }
    }
  }

  void check_ctor(const ClassDecl& c) {
    const CtorDecl& k = c.ctor;
    if (k.name != c.name) {
      report(c.name, "", premise::kConstructorShape,
             "constructor is named '" + k.name + "'", k.pos);
      return;
    }
    auto inherited = ct_.fields(c.superclass);
    std::vector<Name> inherited_names;
    for (const auto& f : inherited) inherited_names.push_back(f.name);
    bool forwards = k.params.size() >= inherited.size() && k.super_args == inherited_names;
    for (std::size_t i = 0; forwards && i < inherited.size(); ++i) {
      forwards = k.params[i] == inherited[i];
    }
    if (!forwards) {
      report(c.name, "", premise::kFieldForwarding,
             "constructor must take and pass on the fields of '" + c.superclass + "' first",
             k.pos);
      return;
    }
    std::vector<TypedName> own(k.params.begin() + static_cast<long>(inherited.size()),
                               k.params.end());
    bool shape = own == c.fields && k.assignments.size() == c.fields.size();
    for (std::size_t i = 0; shape && i < c.fields.size(); ++i) {
      shape = k.assignments[i].first == c.fields[i].name &&
              k.assignments[i].second == c.fields[i].name;
    }
    if (!shape) {
      report(c.name, "", premise::kConstructorShape,
             "constructor must take the declared fields in order and assign each to itself",
             k.pos);
    }
  }

  void check_interface(const InterfaceDecl& i) {
    std::vector<Name> names;
    for (const auto& h : i.abstracts) names.push_back(h.name);
    for (const auto& m : i.defaults) names.push_back(m.header.name);
    check_unique(i.name, names, "method", i.pos);
    check_unique(i.name, i.extends, "interface", i.pos);

    bool typed = true;
    for (const auto& h : i.abstracts) typed = check_header(i.name, h) && typed;
    for (const auto& m : i.defaults) typed = check_header(i.name, m.header) && typed;
    if (!check_mh(i.name, i.pos)) return;
    if (typed) {
      for (const auto& m : i.defaults) check_body(i.name, m, PreType::nominal(i.name));
    }
  }

  const ClassTable& ct_;
  TypeChecker typing_;
  std::vector<WellFormednessError> out_;
};

}  // namespace

std::vector<WellFormednessError> ok_table(const ClassTable& ct, TypingOptions options) {
  return Checker(ct, options).run();
}

ProgramCheck check_program(const ClassTable& ct, const Term& t, TypingOptions options) {
  ProgramCheck out;
  out.table_findings = ok_table(ct, options);
  out.judgement = t_inf(ct, TypeEnv{}, t, options);
  return out;
}

ProgramCheck check_program(const SourceProgram& program, TypingOptions options) {
  ProgramCheck out;
  std::optional<ClassTable> ct;
  try {
    ct.emplace(program.decls);
  } catch (const TableError& e) {
    out.table_error = e.what();
    return out;
  }
  out.table_findings = ok_table(*ct, options);
  if (program.main) out.judgement = t_inf(*ct, TypeEnv{}, *program.main, options);
  return out;
}

}  // namespace fjl
