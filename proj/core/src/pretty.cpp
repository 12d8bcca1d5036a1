#include <sstream>

#include "fjl/parser.hpp"

namespace fjl {

namespace {

// 0: lambdas and conditionals, 1: casts, 2: postfix and primaries.
int level(const Term& t) {
  if (t.is<PureLambda>() || t.is<Cond>()) return 0;
  if (t.is<Cast>()) return 1;
  return 2;
}

void print(std::ostream& os, const Term& t, int min_level);

void print_args(std::ostream& os, const std::vector<Term>& args) {
  os << '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) os << ", ";
    print(os, args[i], 0);
  }
  os << ')';
}

void print_params(std::ostream& os, const std::vector<Param>& params) {
  os << '(';
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) os << ", ";
    if (params[i].type) os << pretty(*params[i].type) << ' ';
    os << params[i].name;
  }
  os << ')';
}

void print(std::ostream& os, const Term& t, int min_level) {
  if (level(t) < min_level) {
    os << '(';
    print(os, t, 0);
    os << ')';
    return;
  }
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Var>) {
          os << n.name;
        } else if constexpr (std::is_same_v<N, FieldAccess>) {
          print(os, n.object, 2);
          os << '.' << n.field;
        } else if constexpr (std::is_same_v<N, Invoke>) {
          print(os, n.receiver, 2);
          os << '.' << n.method;
          print_args(os, n.args);
        } else if constexpr (std::is_same_v<N, New>) {
          os << "new " << n.class_name;
          print_args(os, n.args);
        } else if constexpr (std::is_same_v<N, Cast>) {
          os << '(' << pretty(n.type) << ")(";
          print(os, n.operand, 0);
          os << ')';
        } else if constexpr (std::is_same_v<N, PureLambda>) {
          print_params(os, n.params);
          os << " -> ";
          print(os, n.body, 0);
        } else if constexpr (std::is_same_v<N, DecoratedLambda>) {
          os << '[';
          print_params(os, n.params);
          os << " -> ";
          print(os, n.body, 0);
          os << " : " << pretty(n.target) << ']';
        } else if constexpr (std::is_same_v<N, Cond>) {
          print(os, n.guard, 1);
          os << " ? ";
          print(os, n.then_branch, 0);
          os << " : ";
          print(os, n.else_branch, 0);
        } else if constexpr (std::is_same_v<N, BoolLit>) {
          os << (n.value ? "true" : "false");
        }
      },
      t.node());
}

void print_typed(std::ostream& os, const std::vector<TypedName>& params) {
  os << '(';
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) os << ", ";
    os << pretty(params[i].type) << ' ' << params[i].name;
  }
  os << ')';
}

void print_names(std::ostream& os, const std::vector<Name>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) os << ", ";
    os << names[i];
  }
}

}  // namespace

std::string pretty(const Term& t) {
  std::ostringstream os;
  print(os, t, 0);
  return os.str();
}

std::string pretty(const PreType& t) {
  if (t.is_boolean()) return "boolean";
  std::string out;
  for (std::size_t i = 0; i < t.atoms().size(); ++i) {
    if (i) out += " & ";
    out += t.atoms()[i];
  }
  return out;
}

std::string pretty(const MethodHeader& h) {
  std::ostringstream os;
  os << pretty(h.result) << ' ' << h.name;
  print_typed(os, h.params);
  return os.str();
}

std::string pretty(const Decl& d) {
  std::ostringstream os;
  if (const auto* c = std::get_if<ClassDecl>(&d)) {
    os << "class " << c->name << " extends " << c->superclass;
    if (!c->interfaces.empty()) {
      os << " implements ";
      print_names(os, c->interfaces);
    }
    os << " {\n";
    for (const auto& f : c->fields) os << "  " << pretty(f.type) << ' ' << f.name << ";\n";
    os << "  " << c->ctor.name;
    print_typed(os, c->ctor.params);
    os << " { super(";
    print_names(os, c->ctor.super_args);
    os << ");";
    for (const auto& [field, param] : c->ctor.assignments) {
      os << " this." << field << " = " << param << ';';
    }
    os << " }\n";
    for (const auto& m : c->methods) {
      os << "  " << pretty(m.header) << " { return " << pretty(m.body) << "; }\n";
    }
    os << '}';
  } else {
    const auto& i = std::get<InterfaceDecl>(d);
    os << "interface " << i.name;
    if (!i.extends.empty()) {
      os << " extends ";
      print_names(os, i.extends);
    }
    os << " {\n";
    for (const auto& h : i.abstracts) os << "  " << pretty(h) << ";\n";
    for (const auto& m : i.defaults) {
      os << "  " << pretty(m.header) << " { return " << pretty(m.body) << "; }\n";
    }
    os << '}';
  }
  return os.str();
}

std::string pretty(const SourceProgram& p) {
  std::string out;
  for (const auto& d : p.decls) {
    out += pretty(d);
    out += "\n\n";
  }
  if (p.main) out += "main = " + pretty(*p.main) + ";\n";
  return out;
}

}  // namespace fjl
