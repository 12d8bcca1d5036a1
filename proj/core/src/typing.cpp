#include "fjl/typing.hpp"

#include <algorithm>

#include "fjl/error.hpp"
#include "fjl/evaluator.hpp"
#include "fjl/parser.hpp"
#include "fjl/subtyping.hpp"

namespace fjl {

std::string to_string(TypeErrorKind k) {
  switch (k) {
    case TypeErrorKind::UnboundVar: return "unbound-var";
    case TypeErrorKind::NoSuchField: return "no-such-field";
    case TypeErrorKind::NoSuchMethod: return "no-such-method";
    case TypeErrorKind::ArgMismatch: return "arg-mismatch";
    case TypeErrorKind::LambdaNeedsTarget: return "lambda-needs-target";
    case TypeErrorKind::TargetNotFunctional: return "target-not-functional";
    case TypeErrorKind::ArityMismatch: return "arity-mismatch";
    case TypeErrorKind::ParamAnnotationMismatch: return "param-annotation-mismatch";
    case TypeErrorKind::BadCast: return "bad-cast";
    case TypeErrorKind::CondBranchMismatch: return "cond-branch-mismatch";
    case TypeErrorKind::NotBooleanGuard: return "not-boolean-guard";
    case TypeErrorKind::BodyMismatch: return "body-mismatch";
    case TypeErrorKind::UnknownType: return "unknown-type";
  }
  return "unknown";
}

bool Judgement::uses_rule(const std::string& rule) const {
  return std::find(rule_trace.begin(), rule_trace.end(), rule) != rule_trace.end();
}

namespace {

using Node = std::shared_ptr<const Derivation>;

struct Outcome {
  std::optional<PreType> type;
  std::optional<TypeError> error;
  Node node;
  // The checked form synthesised a type that is not below the expected one.
  bool subtype_failure = false;

  bool ok() const { return type.has_value(); }
};

const char* const kCheck = "⊢⊢*";

class Engine {
 public:
  Engine(const ClassTable& ct, TypingOptions options) : ct_(ct), options_(options) {}

  Outcome infer(const TypeEnv& env, const Term& t) const {
    return std::visit([&](const auto& n) { return on(env, t, n); }, t.node());
  }

  Outcome check(const TypeEnv& env, const Term& t, const PreType& expected, TypeErrorKind mismatch,
                const std::string& rule) const {
    if (auto bad = unknown_name(expected)) return unknown(t, *bad, rule);
    Outcome r = infer(env, decorate(t, expected));
    if (!r.ok()) {
      // Only a failure of this comparison counts, not one nested inside.
      r.subtype_failure = false;
      return r;
    }
    if (!subtype(ct_, *r.type, expected)) {
      Outcome out = fail(mismatch, t,
                         "'" + pretty(t) + "' has type " + pretty(*r.type) +
                             ", which is not a subtype of " + pretty(expected),
                         rule);
      out.subtype_failure = true;
      return out;
    }
    return done(kCheck, t, expected, {r.node});
  }

 private:
  static Outcome fail(TypeErrorKind k, const Term& t, std::string detail, std::string rule) {
    Outcome out;
    out.error = TypeError{k, t.pos(), std::move(detail), std::move(rule)};
    return out;
  }

  Outcome done(std::string rule, const Term& t, PreType type, std::vector<Node> premises) const {
    Outcome out;
    out.type = type;
    if (!options_.derivations) return out;
    out.node = std::make_shared<const Derivation>(
        Derivation{std::move(rule), t, std::move(type), std::move(premises)});
    return out;
  }

  std::optional<Name> unknown_name(const PreType& p) const {
    for (const auto& a : p.atoms()) {
      if (!ct_.contains(a)) return a;
    }
    return std::nullopt;
  }

  static Outcome unknown(const Term& t, const Name& n, const std::string& rule) {
    return fail(TypeErrorKind::UnknownType, t, "unknown type '" + n + "'", rule);
  }

  // Checks each argument against its parameter type.
  std::optional<Outcome> check_args(const TypeEnv& env, const std::vector<Term>& args,
                                    const std::vector<PreType>& want, const std::string& rule,
                                    std::vector<Node>& premises) const {
    for (std::size_t i = 0; i < args.size(); ++i) {
      Outcome a = check(env, args[i], want[i], TypeErrorKind::ArgMismatch, rule);
      if (!a.ok()) return a;
      premises.push_back(a.node);
    }
    return std::nullopt;
  }

  Outcome on(const TypeEnv& env, const Term& t, const Var& n) const {
    const PreType* type = env.lookup(n.name);
    if (type == nullptr) {
      return fail(TypeErrorKind::UnboundVar, t, "unbound variable '" + n.name + "'", "T-VAR");
    }
    return done("T-VAR", t, *type, {});
  }

  Outcome on(const TypeEnv&, const Term& t, const BoolLit&) const {
    return done("T-BOOL", t, PreType::boolean(), {});
  }

  Outcome on(const TypeEnv& env, const Term& t, const FieldAccess& n) const {
    Outcome r = infer(env, n.object);
    if (!r.ok()) return r;
    if (!r.type->is_boolean()) {
      for (const auto& f : ct_.fields(class_component(ct_, *r.type))) {
        if (f.name == n.field) return done("T-FIELD", t, f.type, {r.node});
      }
    }
    return fail(TypeErrorKind::NoSuchField, t,
                "type " + pretty(*r.type) + " has no field '" + n.field + "'", "T-FIELD");
  }

  Outcome on(const TypeEnv& env, const Term& t, const Invoke& n) const {
    Outcome r = infer(env, n.receiver);
    if (!r.ok()) return r;
    auto sig = ct_.mtype(n.method, *r.type);
    if (!sig) {
      return fail(TypeErrorKind::NoSuchMethod, t,
                  "type " + pretty(*r.type) + " has no method '" + n.method + "'", "T-INVK");
    }
    if (sig->params.size() != n.args.size()) {
      return fail(TypeErrorKind::ArityMismatch, t,
                  "method '" + n.method + "' expects " + std::to_string(sig->params.size()) +
                      " arguments, got " + std::to_string(n.args.size()),
                  "T-INVK");
    }
    std::vector<Node> premises{r.node};
    if (auto bad = check_args(env, n.args, sig->params, "T-INVK", premises)) return *bad;
    return done("T-INVK", t, sig->result, std::move(premises));
  }

  Outcome on(const TypeEnv& env, const Term& t, const New& n) const {
    if (!ct_.contains(n.class_name)) return unknown(t, n.class_name, "T-NEW");
    if (!ct_.is_class(n.class_name)) {
      return fail(TypeErrorKind::UnknownType, t, "'" + n.class_name + "' is not a class", "T-NEW");
    }
    auto fields = ct_.fields(n.class_name);
    if (fields.size() != n.args.size()) {
      return fail(TypeErrorKind::ArityMismatch, t,
                  "constructor of '" + n.class_name + "' expects " +
                      std::to_string(fields.size()) + " arguments, got " +
                      std::to_string(n.args.size()),
                  "T-NEW");
    }
    std::vector<PreType> want;
    for (const auto& f : fields) want.push_back(f.type);
    std::vector<Node> premises;
    if (auto bad = check_args(env, n.args, want, "T-NEW", premises)) return *bad;
    return done("T-NEW", t, PreType::nominal(n.class_name), std::move(premises));
  }

  Outcome on(const TypeEnv& env, const Term& t, const Cast& n) const {
    const PreType& target = n.type;
    if (auto bad = unknown_name(target)) return unknown(t, *bad, "T-UCAST");
    if (!ct_.is_type(target)) {
      return fail(TypeErrorKind::BadCast, t, pretty(target) + " is not a type", "T-UCAST");
    }
    const bool lambda = is_pure_lambda(n.operand);
    Outcome ck = check(env, n.operand, target, TypeErrorKind::BadCast, "T-UCAST");
    if (ck.ok()) {
      auto premises = ck.node ? ck.node->premises : std::vector<Node>{};
      return done(lambda ? "T-λUCAST" : "T-UCAST", t, target, std::move(premises));
    }
    if (lambda) {
      if (!ct_.functional_header(target)) {
        return fail(TypeErrorKind::BadCast, t,
                    "cannot cast a lambda to " + pretty(target) + ", which is not functional",
                    "T-λUCAST");
      }
      return ck;
    }
    if (!ck.subtype_failure) return ck;
    Outcome src = infer(env, n.operand);
    if (!src.ok()) {
      return fail(TypeErrorKind::BadCast, t, "cannot cast '" + pretty(n.operand) + "' to " +
                                                 pretty(target), "T-UDCAST");
    }
    const PreType& from = *src.type;
    auto reject = [&](const std::string& rule) {
      return fail(TypeErrorKind::BadCast, t,
                  "cannot cast from " + pretty(from) + " to " + pretty(target), rule);
    };
    if (from.is_boolean() || target.is_boolean()) return reject("T-UDCAST");
    if (options_.stupid_cast) return done("T-STUPIDCAST", t, target, {src.node});
    Name to_cls = class_component(ct_, target);
    Name from_cls = class_component(ct_, from);
    if (ct_.nominal_subtype(to_cls, from_cls) || ct_.nominal_subtype(from_cls, to_cls)) {
      return done("T-UDCAST", t, target, {src.node});
    }
    return reject("T-UDCAST");
  }

  Outcome on(const TypeEnv&, const Term& t, const PureLambda&) const {
    return fail(TypeErrorKind::LambdaNeedsTarget, t, "lambda requires a target type", "T-λUD");
  }

  Outcome on(const TypeEnv& env, const Term& t, const DecoratedLambda& n) const {
    const bool typed = !n.params.empty() && n.params.front().type.has_value();
    const std::string rule = typed ? "T-λTD" : "T-λUD";
    if (auto bad = unknown_name(n.target)) return unknown(t, *bad, rule);
    auto header = ct_.functional_header(n.target);
    if (!header) {
      return fail(TypeErrorKind::TargetNotFunctional, t,
                  pretty(n.target) + " is not a functional type", rule);
    }
    auto want = header->param_types();
    if (want.size() != n.params.size()) {
      return fail(TypeErrorKind::ArityMismatch, t,
                  "lambda has " + std::to_string(n.params.size()) + " parameters but " +
                      pretty(*header) + " expects " + std::to_string(want.size()),
                  rule);
    }
    TypeEnv inner = env;
    for (std::size_t i = 0; i < want.size(); ++i) {
      const Param& p = n.params[i];
      if (p.type && *p.type != want[i]) {
        return fail(TypeErrorKind::ParamAnnotationMismatch, t,
                    "parameter '" + p.name + "' is declared " + pretty(*p.type) + " but " +
                        pretty(*header) + " requires " + pretty(want[i]),
                    rule);
      }
      inner.bind(p.name, want[i]);
    }
    Outcome body = check(inner, n.body, header->result, TypeErrorKind::BodyMismatch, rule);
    if (!body.ok()) return body;
    return done(rule, t, n.target, {body.node});
  }

  Outcome on(const TypeEnv& env, const Term& t, const Cond& n) const {
    Outcome g = check(env, n.guard, PreType::boolean(), TypeErrorKind::NotBooleanGuard, "T-COND");
    if (!g.ok()) return g;
    Outcome a = infer(env, n.then_branch);
    if (!a.ok()) return a;
    Outcome b = infer(env, n.else_branch);
    if (!b.ok()) return b;
    auto joined = lub(ct_, *a.type, *b.type);
    if (!joined) {
      return fail(TypeErrorKind::CondBranchMismatch, t,
                  "branches have incompatible types " + pretty(*a.type) + " and " +
                      pretty(*b.type),
                  "T-COND");
    }
    return done("T-COND", t, *joined, {g.node, a.node, b.node});
  }

  const ClassTable& ct_;
  TypingOptions options_;
};

void post_order(const Derivation& d, std::vector<std::string>& out) {
  for (const auto& p : d.premises) post_order(*p, out);
  out.push_back(d.rule);
}

Judgement finish(const Term& t, const TypeEnv& env, Outcome r) {
  Judgement j{t, env, PreType::boolean(), nullptr, {}};
  if (r.ok()) {
    j.result = *r.type;
    j.derivation = r.node;
    if (r.node) post_order(*r.node, j.rule_trace);
  } else {
    j.result = *r.error;
  }
  return j;
}

template <class F>
Judgement guarded(const Term& t, const TypeEnv& env, F&& run) {
  try {
    return finish(t, env, run());
  } catch (const LookupError& e) {
    Outcome out;
    out.error = TypeError{TypeErrorKind::UnknownType, t.pos(), e.what(), ""};
    return finish(t, env, out);
  }
}

}  // namespace

TypeChecker::TypeChecker(ClassTable ct, TypingOptions options)
    : ct_(std::move(ct)), options_(options) {}

Judgement TypeChecker::infer(const TypeEnv& env, const Term& t) const {
  Engine engine(ct_, options_);
  return guarded(t, env, [&] { return engine.infer(env, t); });
}

Judgement TypeChecker::check(const TypeEnv& env, const Term& t, const PreType& expected) const {
  Engine engine(ct_, options_);
  return guarded(t, env,
                 [&] { return engine.check(env, t, expected, TypeErrorKind::ArgMismatch, kCheck); });
}

Judgement t_inf(const ClassTable& ct, const TypeEnv& env, const Term& t, TypingOptions options) {
  return TypeChecker(ct, options).infer(env, t);
}

Judgement t_ck(const ClassTable& ct, const TypeEnv& env, const Term& t, const PreType& expected,
               TypingOptions options) {
  return TypeChecker(ct, options).check(env, t, expected);
}

}  // namespace fjl
