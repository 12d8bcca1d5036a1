#include "fjl/evaluator.hpp"

#include <algorithm>

#include "fjl/error.hpp"
#include "fjl/parser.hpp"
#include "fjl/subtyping.hpp"

namespace fjl {

Term decorate(const Term& t, const PreType& target) {
  if (const auto* l = t.as<PureLambda>()) {
    return make_decorated(l->params, l->body, target, t.pos());
  }
  if (const auto* c = t.as<Cond>()) {
    return make_cond(c->guard, decorate(c->then_branch, target),
                     decorate(c->else_branch, target), t.pos());
  }
  return t;
}

namespace {

Name fresh_name(const Name& base, const std::set<Name>& avoid) {
  for (int i = 1;; ++i) {
    Name n = base + "_" + std::to_string(i);
    if (!avoid.contains(n)) return n;
  }
}

std::vector<Term> substitute_all(const std::vector<Term>& ts, const std::map<Name, Term>& b) {
  std::vector<Term> out;
  out.reserve(ts.size());
  for (const auto& t : ts) out.push_back(substitute(t, b));
  return out;
}

// Shared by pure and decorated lambdas: returns the new parameters and body.
std::pair<std::vector<Param>, Term> substitute_binder(const std::vector<Param>& params,
                                                      const Term& body,
                                                      std::map<Name, Term> bindings) {
  for (const auto& p : params) bindings.erase(p.name);
  if (bindings.empty()) return {params, body};
  std::set<Name> body_free = free_vars(body);
  std::set<Name> incoming;
  for (const auto& [x, v] : bindings) {
    if (!body_free.contains(x)) continue;
    auto fv = free_vars(v);
    incoming.insert(fv.begin(), fv.end());
  }
  std::vector<Param> renamed = params;
  std::set<Name> avoid = body_free;
  avoid.insert(incoming.begin(), incoming.end());
  for (const auto& p : params) avoid.insert(p.name);
  for (auto& p : renamed) {
    if (!incoming.contains(p.name)) continue;
    Name fresh = fresh_name(p.name, avoid);
    avoid.insert(fresh);
    bindings.emplace(p.name, make_var(fresh));
    p.name = fresh;
  }
  return {renamed, substitute(body, bindings)};
}

}  // namespace

Term substitute(const Term& t, const std::map<Name, Term>& bindings) {
  if (bindings.empty()) return t;
  return std::visit(
      [&](const auto& n) -> Term {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Var>) {
          auto it = bindings.find(n.name);
          return it == bindings.end() ? t : it->second;
        } else if constexpr (std::is_same_v<N, FieldAccess>) {
          return make_field(substitute(n.object, bindings), n.field, t.pos());
        } else if constexpr (std::is_same_v<N, Invoke>) {
          return make_invoke(substitute(n.receiver, bindings), n.method,
                             substitute_all(n.args, bindings), t.pos());
        } else if constexpr (std::is_same_v<N, New>) {
          return make_new(n.class_name, substitute_all(n.args, bindings), t.pos());
        } else if constexpr (std::is_same_v<N, Cast>) {
          return make_cast(n.type, substitute(n.operand, bindings), t.pos());
        } else if constexpr (std::is_same_v<N, PureLambda>) {
          auto [ps, body] = substitute_binder(n.params, n.body, bindings);
          return make_lambda(std::move(ps), std::move(body), t.pos());
        } else if constexpr (std::is_same_v<N, DecoratedLambda>) {
          auto [ps, body] = substitute_binder(n.params, n.body, bindings);
          return make_decorated(std::move(ps), std::move(body), n.target, t.pos());
        } else if constexpr (std::is_same_v<N, Cond>) {
          return make_cond(substitute(n.guard, bindings), substitute(n.then_branch, bindings),
                           substitute(n.else_branch, bindings), t.pos());
        } else {
          return t;
        }
      },
      t.node());
}

std::string to_string(StuckKind k) {
  switch (k) {
    case StuckKind::FailedObjectCast: return "failed-object-cast";
    case StuckKind::FailedLambdaCast: return "failed-lambda-cast";
    case StuckKind::Other: return "other";
  }
  return "other";
}

std::string describe(const StuckReason& r) {
  switch (r.kind) {
    case StuckKind::FailedObjectCast:
      return "failed object cast: " + pretty(*r.source) + " is not a subtype of " +
             pretty(*r.target);
    case StuckKind::FailedLambdaCast:
      return "failed lambda cast: " + pretty(*r.source) + " is not a subtype of " +
             pretty(*r.target);
    case StuckKind::Other:
      return r.detail;
  }
  return r.detail;
}

std::string to_string(EvalResult::Outcome o) {
  switch (o) {
    case EvalResult::Outcome::Value: return "value";
    case EvalResult::Outcome::Stuck: return "stuck";
    case EvalResult::Outcome::BudgetExhausted: return "budget-exhausted";
  }
  return "value";
}

namespace {

StepResult stepped(Term t, std::string rule) {
  return StepResult{StepResult::Kind::Stepped, std::move(t), std::move(rule), {}, std::nullopt};
}

StepResult value(const Term& t) {
  return StepResult{StepResult::Kind::Value, t, "", {}, std::nullopt};
}

StepResult stuck(const Term& t, StuckReason why) {
  return StepResult{StepResult::Kind::Stuck, t, "", {}, std::move(why)};
}

StepResult stuck_other(const Term& t, std::string detail) {
  return stuck(t, StuckReason{StuckKind::Other, std::nullopt, std::nullopt, std::move(detail)});
}

// Wraps the result of reducing a subterm back into its context.
template <class Rebuild>
StepResult lift(const Term& whole, StepResult inner, const char* rule, Rebuild rebuild) {
  if (inner.kind != StepResult::Kind::Stepped) {
    inner.term = whole;
    return inner;
  }
  inner.term = rebuild(inner.term);
  // Collected inside out; step() reverses.
  inner.congruence.push_back(rule);
  return inner;
}

std::optional<std::size_t> first_non_value(const std::vector<Term>& ts) {
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!is_value(ts[i])) return i;
  }
  return std::nullopt;
}

std::map<Name, Term> bind_params(const std::vector<Name>& names, const std::vector<Term>& args,
                                 const std::vector<PreType>& types) {
  std::map<Name, Term> out;
  for (std::size_t i = 0; i < names.size(); ++i) out.emplace(names[i], decorate(args[i], types[i]));
  return out;
}

}  // namespace

Evaluator::Evaluator(ClassTable ct, EvalOptions options)
    : ct_(std::move(ct)), options_(options) {}

StepResult Evaluator::step(const Term& t) const {
  auto fv = free_vars(t);
  if (!fv.empty()) {
    throw OpenTermError("cannot evaluate a term with free variable '" + *fv.begin() + "'");
  }
  try {
    StepResult r = reduce(t);
    std::reverse(r.congruence.begin(), r.congruence.end());
    return r;
  } catch (const LookupError& e) {
    return stuck_other(t, e.what());
  }
}

StepResult Evaluator::reduce(const Term& t) const {
  if (const auto* n = t.as<FieldAccess>()) {
    if (!is_value(n->object)) {
      return lift(t, reduce(n->object), "E-Field",
                  [&](const Term& o) { return make_field(o, n->field, t.pos()); });
    }
    const auto* obj = n->object.as<New>();
    if (obj == nullptr) return stuck_other(t, "field access on a non-object");
    auto fields = ct_.is_class(obj->class_name) ? ct_.fields(obj->class_name)
                                                : std::vector<TypedName>{};
    for (std::size_t j = 0; j < fields.size() && j < obj->args.size(); ++j) {
      if (fields[j].name == n->field) {
        return stepped(decorate(obj->args[j], fields[j].type), "E-ProjNew");
      }
    }
    return stuck_other(t, "object " + pretty(n->object) + " has no field '" + n->field + "'");
  }

  if (const auto* n = t.as<Invoke>()) {
    if (!is_value(n->receiver)) {
      return lift(t, reduce(n->receiver), "E-Invk-Recv", [&](const Term& r) {
        return make_invoke(r, n->method, n->args, t.pos());
      });
    }
    if (!is_proper_value(n->receiver)) {
      return stuck_other(t, "method call on a lambda without a target type");
    }
    if (auto i = first_non_value(n->args)) {
      return lift(t, reduce(n->args[*i]), "E-Invk-Arg", [&](const Term& a) {
        auto args = n->args;
        args[*i] = a;
        return make_invoke(n->receiver, n->method, std::move(args), t.pos());
      });
    }
    if (const auto* obj = n->receiver.as<New>()) {
      PreType cls = PreType::nominal(obj->class_name);
      auto body = ct_.is_class(obj->class_name) ? ct_.mbody(n->method, cls) : std::nullopt;
      auto sig = ct_.is_class(obj->class_name) ? ct_.mtype(n->method, cls) : std::nullopt;
      if (!body || !sig || sig->params.size() != n->args.size() ||
          body->params.size() != n->args.size()) {
        return stuck_other(t, "no applicable method '" + n->method + "' in " + obj->class_name);
      }
      auto b = bind_params(body->params, n->args, sig->params);
      b.emplace(kThis, n->receiver);
      return stepped(substitute(decorate(body->body, sig->result), b), "E-InvkNew");
    }
    if (const auto* lam = n->receiver.as<DecoratedLambda>()) {
      if (auto sig = ct_.a_mtype(n->method, lam->target)) {
        const bool typed = !lam->params.empty() && lam->params.front().type.has_value();
        if (sig->params.size() != n->args.size() || lam->params.size() != n->args.size()) {
          return stuck_other(t, "arity mismatch calling '" + n->method + "' on a lambda");
        }
        if (typed && options_.check_annotations) {
          for (std::size_t i = 0; i < lam->params.size(); ++i) {
            if (*lam->params[i].type != sig->params[i]) {
              return stuck_other(t, "lambda parameter '" + lam->params[i].name +
                                        "' disagrees with the abstract signature");
            }
          }
        }
        std::vector<Name> names;
        for (const auto& p : lam->params) names.push_back(p.name);
        auto b = bind_params(names, n->args, sig->params);
        return stepped(substitute(decorate(lam->body, sig->result), b),
                       typed ? "E-InvkλT-A" : "E-InvkλU-A");
      }
      auto body = ct_.mbody(n->method, lam->target);
      auto sig = ct_.d_mtype(n->method, lam->target);
      if (!body || !sig || sig->params.size() != n->args.size() ||
          body->params.size() != n->args.size()) {
        return stuck_other(t, "no applicable method '" + n->method + "' on a lambda of type " +
                                  pretty(lam->target));
      }
      auto b = bind_params(body->params, n->args, sig->params);
      b.emplace(kThis, n->receiver);
      return stepped(substitute(decorate(body->body, sig->result), b), "E-Invkλ-D");
    }
    return stuck_other(t, "method call on a boolean");
  }

  if (const auto* n = t.as<New>()) {
    if (auto i = first_non_value(n->args)) {
      return lift(t, reduce(n->args[*i]), "E-New-Arg", [&](const Term& a) {
        auto args = n->args;
        args[*i] = a;
        return make_new(n->class_name, std::move(args), t.pos());
      });
    }
    return value(t);
  }

  if (const auto* n = t.as<Cast>()) {
    const Term& v = n->operand;
    if (!is_value(v)) {
      return lift(t, reduce(v), "E-Cast",
                  [&](const Term& o) { return make_cast(n->type, o, t.pos()); });
    }
    if (const auto* lam = v.as<PureLambda>()) {
      return stepped(make_decorated(lam->params, lam->body, n->type, v.pos()), "E-Castλ");
    }
    if (const auto* lam = v.as<DecoratedLambda>()) {
      if (subtype(ct_, lam->target, n->type)) return stepped(v, "E-CastλTarget");
      return stuck(t, StuckReason{StuckKind::FailedLambdaCast, n->type, lam->target, ""});
    }
    if (const auto* obj = v.as<New>()) {
      PreType cls = PreType::nominal(obj->class_name);
      if (subtype(ct_, cls, n->type)) return stepped(v, "E-CastNew");
      return stuck(t, StuckReason{StuckKind::FailedObjectCast, n->type, cls, ""});
    }
    if (n->type.is_boolean()) return stepped(v, "E-CastBool");
    return stuck_other(t, "cast of a boolean to " + pretty(n->type));
  }

  if (const auto* n = t.as<Cond>()) {
    if (!is_value(n->guard)) {
      return lift(t, reduce(n->guard), "E-If", [&](const Term& g) {
        return make_cond(g, n->then_branch, n->else_branch, t.pos());
      });
    }
    if (const auto* b = n->guard.as<BoolLit>()) {
      return b->value ? stepped(n->then_branch, "E-IfTrue") : stepped(n->else_branch, "E-IfFalse");
    }
    return stuck_other(t, "conditional guard is not a boolean");
  }

  if (is_proper_value(t)) return value(t);
  if (t.is<PureLambda>()) return stuck_other(t, "a lambda without a target type is not a result");
  return stuck_other(t, "free variable");
}

EvalResult Evaluator::eval(const Term& t) const { return eval(t, options_.max_steps); }

EvalResult Evaluator::eval(const Term& t, std::size_t max_steps) const {
  EvalResult out{EvalResult::Outcome::Value, t, {t}, {}, std::nullopt};
  Term cur = t;
  auto fv = free_vars(t);
  if (!fv.empty()) {
    throw OpenTermError("cannot evaluate a term with free variable '" + *fv.begin() + "'");
  }
  for (;;) {
    StepResult r = [&] {
      try {
        return reduce(cur);
      } catch (const LookupError& e) {
        return stuck_other(cur, e.what());
      }
    }();
    if (r.kind == StepResult::Kind::Value) {
      out.outcome = EvalResult::Outcome::Value;
      break;
    }
    if (r.kind == StepResult::Kind::Stuck) {
      out.outcome = EvalResult::Outcome::Stuck;
      out.stuck = r.stuck;
      break;
    }
    if (out.rules.size() >= max_steps) {
      out.outcome = EvalResult::Outcome::BudgetExhausted;
      break;
    }
    cur = r.term;
    out.trace.push_back(cur);
    out.rules.push_back(r.rule);
    if (options_.max_term_size && term_size_exceeds(cur, options_.max_term_size)) {
      out.outcome = EvalResult::Outcome::BudgetExhausted;
      out.term_too_large = true;
      break;
    }
  }
  out.final = cur;
  return out;
}

}  // namespace fjl
