#include "fjl/harness/properties.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "fjl/evaluator.hpp"
#include "fjl/parser.hpp"
#include "fjl/subtyping.hpp"
#include "fjl/typing.hpp"

namespace fjl::harness {

namespace {

const std::vector<std::pair<Property, const char*>> kPropertyNames = {
    {Property::SubjectReduction, "subject-reduction"},
    {Property::Progress, "progress"},
    {Property::Substitution, "substitution"},
    {Property::LookupLemmas, "lookup-lemmas"},
    {Property::StuckClassification, "stuck-classification"},
};

Outcome fail(std::string witness) { return {Verdict::Fail, std::move(witness)}; }
Outcome excluded(std::string why) { return {Verdict::Excluded, std::move(why)}; }

std::string type_error_text(const Judgement& j) {
  return to_string(j.error().kind) + ": " + j.error().detail;
}

// Typable under the empty environment, optionally without T-UDCAST.
std::optional<Outcome> precondition(const ClassTable& ct, const Term& t, bool allow_udcast,
                                    Judgement& j) {
  if (!free_vars(t).empty()) return excluded("term is open");
  j = t_inf(ct, TypeEnv{}, t);
  if (!j.ok()) return excluded("term is not typable: " + type_error_text(j));
  if (!allow_udcast && j.uses_rule("T-UDCAST")) return excluded("typing uses T-UDCAST");
  return std::nullopt;
}

void each_child(const Term& t, const std::function<void(const Term&)>& f) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, FieldAccess>) {
          f(n.object);
        } else if constexpr (std::is_same_v<N, Invoke>) {
          f(n.receiver);
          for (const auto& a : n.args) f(a);
        } else if constexpr (std::is_same_v<N, New>) {
          for (const auto& a : n.args) f(a);
        } else if constexpr (std::is_same_v<N, Cast>) {
          f(n.operand);
        } else if constexpr (std::is_same_v<N, PureLambda> || std::is_same_v<N, DecoratedLambda>) {
          f(n.body);
        } else if constexpr (std::is_same_v<N, Cond>) {
          f(n.guard);
          f(n.then_branch);
          f(n.else_branch);
        }
      },
      t.node());
}

bool is_prefix(const std::vector<TypedName>& a, const std::vector<TypedName>& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

TypeEnv without(const TypeEnv& env, const Name& x) {
  TypeEnv out;
  for (const auto& [y, t] : env.bindings()) {
    if (y != x) out.bind(y, t);
  }
  return out;
}

}  // namespace

std::string to_string(Property p) {
  for (const auto& [q, name] : kPropertyNames) {
    if (q == p) return name;
  }
  return "?";
}

std::optional<Property> parse_property(std::string_view name) {
  for (const auto& [q, n] : kPropertyNames) {
    if (name == n) return q;
  }
  return std::nullopt;
}

std::vector<Property> all_properties() {
  std::vector<Property> out;
  for (const auto& [q, n] : kPropertyNames) out.push_back(q);
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Inconclusive:
      return "inconclusive";
    case Verdict::Excluded:
      return "excluded";
  }
  return "?";
}

std::optional<Term> undecorated_eliminator(const Term& t) {
  if (const auto* f = t.as<FieldAccess>(); f && is_pure_lambda(f->object)) return t;
  if (const auto* m = t.as<Invoke>(); m && is_pure_lambda(m->receiver)) return t;
  std::optional<Term> found;
  each_child(t, [&](const Term& c) {
    if (!found) found = undecorated_eliminator(c);
  });
  return found;
}

Outcome check_subject_reduction(const ClassTable& ct, const Term& t, std::size_t budget,
                                std::size_t max_term_size) {
  Judgement j{t, {}, PreType::boolean(), nullptr, {}};
  if (auto pre = precondition(ct, t, false, j)) return *pre;
  Evaluator ev(ct);
  Term cur = t;
  PreType type = j.type();
  for (std::size_t i = 0; i < budget; ++i) {
    StepResult r = ev.step(cur);
    if (r.kind != StepResult::Kind::Stepped) return {};
    if (auto bad = undecorated_eliminator(r.term)) {
      return fail("step " + std::to_string(i + 1) + " (" + r.rule +
                  ") leaves an undecorated lambda in " + pretty(*bad));
    }
    Judgement next = t_inf(ct, TypeEnv{}, r.term, TypingOptions{.derivations = false});
    if (!next.ok()) {
      return fail("step " + std::to_string(i + 1) + " (" + r.rule + ") to " + pretty(r.term) +
                  " is not typable: " + type_error_text(next));
    }
    if (!subtype(ct, next.type(), type)) {
      return fail("step " + std::to_string(i + 1) + " (" + r.rule + ") to " + pretty(r.term) +
                  " types at " + pretty(next.type()) + ", not below " + pretty(type));
    }
    type = next.type();
    cur = r.term;
    if (term_size_exceeds(cur, max_term_size)) {
      return {Verdict::Inconclusive, "term outgrew " + std::to_string(max_term_size) + " nodes"};
    }
  }
  return {Verdict::Inconclusive, "step budget exhausted"};
}

namespace {

constexpr std::size_t kMaxTermSize = 20000;

Outcome run_to_end(const ClassTable& ct, const Term& t, std::size_t budget, bool casts_may_fail) {
  EvalOptions opts;
  opts.max_term_size = kMaxTermSize;
  EvalResult r = Evaluator(ct, opts).eval(t, budget);
  switch (r.outcome) {
    case EvalResult::Outcome::Value:
      if (!is_proper_value(r.final)) return fail("ends in improper value " + pretty(r.final));
      return {};
    case EvalResult::Outcome::BudgetExhausted:
      return {Verdict::Inconclusive,
              r.term_too_large ? "term size limit reached" : "step budget exhausted"};
    case EvalResult::Outcome::Stuck:
      if (casts_may_fail && r.stuck && r.stuck->kind != StuckKind::Other) return {};
      return fail("stuck at " + pretty(r.final) + ": " + (r.stuck ? describe(*r.stuck) : ""));
  }
  return {};
}

}  // namespace

Outcome check_progress(const ClassTable& ct, const Term& t, std::size_t budget) {
  Judgement j{t, {}, PreType::boolean(), nullptr, {}};
  if (auto pre = precondition(ct, t, false, j)) return *pre;
  return run_to_end(ct, t, budget, false);
}

Outcome check_stuck_classification(const ClassTable& ct, const Term& t, std::size_t budget) {
  Judgement j{t, {}, PreType::boolean(), nullptr, {}};
  if (auto pre = precondition(ct, t, true, j)) return *pre;
  return run_to_end(ct, t, budget, true);
}

Outcome check_substitution_lemma(const ClassTable& ct, const SubstitutionInstance& inst) {
  const TypeEnv rest = without(inst.env, inst.var);
  Judgement v = t_ck(ct, rest, inst.value, inst.var_type);
  if (!v.ok()) return excluded("value does not check: " + type_error_text(v));
  Judgement synth = t_inf(ct, inst.env, inst.term);
  if (!synth.ok()) return excluded("term is not typable: " + type_error_text(synth));
  const PreType tau = synth.type();
  const Term substituted =
      substitute(inst.term, {{inst.var, decorate(inst.value, inst.var_type)}});

  Judgement before = t_ck(ct, inst.env, inst.term, tau);
  Judgement after = t_ck(ct, rest, substituted, tau);
  if (before.ok() && !after.ok()) {
    return fail(pretty(substituted) + " no longer checks against " + pretty(tau) + ": " +
                type_error_text(after));
  }
  Judgement inferred = t_inf(ct, rest, substituted);
  if (!inferred.ok()) {
    return fail(pretty(substituted) + " is not typable: " + type_error_text(inferred));
  }
  if (!subtype(ct, inferred.type(), tau)) {
    return fail(pretty(substituted) + " types at " + pretty(inferred.type()) + ", not below " +
                pretty(tau));
  }
  return {};
}

std::vector<PreType> type_universe(const ClassTable& ct, std::size_t max_atoms) {
  std::vector<PreType> out;
  std::vector<Name> interfaces;
  const auto names = ct.nominal_names();
  for (const auto& n : names) {
    out.push_back(PreType::nominal(n));
    if (ct.is_interface(n)) interfaces.push_back(n);
  }
  // Extend a head with interfaces in ascending declaration order.
  std::function<void(std::vector<Name>&, std::size_t)> extend = [&](std::vector<Name>& atoms,
                                                                    std::size_t from) {
    if (atoms.size() >= max_atoms) return;
    for (std::size_t i = from; i < interfaces.size(); ++i) {
      if (interfaces[i] == atoms.front()) continue;
      atoms.push_back(interfaces[i]);
      PreType t = PreType::intersection(atoms);
      if (!ct.shape_error(t) && ct.is_type(t)) out.push_back(t);
      extend(atoms, i + 1);
      atoms.pop_back();
    }
  };
  for (const auto& head : names) {
    std::vector<Name> atoms{head};
    std::size_t from = 0;
    if (ct.is_interface(head)) {
      from = static_cast<std::size_t>(
                 std::find(interfaces.begin(), interfaces.end(), head) - interfaces.begin()) +
             1;
    }
    extend(atoms, from);
  }
  return out;
}

Outcome check_lookup_lemmas(const ClassTable& ct) {
  const auto names = ct.nominal_names();
  for (const auto& d : names) {
    if (!ct.is_class(d)) continue;
    for (const auto& c : names) {
      if (!ct.is_class(c) || !ct.nominal_subtype(d, c)) continue;
      if (!is_prefix(ct.fields(c), ct.fields(d))) {
        return fail("fields(" + c + ") is not a prefix of fields(" + d + ")");
      }
    }
  }

  const auto universe = type_universe(ct);
  for (const auto& tau : universe) {
    const auto sub = ct.mh(tau);
    for (const auto& sigma : universe) {
      if (!subtype(ct, tau, sigma)) continue;
      const auto super = ct.mh(sigma);
      if (!sub || !super) return fail("header union undefined on a type");
      if (!super->subset_of(*sub)) {
        return fail("mh(" + pretty(sigma) + ") is not contained in mh(" + pretty(tau) + ")");
      }
    }
  }

  for (const auto& tau : universe) {
    const auto headers = *ct.mh(tau);
    for (const auto& h : headers.headers()) {
      std::optional<MethodBody> body;
      try {
        body = ct.mbody(h.name, tau);
      } catch (const LookupError& e) {
        return fail("mbody(" + h.name + ", " + pretty(tau) + "): " + e.what());
      }
      if (!body) continue;
      const PreType provider = PreType::nominal(body->provider);
      if (!subtype(ct, tau, provider)) {
        return fail("body of " + h.name + " for " + pretty(tau) + " comes from " +
                    body->provider + ", which is not a supertype");
      }
      auto sig = ct.mtype(h.name, tau);
      TypeEnv env;
      for (std::size_t i = 0; i < body->params.size() && i < sig->params.size(); ++i) {
        env.bind(body->params[i], sig->params[i]);
      }
      env.bind(kThis, provider);
      Judgement j = t_ck(ct, env, body->body, sig->result);
      if (!j.ok()) {
        return fail("body of " + h.name + " from " + body->provider + " does not check against " +
                    pretty(sig->result) + ": " + type_error_text(j));
      }
    }
  }
  return {};
}

}  // namespace fjl::harness
