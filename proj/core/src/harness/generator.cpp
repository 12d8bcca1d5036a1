#include "fjl/harness/generator.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fjl/parser.hpp"
#include "fjl/subtyping.hpp"
#include "fjl/well_formedness.hpp"

namespace fjl::harness {

namespace {

constexpr int kInf = std::numeric_limits<int>::max() / 4;

std::size_t below(std::mt19937_64& rng, std::size_t n) {
  return n == 0 ? 0 : static_cast<std::size_t>(rng() % n);
}

bool chance(std::mt19937_64& rng, int percent) { return static_cast<int>(rng() % 100) < percent; }

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[below(rng, v.size())];
}

int add_cost(int a, int b) { return std::min(kInf, a + b); }

}  // namespace

Features parse_features(const std::string& spec, Features base) {
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    bool on = true;
    if (item.front() == '+' || item.front() == '-') {
      on = item.front() == '+';
      item.erase(0, 1);
    }
    if (item == "lambdas") {
      base.lambdas = on;
    } else if (item == "defaults") {
      base.defaults = on;
    } else if (item == "intersections") {
      base.intersections = on;
    } else if (item == "casts") {
      base.casts = on;
    } else if (item == "conditionals") {
      base.conditionals = on;
    } else if (item == "udcast") {
      base.udcast = on;
    } else {
      throw std::invalid_argument("unknown feature '" + item + "'");
    }
  }
  return base;
}

std::string to_string(const Features& f) {
  auto flag = [](bool on, const char* name) { return std::string(on ? "+" : "-") + name; };
  return flag(f.lambdas, "lambdas") + "," + flag(f.defaults, "defaults") + "," +
         flag(f.intersections, "intersections") + "," + flag(f.casts, "casts") + "," +
         flag(f.conditionals, "conditionals") + "," + flag(f.udcast, "udcast");
}

struct TermGenerator::Impl {
  struct FieldSlot {
    Name cls;
    Name field;
    PreType type;
  };
  struct MethodSlot {
    PreType receiver;
    MethodHeader header;
  };
  struct Gen {
    Term term;
    PreType type;
  };

  ClassTable ct;
  GenConfig cfg;
  std::mt19937_64 rng;
  std::vector<Name> classes;  // Object first
  std::vector<Name> interfaces;
  std::map<Name, int> ncost;
  std::vector<PreType> universe;  // inhabited types
  std::vector<FieldSlot> field_slots;
  std::vector<MethodSlot> method_slots;
  int fresh = 0;

  Impl(ClassTable table, GenConfig config, std::uint64_t seed)
      : ct(std::move(table)), cfg(config), rng(seed) {
    for (const auto& n : ct.nominal_names()) {
      (ct.is_class(n) ? classes : interfaces).push_back(n);
    }
    compute_costs();
    build_universe();
  }

  int nominal_cost(const PreType& t) const {
    if (t.is_boolean()) return 1;
    auto it = ncost.find(t.name());
    return it == ncost.end() ? kInf : it->second;
  }

  int lambda_cost(const PreType& t) const {
    if (!cfg.features.lambdas || t.is_boolean()) return kInf;
    auto h = ct.functional_header(t);
    if (!h) return kInf;
    for (const auto& p : h->param_types()) {
      if (subtype(ct, p, h->result)) return 2;
    }
    return add_cost(1, nominal_cost(h->result));
  }

  int cost_of(const PreType& t) const {
    if (t.is_boolean()) return 1;
    int best = kInf;
    for (const auto& d : classes) {
      if (subtype(ct, PreType::nominal(d), t)) best = std::min(best, ncost.at(d));
    }
    return std::min(best, lambda_cost(t));
  }

  void compute_costs() {
    for (const auto& n : ct.nominal_names()) ncost[n] = kInf;
    ncost[kObject] = 1;
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& d : classes) {
        if (d == kObject) continue;
        int c = 1;
        for (const auto& f : ct.fields(d)) c = add_cost(c, nominal_cost(f.type));
        if (c < ncost[d]) {
          ncost[d] = c;
          changed = true;
        }
      }
      for (const auto& i : interfaces) {
        int c = cost_of(PreType::nominal(i));
        if (c < ncost[i]) {
          ncost[i] = c;
          changed = true;
        }
      }
    }
  }

  void consider(std::vector<Name> atoms) {
    PreType t = atoms.size() == 1 ? PreType::nominal(atoms.front())
                                  : PreType::intersection(std::move(atoms));
    if (ct.shape_error(t) || !ct.is_type(t) || cost_of(t) >= kInf) return;
    if (std::find(universe.begin(), universe.end(), t) == universe.end()) universe.push_back(t);
  }

  void build_universe() {
    for (const auto& n : ct.nominal_names()) consider({n});
    if (cfg.features.intersections) {
      for (const auto& x : ct.nominal_names()) {
        for (const auto& i : interfaces) {
          if (x == i) continue;
          consider({x, i});
          for (const auto& j : interfaces) {
            if (j != i && j != x && ct.declaration_index(i) < ct.declaration_index(j)) {
              consider({x, i, j});
            }
          }
        }
      }
    }
    for (const auto& d : classes) {
      if (ncost[d] >= kInf) continue;
      for (const auto& f : ct.fields(d)) field_slots.push_back({d, f.name, f.type});
    }
    for (const auto& r : universe) {
      const auto headers = *ct.mh(r);
      for (const auto& h : headers.headers()) method_slots.push_back({r, h});
    }
  }

  Name fresh_var() { return "y" + std::to_string(++fresh); }

  std::vector<Name> vars_below(const TypeEnv& env, const PreType& goal) const {
    std::vector<Name> out;
    for (const auto& [x, t] : env.bindings()) {
      if (subtype(ct, t, goal)) out.push_back(x);
    }
    return out;
  }

  std::optional<Gen> witness(const PreType& goal, bool poly) {
    if (goal.is_boolean()) return Gen{make_bool(chance(rng, 50)), goal};
    std::optional<Name> best;
    for (const auto& d : classes) {
      if (ncost[d] < kInf && subtype(ct, PreType::nominal(d), goal) &&
          (!best || ncost[d] < ncost[*best])) {
        best = d;
      }
    }
    int lc = lambda_cost(goal);
    if (!best && lc >= kInf) return std::nullopt;
    if (best && ncost[*best] <= lc) {
      std::vector<Term> args;
      for (const auto& f : ct.fields(*best)) args.push_back(witness(f.type, true)->term);
      return Gen{make_new(*best, std::move(args)), PreType::nominal(*best)};
    }
    auto h = *ct.functional_header(goal);
    std::vector<Param> params;
    std::optional<Term> body;
    for (const auto& p : h.param_types()) {
      params.push_back(Param{fresh_var(), std::nullopt});
      if (!body && subtype(ct, p, h.result)) body = make_var(params.back().name);
    }
    if (!body) body = witness(h.result, true)->term;
    Term lam = make_lambda(std::move(params), *body);
    return Gen{poly ? lam : make_cast(goal, lam), goal};
  }

  std::optional<Gen> leaf(const TypeEnv& env, const PreType& goal, bool poly) {
    auto vars = vars_below(env, goal);
    if (!vars.empty() && chance(rng, 60)) {
      const Name& x = pick(rng, vars);
      return Gen{make_var(x), *env.lookup(x)};
    }
    if (auto w = witness(goal, poly)) return w;
    if (vars.empty()) return std::nullopt;
    const Name& x = pick(rng, vars);
    return Gen{make_var(x), *env.lookup(x)};
  }

  enum class Prod { Var, Create, Lambda, Field, Invoke, Cast, Cond, Literal };

  std::optional<Gen> check(const TypeEnv& env, const PreType& goal, int depth, bool poly) {
    if (depth <= 0) return leaf(env, goal, poly);
    const Weights& w = cfg.weights;
    const Features& f = cfg.features;
    std::vector<std::pair<Prod, int>> options;
    auto vars = vars_below(env, goal);
    if (!vars.empty()) options.emplace_back(Prod::Var, w.var);
    std::vector<Name> creatable;
    if (goal.is_boolean()) {
      options.emplace_back(Prod::Literal, w.create);
    } else {
      for (const auto& d : classes) {
        if (ncost[d] < kInf && subtype(ct, PreType::nominal(d), goal)) creatable.push_back(d);
      }
      if (!creatable.empty()) options.emplace_back(Prod::Create, w.create);
      if (poly && lambda_cost(goal) < kInf) options.emplace_back(Prod::Lambda, w.lambda);
      if (f.casts) options.emplace_back(Prod::Cast, w.cast);
    }
    std::vector<const FieldSlot*> fields;
    for (const auto& s : field_slots) {
      if (subtype(ct, s.type, goal)) fields.push_back(&s);
    }
    if (!fields.empty()) options.emplace_back(Prod::Field, w.field);
    std::vector<const MethodSlot*> methods;
    for (const auto& s : method_slots) {
      if (subtype(ct, s.header.result, goal)) methods.push_back(&s);
    }
    if (!methods.empty()) options.emplace_back(Prod::Invoke, w.invoke);
    if (f.conditionals) options.emplace_back(Prod::Cond, w.cond);

    while (!options.empty()) {
      int total = 0;
      for (const auto& [p, weight] : options) total += std::max(weight, 0);
      if (total <= 0) break;
      int roll = static_cast<int>(below(rng, static_cast<std::size_t>(total)));
      std::size_t chosen = 0;
      for (; chosen < options.size(); ++chosen) {
        roll -= std::max(options[chosen].second, 0);
        if (roll < 0) break;
      }
      std::optional<Gen> g;
      switch (options[chosen].first) {
        case Prod::Var: {
          const Name& x = pick(rng, vars);
          g = Gen{make_var(x), *env.lookup(x)};
          break;
        }
        case Prod::Literal:
          g = Gen{make_bool(chance(rng, 50)), goal};
          break;
        case Prod::Create:
          g = create(env, pick(rng, creatable), depth);
          break;
        case Prod::Lambda:
          g = lambda(env, goal, depth);
          break;
        case Prod::Field:
          g = field(env, *pick(rng, fields), depth);
          break;
        case Prod::Invoke:
          g = invoke(env, *pick(rng, methods), depth);
          break;
        case Prod::Cast:
          g = cast(env, goal, depth);
          break;
        case Prod::Cond:
          g = cond(env, goal, depth, poly);
          break;
      }
      if (g) return g;
      options.erase(options.begin() + static_cast<long>(chosen));
    }
    return leaf(env, goal, poly);
  }

  std::optional<std::vector<Term>> args_for(const TypeEnv& env, const std::vector<PreType>& types,
                                            int depth) {
    std::vector<Term> out;
    for (const auto& t : types) {
      auto a = check(env, t, depth - 1, true);
      if (!a) return std::nullopt;
      out.push_back(a->term);
    }
    return out;
  }

  std::optional<Gen> create(const TypeEnv& env, const Name& d, int depth) {
    std::vector<PreType> types;
    for (const auto& f : ct.fields(d)) types.push_back(f.type);
    auto args = args_for(env, types, depth);
    if (!args) return std::nullopt;
    return Gen{make_new(d, std::move(*args)), PreType::nominal(d)};
  }

  std::optional<Gen> lambda(const TypeEnv& env, const PreType& goal, int depth) {
    auto h = *ct.functional_header(goal);
    const bool typed = chance(rng, 40);
    std::vector<Param> params;
    TypeEnv inner = env;
    for (const auto& t : h.param_types()) {
      Name y = fresh_var();
      params.push_back(Param{y, typed ? std::optional<PreType>(t) : std::nullopt});
      inner.bind(y, t);
    }
    auto body = check(inner, h.result, depth - 1, true);
    if (!body) return std::nullopt;
    return Gen{make_lambda(std::move(params), body->term), goal};
  }

  std::optional<Gen> field(const TypeEnv& env, const FieldSlot& s, int depth) {
    auto recv = check(env, PreType::nominal(s.cls), depth - 1, false);
    if (!recv) return std::nullopt;
    return Gen{make_field(recv->term, s.field), s.type};
  }

  std::optional<Gen> invoke(const TypeEnv& env, const MethodSlot& s, int depth) {
    auto recv = check(env, s.receiver, depth - 1, false);
    if (!recv) return std::nullopt;
    auto sig = ct.mtype(s.header.name, recv->type);
    if (!sig || sig->result != s.header.result || sig->params != s.header.param_types()) {
      return std::nullopt;
    }
    auto args = args_for(env, sig->params, depth);
    if (!args) return std::nullopt;
    return Gen{make_invoke(recv->term, s.header.name, std::move(*args)), s.header.result};
  }

  std::optional<Gen> cast(const TypeEnv& env, const PreType& goal, int depth) {
    std::vector<PreType> targets;
    for (const auto& t : universe) {
      if (subtype(ct, t, goal)) targets.push_back(t);
    }
    if (targets.empty()) return std::nullopt;
    const PreType target = pick(rng, targets);
    if (cfg.features.udcast && chance(rng, 40)) {
      std::vector<Name> chain;
      for (Name k = class_component(ct, target);; k = ct.find_class(k)->superclass) {
        chain.push_back(k);
        if (k == kObject) break;
      }
      auto op = check(env, PreType::nominal(pick(rng, chain)), depth - 1, false);
      if (op && !op->type.is_boolean() && !subtype(ct, op->type, target)) {
        Name a = class_component(ct, target);
        Name b = class_component(ct, op->type);
        if (ct.nominal_subtype(a, b) || ct.nominal_subtype(b, a)) {
          return Gen{make_cast(target, op->term), target};
        }
      }
    }
    auto op = check(env, target, depth - 1, true);
    if (!op) return std::nullopt;
    return Gen{make_cast(target, op->term), target};
  }

  std::optional<Gen> cond(const TypeEnv& env, const PreType& goal, int depth, bool poly) {
    auto g = check(env, PreType::boolean(), depth - 1, false);
    if (!g) return std::nullopt;
    auto a = check(env, goal, depth - 1, poly);
    if (!a) return std::nullopt;
    auto b = check(env, goal, depth - 1, poly);
    if (!b) return std::nullopt;
    auto joined = lub(ct, a->type, b->type);
    // The join of two types need not have a defined header union once
    // default methods are present; such conditionals are not generated.
    if (!joined || !ct.is_type(*joined)) return std::nullopt;
    return Gen{make_cond(g->term, a->term, b->term), *joined};
  }

  PreType random_goal() {
    if (cfg.features.conditionals && chance(rng, 10)) return PreType::boolean();
    return pick(rng, universe);
  }

  Term value(const PreType& goal, int depth) {
    if (goal.is_boolean()) return make_bool(chance(rng, 50));
    if (depth <= 0) return witness(goal, true)->term;
    std::vector<Name> creatable;
    for (const auto& d : classes) {
      if (ncost[d] < kInf && subtype(ct, PreType::nominal(d), goal)) creatable.push_back(d);
    }
    const bool lam = lambda_cost(goal) < kInf;
    if (lam && (creatable.empty() || chance(rng, 50))) {
      if (auto g = lambda(TypeEnv{}, goal, depth)) return g->term;
    }
    if (creatable.empty()) return witness(goal, true)->term;
    const Name d = pick(rng, creatable);
    std::vector<Term> args;
    for (const auto& f : ct.fields(d)) args.push_back(value(f.type, depth - 1));
    return make_new(d, std::move(args));
  }
};

TermGenerator::TermGenerator(ClassTable ct, GenConfig cfg, std::uint64_t seed)
    : impl_(std::make_shared<Impl>(std::move(ct), cfg, seed)) {}

const std::vector<PreType>& TermGenerator::inhabited_types() const { return impl_->universe; }

const ClassTable& TermGenerator::table() const { return impl_->ct; }

std::optional<int> TermGenerator::cost(const PreType& t) const {
  int c = impl_->cost_of(t);
  if (c >= kInf) return std::nullopt;
  return c;
}

TypedTerm TermGenerator::typed_term() { return typed_term(TypeEnv{}, impl_->cfg.max_term_depth); }

TypedTerm TermGenerator::typed_term(const TypeEnv& env, int depth) {
  for (int attempt = 0; attempt < impl_->cfg.max_attempts; ++attempt) {
    PreType goal = impl_->random_goal();
    if (auto g = impl_->check(env, goal, depth, false)) return TypedTerm{g->term, g->type};
  }
  throw GenerationError("no term could be generated");
}

TypedTerm TermGenerator::checked_term(const TypeEnv& env, const PreType& goal, int depth) {
  auto g = impl_->check(env, goal, depth, true);
  if (!g) throw GenerationError("no term of type " + pretty(goal));
  return TypedTerm{g->term, g->type};
}

Term TermGenerator::value(const PreType& goal, int depth) {
  if (!cost(goal)) throw GenerationError("type " + pretty(goal) + " is not inhabited");
  return impl_->value(goal, depth);
}

SubstitutionInstance TermGenerator::substitution_instance() {
  auto& rng = impl_->rng;
  SubstitutionInstance out{TypeEnv{}, "z", PreType::boolean(), make_bool(true),
                           PreType::boolean(), make_bool(true)};
  std::vector<PreType> nominal;
  for (const auto& t : impl_->universe) {
    if (t.is_nominal()) nominal.push_back(t);
  }
  if (!impl_->cfg.features.conditionals || !chance(rng, 10)) out.var_type = pick(rng, nominal);
  out.env.bind(out.var, out.var_type);
  if (chance(rng, 50)) out.env.bind("w", pick(rng, nominal));
  // Bias the productions toward the substituted variable.
  Weights saved = impl_->cfg.weights;
  impl_->cfg.weights.var *= 3;
  TypedTerm t = typed_term(out.env, impl_->cfg.max_term_depth);
  impl_->cfg.weights = saved;
  out.term = t.term;
  out.term_type = t.type;
  out.value = value(out.var_type, impl_->cfg.max_term_depth - 1);
  return out;
}

TypedTerm gen_typed_term(const GenConfig& cfg, const ClassTable& ct) {
  return TermGenerator(ct, cfg, cfg.seed).typed_term();
}

// ---------------------------------------------------------------------------
// Tables

namespace {

struct Sig {
  Name name;
  PreType result;
  std::vector<PreType> params;

  MethodHeader header() const {
    MethodHeader h{result, name, {}, {}};
    for (std::size_t i = 0; i < params.size(); ++i) {
      h.params.push_back(TypedName{params[i], "x" + std::to_string(i + 1)});
    }
    return h;
  }
};

struct IfaceSpec {
  Name name;
  std::vector<Name> extends;
  std::vector<std::pair<Name, bool>> members;  // (method, is default)
};

struct ClassSpec {
  Name name;
  Name super = kObject;
  std::vector<Name> implements;
  std::vector<TypedName> fields;
  std::vector<Name> methods;
};

struct Skeleton {
  std::vector<IfaceSpec> ifaces;
  std::vector<ClassSpec> classes;
  std::map<Name, Sig> pool;
  // Interleaving of declarations: true for an interface.
  std::vector<bool> order;

  std::vector<Decl> assemble(const std::map<Name, Term>& bodies = {}) const {
    auto body_of = [&](const Name& owner, const Name& m) {
      auto it = bodies.find(owner + "." + m);
      return it == bodies.end() ? make_new(kObject) : it->second;
    };
    std::map<Name, std::vector<TypedName>> all_fields;
    std::vector<Decl> out;
    std::size_t ni = 0;
    std::size_t nc = 0;
    for (bool is_iface : order) {
      if (is_iface) {
        const IfaceSpec& s = ifaces[ni++];
        InterfaceDecl d{s.name, s.extends, {}, {}, {}};
        for (const auto& [m, is_default] : s.members) {
          if (is_default) {
            d.defaults.push_back(MethodDecl{pool.at(m).header(), body_of(s.name, m)});
          } else {
            d.abstracts.push_back(pool.at(m).header());
          }
        }
        out.emplace_back(std::move(d));
      } else {
        const ClassSpec& s = classes[nc++];
        auto inherited = s.super == kObject ? std::vector<TypedName>{} : all_fields.at(s.super);
        ClassDecl d{s.name, s.super, s.implements, s.fields,
                    canonical_ctor(s.name, inherited, s.fields), {}, {}};
        for (const auto& m : s.methods) {
          d.methods.push_back(MethodDecl{pool.at(m).header(), body_of(s.name, m)});
        }
        auto all = inherited;
        all.insert(all.end(), s.fields.begin(), s.fields.end());
        all_fields[s.name] = std::move(all);
        out.emplace_back(std::move(d));
      }
    }
    return out;
  }
};

std::vector<Name> distinct_pick(std::mt19937_64& rng, const std::vector<Name>& from,
                                std::size_t count) {
  std::vector<Name> pool = from;
  std::vector<Name> out;
  while (out.size() < count && !pool.empty()) {
    std::size_t i = below(rng, pool.size());
    out.push_back(pool[i]);
    pool.erase(pool.begin() + static_cast<long>(i));
  }
  return out;
}

Skeleton draw_skeleton(const GenConfig& cfg, std::mt19937_64& rng) {
  Skeleton sk;
  const int nc = 1 + static_cast<int>(below(rng, static_cast<std::size_t>(cfg.max_classes)));
  const int ni = static_cast<int>(below(rng, static_cast<std::size_t>(cfg.max_interfaces) + 1));
  std::map<Name, int> depth;
  std::vector<Name> iface_names;
  for (int k = 0; k < ni; ++k) {
    IfaceSpec s{"I" + std::to_string(k + 1), {}, {}};
    std::vector<Name> eligible;
    for (const auto& n : iface_names) {
      if (depth[n] < cfg.max_hierarchy_depth) eligible.push_back(n);
    }
    s.extends = distinct_pick(rng, eligible, below(rng, 3));
    int d = 1;
    for (const auto& p : s.extends) d = std::max(d, depth[p] + 1);
    depth[s.name] = d;
    iface_names.push_back(s.name);
    sk.ifaces.push_back(std::move(s));
  }
  std::vector<Name> class_names;
  for (int k = 0; k < nc; ++k) {
    ClassSpec s;
    s.name = "C" + std::to_string(k + 1);
    std::vector<Name> eligible;
    for (const auto& n : class_names) {
      if (depth[n] < cfg.max_hierarchy_depth) eligible.push_back(n);
    }
    if (!eligible.empty() && chance(rng, 60)) s.super = pick(rng, eligible);
    depth[s.name] = s.super == kObject ? 1 : depth[s.super] + 1;
    s.implements = distinct_pick(rng, iface_names, below(rng, 3));
    class_names.push_back(s.name);
    sk.classes.push_back(std::move(s));
  }

  std::vector<PreType> slots{PreType::nominal(kObject)};
  for (const auto& n : class_names) slots.push_back(PreType::nominal(n));
  for (const auto& n : iface_names) slots.push_back(PreType::nominal(n));
  if (cfg.features.conditionals) slots.push_back(PreType::boolean());

  const int nm = 1 + static_cast<int>(below(rng, static_cast<std::size_t>(cfg.max_methods)));
  std::vector<Name> method_names;
  for (int j = 0; j < nm; ++j) {
    Sig s{"m" + std::to_string(j + 1), pick(rng, slots), {}};
    const auto np = below(rng, static_cast<std::size_t>(cfg.max_params) + 1);
    for (std::size_t p = 0; p < np; ++p) s.params.push_back(pick(rng, slots));
    method_names.push_back(s.name);
    sk.pool.emplace(s.name, std::move(s));
  }
  for (auto& s : sk.ifaces) {
    for (const auto& m : distinct_pick(rng, method_names, below(rng, 3))) {
      s.members.emplace_back(m, cfg.features.defaults && chance(rng, 40));
    }
  }
  int field_counter = 0;
  for (auto& s : sk.classes) {
    const auto nf = below(rng, static_cast<std::size_t>(cfg.max_fields) + 1);
    for (std::size_t i = 0; i < nf; ++i) {
      s.fields.push_back(TypedName{pick(rng, slots), "f" + std::to_string(++field_counter)});
    }
    s.methods = distinct_pick(rng, method_names, below(rng, 3));
  }
  // Interleave declarations, keeping each kind in its own order.
  sk.order.assign(sk.ifaces.size(), true);
  sk.order.insert(sk.order.end(), sk.classes.size(), false);
  for (std::size_t i = sk.order.size(); i > 1; --i) {
    std::swap(sk.order[i - 1], sk.order[below(rng, i)]);
  }
  return sk;
}

// Removes header conflicts and adds methods for inherited abstract headers.
bool repair(Skeleton& sk, std::mt19937_64& rng) {
  for (int round = 0; round < 200; ++round) {
    ClassTable ct(sk.assemble());
    std::optional<std::pair<Name, Name>> conflict;  // (decl, method)
    for (const auto& n : ct.nominal_names()) {
      auto look = ct.mh_lookup(PreType::nominal(n));
      if (!look.defined()) {
        conflict.emplace(n, look.conflict->method);
        break;
      }
    }
    if (!conflict) break;
    std::vector<IfaceSpec*> owners;
    for (auto& s : sk.ifaces) {
      bool related = s.name == conflict->first || ct.supertypes(conflict->first).contains(s.name);
      bool declares = std::any_of(s.members.begin(), s.members.end(),
                                  [&](const auto& m) { return m.first == conflict->second; });
      if (related && declares) owners.push_back(&s);
    }
    if (owners.empty()) return false;
    auto& members = pick(rng, owners)->members;
    std::erase_if(members, [&](const auto& m) { return m.first == conflict->second; });
  }
  for (auto& c : sk.classes) {
    ClassTable ct(sk.assemble());
    PreType self = PreType::nominal(c.name);
    auto mh = ct.mh(self);
    if (!mh) return false;
    try {
      for (const auto& h : mh->headers()) {
        if (!ct.mbody(h.name, self)) c.methods.push_back(h.name);
      }
    } catch (const LookupError&) {
      return false;
    }
  }
  return true;
}

// Replaces uninhabited slot types by Object until every slot is inhabited.
void ensure_inhabited(Skeleton& sk, const GenConfig& cfg) {
  for (bool changed = true; changed;) {
    changed = false;
    TermGenerator gen(ClassTable(sk.assemble()), cfg, 0);
    auto fix = [&](PreType& t) {
      if (!gen.cost(t)) {
        t = PreType::nominal(kObject);
        changed = true;
      }
    };
    for (auto& c : sk.classes) {
      for (auto& f : c.fields) fix(f.type);
    }
    for (auto& [name, sig] : sk.pool) {
      fix(sig.result);
      for (auto& p : sig.params) fix(p);
    }
  }
}

std::optional<ClassTable> try_table(const GenConfig& cfg, std::mt19937_64& rng) {
  Skeleton sk = draw_skeleton(cfg, rng);
  if (!repair(sk, rng)) return std::nullopt;
  ensure_inhabited(sk, cfg);
  ClassTable skeleton(sk.assemble());
  TermGenerator gen(skeleton, cfg, rng());
  const int depth = std::max(1, cfg.max_term_depth - 1);
  std::map<Name, Term> bodies;
  auto body = [&](const Name& owner, const Sig& sig) {
    MethodHeader h = sig.header();
    TypeEnv env;
    for (const auto& p : h.params) env.bind(p.name, p.type);
    env.bind(kThis, PreType::nominal(owner));
    bodies.emplace(owner + "." + sig.name, gen.checked_term(env, h.result, depth).term);
  };
  try {
    for (const auto& c : sk.classes) {
      for (const auto& m : c.methods) body(c.name, sk.pool.at(m));
    }
    for (const auto& i : sk.ifaces) {
      for (const auto& [m, is_default] : i.members) {
        if (is_default) body(i.name, sk.pool.at(m));
      }
    }
  } catch (const GenerationError&) {
    return std::nullopt;
  }
  ClassTable ct(sk.assemble(bodies));
  if (!ok_table(ct).empty()) return std::nullopt;
  return ct;
}

}  // namespace

ClassTable gen_table(const GenConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
    if (auto ct = try_table(cfg, rng)) return *ct;
  }
  throw GenerationError("no well-formed table after " + std::to_string(cfg.max_attempts) +
                        " attempts");
}

}  // namespace fjl::harness
