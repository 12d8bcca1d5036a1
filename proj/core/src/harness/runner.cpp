#include "fjl/harness/runner.hpp"

#include <atomic>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "fjl/parser.hpp"
#include "fjl/typing.hpp"
#include "fjl/well_formedness.hpp"

namespace fjl::harness {

namespace {

constexpr std::uint64_t kTermSalt = 0x9e3779b97f4a7c15ULL;

std::vector<Term> children(const Term& t) {
  std::vector<Term> out;
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, FieldAccess>) {
          out.push_back(n.object);
        } else if constexpr (std::is_same_v<N, Invoke>) {
          out.push_back(n.receiver);
          out.insert(out.end(), n.args.begin(), n.args.end());
        } else if constexpr (std::is_same_v<N, New>) {
          out = n.args;
        } else if constexpr (std::is_same_v<N, Cast>) {
          out.push_back(n.operand);
        } else if constexpr (std::is_same_v<N, PureLambda> || std::is_same_v<N, DecoratedLambda>) {
          out.push_back(n.body);
        } else if constexpr (std::is_same_v<N, Cond>) {
          out = {n.guard, n.then_branch, n.else_branch};
        }
      },
      t.node());
  return out;
}

Term rebuild(const Term& t, std::vector<Term> kids) {
  return std::visit(
      [&](const auto& n) -> Term {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, FieldAccess>) {
          return make_field(kids[0], n.field);
        } else if constexpr (std::is_same_v<N, Invoke>) {
          Term recv = kids[0];
          kids.erase(kids.begin());
          return make_invoke(recv, n.method, std::move(kids));
        } else if constexpr (std::is_same_v<N, New>) {
          return make_new(n.class_name, std::move(kids));
        } else if constexpr (std::is_same_v<N, Cast>) {
          return make_cast(n.type, kids[0]);
        } else if constexpr (std::is_same_v<N, PureLambda>) {
          return make_lambda(n.params, kids[0]);
        } else if constexpr (std::is_same_v<N, DecoratedLambda>) {
          return make_decorated(n.params, kids[0], n.target);
        } else if constexpr (std::is_same_v<N, Cond>) {
          return make_cond(kids[0], kids[1], kids[2]);
        } else {
          return t;
        }
      },
      t.node());
}

// Terms obtained by replacing one subterm of `t` by something smaller.
std::vector<Term> one_step_shrinks(const Term& t) {
  std::vector<Term> out;
  const std::size_t size = term_size(t);
  auto offer = [&](const Term& c) {
    if (term_size(c) < size) out.push_back(c);
  };
  const auto kids = children(t);
  for (const auto& k : kids) offer(k);
  if (!t.is<New>() || !t.as<New>()->args.empty()) offer(make_new(kObject));
  if (!t.is<BoolLit>()) {
    offer(make_bool(true));
    offer(make_bool(false));
  }
  for (std::size_t i = 0; i < kids.size(); ++i) {
    for (const auto& c : one_step_shrinks(kids[i])) {
      auto next = kids;
      next[i] = c;
      out.push_back(rebuild(t, std::move(next)));
    }
  }
  return out;
}

TypeEnv parse_environment(const std::string& text) {
  TypeEnv env;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos) continue;
    std::string name = item.substr(0, colon);
    name.erase(0, name.find_first_not_of(' '));
    name.erase(name.find_last_not_of(' ') + 1);
    env.bind(name, parse_pretype(item.substr(colon + 1)));
  }
  return env;
}

std::string environment_source(const TypeEnv& env) {
  std::string out;
  for (const auto& [x, t] : env.bindings()) {
    if (!out.empty()) out += ", ";
    out += x + " : " + pretty(t);
  }
  return out;
}

Outcome check_term_property(Property p, const ClassTable& ct, const Term& t, std::size_t budget) {
  switch (p) {
    case Property::SubjectReduction:
      return check_subject_reduction(ct, t, budget);
    case Property::Progress:
      return check_progress(ct, t, budget);
    case Property::StuckClassification:
      return check_stuck_classification(ct, t, budget);
    default:
      break;
  }
  throw std::logic_error("not a term property");
}

struct Subject {
  std::vector<Decl> decls;
  std::optional<Term> term;
};

Outcome check_subject(const CounterExample& ce, const Subject& s, std::size_t budget) {
  std::optional<ClassTable> ct;
  try {
    ct.emplace(s.decls);
  } catch (const TableError& e) {
    return {Verdict::Excluded, e.what()};
  }
  if (!ok_table(*ct).empty()) return {Verdict::Excluded, "table is not well formed"};
  switch (ce.property) {
    case Property::LookupLemmas:
      return check_lookup_lemmas(*ct);
    case Property::Substitution: {
      TypeEnv env = parse_environment(ce.environment);
      const PreType* var_type = env.lookup(ce.variable);
      if (!var_type) return {Verdict::Excluded, "variable is not bound"};
      SubstitutionInstance inst{env,      ce.variable, *var_type, *s.term,
                                *var_type, parse_term(ce.value_source)};
      return check_substitution_lemma(*ct, inst);
    }
    default:
      return check_term_property(ce.property, *ct, *s.term, budget);
  }
}

Subject parse_subject(const CounterExample& ce) {
  Subject s{parse_program(ce.table_source).decls, std::nullopt};
  if (!ce.term_source.empty()) s.term = parse_term(ce.term_source);
  return s;
}

std::string decls_source(const std::vector<Decl>& decls) {
  return pretty(SourceProgram{decls, std::nullopt});
}

// Candidate subjects one shrink step away from `s`.
std::vector<Subject> candidates(const Subject& s) {
  std::vector<Subject> out;
  if (s.term) {
    for (const auto& t : one_step_shrinks(*s.term)) out.push_back({s.decls, t});
  }
  for (std::size_t i = 0; i < s.decls.size(); ++i) {
    Subject c = s;
    c.decls.erase(c.decls.begin() + static_cast<long>(i));
    out.push_back(std::move(c));
  }
  for (std::size_t i = 0; i < s.decls.size(); ++i) {
    auto bodies = [&](auto& methods) {
      for (std::size_t m = 0; m < methods.size(); ++m) {
        for (const auto& b : one_step_shrinks(methods[m].body)) {
          Subject c = s;
          auto& target = std::visit(
              [&](auto& d) -> std::vector<MethodDecl>& {
                using D = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<D, ClassDecl>) {
                  return d.methods;
                } else {
                  return d.defaults;
                }
              },
              c.decls[i]);
          target[m].body = b;
          out.push_back(std::move(c));
        }
      }
    };
    if (auto* cd = std::get_if<ClassDecl>(&s.decls[i])) {
      bodies(cd->methods);
    } else {
      bodies(std::get<InterfaceDecl>(s.decls[i]).defaults);
    }
  }
  return out;
}

}  // namespace

std::string table_source(const ClassTable& ct) { return decls_source(ct.decls()); }

std::uint64_t run_seed(std::uint64_t base, int index) {
  // splitmix64
  std::uint64_t z = base + kTermSalt * static_cast<std::uint64_t>(index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Outcome replay(const CounterExample& ce, std::size_t budget) {
  return check_subject(ce, parse_subject(ce), budget);
}

CounterExample shrink_while(const CounterExample& ce,
                            const std::function<bool(const CounterExample&)>& keep) {
  Subject best = parse_subject(ce);
  CounterExample out = ce;
  bool changed = false;
  for (int round = 0; round < 500; ++round) {
    bool improved = false;
    for (auto& c : candidates(best)) {
      CounterExample next = ce;
      next.table_source = decls_source(c.decls);
      if (c.term) next.term_source = pretty(*c.term);
      bool kept = false;
      try {
        kept = keep(next);
      } catch (const Error&) {
        continue;
      }
      if (kept) {
        best = std::move(c);
        out = std::move(next);
        improved = changed = true;
        break;
      }
    }
    if (!improved) break;
  }
  out.shrunk = changed;
  return out;
}

CounterExample shrink(const CounterExample& ce, std::size_t budget) {
  if (!replay(ce, budget).failed()) return ce;
  CounterExample out =
      shrink_while(ce, [&](const CounterExample& c) { return replay(c, budget).failed(); });
  out.witness = replay(out, budget).witness;
  return out;
}

std::string to_json(const CounterExample& ce) {
  nlohmann::json j = {
      {"property", to_string(ce.property)},
      {"table", ce.table_source},
      {"term", ce.term_source},
      {"witness", ce.witness},
      {"shrunk", ce.shrunk},
      {"seed", ce.seed},
  };
  if (ce.property == Property::Substitution) {
    j["environment"] = ce.environment;
    j["variable"] = ce.variable;
    j["value"] = ce.value_source;
  }
  return j.dump(2);
}

CounterExample load(const std::filesystem::path& json_file) {
  std::ifstream in(json_file);
  nlohmann::json j = nlohmann::json::parse(in);
  CounterExample ce;
  auto p = parse_property(j.at("property").get<std::string>());
  if (!p) throw std::invalid_argument("unknown property in " + json_file.string());
  ce.property = *p;
  ce.table_source = j.at("table").get<std::string>();
  ce.term_source = j.value("term", "");
  ce.environment = j.value("environment", "");
  ce.variable = j.value("variable", "");
  ce.value_source = j.value("value", "");
  ce.witness = j.value("witness", "");
  ce.shrunk = j.value("shrunk", false);
  ce.seed = j.value("seed", std::uint64_t{0});
  return ce;
}

std::vector<std::filesystem::path> save(const CounterExample& ce,
                                        const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::string stem = to_string(ce.property) + "-" + std::to_string(ce.seed);
  const auto fjl = dir / (stem + ".fjl");
  const auto json = dir / (stem + ".json");
  {
    std::ofstream out(fjl);
    out << "// " << to_string(ce.property) << ": " << ce.witness << "\n";
    if (!ce.environment.empty()) out << "// environment: " << ce.environment << "\n";
    if (!ce.value_source.empty()) {
      out << "// substitute " << ce.variable << " := " << ce.value_source << "\n";
    }
    out << ce.table_source;
    if (!ce.term_source.empty()) out << "main = " << ce.term_source << ";\n";
  }
  {
    std::ofstream out(json);
    out << to_json(ce) << "\n";
  }
  return {fjl, json};
}

namespace {

struct Sample {
  Outcome outcome;
  std::optional<CounterExample> ce;
};

Sample run_one(const RunConfig& cfg, int index) {
  const std::uint64_t seed = run_seed(cfg.seed, index);
  GenConfig g = cfg.gen;
  g.seed = seed;
  std::optional<ClassTable> ct;
  try {
    ct.emplace(gen_table(g));
  } catch (const GenerationError& e) {
    return {{Verdict::Excluded, e.what()}, std::nullopt};
  }
  CounterExample ce;
  ce.property = cfg.property;
  ce.seed = seed;
  ce.table_source = table_source(*ct);
  Outcome o;
  try {
    TermGenerator gen(*ct, g, seed ^ kTermSalt);
    if (cfg.property == Property::LookupLemmas) {
      o = check_lookup_lemmas(*ct);
    } else if (cfg.property == Property::Substitution) {
      SubstitutionInstance inst = gen.substitution_instance();
      ce.term_source = pretty(inst.term);
      ce.environment = environment_source(inst.env);
      ce.variable = inst.var;
      ce.value_source = pretty(inst.value);
      o = check_substitution_lemma(*ct, inst);
    } else {
      TypedTerm tt = gen.typed_term();
      ce.term_source = pretty(tt.term);
      Judgement j = t_inf(*ct, TypeEnv{}, tt.term);
      if (!j.ok() || j.type() != tt.type) {
        o = {Verdict::Fail, "generated term does not synthesise its claimed type " +
                                pretty(tt.type)};
      } else {
        o = check_term_property(cfg.property, *ct, tt.term, cfg.budget);
      }
    }
  } catch (const GenerationError& e) {
    return {{Verdict::Excluded, e.what()}, std::nullopt};
  }
  // Generated samples are built to meet the precondition; one that does
  // not is a generator defect and is reported like a violation.
  if (o.verdict == Verdict::Excluded) {
    o = {Verdict::Fail, "precondition not met by generated sample: " + o.witness};
  }
  if (!o.failed()) return {o, std::nullopt};
  ce.witness = o.witness;
  if (cfg.shrink) {
    try {
      ce = shrink(ce, cfg.budget);
    } catch (const Error&) {
      // Keep the unshrunk counterexample.
    }
  }
  return {o, ce};
}

}  // namespace

RunReport run_property(const RunConfig& cfg) {
  if (cfg.gen.features.udcast &&
      (cfg.property == Property::SubjectReduction || cfg.property == Property::Progress)) {
    throw std::invalid_argument("property " + to_string(cfg.property) +
                                " excludes programs typed with T-UDCAST; disable udcast");
  }
  const int runs = std::max(cfg.runs, 0);
  std::vector<Sample> samples(static_cast<std::size_t>(runs));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < runs; i = next++) samples[static_cast<std::size_t>(i)] = run_one(cfg, i);
  };
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max(runs, 1)));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  RunReport report;
  report.runs = runs;
  for (auto& s : samples) {
    switch (s.outcome.verdict) {
      case Verdict::Pass:
        ++report.passed;
        break;
      case Verdict::Inconclusive:
        ++report.inconclusive;
        break;
      case Verdict::Excluded:
        ++report.skipped;
        break;
      case Verdict::Fail:
        report.counterexamples.push_back(*s.ce);
        if (cfg.corpus_dir) {
          for (auto& p : save(*s.ce, *cfg.corpus_dir)) report.saved.push_back(p);
        }
        break;
    }
  }
  return report;
}

}  // namespace fjl::harness
