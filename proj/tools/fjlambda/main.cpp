#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fjl/evaluator.hpp"
#include "fjl/harness/runner.hpp"
#include "fjl/parser.hpp"
#include "fjl/typing.hpp"
#include "fjl/well_formedness.hpp"

using nlohmann::json;

namespace {

enum Exit { kOk = 0, kRejected = 1, kStuck = 2, kUsage = 3, kBudget = 4 };

constexpr std::size_t kDefaultMaxSteps = 10000;

struct Input {
  std::string file;
  std::string term;
  bool json = false;
  bool stupid_cast = false;
};

std::size_t default_max_steps() {
  if (const char* env = std::getenv("FJL_MAX_STEPS")) {
    try {
      return static_cast<std::size_t>(std::stoull(env));
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring malformed FJL_MAX_STEPS='" << env << "'\n";
    }
  }
  return kDefaultMaxSteps;
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json pos_json(fjl::SourcePos p) { return {{"line", p.line}, {"column", p.column}}; }

// Parses the file and resolves the term to work on. Returns an exit code
// on failure.
struct Loaded {
  fjl::SourceProgram program;
  std::optional<fjl::Term> term;
};

std::variant<Loaded, int> load(const Input& in, bool need_term) {
  auto text = read_file(in.file);
  if (!text) {
    std::cerr << "error: cannot read '" << in.file << "'\n";
    return kUsage;
  }
  Loaded out;
  try {
    out.program = fjl::parse_program(*text);
  } catch (const fjl::ParseError& e) {
    std::cerr << in.file << ":" << e.pos().line << ":" << e.pos().column << ": error: "
              << e.message() << "\n";
    return kRejected;
  }
  out.term = out.program.main;
  if (!in.term.empty()) {
    try {
      out.term = fjl::parse_term(in.term);
    } catch (const fjl::ParseError& e) {
      std::cerr << "<term>:" << e.pos().line << ":" << e.pos().column << ": error: "
                << e.message() << "\n";
      return kRejected;
    }
  }
  if (need_term && !out.term) {
    std::cerr << "error: no term given; pass -e TERM or add 'main = <term>;' to the file\n";
    return kUsage;
  }
  return out;
}

json finding_json(const fjl::WellFormednessError& e) {
  return {{"decl", e.decl},         {"method", e.method}, {"premise", e.premise},
          {"detail", e.detail},     {"position", pos_json(e.pos)}};
}

// Prints table problems; true when there were none.
bool report_table(const fjl::ProgramCheck& pc, bool as_json, json* sink) {
  if (as_json) {
    json findings = json::array();
    for (const auto& f : pc.table_findings) findings.push_back(finding_json(f));
    if (pc.table_error) (*sink)["table_error"] = *pc.table_error;
    (*sink)["findings"] = findings;
  } else {
    if (pc.table_error) std::cout << "table error: " << *pc.table_error << "\n";
    for (const auto& f : pc.table_findings) std::cout << fjl::describe(f) << "\n";
  }
  return !pc.table_error && pc.table_findings.empty();
}

std::string error_line(const fjl::TypeError& e) {
  return "error: " + e.detail + " (" + fjl::to_string(e.kind) + ")";
}

json error_json(const fjl::TypeError& e) {
  return {{"kind", fjl::to_string(e.kind)},
          {"detail", e.detail},
          {"rule", e.rule},
          {"position", pos_json(e.pos)}};
}

int cmd_check(const Input& in) {
  auto loaded = load(in, false);
  if (auto* rc = std::get_if<int>(&loaded)) return *rc;
  auto& prog = std::get<Loaded>(loaded).program;
  fjl::ProgramCheck pc = fjl::check_program(fjl::SourceProgram{prog.decls, std::nullopt},
                                            fjl::TypingOptions{in.stupid_cast});
  json out;
  const bool ok = report_table(pc, in.json, &out);
  if (in.json) {
    out["ok"] = ok;
    std::cout << out.dump(2) << "\n";
  } else if (ok) {
    std::cout << "OK\n";
  }
  return ok ? kOk : kRejected;
}

int cmd_type(const Input& in, bool trace_rules) {
  auto loaded = load(in, true);
  if (auto* rc = std::get_if<int>(&loaded)) return *rc;
  auto& l = std::get<Loaded>(loaded);
  fjl::ProgramCheck pc = fjl::check_program(fjl::SourceProgram{l.program.decls, l.term},
                                            fjl::TypingOptions{in.stupid_cast});
  json out;
  if (!report_table(pc, in.json, &out)) {
    if (in.json) {
      out["ok"] = false;
      std::cout << out.dump(2) << "\n";
    }
    return kRejected;
  }
  const fjl::Judgement& j = *pc.judgement;
  if (in.json) {
    out["ok"] = j.ok();
    out["term"] = fjl::pretty(*l.term);
    if (j.ok()) {
      out["type"] = fjl::pretty(j.type());
      out["rule_trace"] = j.rule_trace;
    } else {
      out["error"] = error_json(j.error());
    }
    std::cout << out.dump(2) << "\n";
    return j.ok() ? kOk : kRejected;
  }
  if (!j.ok()) {
    std::cout << error_line(j.error()) << "\n";
    return kRejected;
  }
  std::cout << fjl::pretty(j.type()) << "\n";
  if (trace_rules) {
    for (const auto& r : j.rule_trace) std::cout << r << "\n";
  }
  return kOk;
}

struct EvalFlags {
  bool trace = false;
  bool unsafe = false;
  std::optional<std::size_t> max_steps;
};

int cmd_eval(const Input& in, const EvalFlags& flags) {
  auto loaded = load(in, true);
  if (auto* rc = std::get_if<int>(&loaded)) return *rc;
  auto& l = std::get<Loaded>(loaded);
  json out;
  std::optional<fjl::ClassTable> ct;
  if (flags.unsafe) {
    try {
      ct.emplace(l.program.decls);
    } catch (const fjl::TableError& e) {
      std::cerr << "table error: " << e.what() << "\n";
      return kRejected;
    }
    if (!fjl::free_vars(*l.term).empty()) {
      std::cerr << "error: cannot evaluate a term with free variable '"
                << *fjl::free_vars(*l.term).begin() << "'\n";
      return kRejected;
    }
  } else {
    fjl::ProgramCheck pc = fjl::check_program(fjl::SourceProgram{l.program.decls, l.term},
                                              fjl::TypingOptions{in.stupid_cast});
    if (!report_table(pc, in.json, &out) || !pc.judgement->ok()) {
      if (in.json) {
        out["outcome"] = "rejected";
        if (pc.judgement && !pc.judgement->ok()) out["error"] = error_json(pc.judgement->error());
        std::cout << out.dump(2) << "\n";
      } else if (pc.judgement && !pc.judgement->ok()) {
        std::cout << error_line(pc.judgement->error()) << "\n";
      }
      return kRejected;
    }
    ct.emplace(l.program.decls);
  }

  fjl::EvalOptions opts;
  opts.max_steps = flags.max_steps.value_or(default_max_steps());
  fjl::EvalResult r = fjl::Evaluator(*ct, opts).eval(*l.term);

  if (in.json) {
    json steps = json::array();
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
      steps.push_back({{"term", fjl::pretty(r.trace[i])},
                       {"rule", i == 0 ? json(nullptr) : json(r.rules[i - 1])}});
    }
    out["outcome"] = fjl::to_string(r.outcome);
    out["final"] = fjl::pretty(r.final);
    out["steps"] = r.steps();
    out["trace"] = steps;
    if (r.stuck) {
      out["stuck"] = {{"kind", fjl::to_string(r.stuck->kind)},
                      {"reason", fjl::describe(*r.stuck)}};
    }
    std::cout << out.dump(2) << "\n";
  } else {
    if (flags.trace) {
      std::cout << fjl::pretty(r.trace.front()) << "\n";
      for (std::size_t i = 1; i < r.trace.size(); ++i) {
        std::cout << "  [" << r.rules[i - 1] << "] " << fjl::pretty(r.trace[i]) << "\n";
      }
    }
    switch (r.outcome) {
      case fjl::EvalResult::Outcome::Value:
        if (flags.trace) {
          std::cout << "value after " << r.steps() << " step" << (r.steps() == 1 ? "" : "s")
                    << ": ";
        }
        std::cout << fjl::pretty(r.final) << "\n";
        break;
      case fjl::EvalResult::Outcome::Stuck:
        std::cout << "stuck: " << fjl::describe(*r.stuck) << "\n";
        if (!flags.trace) std::cout << "  at " << fjl::pretty(r.final) << "\n";
        break;
      case fjl::EvalResult::Outcome::BudgetExhausted:
        std::cout << (r.term_too_large ? "term size limit reached after "
                                       : "step budget exhausted after ")
                  << r.steps() << " step" << (r.steps() == 1 ? "" : "s") << "\n";
        break;
    }
  }
  switch (r.outcome) {
    case fjl::EvalResult::Outcome::Value:
      return kOk;
    case fjl::EvalResult::Outcome::Stuck:
      return kStuck;
    case fjl::EvalResult::Outcome::BudgetExhausted:
      return kBudget;
  }
  return kOk;
}

struct FuzzFlags {
  std::string property;
  std::uint64_t seed = 1;
  int runs = 100;
  std::string features;
  unsigned threads = 0;
  std::string corpus = "fjl-counterexamples";
  bool no_shrink = false;
  std::optional<std::size_t> max_steps;
  bool json = false;
};

int cmd_fuzz(const FuzzFlags& f) {
  auto property = fjl::harness::parse_property(f.property);
  if (!property) {
    std::cerr << "error: unknown property '" << f.property << "'\n";
    return kUsage;
  }
  fjl::harness::RunConfig cfg;
  cfg.property = *property;
  cfg.seed = f.seed;
  cfg.runs = f.runs;
  cfg.threads = f.threads;
  cfg.shrink = !f.no_shrink;
  cfg.budget = f.max_steps.value_or(default_max_steps());
  if (!f.corpus.empty()) cfg.corpus_dir = f.corpus;
  if (*property == fjl::harness::Property::StuckClassification) cfg.gen.features.udcast = true;
  try {
    cfg.gen.features = fjl::harness::parse_features(f.features, cfg.gen.features);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  fjl::harness::RunReport report;
  try {
    report = fjl::harness::run_property(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  if (f.json) {
    json ces = json::array();
    for (const auto& ce : report.counterexamples) ces.push_back(json::parse(to_json(ce)));
    json saved = json::array();
    for (const auto& p : report.saved) saved.push_back(p.string());
    std::cout << json{{"property", f.property},
                      {"seed", f.seed},
                      {"features", fjl::harness::to_string(cfg.gen.features)},
                      {"runs", report.runs},
                      {"passed", report.passed},
                      {"inconclusive", report.inconclusive},
                      {"skipped", report.skipped},
                      {"counterexamples", ces},
                      {"saved", saved}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << f.property << ": " << report.passed << "/" << report.runs << " passed";
    if (report.inconclusive) std::cout << ", " << report.inconclusive << " inconclusive";
    if (report.skipped) std::cout << ", " << report.skipped << " skipped";
    std::cout << "\n";
    for (const auto& ce : report.counterexamples) {
      std::cout << "counterexample (seed " << ce.seed << (ce.shrunk ? ", shrunk" : "")
                << "): " << ce.witness << "\n";
    }
    for (const auto& p : report.saved) std::cout << "saved " << p.string() << "\n";
  }
  return report.ok() ? kOk : kRejected;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Type checker and interpreter for Featherweight Java with lambdas and intersections"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "fjlambda 0.1.0");

  Input in;
  bool trace_rules = false;
  EvalFlags eval_flags;
  FuzzFlags fuzz;

  auto* check = app.add_subcommand("check", "Check that a class table is well formed");
  check->add_option("file", in.file, "Program file")->required();
  check->add_flag("--json", in.json, "Print a JSON report");

  auto* type = app.add_subcommand("type", "Infer the type of a term");
  type->add_option("file", in.file, "Program file")->required();
  type->add_option("-e,--expr", in.term, "Term to type; overrides the file's main clause");
  type->add_flag("--json", in.json, "Print a JSON report");
  type->add_flag("--trace-rules", trace_rules, "Print the rules of the derivation in post-order");
  type->add_flag("--stupid-cast", in.stupid_cast, "Accept casts between unrelated classes");

  auto* eval = app.add_subcommand("eval", "Evaluate a term");
  eval->add_option("file", in.file, "Program file")->required();
  eval->add_option("-e,--expr", in.term, "Term to evaluate; overrides the file's main clause");
  eval->add_flag("--trace", eval_flags.trace, "Print every step with the rule that fired");
  eval->add_option("--max-steps", eval_flags.max_steps, "Step budget (default 10000 or $FJL_MAX_STEPS)");
  eval->add_flag("--json", in.json, "Print a JSON report");
  eval->add_flag("--unsafe", eval_flags.unsafe, "Evaluate without type checking first");
  eval->add_flag("--stupid-cast", in.stupid_cast, "Type check accepting casts between unrelated classes");

  auto* fz = app.add_subcommand("fuzz", "Check a metatheory property on generated programs");
  fz->add_option("--property", fuzz.property,
                 "subject-reduction, progress, substitution, lookup-lemmas or stuck-classification")
      ->required();
  fz->add_option("--seed", fuzz.seed, "Base seed");
  fz->add_option("--runs", fuzz.runs, "Number of generated samples")->check(CLI::NonNegativeNumber);
  fz->add_option("--features", fuzz.features, "Feature toggles, e.g. +udcast,-lambdas");
  fz->add_option("--threads", fuzz.threads, "Worker threads (default: hardware concurrency)");
  fz->add_option("--corpus", fuzz.corpus, "Directory for counterexamples (empty: do not save)");
  fz->add_flag("--no-shrink", fuzz.no_shrink, "Report counterexamples unshrunk");
  fz->add_option("--max-steps", fuzz.max_steps, "Step budget per sample");
  fz->add_flag("--json", fuzz.json, "Print a JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*check) return cmd_check(in);
    if (*type) return cmd_type(in, trace_rules);
    if (*eval) return cmd_eval(in, eval_flags);
    if (*fz) return cmd_fuzz(fuzz);
  } catch (const fjl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRejected;
  }
  return kUsage;
}
