// SPDX-License-Identifier: Apache-2.0
//
// Batch front door: parse, translate, evaluate, bounded-model-check, and run
// the oracle-equivalence suites.

#include <chrono>
#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "hyperq/arith.hpp"
#include "hyperq/eval.hpp"
#include "hyperq/io.hpp"
#include "hyperq/reductions.hpp"
#include "hyperq/syntax.hpp"
#include "hyperq/verify.hpp"

namespace {

using namespace hyperq;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                     start)
        .count();
  }
};

std::optional<FileLogic> logic_flag(const std::string& tag) {
  if (tag.empty()) return std::nullopt;
  return file_logic_from_string(tag);
}

std::size_t env_cap(std::size_t fallback) {
  if (const char* cap = std::getenv("HYPERQ_CAP")) {
    return static_cast<std::size_t>(std::stoull(cap));
  }
  return fallback;
}

/// Every verdict line carries the bounds it was computed under.
void report_verdict(bool verdict, const UniverseParams& u, const std::string& label) {
  std::cout << "verdict: " << (verdict ? "true" : "false") << " (stem-bound="
            << u.stem_bound << ", loop-bound=" << u.loop_bound << ")" << label << "\n";
  std::cout << "note: propositional/set quantifier domains are bounded lasso "
               "universes; trace quantifiers are exact over the given set\n";
}

int cmd_parse(const std::string& file, const std::string& logic_tag) {
  ParsedFile pf = parse_file(file, logic_flag(logic_tag));
  std::cout << print_any(pf.formula) << "\n";
  return 0;
}

int cmd_translate(const std::string& file, const std::string& from,
                  const std::string& to) {
  FileLogic source = file_logic_from_string(from);
  ParsedFile pf = parse_file(file, source);
  if (from == "h2l" && to == "hqptl+") {
    std::cout << print_formula(h2l_to_hqptlplus(std::get<Formula>(pf.formula))) << "\n";
    return 0;
  }
  if (from == "hqptl+" && to == "h2l") {
    std::cout << print_formula(hqptlplus_to_h2l(std::get<Formula>(pf.formula))) << "\n";
    return 0;
  }
  if (from == "arith" && to == "hyperqptl") {
    std::cout << print_formula(sigma21_to_hyperqptl(std::get<ArithFormula>(pf.formula)))
              << "\n";
    return 0;
  }
  throw Error("unsupported translation " + from + " -> " + to +
              " (supported: h2l->hqptl+, hqptl+->h2l, arith->hyperqptl)");
}

int eval_parsed(const ParsedFile& pf, const TraceSet& model, const UniverseParams& u,
                const std::string& label) {
  const Formula& f = std::get<Formula>(pf.formula);
  EvalParams params(u, model.alphabet());
  params.universe_cap = env_cap(params.universe_cap);
  params.iteration_cap = env_cap(params.iteration_cap);
  Timer timer;
  bool verdict = false;
  switch (pf.logic) {
    case FileLogic::HyperQPTL:
      verdict = eval_hyperqptl(model, f, params);
      break;
    case FileLogic::HyperQPTLPlus:
      verdict = eval_hyperqptl_plus(model, f, params);
      break;
    case FileLogic::Hyper2LTL:
      verdict = eval_hyper2ltl(model, f, params);
      break;
    case FileLogic::Arith:
      throw Error("arithmetic sentences are evaluated with 'hyperq arith-eval'");
  }
  report_verdict(verdict, u, label);
  std::cerr << "time: " << timer.ms() << " ms\n";
  return verdict ? 0 : 0;
}

int cmd_eval(const std::string& file, const std::string& logic_tag,
             const std::string& traces, std::size_t stem, std::size_t loop) {
  ParsedFile pf = parse_file(file, logic_flag(logic_tag));
  TraceSet model = load_trace_set(traces);
  std::cout << "eval " << file << " on " << traces << "\n";
  return eval_parsed(pf, model, UniverseParams(stem, loop), "");
}

int cmd_mc(const std::string& file, const std::string& logic_tag,
           const std::string& system, std::size_t stem, std::size_t loop) {
  ParsedFile pf = parse_file(file, logic_flag(logic_tag));
  TransitionSystem ts = load_system(system);
  UniverseParams u(stem, loop);
  TraceSet model = traces_of_system(ts, u, env_cap(kDefaultUniverseCap));
  std::cout << "mc " << file << " on " << system << " [BOUNDED: " << model.size()
            << " lasso traces, an under-approximation of the trace set]\n";
  return eval_parsed(pf, model, u, " BOUNDED");
}

int cmd_arith_eval(const std::string& file, std::uint64_t domain) {
  ParsedFile pf = parse_file(file, FileLogic::Arith);
  const ArithFormula& f = std::get<ArithFormula>(pf.formula);
  if (!arith_free_vars(f).empty()) {
    throw Error("arith-eval expects a sentence without free variables");
  }
  BoundedDomain d(domain, true);
  bool verdict = eval_arith(f, d, ArithAssignment{});
  std::cout << "verdict: " << (verdict ? "true" : "false") << " (N=" << domain << ")\n";
  return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed,
               const std::string& corpus) {
  std::vector<verify::SuiteResult> results;
  auto want = [&](const std::string& name) { return suite == "all" || suite == name; };
  std::cout << "verify --suite " << suite << " --seed " << seed << "\n";
  Timer timer;
  if (want("roundtrip")) results.push_back(verify::roundtrip_suite(seed, 1000, corpus));
  if (want("lemma1")) results.push_back(verify::lemma1_suite(seed, 200));
  if (want("lemma2")) {
    results.push_back(verify::lasso_exactness_suite(seed, 1000));
    results.push_back(verify::expansion_suite(seed, 500));
    results.push_back(verify::skolem_grid_suite());
  }
  if (want("lemma3")) {
    results.push_back(verify::lemma3_suite(corpus));
    results.push_back(verify::structural_fidelity_suite());
  }
  if (want("lemma4")) {
    results.push_back(verify::lemma4_suite(corpus));
    results.push_back(verify::two_variable_suite(corpus));
  }
  if (suite == "all") results.push_back(verify::pairing_suite());
  if (results.empty()) {
    throw Error("unknown suite '" + suite +
                "' (expected roundtrip|lemma1|lemma2|lemma3|lemma4|all)");
  }
  int failures = 0;
  for (const auto& r : results) {
    std::cout << verify::format_result(r) << "\n";
    failures += r.failures;
  }
  std::cout << (failures == 0 ? "all suites passed" : "FAILURES PRESENT") << "\n";
  std::cerr << "time: " << timer.ms() << " ms\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyperq: bounded workbench for HyperQPTL, HyperQPTL+, and Hyper2LTL"};
  app.require_subcommand(1);

  std::string file, logic_tag, traces, system, from, to;
  std::string suite = "all";
  std::string corpus = "corpus";
  std::size_t stem = 1, loop = 1;
  std::uint64_t seed = 1;
  std::uint64_t domain = 8;

  auto* parse = app.add_subcommand("parse", "parse a formula file, print canonically");
  parse->add_option("file", file)->required();
  parse->add_option("--logic", logic_tag, "hyperqptl|hqptl+|h2l|arith");

  auto* translate = app.add_subcommand("translate", "apply one of the reductions");
  translate->add_option("file", file)->required();
  translate->add_option("--from", from)->required();
  translate->add_option("--to", to)->required();

  auto* eval = app.add_subcommand("eval", "evaluate a sentence on a trace set");
  eval->add_option("file", file)->required();
  eval->add_option("--traces", traces)->required();
  eval->add_option("--logic", logic_tag);
  eval->add_option("--stem-bound", stem);
  eval->add_option("--loop-bound", loop);

  auto* mc = app.add_subcommand("mc", "bounded model check a transition system");
  mc->add_option("file", file)->required();
  mc->add_option("--system", system)->required();
  mc->add_option("--logic", logic_tag);
  mc->add_option("--stem-bound", stem);
  mc->add_option("--loop-bound", loop);

  auto* arith_eval =
      app.add_subcommand("arith-eval", "evaluate an arithmetic sentence, bounded");
  arith_eval->add_option("file", file)->required();
  arith_eval->add_option("--domain", domain, "numbers range over 0..N-1");

  auto* verify = app.add_subcommand("verify", "run an oracle-equivalence suite");
  verify->add_option("--suite", suite, "roundtrip|lemma1|lemma2|lemma3|lemma4|all");
  verify->add_option("--seed", seed);
  verify->add_option("--corpus", corpus, "corpus directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (parse->parsed()) return cmd_parse(file, logic_tag);
    if (translate->parsed()) return cmd_translate(file, from, to);
    if (eval->parsed()) return cmd_eval(file, logic_tag, traces, stem, loop);
    if (mc->parsed()) return cmd_mc(file, logic_tag, system, stem, loop);
    if (arith_eval->parsed()) return cmd_arith_eval(file, domain);
    if (verify->parsed()) return cmd_verify(suite, seed, corpus);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
