// Copyright islab contributors.
// SPDX-License-Identifier: Apache-2.0

#include "islab/cli.hpp"

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "islab/faults.hpp"
#include "islab/views.hpp"

namespace islab {

namespace {

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string program_id_from(const std::string &path) {
  std::string stem = std::filesystem::path(path).stem().string();
  if (stem.empty()) stem = "x";
  for (char &c : stem)
    if (std::isspace(static_cast<unsigned char>(c))) c = '_';
  return stem;
}

std::string fmt_fraction(double f) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.3f", f);
  return buffer;
}

void append_ledger_file(const std::string &path, const std::vector<EffectuationRecord> &records) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error("cannot write ledger file '" + path + "'");
  for (const EffectuationRecord &record : records)
    out << render_ledger_line(record) << "\n";
}

EffectuationLedger load_ledger_file(const std::string &path) {
  EffectuationLedger ledger;
  std::string text = read_file(path);
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (!line.empty()) record_effectuation(ledger, parse_ledger_line(line));
    start = end + 1;
  }
  return ledger;
}

// Shared flag bundle for subcommands that effectuate.
struct RunOptions {
  std::string variant_text = "low=deadlock,high=deadlock";
  std::uint64_t budget = kDefaultBudget;

  SemanticsVariant variant() const { return parse_variant(variant_text); }
};

void add_run_options(CLI::App *cmd, RunOptions &opts) {
  cmd->add_option("--variant", opts.variant_text,
                  "semantics variant, low=<policy>,high=<policy>");
  cmd->add_option("--budget", opts.budget, "step budget per effectuation");
}

struct OracleOptions {
  std::string spec_path;
  std::string suite_path;
};

void add_oracle_options(CLI::App *cmd, OracleOptions &opts, bool spec_only = false) {
  auto *spec = cmd->add_option("--spec", opts.spec_path, "specification file (.spec)");
  if (!spec_only) {
    auto *suite = cmd->add_option("--suite", opts.suite_path, "suite file (.suite)");
    spec->excludes(suite);
    suite->excludes(spec);
  } else {
    spec->required();
  }
}

TestOracle load_oracle(const OracleOptions &opts) {
  if (!opts.spec_path.empty())
    return TestOracle::from_spec(parse_spec_file(read_file(opts.spec_path)));
  if (!opts.suite_path.empty())
    return TestOracle::from_suite(parse_suite_file(read_file(opts.suite_path)));
  throw Error("either --spec or --suite is required");
}

struct SearchOptions {
  std::vector<std::string> registers;
  std::uint64_t max_jump = 0;  // 0: length of the program
  std::size_t max_part_len = 2;
};

void add_search_options(CLI::App *cmd, SearchOptions &opts) {
  cmd->add_option("--regs", opts.registers,
                  "search alphabet registers (default: program + oracle registers)")
      ->delimiter(',');
  cmd->add_option("--max-jump", opts.max_jump,
                  "largest forward jump offset in the alphabet (default: program length)");
  cmd->add_option("--max-part-len", opts.max_part_len,
                  "largest replacement part length searched");
}

SearchConfig build_search(const SearchOptions &opts, const InstructionSequence &x,
                          const TestOracle &oracle) {
  std::vector<std::string> regs = opts.registers;
  if (regs.empty()) {
    regs = x.registers();
    for (const TestCase &tc : oracle.cases()) {
      for (const auto &[reg, bit] : tc.accept.constraints) regs.push_back(reg);
      for (const auto &[reg, bit] : tc.input.entries()) regs.push_back(reg);
    }
  }
  std::uint64_t max_jump = opts.max_jump == 0 ? x.length() : opts.max_jump;
  return SearchConfig::default_for(max_jump, regs, opts.max_part_len);
}

// Picks the triggering failure: a named suite case, an exhaustive case by
// input, or the first failing oracle case.
FailureRecord pick_trigger(const InstructionSequence &x, const TestOracle &oracle,
                           const std::string &case_name, const std::string &input_text,
                           const SemanticsVariant &v, std::uint64_t budget) {
  const TestCase *chosen = nullptr;
  if (!case_name.empty()) {
    for (const TestCase &tc : oracle.cases())
      if (tc.name == case_name) chosen = &tc;
    if (!chosen) throw Error("no case named '" + case_name + "' in the oracle");
  } else if (!input_text.empty()) {
    MachineState input = MachineState::parse(input_text);
    for (const TestCase &tc : oracle.cases())
      if (tc.input == input) chosen = &tc;
    if (!chosen) throw Error("no oracle case with input '" + input_text + "'");
  } else {
    for (const TestCase &tc : oracle.cases()) {
      if (!run_confirmation_test(x, tc, v, budget).passed) {
        chosen = &tc;
        break;
      }
    }
    if (!chosen) throw Error("no oracle case fails on the program; nothing to repair");
  }
  TestResult result = run_confirmation_test(x, *chosen, v, budget);
  if (result.passed)
    throw Error("case '" + chosen->name + "' passes on the program; stale failure");
  return FailureRecord{*chosen, result, v};
}

void print_certified(std::ostream &out, const CertifiedFault &fault,
                     const InstructionSequence &x) {
  out << "CertifiedFault frag=" << render_fragment(fault.fragment) << " repl=\""
      << render_replacement(fault.replacement) << "\"\n";
  out << "  fault length " << fault.sizes.fault_length << " of " << x.length()
      << " (fraction " << fmt_fraction(fault.sizes.fault_fraction) << "), repair length "
      << fault.sizes.repair_length << "\n";
  out << "  trigger case '" << fault.triggering_failure.test_case.name
      << "' passes after repair\n";
  out << "  regression: " << fault.regression.cases_rerun
      << " previously passing case(s) re-run on the "
      << (fault.regression.exhaustive_suite_used ? "exhaustive" : "supplied")
      << " suite, all pass\n";
}

void print_rejection(std::ostream &out, const Rejection &rejection) {
  out << "Rejection\n";
  for (std::size_t i = 0; i < rejection.reasons.size(); ++i)
    out << "  " << rejection_reason_name(rejection.reasons[i]) << ": "
        << rejection.details[i] << "\n";
}

// ---------------------------------------------------------------------------
// Subcommand bodies

int cmd_run(std::ostream &out, const std::string &prog_path, const std::string &input_text,
            const RunOptions &run_opts, bool show_trace, const std::string &ledger_path,
            const std::string &purpose_text) {
  Purpose purpose = parse_purpose(purpose_text);
  InstructionSequence x = parse_sequence(read_file(prog_path));
  MachineState input = MachineState::parse(input_text);
  Effectuation eff = effectuate(x, input, run_opts.variant(), run_opts.budget);

  out << eff.outcome.render() << "\n";
  if (show_trace) {
    for (const TraceStep &ts : eff.trace) {
      out << "  " << ts.step << ": ";
      if (ts.position >= 1)
        out << "pos " << ts.position << " " << ts.instruction;
      else
        out << "pos - " << ts.instruction;
      out << " -> " << ts.state_after.render() << "\n";
    }
  }

  if (!ledger_path.empty())
    append_ledger_file(ledger_path,
                       {make_record(purpose, program_id_from(prog_path), input, eff)});

  switch (eff.outcome.kind) {
  case OutcomeKind::Terminated: return 0;
  case OutcomeKind::StaticallyRejected: return 3;
  default: return 1;
  }
}

int cmd_test(std::ostream &out, const std::string &prog_path, const std::string &suite_path,
             const RunOptions &run_opts, const std::string &ledger_path) {
  InstructionSequence x = parse_sequence(read_file(prog_path));
  std::vector<TestCase> suite = parse_suite_file(read_file(suite_path));
  EffectuationLedger ledger;
  SuiteReport report = run_suite(x, suite, run_opts.variant(), run_opts.budget, &ledger,
                                 program_id_from(prog_path));

  for (std::size_t i = 0; i < suite.size(); ++i) {
    const TestCase &tc = suite[i];
    const TestResult &result = report.results[i];
    if (result.passed)
      out << "PASS " << tc.name;
    else
      out << "FAIL " << tc.name << " (" << fail_reason_name(result.reason) << ")";
    out << " [" << result.outcome.render() << "]";
    if (tc.step_bound_defaulted) out << " [k=" << tc.step_bound << " default]";
    out << "\n";
  }
  out << "passed " << report.passed << "/" << suite.size() << "\n";

  append_ledger_file(ledger_path, ledger.records());

  if (!suite.empty() && report.passed == 0 &&
      report.results.front().reason == FailReason::StaticallyRejected)
    return 3;
  return report.failed == 0 ? 0 : 1;
}

int cmd_verify(std::ostream &out, const std::string &prog_path, const std::string &spec_path,
               const RunOptions &run_opts, const std::string &ledger_path) {
  InstructionSequence x = parse_sequence(read_file(prog_path));
  Specification spec = parse_spec_file(read_file(spec_path));
  IncorrectnessReport report =
      verify_exhaustive(x, spec, run_opts.variant(), run_opts.budget);

  if (!ledger_path.empty()) {
    EffectuationLedger ledger;
    run_suite(x, exhaustive_suite(spec), run_opts.variant(), run_opts.budget, &ledger,
              program_id_from(prog_path));
    append_ledger_file(ledger_path, ledger.records());
  }

  if (report.correct) {
    out << "Correct\n";
    return 0;
  }
  out << "Incorrect (" << report.witnesses.size() << " witness(es))\n";
  bool all_rejected = !report.witnesses.empty();
  for (const IncorrectnessWitness &w : report.witnesses) {
    out << "  in " << w.input.render_over(spec.domain()) << " observed "
        << w.observed.render() << " expected " << w.expected.render() << "\n";
    if (w.observed.kind != OutcomeKind::StaticallyRejected) all_rejected = false;
  }
  return all_rejected ? 3 : 1;
}

int cmd_lint(std::ostream &out, const std::string &prog_path,
             const std::vector<std::string> &rules, bool machine) {
  InstructionSequence x = parse_sequence(read_file(prog_path));
  std::vector<Violation> violations = lint(x, rules);
  if (machine) {
    for (const Violation &v : violations) out << render_violation_machine(v) << "\n";
  } else {
    if (violations.empty()) {
      out << "no violations\n";
    } else {
      for (const Violation &v : violations) {
        out << v.rule;
        for (std::size_t i = 0; i < v.positions.size(); ++i)
          out << (i == 0 ? " at " : ",") << v.positions[i];
        out << ": " << v.message << " ["
            << (v.severity == Severity::Hazard ? "hazard" : "style") << "]\n";
      }
    }
  }
  return violations.empty() ? 0 : 1;
}

int cmd_fault_certify(std::ostream &out, const std::string &prog_path,
                      const OracleOptions &oracle_opts, const std::string &frag_text,
                      const std::string &repl_text, const std::string &profile,
                      const std::string &case_name, const std::string &input_text,
                      bool minimality, const RunOptions &run_opts) {
  InstructionSequence x = parse_sequence(read_file(prog_path));
  TestOracle oracle = load_oracle(oracle_opts);
  Fragment f = parse_fragment(frag_text);
  Replacement r = parse_replacement(repl_text, f.arity());
  FaultBudgetConfig cfg = FaultBudgetConfig::by_name(profile);
  cfg.enforce_minimality = minimality;
  SemanticsVariant v = run_opts.variant();

  FailureRecord trigger = pick_trigger(x, oracle, case_name, input_text, v, run_opts.budget);
  CertificationResult result =
      certify_fault(x, oracle, trigger, f, r, cfg, v, run_opts.budget);
  if (result.ok()) {
    print_certified(out, *result.certified, x);
    return 0;
  }
  print_rejection(out, *result.rejection);
  return 1;
}

int cmd_fault_search(std::ostream &out, const std::string &prog_path,
                     const OracleOptions &oracle_opts, const std::string &frag_text,
                     const std::string &profile, const SearchOptions &search_opts,
                     const RunOptions &run_opts) {
  InstructionSequence x = parse_sequence(read_file(prog_path));
  TestOracle oracle = load_oracle(oracle_opts);
  Fragment f = parse_fragment(frag_text);
  FaultBudgetConfig cfg = FaultBudgetConfig::by_name(profile);
  SemanticsVariant v = run_opts.variant();

  std::vector<FailureRecord> failing;
  for (const TestCase &tc : oracle.cases()) {
    TestResult result = run_confirmation_test(x, tc, v, run_opts.budget);
    if (!result.passed) failing.push_back({tc, result, v});
  }
  if (failing.empty()) throw Error("no oracle case fails on the program; nothing to repair");

  SearchConfig search = build_search(search_opts, x, oracle);
  std::vector<RepairCandidate> candidates =
      search_repairs(x, oracle, failing, f, cfg, search, v, run_opts.budget);

  std::size_t certified = 0;
  for (const RepairCandidate &candidate : candidates) {
    if (candidate.result.ok()) {
      ++certified;
      out << "CERTIFIED repl=\"" << render_replacement(candidate.replacement) << "\"\n";
    } else {
      out << "rejected repl=\"" << render_replacement(candidate.replacement) << "\" (";
      const Rejection &rej = *candidate.result.rejection;
      for (std::size_t i = 0; i < rej.reasons.size(); ++i)
        out << (i > 0 ? ", " : "") << rejection_reason_name(rej.reasons[i]);
      out << ")\n";
    }
  }
  out << "certified " << certified << " of " << candidates.size() << " candidate(s)\n";
  return certified > 0 ? 0 : 1;
}

int cmd_adequacy(std::ostream &out, const std::string &prog_path, const std::string &spec_path,
                 const std::string &profile, const SearchOptions &search_opts,
                 const RunOptions &run_opts) {
  InstructionSequence x = parse_sequence(read_file(prog_path));
  Specification spec = parse_spec_file(read_file(spec_path));
  FaultBudgetConfig cfg = FaultBudgetConfig::by_name(profile);
  TestOracle oracle = TestOracle::from_spec(spec);
  SearchConfig search = build_search(search_opts, x, oracle);

  AdequacyReport report =
      check_adequacy(x, spec, cfg, search, run_opts.variant(), run_opts.budget);
  if (report.verdict == AdequacyVerdict::Adequate) {
    out << "Adequate: chain length " << report.chain.size() << ", total fault fraction "
        << fmt_fraction(report.total_fault_fraction) << "\n";
    for (std::size_t i = 0; i < report.chain.size(); ++i) {
      const CertifiedFault &fault = report.chain[i];
      out << "  repair " << (i + 1) << ": frag=" << render_fragment(fault.fragment)
          << " repl=\"" << render_replacement(fault.replacement) << "\" (trigger '"
          << fault.triggering_failure.test_case.name << "')\n";
    }
  } else {
    out << "NotAdequate ("
        << (report.reason == InadequacyReason::BudgetExhausted ? "budget-exhausted"
                                                               : "search-exhausted")
        << ")\n";
  }
  out << "  candidates tried " << report.stats.candidates_tried << ", certified "
      << report.stats.certified << ", backtracks " << report.stats.backtracks << "\n";
  return report.verdict == AdequacyVerdict::Adequate ? 0 : 1;
}

int cmd_variants_enum(std::ostream &out) {
  for (const SemanticsVariant &v : enumerate_variants()) out << render_variant(v) << "\n";
  return 0;
}

// Probe text: "PROGRAM" or "PROGRAM @ STATE".
Probe parse_probe(const std::string &text) {
  std::size_t at = text.find('@');
  std::string prog = at == std::string::npos ? text : text.substr(0, at);
  std::string state = at == std::string::npos ? "" : text.substr(at + 1);
  return Probe{parse_sequence(prog), MachineState::parse(state)};
}

int cmd_variants_discriminate(std::ostream &out, const std::string &oracle_text,
                              const std::vector<std::string> &probe_texts,
                              std::uint64_t budget) {
  SemanticsVariant oracle_variant = parse_variant(oracle_text);
  std::vector<Probe> probes;
  for (const std::string &text : probe_texts) probes.push_back(parse_probe(text));

  EffectuationOracle oracle = [&](const InstructionSequence &x, const MachineState &d) {
    return effectuate(x, d, oracle_variant, budget).outcome;
  };
  std::vector<SemanticsVariant> surviving = discriminate_variant(oracle, probes, budget);
  for (const SemanticsVariant &v : surviving) out << render_variant(v) << "\n";
  out << surviving.size() << " variant(s) consistent\n";
  if (surviving.empty()) {
    out << "inconsistent: no variant matches (out-of-model machine)\n";
    return 1;
  }
  return 0;
}

int cmd_report(std::ostream &out, const std::string &ledger_path,
               const std::string &prog_path, const std::string &suite_path,
               const ProcessThresholds &thresholds, const RunOptions &run_opts) {
  const bool have_file = !ledger_path.empty();
  EffectuationLedger file_ledger;
  if (have_file) file_ledger = load_ledger_file(ledger_path);

  std::optional<std::size_t> program_length;
  std::optional<ProcessReport> rerun_report;
  if (!prog_path.empty()) {
    InstructionSequence x = parse_sequence(read_file(prog_path));
    program_length = x.length();
    if (!suite_path.empty()) {
      // Re-run the suite in memory to regain the trace and oracle data the
      // persisted lines cannot carry.
      std::vector<TestCase> suite = parse_suite_file(read_file(suite_path));
      EffectuationLedger rerun;
      run_suite(x, suite, run_opts.variant(), run_opts.budget, &rerun,
                program_id_from(prog_path));
      rerun_report = process_report(rerun, thresholds, program_length);
    }
  }

  ProcessReport report;
  if (have_file) {
    report = process_report(file_ledger, thresholds, program_length);
    if (rerun_report) {
      // Purpose counts stay those of the ledger under report; the re-run
      // only supplies the coverage and oracle metrics.
      report.instruction_coverage = rerun_report->instruction_coverage;
      report.wildcard_oracle_fraction = rerun_report->wildcard_oracle_fraction;
      report.oracle_problem = rerun_report->oracle_problem;
      report.coverage_only = rerun_report->coverage_only;
      report.notes = rerun_report->notes;
    }
  } else if (rerun_report) {
    report = *rerun_report;
  } else {
    report = process_report(file_ledger, thresholds, program_length);
  }

  const std::size_t total = report.confirmation_tests + report.experimentation_tests +
                            report.demonstrations + report.practical_uses;
  out << "effectuations: " << total << " (confirmation-test "
      << report.confirmation_tests << ", experimentation-test "
      << report.experimentation_tests << ", demonstration " << report.demonstrations
      << ", practical-use " << report.practical_uses << ")\n";
  out << "testing share: " << fmt_fraction(report.testing_share) << "\n";
  if (report.instruction_coverage)
    out << "instruction coverage: " << fmt_fraction(*report.instruction_coverage) << "\n";
  else
    out << "instruction coverage: n/a\n";
  if (report.wildcard_oracle_fraction)
    out << "wildcard-oracle fraction: " << fmt_fraction(*report.wildcard_oracle_fraction)
        << "\n";
  else
    out << "wildcard-oracle fraction: n/a\n";

  bool flagged = false;
  if (report.below_testing_benchmark) {
    out << "FLAG testing share below benchmark "
        << fmt_fraction(thresholds.testing_share_benchmark) << "\n";
    flagged = true;
  }
  if (report.oracle_problem) {
    out << "FLAG unconvincing oracle: wildcard fraction above "
        << fmt_fraction(thresholds.wildcard_fraction_threshold) << "\n";
    flagged = true;
  }
  if (report.coverage_only) {
    out << "FLAG coverage-only testing pattern\n";
    flagged = true;
  }
  for (const std::string &note : report.notes) out << "note: " << note << "\n";
  return flagged ? 1 : 0;
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"islab - instruction-sequence fault analysis laboratory"};
  app.require_subcommand(1);

  // run
  auto *run = app.add_subcommand("run", "effectuate a program on an input state");
  std::string run_prog, run_in, run_ledger, run_purpose = "experimentation-test";
  bool run_trace = false;
  RunOptions run_opts;
  run->add_option("--prog", run_prog, "program file (.isq)")->required();
  run->add_option("--in", run_in, "input state, reg=bit(,reg=bit)*");
  run->add_flag("--trace", run_trace, "print the step trace");
  run->add_option("--ledger", run_ledger, "append the effectuation to this ledger file");
  run->add_option("--purpose", run_purpose,
                  "teleological tag: confirmation-test, experimentation-test, "
                  "demonstration or practical-use");
  add_run_options(run, run_opts);

  // test
  auto *test = app.add_subcommand("test", "run a confirmation-test suite");
  std::string test_prog, test_suite, test_ledger;
  RunOptions test_opts;
  test->add_option("--prog", test_prog, "program file (.isq)")->required();
  test->add_option("--suite", test_suite, "suite file (.suite)")->required();
  test->add_option("--ledger", test_ledger, "append effectuations to this ledger file");
  add_run_options(test, test_opts);

  // verify
  auto *verify = app.add_subcommand("verify", "exhaustive verification against a spec");
  std::string verify_prog, verify_spec, verify_ledger;
  RunOptions verify_opts;
  verify->add_option("--prog", verify_prog, "program file (.isq)")->required();
  verify->add_option("--spec", verify_spec, "specification file (.spec)")->required();
  verify->add_option("--ledger", verify_ledger, "append effectuations to this ledger file");
  add_run_options(verify, verify_opts);

  // lint
  auto *lint_cmd = app.add_subcommand("lint", "product-authority rule check");
  std::string lint_prog;
  std::vector<std::string> lint_rules;
  bool lint_machine = false;
  lint_cmd->add_option("--prog", lint_prog, "program file (.isq)")->required();
  lint_cmd->add_option("--rules", lint_rules,
                       "rules to apply: unreachable, oor-jump, jump-chain, no-halt, dead-store")
      ->delimiter(',');
  lint_cmd->add_flag("--machine", lint_machine, "machine format: VIOLATION <rule> <positions>");

  // fault-certify
  auto *certify = app.add_subcommand("fault-certify", "certify a fragment/replacement pair");
  std::string cert_prog, cert_frag, cert_repl, cert_profile = "s1", cert_case, cert_in;
  bool cert_minimality = false;
  OracleOptions cert_oracle;
  RunOptions cert_opts;
  certify->add_option("--prog", cert_prog, "program file (.isq)")->required();
  add_oracle_options(certify, cert_oracle);
  certify->add_option("--frag", cert_frag, "fragment, lo-hi(,lo-hi)* or a bare index")->required();
  certify->add_option("--repl", cert_repl,
                      "replacement, instruction text; parts separated by '|'")
      ->required();
  certify->add_option("--profile", cert_profile, "budget profile: s1 or s4");
  certify->add_option("--case", cert_case, "triggering failure: suite case name");
  certify->add_option("--in", cert_in, "triggering failure: oracle case input state");
  certify->add_flag("--minimality", cert_minimality, "enforce the minimality constraint");
  add_run_options(certify, cert_opts);

  // fault-search
  auto *search = app.add_subcommand("fault-search", "search certified repairs for a fragment");
  std::string search_prog, search_frag, search_profile = "s1";
  OracleOptions search_oracle;
  SearchOptions search_space;
  RunOptions search_opts;
  search->add_option("--prog", search_prog, "program file (.isq)")->required();
  add_oracle_options(search, search_oracle);
  search->add_option("--frag", search_frag, "fragment, lo-hi(,lo-hi)* or a bare index")->required();
  search->add_option("--profile", search_profile, "budget profile: s1 or s4");
  add_search_options(search, search_space);
  add_run_options(search, search_opts);

  // adequacy
  auto *adequacy = app.add_subcommand("adequacy",
                                      "adequacy modulo a limited volume of faults");
  std::string adq_prog, adq_spec, adq_profile = "s1";
  SearchOptions adq_space;
  RunOptions adq_opts;
  adequacy->add_option("--prog", adq_prog, "program file (.isq)")->required();
  adequacy->add_option("--spec", adq_spec, "specification file (.spec)")->required();
  adequacy->add_option("--profile", adq_profile, "budget profile: s1 or s4");
  add_search_options(adequacy, adq_space);
  add_run_options(adequacy, adq_opts);

  // variants-enum
  app.add_subcommand("variants-enum", "list all 36 semantics variants");

  // variants-discriminate
  auto *discriminate = app.add_subcommand("variants-discriminate",
                                          "narrow down a black-box machine's variant");
  std::string disc_oracle;
  std::vector<std::string> disc_probes;
  std::uint64_t disc_budget = kDefaultBudget;
  discriminate->add_option("--oracle", disc_oracle,
                           "simulated machine variant, low=...,high=...")
      ->required();
  discriminate->add_option("--probe", disc_probes,
                           "probe \"PROGRAM\" or \"PROGRAM @ STATE\" (repeatable)")
      ->required();
  discriminate->add_option("--budget", disc_budget, "step budget per probe");

  // report
  auto *report = app.add_subcommand("report", "process-authority report over a ledger");
  std::string rep_ledger, rep_prog, rep_suite;
  ProcessThresholds thresholds;
  RunOptions rep_opts;
  report->add_option("--ledger", rep_ledger, "ledger file to read");
  report->add_option("--prog", rep_prog, "program file, enables coverage");
  report->add_option("--suite", rep_suite, "suite file, re-run for trace/oracle data");
  report->add_option("--share-benchmark", thresholds.testing_share_benchmark,
                     "testing share benchmark");
  report->add_option("--wildcard-threshold", thresholds.wildcard_fraction_threshold,
                     "wildcard-oracle fraction threshold");
  report->add_option("--coverage-high", thresholds.coverage_high,
                     "coverage level considered high");
  add_run_options(report, rep_opts);

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp &e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError &e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (run->parsed())
      return cmd_run(out, run_prog, run_in, run_opts, run_trace, run_ledger, run_purpose);
    if (test->parsed()) return cmd_test(out, test_prog, test_suite, test_opts, test_ledger);
    if (verify->parsed())
      return cmd_verify(out, verify_prog, verify_spec, verify_opts, verify_ledger);
    if (lint_cmd->parsed()) return cmd_lint(out, lint_prog, lint_rules, lint_machine);
    if (certify->parsed())
      return cmd_fault_certify(out, cert_prog, cert_oracle, cert_frag, cert_repl,
                               cert_profile, cert_case, cert_in, cert_minimality, cert_opts);
    if (search->parsed())
      return cmd_fault_search(out, search_prog, search_oracle, search_frag, search_profile,
                              search_space, search_opts);
    if (adequacy->parsed())
      return cmd_adequacy(out, adq_prog, adq_spec, adq_profile, adq_space, adq_opts);
    if (app.get_subcommand("variants-enum")->parsed()) return cmd_variants_enum(out);
    if (discriminate->parsed())
      return cmd_variants_discriminate(out, disc_oracle, disc_probes, disc_budget);
    if (report->parsed())
      return cmd_report(out, rep_ledger, rep_prog, rep_suite, thresholds, rep_opts);
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "usage error: no subcommand\n";
  return 2;
}

} // namespace islab
