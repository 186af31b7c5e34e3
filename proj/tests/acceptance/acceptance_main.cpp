// Copyright islab contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one line per criterion, PASS/FAIL with timing, nonzero
// exit when anything fails. Usage: islab_acceptance <fixtures-dir>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "islab/cli.hpp"
#include "islab/faults.hpp"
#include "islab/views.hpp"

using namespace islab;

namespace {

const SemanticsVariant kDefault{};
std::string g_fixtures;

std::string fixture(const std::string &name) { return g_fixtures + "/" + name; }

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read fixture '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool condition, const std::string &message) {
    if (!condition && ok) {
      ok = false;
      detail = message;
    }
  }
  void note(const std::string &message) {
    if (ok) detail = message;
  }
};

// ---------------------------------------------------------------------------
// Random-program machinery shared by criteria 2, 4 and 7.

std::vector<MachineState> all_states(const std::vector<std::string> &regs) {
  std::vector<MachineState> states;
  for (std::size_t index = 0; index < (std::size_t(1) << regs.size()); ++index) {
    MachineState s;
    for (std::size_t j = 0; j < regs.size(); ++j)
      if ((index >> j) & 1) s.set(regs[j], true);
    states.push_back(std::move(s));
  }
  return states;
}

// Arbitrary program over the given registers; jumps may leave the range.
InstructionSequence random_program(std::mt19937 &rng,
                                   const std::vector<std::string> &regs,
                                   std::size_t min_len, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len_dist(min_len, max_len);
  std::size_t len = len_dist(rng);
  std::uniform_int_distribution<int> kind(0, 6);
  std::uniform_int_distribution<std::size_t> reg(0, regs.size() - 1);
  std::uniform_int_distribution<int> method(0, 3);
  std::uniform_int_distribution<std::uint64_t> off(0, max_len + 2);
  std::vector<Instruction> instructions;
  for (std::size_t p = 0; p < len; ++p) {
    Method m = static_cast<Method>(method(rng));
    switch (kind(rng)) {
    case 0: case 1: instructions.push_back(Instruction::basic(regs[reg(rng)], m)); break;
    case 2: instructions.push_back(Instruction::pos_test(regs[reg(rng)], m)); break;
    case 3: instructions.push_back(Instruction::neg_test(regs[reg(rng)], m)); break;
    case 4: instructions.push_back(Instruction::fwd_jump(off(rng))); break;
    case 5: instructions.push_back(Instruction::bwd_jump(off(rng))); break;
    default: instructions.push_back(Instruction::halt());
    }
  }
  return InstructionSequence(std::move(instructions));
}

// Program with statically in-range control flow, halting on every input.
InstructionSequence random_halting_program(std::mt19937 &rng,
                                           const std::vector<std::string> &regs,
                                           std::size_t max_len) {
  while (true) {
    std::uniform_int_distribution<std::size_t> len_dist(1, max_len);
    std::size_t len = len_dist(rng);
    std::uniform_int_distribution<int> kind(0, 9);
    std::uniform_int_distribution<std::size_t> reg(0, regs.size() - 1);
    std::uniform_int_distribution<int> method(0, 3);
    std::vector<Instruction> instructions;
    for (std::size_t p = 1; p <= len; ++p) {
      if (p == len) {
        instructions.push_back(Instruction::halt());
        break;
      }
      Method m = static_cast<Method>(method(rng));
      int k = kind(rng);
      if (k <= 2) {
        instructions.push_back(Instruction::basic(regs[reg(rng)], m));
      } else if (k <= 4 && p + 2 <= len) {
        instructions.push_back(Instruction::pos_test(regs[reg(rng)], m));
      } else if (k == 5 && p + 2 <= len) {
        instructions.push_back(Instruction::neg_test(regs[reg(rng)], m));
      } else if (k <= 7) {
        std::uniform_int_distribution<std::uint64_t> fwd(1, len - p);
        instructions.push_back(Instruction::fwd_jump(fwd(rng)));
      } else if (k == 8 && p > 1) {
        std::uniform_int_distribution<std::uint64_t> bwd(1, p - 1);
        instructions.push_back(Instruction::bwd_jump(bwd(rng)));
      } else {
        instructions.push_back(Instruction::halt());
      }
    }
    InstructionSequence x{instructions};
    if (!static_check(x).empty()) continue;

    std::uint64_t bound = (x.length() + 2) * (std::uint64_t(1) << regs.size()) + 2;
    bool all_halt = true;
    for (const MachineState &d : all_states(regs)) {
      if (effectuate(x, d, kDefault, bound).outcome.kind != OutcomeKind::Terminated) {
        all_halt = false;
        break;
      }
    }
    if (all_halt) return x;
  }
}

// ---------------------------------------------------------------------------
// Criteria

Check criterion_variant_space() {
  Check check;
  std::vector<SemanticsVariant> variants = enumerate_variants();
  check.require(variants.size() == 36, "expected 36 variants");
  for (std::size_t i = 0; i < variants.size(); ++i)
    for (std::size_t j = i + 1; j < variants.size(); ++j)
      check.require(!(variants[i] == variants[j]), "duplicate variant");

  InstructionSequence probe = parse_sequence("#5; !");
  std::vector<Outcome> outcomes;
  for (ExcessPolicy high : kAllPolicies) {
    SemanticsVariant v{ExcessPolicy::Deadlock, high};
    outcomes.push_back(effectuate(probe, {}, v, 10).outcome);
  }
  // The six policies are pairwise distinguishable as outcomes; Terminate and
  // Skip share the Terminated category but differ in step count.
  for (std::size_t i = 0; i < outcomes.size(); ++i)
    for (std::size_t j = i + 1; j < outcomes.size(); ++j)
      check.require(!(outcomes[i] == outcomes[j]),
                    "high policies " + std::to_string(i) + "/" + std::to_string(j) +
                        " are indistinguishable on '#5; !'");
  check.require(outcomes[0].kind == OutcomeKind::Deadlock, "deadlock policy");
  check.require(outcomes[1].kind == OutcomeKind::Livelock, "livelock policy");
  check.require(outcomes[2].kind == OutcomeKind::ErrorHalt, "error policy");
  check.require(outcomes[3].kind == OutcomeKind::Terminated, "terminate policy");
  check.require(outcomes[4].kind == OutcomeKind::Terminated && outcomes[4].steps == 2,
                "skip policy retargets to the next position");
  check.require(outcomes[5].kind == OutcomeKind::StaticallyRejected, "reject policy");
  check.note("36 variants; 6 pairwise-distinct outcomes on '#5; !'");
  return check;
}

Check criterion_marginal_irrelevance() {
  Check check;
  std::mt19937 rng(0x5eed0002);
  std::vector<std::string> regs = {"a", "b", "c", "d"};  // 2^4 states
  std::vector<SemanticsVariant> variants = enumerate_variants();
  std::vector<MachineState> inputs = all_states(regs);
  for (int i = 0; i < 500 && check.ok; ++i) {
    InstructionSequence x = random_halting_program(rng, regs, 12);
    for (const MachineState &d : inputs) {
      Outcome reference = effectuate(x, d, variants.front(), 10000).outcome;
      for (const SemanticsVariant &v : variants) {
        Outcome outcome = effectuate(x, d, v, 10000).outcome;
        if (!(outcome == reference)) {
          check.require(false, "variant divergence on " + render_sequence(x) +
                                   " input " + d.render());
          break;
        }
      }
    }
  }
  check.note("500 in-range halting programs agree across all 36 variants");
  return check;
}

Check criterion_certification() {
  Check check;
  InstructionSequence x = parse_sequence(read_file(fixture("bad.isq")));
  Specification spec = parse_spec_file(read_file(fixture("oi.spec")));
  TestOracle oracle = TestOracle::from_spec(spec);

  const TestCase *trigger_case = nullptr;
  for (const TestCase &tc : oracle.cases())
    if (tc.input == MachineState::parse("i=1")) trigger_case = &tc;
  check.require(trigger_case != nullptr, "missing i=1,o=0 case");
  if (!check.ok) return check;
  TestResult failing = run_confirmation_test(x, *trigger_case, kDefault, 1000);
  check.require(!failing.passed, "trigger case unexpectedly passes");

  Fragment f({{1, 1}});
  Replacement r{{{Instruction::pos_test("i", Method::Get)}}};
  CertificationResult result = certify_fault(x, oracle, {*trigger_case, failing, kDefault},
                                             f, r, FaultBudgetConfig::profile_s4(),
                                             kDefault);
  check.require(result.ok(), "certification rejected the documented repair");
  if (result.ok())
    check.require(result.certified->regression.exhaustive_suite_used,
                  "regression must use the exhaustive suite");

  InstructionSequence repaired = substitute(x, f, r);
  IdealizedRegressionReport ideal =
      idealized_regression_criterion(x, repaired, spec, kDefault);
  check.require(ideal.holds, "idealized regression criterion must hold");
  check.require(ideal.flipped_to_pass.size() == 4, "all 4 exhaustive cases must flip");
  check.require(ideal.regressions.empty(), "no case may regress");
  check.note("repair certified under s4; 4 Fail->Pass flips, 0 regressions");
  return check;
}

Check criterion_oracle_equivalence() {
  Check check;
  std::mt19937 rng(0x5eed0004);
  std::vector<std::string> regs = {"a", "b", "c"};  // 2^3 states
  Specification spec({"a", "b", "c"}, 64);
  spec.add_copy_rule("b", "a");
  TestOracle oracle = TestOracle::from_spec(spec);
  std::vector<TestCase> suite = exhaustive_suite(spec);

  // Generous budgets isolate the regression conditions.
  FaultBudgetConfig cfg;
  cfg.single_fault_fraction = 1.0;
  cfg.fix_length_deviation = 1.0;
  cfg.total_fraction = 1.0;
  cfg.length_floor = 12;

  SearchConfig alphabet = SearchConfig::default_for(6, regs);
  std::uniform_int_distribution<std::size_t> alpha(0, alphabet.alphabet.size() - 1);

  int pairs = 0, with_trigger = 0, suite_false_positives = 0;
  for (int i = 0; i < 900 && check.ok; ++i) {
    InstructionSequence x = random_program(rng, regs, 4, 10);
    std::vector<Fragment> fragments = enumerate_fragments(x, 2, 2);
    std::uniform_int_distribution<std::size_t> pick(0, fragments.size() - 1);
    Fragment f = fragments[pick(rng)];
    Replacement r;
    for (std::size_t part = 0; part < f.arity(); ++part) {
      std::uniform_int_distribution<std::size_t> len_dist(
          f.total_length() > 1 ? 0 : 1, 2);
      std::vector<Instruction> instructions;
      for (std::size_t n = len_dist(rng); n > 0; --n)
        instructions.push_back(alphabet.alphabet[alpha(rng)]);
      r.parts.push_back(std::move(instructions));
    }
    InstructionSequence x_repaired = x;
    try {
      x_repaired = substitute(x, f, r);
    } catch (const Error &) {
      continue;  // the edit deleted everything
    }
    ++pairs;

    // Route A: the brute-force idealized criterion.
    bool ideal = idealized_regression_criterion(x, x_repaired, spec, kDefault).holds;

    // Route B: composed from suite runs and regression_check.
    SuiteReport before = run_suite(x, suite, kDefault, 10000);
    SuiteReport after = run_suite(x_repaired, suite, kDefault, 10000);
    std::vector<TestCase> passing;
    const TestCase *flip_trigger = nullptr;
    bool any_flip = false, any_regression = false;
    for (std::size_t c = 0; c < suite.size(); ++c) {
      if (before.results[c].passed) passing.push_back(suite[c]);
      if (!before.results[c].passed && after.results[c].passed) {
        any_flip = true;
        if (!flip_trigger) flip_trigger = &suite[c];
      }
      if (before.results[c].passed && !after.results[c].passed) any_regression = true;
    }
    bool composed = any_flip && regression_check(x_repaired, passing, kDefault, 10000).passed;
    check.require(ideal == composed, "idealized criterion disagrees with the composed route");
    check.require(any_regression == !regression_check(x_repaired, passing, kDefault, 10000).passed,
                  "regression_check disagrees with the per-case comparison");

    // Exhaustive-suite certification must agree exactly with the criterion.
    if (flip_trigger) {
      ++with_trigger;
      FailureRecord trigger{*flip_trigger,
                            run_confirmation_test(x, *flip_trigger, kDefault, 10000),
                            kDefault};
      bool certified = certify_fault(x, oracle, trigger, f, r, cfg, kDefault).ok();
      check.require(certified == ideal,
                    "exhaustive certification disagrees with the idealized criterion");

      // Strict sub-suite: disagreements only in the documented direction.
      std::vector<TestCase> subset;
      for (std::size_t c = 0; c < suite.size(); c += 2) subset.push_back(suite[c]);
      const TestCase *sub_trigger = nullptr;
      for (std::size_t c = 0; c < suite.size(); c += 2)
        if (!before.results[c].passed && after.results[c].passed) {
          sub_trigger = &suite[c];
          break;
        }
      if (sub_trigger) {
        FailureRecord sub_failing{*sub_trigger,
                                  run_confirmation_test(x, *sub_trigger, kDefault, 10000),
                                  kDefault};
        bool sub_certified =
            certify_fault(x, TestOracle::from_suite(subset), sub_failing, f, r, cfg,
                          kDefault)
                .ok();
        if (sub_certified && !ideal) ++suite_false_positives;
        check.require(!(ideal && !sub_certified),
                      "sub-suite certification rejected a true repair (wrong direction)");
      }
    }
  }
  check.require(pairs >= 100, "fewer than 100 (program, edit) pairs exercised");
  check.note(std::to_string(pairs) + " pairs, " + std::to_string(with_trigger) +
             " with Fail->Pass triggers, " + std::to_string(suite_false_positives) +
             " sub-suite false positives (documented direction only)");
  return check;
}

Check criterion_adequacy() {
  Check check;
  InstructionSequence flipped = parse_sequence(read_file(fixture("bad.isq")));
  Specification spec = parse_spec_file(read_file(fixture("oi.spec")));

  AdequacyReport adequate =
      check_adequacy(flipped, spec, FaultBudgetConfig::profile_s4(),
                     SearchConfig::default_for(6, {"i", "o"}), kDefault);
  check.require(adequate.verdict == AdequacyVerdict::Adequate, "flipped program not adequate");
  check.require(adequate.chain.size() == 1, "expected a chain of length 1");

  InstructionSequence setzero = parse_sequence(read_file(fixture("setzero.isq")));
  AdequacyReport inadequate =
      check_adequacy(setzero, spec, FaultBudgetConfig::profile_s4(),
                     SearchConfig::default_for(2, {"i", "o"}, 1), kDefault);
  check.require(inadequate.verdict == AdequacyVerdict::NotAdequate,
                "'o.set:0; !' must not be adequate");
  check.require(inadequate.reason == InadequacyReason::SearchExhausted,
                "expected search-exhausted, not budget-exhausted");
  check.note("flipped: Adequate, chain 1; 'o.set:0; !': NotAdequate(search-exhausted)");
  return check;
}

Check criterion_views_divergence() {
  Check check;
  InstructionSequence x = parse_sequence(read_file(fixture("unreachable.isq")));
  std::vector<Violation> violations = lint(x);
  bool unreachable_at_2 = false;
  for (const Violation &v : violations)
    if (v.rule == "unreachable" && v.positions == std::vector<std::size_t>{2})
      unreachable_at_2 = true;
  check.require(unreachable_at_2, "missing unreachable violation at position 2");

  Specification spec({"r"}, 16);
  for (const MachineState &d : spec.domain_states())
    spec.add_expectation(d, AcceptancePredicate::constraint("r", true));
  TestOracle oracle = TestOracle::from_spec(spec);
  FailureRecord trigger{oracle.cases()[0],
                        run_confirmation_test(x, oracle.cases()[0], kDefault, 1000),
                        kDefault};
  check.require(!trigger.result.passed, "r=0 case must fail");

  std::vector<FailureRecord> failing{trigger};
  std::vector<RepairCandidate> candidates =
      search_repairs(x, oracle, failing, Fragment({{2, 2}}),
                     FaultBudgetConfig::profile_s4(),
                     SearchConfig::default_for(2, {"r"}), kDefault);
  std::size_t certified = 0;
  for (const RepairCandidate &candidate : candidates)
    if (candidate.result.ok()) ++certified;
  check.require(certified == 0,
                "a fault confined to the unreachable position was certified");
  check.require(!candidates.empty(), "the exhaustive search must try candidates");
  check.note("violation at 2; " + std::to_string(candidates.size()) +
             " replacements searched, none certifiable");
  return check;
}

Check criterion_verifier_agreement() {
  Check check;
  std::mt19937 rng(0x5eed0007);
  Specification spec = parse_spec_file(read_file(fixture("oi.spec")));
  std::vector<TestCase> suite = exhaustive_suite(spec);
  std::vector<std::string> regs = {"i", "o"};
  for (int trial = 0; trial < 50 && check.ok; ++trial) {
    InstructionSequence x = random_program(rng, regs, 1, 10);
    IncorrectnessReport verdict = verify_exhaustive(x, spec, kDefault, 10000);
    SuiteReport harness = run_suite(x, suite, kDefault, 10000);
    check.require(verdict.correct == (harness.failed == 0),
                  "verdict mismatch on " + render_sequence(x));
    std::vector<MachineState> failing_inputs;
    for (std::size_t c = 0; c < suite.size(); ++c)
      if (!harness.results[c].passed) failing_inputs.push_back(suite[c].input);
    check.require(verdict.witnesses.size() == failing_inputs.size(),
                  "witness count mismatch on " + render_sequence(x));
    for (std::size_t w = 0; w < verdict.witnesses.size() && check.ok; ++w)
      check.require(verdict.witnesses[w].input == failing_inputs[w],
                    "witness order mismatch");
  }
  check.note("50 random programs agree case-for-case");
  return check;
}

Check criterion_cli_determinism() {
  Check check;
  std::string ledger_path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                            "/islab_acceptance_ledger.txt";
  {
    std::ofstream out(ledger_path, std::ios::trunc);
    for (int i = 0; i < 6; ++i) out << "confirmation-test copy terminated 4\n";
    for (int i = 0; i < 4; ++i) out << "practical-use copy terminated 4\n";
  }

  std::vector<std::vector<std::string>> invocations = {
      {"run", "--prog", fixture("copy.isq"), "--in", "i=1,o=0", "--variant",
       "low=deadlock,high=deadlock", "--budget", "100", "--trace"},
      {"test", "--prog", fixture("bad.isq"), "--suite", fixture("copy.suite")},
      {"verify", "--prog", fixture("bad.isq"), "--spec", fixture("oi.spec")},
      {"lint", "--prog", fixture("unreachable.isq")},
      {"lint", "--prog", fixture("unreachable.isq"), "--machine"},
      {"fault-certify", "--prog", fixture("bad.isq"), "--spec", fixture("oi.spec"),
       "--frag", "1", "--repl", "+i.get", "--profile", "s4"},
      {"fault-search", "--prog", fixture("bad.isq"), "--spec", fixture("oi.spec"),
       "--frag", "1", "--profile", "s4"},
      {"adequacy", "--prog", fixture("bad.isq"), "--spec", fixture("oi.spec"),
       "--profile", "s4"},
      {"variants-enum"},
      {"variants-discriminate", "--oracle", "low=deadlock,high=error", "--probe",
       "\\#3; !", "--probe", "#5; !"},
      {"report", "--ledger", ledger_path, "--prog", fixture("copy.isq"), "--suite",
       fixture("copy.suite")},
  };
  for (const auto &args : invocations) {
    std::ostringstream out1, err1, out2, err2;
    int code1 = run_cli(args, out1, err1);
    int code2 = run_cli(args, out2, err2);
    check.require(code1 == code2, "exit code differs for subcommand " + args.front());
    check.require(out1.str() == out2.str(),
                  "output differs for subcommand " + args.front());
  }
  std::remove(ledger_path.c_str());
  check.note(std::to_string(invocations.size()) + " invocations byte-identical");
  return check;
}

Check criterion_livelock() {
  Check check;
  InstructionSequence loop = parse_sequence(read_file(fixture("loop.isq")));
  Effectuation eff = effectuate(loop, MachineState::parse("r=0"), kDefault, 100);
  check.require(eff.outcome.kind == OutcomeKind::Livelock,
                "expected Livelock, got " + std::string(outcome_kind_name(eff.outcome.kind)));
  check.require(eff.outcome.steps <= 3,
                "detection step " + std::to_string(eff.outcome.steps) + " > 3");
  check.note("Livelock detected at step " + std::to_string(eff.outcome.steps));
  return check;
}

struct Criterion {
  const char *name;
  double limit_seconds;
  std::function<Check()> run;
};

} // namespace

int main(int argc, char **argv) {
  if (argc < 2) {
    std::cerr << "usage: islab_acceptance <fixtures-dir>\n";
    return 2;
  }
  g_fixtures = argv[1];

  std::vector<Criterion> criteria = {
      {"1 variant-space", 1.0, criterion_variant_space},
      {"2 marginal-case-irrelevance", 30.0, criterion_marginal_irrelevance},
      {"3 fault-certification", 1.0, criterion_certification},
      {"4 oracle-equivalence", 60.0, criterion_oracle_equivalence},
      {"5 adequacy", 10.0, criterion_adequacy},
      {"6 views-divergence", 5.0, criterion_views_divergence},
      {"7 verifier-agreement", 10.0, criterion_verifier_agreement},
      {"8 cli-determinism", 60.0, criterion_cli_determinism},
      {"9 livelock-exactness", 1.0, criterion_livelock},
  };

  int failures = 0;
  for (const Criterion &criterion : criteria) {
    auto start = std::chrono::steady_clock::now();
    Check check;
    try {
      check = criterion.run();
    } catch (const std::exception &e) {
      check.ok = false;
      check.detail = std::string("exception: ") + e.what();
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > criterion.limit_seconds) {
      check.ok = false;
      check.detail = "over the " + std::to_string(criterion.limit_seconds) + "s limit";
    }
    char timing[32];
    std::snprintf(timing, sizeof(timing), "%.2fs", seconds);
    std::cout << (check.ok ? "PASS" : "FAIL") << " " << criterion.name << " (" << timing
              << "): " << check.detail << "\n";
    if (!check.ok) ++failures;
  }
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all " << criteria.size() << " criteria passed\n";
  return 0;
}
