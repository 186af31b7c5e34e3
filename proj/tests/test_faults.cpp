// Copyright islab contributors.
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <doctest.h>

#include "islab/faults.hpp"

using namespace islab;

namespace {

const SemanticsVariant kDefault{};

InstructionSequence copy_program() {
  return parse_sequence("+i.get; #3; o.set:0; !; o.set:1; !");
}
InstructionSequence flipped_program() {
  return parse_sequence("-i.get; #3; o.set:0; !; o.set:1; !");
}

Specification oi_spec() {
  Specification spec({"i", "o"}, kDefaultStepBound);
  spec.add_copy_rule("o", "i");
  return spec;
}

FailureRecord failing_case(const InstructionSequence &x, const TestOracle &oracle,
                           const std::string &input_text) {
  MachineState input = MachineState::parse(input_text);
  for (const TestCase &tc : oracle.cases()) {
    if (tc.input == input) {
      TestResult result = run_confirmation_test(x, tc, kDefault, 1000);
      REQUIRE_FALSE(result.passed);
      return FailureRecord{tc, result, kDefault};
    }
  }
  FAIL("no oracle case with input ", input_text);
  return FailureRecord{{}, {}, kDefault};
}

Replacement single(const Instruction &ins) { return Replacement{{{ins}}}; }

CertifiedFault make_fault(Fragment f) {
  return CertifiedFault{std::move(f), Replacement{}, FailureRecord{{}, {}, kDefault},
                        RegressionEvidence{}, SizeAccounting{}};
}

} // namespace

TEST_CASE("budget arithmetic") {
  FaultBudgetConfig s1 = FaultBudgetConfig::profile_s1();
  CHECK(s1.single_fault_fraction == 0.05);
  CHECK(s1.fix_length_deviation == 0.50);
  CHECK(s1.total_fraction == 0.25);
  CHECK(s1.single_fault_cap(6) == 1);   // max(1, floor(0.3))
  CHECK(s1.single_fault_cap(40) == 2);  // floor(2.0)

  FaultBudgetConfig s4 = FaultBudgetConfig::profile_s4();
  CHECK(s4.single_fault_fraction == 0.10);
  CHECK(s4.single_fault_cap(6) == 1);
  CHECK(s4.single_fault_cap(30) == 3);
  CHECK(s4.total_cap(6) == 1);  // max(1, floor(1.5))
  CHECK(s4.total_cap(8) == 2);

  CHECK(s1.fix_length_bounds(1) == std::pair<std::size_t, std::size_t>{1, 1});
  CHECK(s1.fix_length_bounds(2) == std::pair<std::size_t, std::size_t>{1, 3});
  CHECK(s1.fix_length_bounds(4) == std::pair<std::size_t, std::size_t>{2, 6});

  CHECK_THROWS_AS(FaultBudgetConfig::by_name("s9"), Error);
  FaultBudgetConfig bad = s1;
  bad.single_fault_fraction = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = s1;
  bad.length_floor = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("certify_fault certifies the flipped-test repair under s4") {
  InstructionSequence x = flipped_program();
  TestOracle oracle = TestOracle::from_spec(oi_spec());
  FailureRecord trigger = failing_case(x, oracle, "i=1");

  CertificationResult result = certify_fault(
      x, oracle, trigger, Fragment({{1, 1}}), single(Instruction::pos_test("i", Method::Get)),
      FaultBudgetConfig::profile_s4(), kDefault);
  REQUIRE(result.ok());
  const CertifiedFault &fault = *result.certified;
  CHECK(fault.sizes.fault_length == 1);
  CHECK(fault.sizes.repair_length == 1);
  CHECK(fault.sizes.fault_fraction == doctest::Approx(1.0 / 6.0));
  CHECK(fault.regression.exhaustive_suite_used);
  CHECK(fault.regression.all_passed);
  // None of the exhaustive cases passed on the flipped program.
  CHECK(fault.regression.cases_rerun == 0);

  // The certified repair indeed yields the copy program.
  CHECK(substitute(x, fault.fragment, fault.replacement) == copy_program());
}

TEST_CASE("certify_fault rejects a repair that fails confirmation") {
  InstructionSequence x = flipped_program();
  TestOracle oracle = TestOracle::from_spec(oi_spec());
  FailureRecord trigger = failing_case(x, oracle, "i=1");

  CertificationResult result =
      certify_fault(x, oracle, trigger, Fragment({{1, 1}}), single(Instruction::fwd_jump(2)),
                    FaultBudgetConfig::profile_s4(), kDefault);
  REQUIRE_FALSE(result.ok());
  const Rejection &rejection = *result.rejection;
  REQUIRE(rejection.reasons.size() == 1);
  CHECK(rejection.reasons[0] == RejectionReason::RepairConfirmation);
}

TEST_CASE("certify_fault rejects on the size budget") {
  InstructionSequence x = flipped_program();
  TestOracle oracle = TestOracle::from_spec(oi_spec());
  FailureRecord trigger = failing_case(x, oracle, "i=1");

  Replacement two{{{Instruction::pos_test("i", Method::Get), Instruction::fwd_jump(3)}}};
  CertificationResult result =
      certify_fault(x, oracle, trigger, Fragment({{1, 2}}), two,
                    FaultBudgetConfig::profile_s1(), kDefault);
  REQUIRE_FALSE(result.ok());
  bool size_violated = false;
  for (RejectionReason reason : result.rejection->reasons)
    if (reason == RejectionReason::SizeBudget) size_violated = true;
  CHECK(size_violated);
}

TEST_CASE("certify_fault lists every violated condition") {
  InstructionSequence x = flipped_program();
  TestOracle oracle = TestOracle::from_spec(oi_spec());
  FailureRecord trigger = failing_case(x, oracle, "i=1");

  // Length-2 fragment (size violation) with a length-5 replacement (fix
  // violation) that also fails confirmation.
  Replacement oversized{{{Instruction::halt(), Instruction::halt(), Instruction::halt(),
                          Instruction::halt(), Instruction::halt()}}};
  CertificationResult result =
      certify_fault(x, oracle, trigger, Fragment({{1, 2}}), oversized,
                    FaultBudgetConfig::profile_s1(), kDefault);
  REQUIRE_FALSE(result.ok());
  CHECK(result.rejection->reasons.size() >= 3);
}

TEST_CASE("certify_fault re-verifies the triggering failure") {
  InstructionSequence x = copy_program();
  TestOracle oracle = TestOracle::from_spec(oi_spec());
  TestCase tc = oracle.cases()[2];  // i=1,o=0: passes on the copy program
  TestResult fake;
  fake.passed = false;
  fake.reason = FailReason::TerminatedOutsideU;
  FailureRecord stale{tc, fake, kDefault};
  CHECK_THROWS_AS(certify_fault(x, oracle, stale, Fragment({{1, 1}}),
                                single(Instruction::halt()),
                                FaultBudgetConfig::profile_s4(), kDefault),
                  Error);
}

TEST_CASE("minimality rejects repairs that a sub-fragment already fixes") {
  InstructionSequence x = flipped_program();
  TestOracle oracle = TestOracle::from_spec(oi_spec());
  FailureRecord trigger = failing_case(x, oracle, "i=1");

  // {[1,2]} with an identity tail: the length-1 sub-fragment {[1,1]} fixes
  // the failure on its own.
  FaultBudgetConfig cfg = FaultBudgetConfig::profile_s4();
  cfg.single_fault_fraction = 0.5;
  Replacement wide{{{Instruction::pos_test("i", Method::Get), Instruction::fwd_jump(3)}}};

  CertificationResult loose =
      certify_fault(x, oracle, trigger, Fragment({{1, 2}}), wide, cfg, kDefault);
  CHECK(loose.ok());

  cfg.enforce_minimality = true;
  CertificationResult strict =
      certify_fault(x, oracle, trigger, Fragment({{1, 2}}), wide, cfg, kDefault);
  REQUIRE_FALSE(strict.ok());
  REQUIRE(strict.rejection->reasons.size() == 1);
  CHECK(strict.rejection->reasons[0] == RejectionReason::Minimality);
  CHECK(strict.rejection->details[0].find("1") != std::string::npos);
}

TEST_CASE("repairs may change the sequence length within the fix bound") {
  // Deleting one of the two stores (fault length 2, repair length 1) is a
  // certifiable shortening repair under a roomy per-fault budget.
  InstructionSequence x = parse_sequence("o.set:1; o.set:0; !");
  Specification spec({"o"}, 32);
  for (const MachineState &d : spec.domain_states())
    spec.add_expectation(d, AcceptancePredicate::constraint("o", true));
  TestOracle oracle = TestOracle::from_spec(spec);

  FailureRecord trigger{oracle.cases()[0],
                        run_confirmation_test(x, oracle.cases()[0], kDefault, 1000),
                        kDefault};
  REQUIRE_FALSE(trigger.result.passed);

  FaultBudgetConfig cfg = FaultBudgetConfig::profile_s1();
  cfg.single_fault_fraction = 0.7;  // cap 2 of 3
  CertificationResult result =
      certify_fault(x, oracle, trigger, Fragment({{1, 2}}),
                    single(Instruction::basic("o", Method::SetOne)), cfg, kDefault);
  REQUIRE(result.ok());
  CHECK(result.certified->sizes.fault_length == 2);
  CHECK(result.certified->sizes.repair_length == 1);
  CHECK(render_sequence(substitute(x, result.certified->fragment,
                                   result.certified->replacement)) == "o.set:1; !");

  // A two-instruction deletion would land at repair length 0, outside the
  // 50% deviation bound.
  Replacement full_deletion{{{}}};
  CertificationResult rejected =
      certify_fault(x, oracle, trigger, Fragment({{1, 2}}), full_deletion, cfg, kDefault);
  REQUIRE_FALSE(rejected.ok());
  bool fix_violated = false;
  for (RejectionReason reason : rejected.rejection->reasons)
    if (reason == RejectionReason::FixLengthBound) fix_violated = true;
  CHECK(fix_violated);
}

TEST_CASE("search_repairs finds the +i.get repair first among certified") {
  InstructionSequence x = flipped_program();
  TestOracle oracle = TestOracle::from_spec(oi_spec());

  std::vector<FailureRecord> failing;
  for (const TestCase &tc : oracle.cases()) {
    TestResult result = run_confirmation_test(x, tc, kDefault, 1000);
    if (!result.passed) failing.push_back({tc, result, kDefault});
  }
  REQUIRE(failing.size() == 4);

  SearchConfig search = SearchConfig::default_for(6, {"i", "o"});
  std::vector<RepairCandidate> candidates =
      search_repairs(x, oracle, failing, Fragment({{1, 1}}),
                     FaultBudgetConfig::profile_s4(), search, kDefault);

  // Fault length 1 under deviation 0.5 admits only length-1 replacements.
  CHECK(candidates.size() == search.alphabet.size());
  for (const RepairCandidate &candidate : candidates)
    CHECK(candidate.replacement.total_length() == 1);

  REQUIRE_FALSE(candidates.empty());
  REQUIRE(candidates.front().result.ok());
  CHECK(candidates.front().replacement ==
        single(Instruction::pos_test("i", Method::Get)));

  std::size_t certified = 0;
  bool seen_rejected = false;
  for (const RepairCandidate &candidate : candidates) {
    if (candidate.result.ok()) {
      CHECK_FALSE(seen_rejected);  // certified come first
      ++certified;
    } else {
      seen_rejected = true;
    }
  }
  CHECK(certified >= 1);
}

TEST_CASE("search_repairs needs a failure to repair") {
  InstructionSequence x = copy_program();
  TestOracle oracle = TestOracle::from_spec(oi_spec());
  SearchConfig search = SearchConfig::default_for(6, {"i", "o"});
  CHECK_THROWS_AS(search_repairs(x, oracle, {}, Fragment({{1, 1}}),
                                 FaultBudgetConfig::profile_s4(), search, kDefault),
                  Error);
}

TEST_CASE("the idealized regression criterion is computed by brute force") {
  InstructionSequence x = flipped_program();
  InstructionSequence repaired = copy_program();
  Specification spec = oi_spec();

  IdealizedRegressionReport holds =
      idealized_regression_criterion(x, repaired, spec, kDefault);
  CHECK(holds.holds);
  CHECK(holds.flipped_to_pass.size() == 4);
  CHECK(holds.regressions.empty());

  // The identity repair flips nothing.
  IdealizedRegressionReport identity = idealized_regression_criterion(x, x, spec, kDefault);
  CHECK_FALSE(identity.holds);
  CHECK(identity.flipped_to_pass.empty());

  // No Fail existed on the correct program, so nothing can flip.
  IdealizedRegressionReport correct =
      idealized_regression_criterion(repaired, repaired, spec, kDefault);
  CHECK_FALSE(correct.holds);
}

TEST_CASE("oracle dominance: exhaustive certification implies the criterion") {
  std::mt19937 rng(606);
  Specification spec = oi_spec();
  TestOracle oracle = TestOracle::from_spec(spec);
  FaultBudgetConfig cfg = FaultBudgetConfig::profile_s4();
  cfg.single_fault_fraction = 1.0;  // isolate the regression conditions
  SearchConfig search = SearchConfig::default_for(6, {"i", "o"});

  std::uniform_int_distribution<std::size_t> pos(1, 6);
  std::uniform_int_distribution<std::size_t> alpha(0, search.alphabet.size() - 1);
  int checked = 0;
  for (int i = 0; i < 400 && checked < 60; ++i) {
    InstructionSequence x = flipped_program();
    std::size_t p = pos(rng);
    Fragment f({{p, p}});
    Replacement r = single(search.alphabet[alpha(rng)]);

    std::size_t failing_index = oracle.cases().size();
    for (std::size_t c = 0; c < oracle.cases().size(); ++c) {
      if (!run_confirmation_test(x, oracle.cases()[c], kDefault, 1000).passed) {
        failing_index = c;
        break;
      }
    }
    REQUIRE(failing_index < oracle.cases().size());
    FailureRecord trigger{oracle.cases()[failing_index],
                          run_confirmation_test(x, oracle.cases()[failing_index],
                                                kDefault, 1000),
                          kDefault};
    CertificationResult result = certify_fault(x, oracle, trigger, f, r, cfg, kDefault);
    if (result.ok()) {
      ++checked;
      InstructionSequence repaired = substitute(x, f, r);
      CHECK(idealized_regression_criterion(x, repaired, spec, kDefault).holds);
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("fault_accounting sums volumes and enforces disjointness") {
  InstructionSequence x = flipped_program();
  FaultBudgetConfig cfg = FaultBudgetConfig::profile_s1();

  std::vector<CertifiedFault> one;
  one.push_back(make_fault(Fragment({{1, 1}})));
  FaultAccountingReport report = fault_accounting(x, one, cfg);
  CHECK(report.count == 1);
  CHECK(report.total_length == 1);
  CHECK(report.total_fraction == doctest::Approx(1.0 / 6.0));
  CHECK_FALSE(report.redesign_required);

  std::vector<CertifiedFault> overlapping;
  overlapping.push_back(make_fault(Fragment({{1, 2}})));
  overlapping.push_back(make_fault(Fragment({{2, 3}})));
  CHECK_THROWS_AS(fault_accounting(x, overlapping, cfg), Error);

  std::vector<CertifiedFault> two;
  two.push_back(make_fault(Fragment({{1, 1}})));
  two.push_back(make_fault(Fragment({{3, 3}})));
  FaultAccountingReport heavy = fault_accounting(x, two, cfg);
  CHECK(heavy.total_length == 2);
  CHECK(heavy.total_fraction == doctest::Approx(2.0 / 6.0));
  CHECK(heavy.redesign_required);  // 0.333 > 0.25
}

TEST_CASE("check_adequacy repairs the flipped program with one fault") {
  InstructionSequence x = flipped_program();
  Specification spec = oi_spec();
  SearchConfig search = SearchConfig::default_for(6, {"i", "o"});

  AdequacyReport report =
      check_adequacy(x, spec, FaultBudgetConfig::profile_s4(), search, kDefault);
  REQUIRE(report.verdict == AdequacyVerdict::Adequate);
  REQUIRE(report.chain.size() == 1);
  CHECK(report.total_fault_fraction == doctest::Approx(1.0 / 6.0));
  CHECK(report.stats.certified >= 1);

  // Replaying the chain yields a sequence passing every exhaustive case.
  InstructionSequence repaired =
      substitute(x, report.chain[0].fragment, report.chain[0].replacement);
  SuiteReport final_run = run_suite(repaired, exhaustive_suite(spec), kDefault, 1000);
  CHECK(final_run.failed == 0);
}

TEST_CASE("check_adequacy reports search exhaustion for o.set:0") {
  InstructionSequence x = parse_sequence("o.set:0; !");
  Specification spec = oi_spec();
  SearchConfig search = SearchConfig::default_for(2, {"i", "o"}, 1);

  AdequacyReport report =
      check_adequacy(x, spec, FaultBudgetConfig::profile_s4(), search, kDefault);
  CHECK(report.verdict == AdequacyVerdict::NotAdequate);
  CHECK(report.reason == InadequacyReason::SearchExhausted);
  CHECK(report.chain.empty());
}

TEST_CASE("check_adequacy distinguishes budget exhaustion from search exhaustion") {
  // Two independent single-instruction faults; initial length 3 gives a
  // total volume cap of 1 under s1, so only one of them fits the budget.
  InstructionSequence x = parse_sequence("a.set:0; b.set:0; !");
  Specification spec({"a", "b"}, 32);
  for (const MachineState &d : spec.domain_states()) {
    AcceptancePredicate expected;
    expected.constraints["a"] = true;
    if (!(d == MachineState{})) expected.constraints["b"] = true;
    spec.add_expectation(d, expected);
  }
  SearchConfig search = SearchConfig::default_for(3, {"a", "b"});

  AdequacyReport starved =
      check_adequacy(x, spec, FaultBudgetConfig::profile_s1(), search, kDefault);
  CHECK(starved.verdict == AdequacyVerdict::NotAdequate);
  CHECK(starved.reason == InadequacyReason::BudgetExhausted);

  // A roomier volume budget lets the chain grow to both repairs.
  FaultBudgetConfig roomy = FaultBudgetConfig::profile_s1();
  roomy.total_fraction = 0.67;  // cap 2 of 3
  AdequacyReport fixed = check_adequacy(x, spec, roomy, search, kDefault);
  REQUIRE(fixed.verdict == AdequacyVerdict::Adequate);
  CHECK(fixed.chain.size() == 2);
  CHECK(fixed.total_fault_fraction == doctest::Approx(2.0 / 3.0));

  InstructionSequence current = x;
  for (const CertifiedFault &fault : fixed.chain)
    current = substitute(current, fault.fragment, fault.replacement);
  CHECK(run_suite(current, exhaustive_suite(spec), kDefault, 1000).failed == 0);
}

TEST_CASE("certified faults replay: trigger and regression set re-verified") {
  InstructionSequence x = flipped_program();
  TestOracle oracle = TestOracle::from_spec(oi_spec());
  std::vector<FailureRecord> failing;
  for (const TestCase &tc : oracle.cases()) {
    TestResult result = run_confirmation_test(x, tc, kDefault, 1000);
    if (!result.passed) failing.push_back({tc, result, kDefault});
  }
  std::vector<TestCase> passing_before;
  for (const TestCase &tc : oracle.cases())
    if (run_confirmation_test(x, tc, kDefault, 1000).passed) passing_before.push_back(tc);

  SearchConfig search = SearchConfig::default_for(6, {"i", "o"});
  for (const RepairCandidate &candidate :
       search_repairs(x, oracle, failing, Fragment({{1, 1}}),
                      FaultBudgetConfig::profile_s4(), search, kDefault)) {
    if (!candidate.result.ok()) continue;
    const CertifiedFault &fault = *candidate.result.certified;
    InstructionSequence repaired = substitute(x, fault.fragment, fault.replacement);
    CHECK(run_confirmation_test(repaired, fault.triggering_failure.test_case, kDefault,
                                1000)
              .passed);
    CHECK(regression_check(repaired, passing_before, kDefault, 1000).passed);
  }
}

TEST_CASE("an already-correct program is adequate with an empty chain") {
  AdequacyReport report =
      check_adequacy(copy_program(), oi_spec(), FaultBudgetConfig::profile_s4(),
                     SearchConfig::default_for(6, {"i", "o"}), kDefault);
  CHECK(report.verdict == AdequacyVerdict::Adequate);
  CHECK(report.chain.empty());
  CHECK(report.total_fault_fraction == 0.0);
}

TEST_CASE("adequacy search transcripts are deterministic") {
  InstructionSequence x = flipped_program();
  Specification spec = oi_spec();
  SearchConfig search = SearchConfig::default_for(6, {"i", "o"});
  FaultBudgetConfig cfg = FaultBudgetConfig::profile_s4();

  AdequacyReport first = check_adequacy(x, spec, cfg, search, kDefault);
  AdequacyReport second = check_adequacy(x, spec, cfg, search, kDefault);
  CHECK(first.stats.candidates_tried == second.stats.candidates_tried);
  CHECK(first.stats.certified == second.stats.certified);
  CHECK(first.stats.backtracks == second.stats.backtracks);
  REQUIRE(first.chain.size() == second.chain.size());
  for (std::size_t i = 0; i < first.chain.size(); ++i) {
    CHECK(first.chain[i].fragment == second.chain[i].fragment);
    CHECK(first.chain[i].replacement == second.chain[i].replacement);
  }
}
