// Copyright islab contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Mechanical faults. A fragment f of x, together with a replacement f', is a
// certified fault exactly when:
//
//   1. size budget      total fragment length <= max(floor, C * len(x))
//   2. fix-length bound |len(f') - len(f)| <= deviation * len(f)
//   3. repair confirmation   the triggering failing case passes cleanly on
//                            x' = substitute(x, f, f')
//   4. regression        every case that passed on x still passes on x'
//   5. minimality (optional) no proper sub-fragment admits a certifiable
//                            replacement within the search bounds
//
// Regression against a partial suite approximates the idealized criterion
// (at least one Fail flips to Pass, no Pass flips to Fail over the complete
// collection) from below and admits false positives; the idealized criterion
// itself is computed here by exhaustive brute force over a specification
// domain. The adequacy search chains certified repairs depth-first with
// backtracking until a failure-free sequence is reached or the total fault
// volume budget runs out.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "islab/testing.hpp"

namespace islab {

/// A confirmed failure: a test case together with its failing result.
struct FailureRecord {
  TestCase test_case;
  TestResult result;  // verdict is Fail
  SemanticsVariant variant;
};

/// Numeric fault/fix budgets. Named presets: "s1" = 0.05/0.50/0.25 (the
/// default), "s4" = 0.10/0.50/0.25. The length floor keeps desk-scale
/// sequences workable, where a strict fraction would forbid all faults.
struct FaultBudgetConfig {
  double single_fault_fraction = 0.05;  // C
  double fix_length_deviation = 0.50;
  double total_fraction = 0.25;
  std::size_t length_floor = 1;
  bool enforce_minimality = false;

  static FaultBudgetConfig profile_s1();
  static FaultBudgetConfig profile_s4();
  static FaultBudgetConfig by_name(std::string_view name);

  void validate() const;  // fractions in (0,1], floor >= 1

  /// max(floor, floor(C * len))
  std::size_t single_fault_cap(std::size_t len) const;
  /// max(floor, floor(total_fraction * len))
  std::size_t total_cap(std::size_t len) const;
  /// Inclusive repair-length interval [lo, hi] allowed for a fault of the
  /// given length under the deviation bound.
  std::pair<std::size_t, std::size_t> fix_length_bounds(std::size_t fault_len) const;
};

struct SizeAccounting {
  std::size_t fault_length = 0;
  std::size_t repair_length = 0;
  double fault_fraction = 0.0;  // fault_length / len(x)
};

struct RegressionEvidence {
  std::size_t cases_rerun = 0;       // previously passing cases re-run on x'
  bool exhaustive_suite_used = false;
  bool all_passed = false;
};

struct CertifiedFault {
  Fragment fragment;
  Replacement replacement;
  FailureRecord triggering_failure;
  RegressionEvidence regression;
  SizeAccounting sizes;
};

enum class RejectionReason {
  SizeBudget,
  FixLengthBound,
  RepairConfirmation,
  Regression,
  Minimality
};

const char *rejection_reason_name(RejectionReason r);

/// Lists every violated certification condition.
struct Rejection {
  std::vector<RejectionReason> reasons;
  std::vector<std::string> details;  // parallel to reasons
};

struct CertificationResult {
  std::optional<CertifiedFault> certified;
  std::optional<Rejection> rejection;

  bool ok() const { return certified.has_value(); }
};

/// The regression oracle for certification: an explicit suite, or the
/// exhaustive suite of a specification.
class TestOracle {
public:
  static TestOracle from_spec(const Specification &spec);
  static TestOracle from_suite(std::vector<TestCase> suite);

  const std::vector<TestCase> &cases() const { return cases_; }
  bool exhaustive() const { return exhaustive_; }

private:
  std::vector<TestCase> cases_;
  bool exhaustive_ = false;
};

/// Replacement search space: a finite instruction alphabet and a per-part
/// length cap. The default alphabet over a register set holds +r.get, -r.get,
/// r.set:0, r.set:1 and r.negate per register, forward jumps #1..#max_jump,
/// and !.
struct SearchConfig {
  std::vector<Instruction> alphabet;
  std::size_t max_part_len = 2;

  static SearchConfig default_for(std::size_t max_jump,
                                  const std::vector<std::string> &registers,
                                  std::size_t max_part_len = 2);
};

/// Checks conditions 1-5 for (f, r) against the failing case and the oracle.
/// All violated conditions are reported, not just the first. Throws when the
/// fragment is invalid for x or when the "failing" case in fact passes on x
/// (stale failure). `minimality_search` supplies the bounds for condition 5;
/// when null and minimality is enforced, a default alphabet over the union of
/// x's and the oracle's registers is used.
CertificationResult certify_fault(const InstructionSequence &x, const TestOracle &oracle,
                                  const FailureRecord &failing, const Fragment &f,
                                  const Replacement &r, const FaultBudgetConfig &cfg,
                                  const SemanticsVariant &v,
                                  std::uint64_t budget = kDefaultBudget,
                                  const SearchConfig *minimality_search = nullptr);

struct RepairCandidate {
  Replacement replacement;
  CertificationResult result;
};

/// Enumerates every replacement for f within the fix-length bounds, in a
/// deterministic order (total length ascending, then part-length composition,
/// then alphabet order per slot), certifies each against the first failure in
/// `failing`, and returns certified candidates first (enumeration order
/// preserved within each group). Throws when `failing` is empty or stale.
std::vector<RepairCandidate>
search_repairs(const InstructionSequence &x, const TestOracle &oracle,
               std::span<const FailureRecord> failing, const Fragment &f,
               const FaultBudgetConfig &cfg, const SearchConfig &search,
               const SemanticsVariant &v, std::uint64_t budget = kDefaultBudget);

struct IdealizedRegressionReport {
  bool holds = false;
  std::vector<MachineState> flipped_to_pass;  // Fail -> Pass witnesses
  std::vector<MachineState> regressions;      // Pass -> Fail witnesses
};

/// The brute-force regression oracle over the complete (exhaustive) test
/// collection: holds iff at least one case flips Fail->Pass and none flips
/// Pass->Fail.
IdealizedRegressionReport
idealized_regression_criterion(const InstructionSequence &x,
                               const InstructionSequence &x_repaired,
                               const Specification &spec, const SemanticsVariant &v,
                               std::uint64_t budget = kDefaultBudget);

struct FaultAccountingReport {
  std::size_t count = 0;
  std::size_t total_length = 0;
  double total_fraction = 0.0;
  bool redesign_required = false;  // total length over the total budget
};

/// Verifies pairwise disjointness of the certified fragments (error naming
/// the offending pair otherwise) and reports the combined fault volume,
/// flagging redesign when it exceeds the total budget.
FaultAccountingReport fault_accounting(const InstructionSequence &x,
                                       std::span<const CertifiedFault> faults,
                                       const FaultBudgetConfig &cfg);

enum class AdequacyVerdict { Adequate, NotAdequate };
enum class InadequacyReason { None, BudgetExhausted, SearchExhausted };

struct SearchStats {
  std::uint64_t candidates_tried = 0;
  std::uint64_t certified = 0;
  std::uint64_t backtracks = 0;
};

struct AdequacyReport {
  AdequacyVerdict verdict = AdequacyVerdict::NotAdequate;
  InadequacyReason reason = InadequacyReason::None;
  std::vector<CertifiedFault> chain;  // in application order
  double total_fault_fraction = 0.0;  // relative to the initial length
  SearchStats stats;
};

/// Transformational improvement with backtracking: repeatedly takes the first
/// failing exhaustive case, enumerates fragments within the per-fault budget,
/// searches certified repairs, and recurses on the repaired sequence while
/// the cumulative fault volume stays within the total budget. Deterministic
/// given identical inputs and bounds.
AdequacyReport check_adequacy(const InstructionSequence &x, const Specification &spec,
                              const FaultBudgetConfig &cfg, const SearchConfig &search,
                              const SemanticsVariant &v,
                              std::uint64_t budget = kDefaultBudget);

} // namespace islab
