// Copyright islab contributors.
// SPDX-License-Identifier: Apache-2.0
//
// The three non-mechanical conceptions of fault, next to the mechanical one:
//
//   product authority      lint: rule violations ("violations of art") that
//                          need not be mechanical faults at all
//   incorrectness substitute   exhaustive verification: incorrectness
//                          witnesses, deliberately without fault locations
//   process authority      a report over the effectuation ledger: testing
//                          share, coverage, oracle quality
//
// plus the defect classifier separating specification defects, sequence
// faults and phantom failures against a second "intent" oracle.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "islab/testing.hpp"

namespace islab {

enum class Severity { Style, Hazard };

struct Violation {
  std::string rule;                   // one of kLintRules
  std::vector<std::size_t> positions; // within 1..len; may be empty for
                                      // program-level rules (no-halt)
  std::string message;
  Severity severity = Severity::Style;
};

inline constexpr std::array<const char *, 5> kLintRules = {
    "unreachable", "oor-jump", "jump-chain", "no-halt", "dead-store"};

/// Applies the given rules (all of them by default) and returns violations
/// ordered by first position, then rule name. Unknown rule ids are errors.
/// Reachability uses the default variant's position graph.
std::vector<Violation> lint(const InstructionSequence &x,
                            std::span<const std::string> rules = {});

std::string render_violation_machine(const Violation &v);  // "VIOLATION <rule> <positions>"

struct IncorrectnessWitness {
  MachineState input;
  Outcome observed;
  AcceptancePredicate expected;
};

/// Verdict of the exhaustive verifier. Witnesses carry inputs and observed
/// behavior only — the incorrectness-substitute view does not localize.
struct IncorrectnessReport {
  bool correct = false;
  std::vector<IncorrectnessWitness> witnesses;
};

/// Runs every domain state and checks the final state against the spec.
IncorrectnessReport verify_exhaustive(const InstructionSequence &x,
                                      const Specification &spec,
                                      const SemanticsVariant &v,
                                      std::uint64_t budget = kDefaultBudget);

struct DefectFinding {
  MachineState input;
  std::string note;
};

/// Per-state classification of observed discrepancies; the three sets are
/// disjoint. A state lands in phantom_failures when x fails the spec yet
/// satisfies the intent, in spec_defects when spec and intent disagree, and
/// in sequence_faults when x fails a spec the intent confirms.
struct DefectReport {
  std::vector<DefectFinding> spec_defects;
  std::vector<DefectFinding> sequence_faults;
  std::vector<DefectFinding> phantom_failures;
};

DefectReport classify_defects(const InstructionSequence &x, const Specification &spec,
                              const Specification &intent, const SemanticsVariant &v,
                              std::uint64_t budget = kDefaultBudget);

struct ProcessThresholds {
  double testing_share_benchmark = 0.50;
  double wildcard_fraction_threshold = 0.50;
  double coverage_high = 0.90;
};

struct ProcessReport {
  std::size_t confirmation_tests = 0;
  std::size_t experimentation_tests = 0;
  std::size_t demonstrations = 0;
  std::size_t practical_uses = 0;
  double testing_share = 0.0;

  // Computable only from records carrying trace/oracle data; the persisted
  // ledger line format does not, so file-sourced reports leave these unset.
  std::optional<double> instruction_coverage;
  std::optional<double> wildcard_oracle_fraction;

  bool below_testing_benchmark = false;
  bool oracle_problem = false;   // wildcard fraction above threshold
  bool coverage_only = false;    // high coverage with all-wildcard oracles
  std::vector<std::string> notes;
};

/// Aggregates the ledger by purpose and computes the measurable process
/// proxies. `program_length` enables instruction coverage; process criteria
/// that are not mechanically measurable (understanding, competence) are
/// listed in `notes` as out of scope.
ProcessReport process_report(const EffectuationLedger &ledger,
                             const ProcessThresholds &thresholds = {},
                             std::optional<std::size_t> program_length = std::nullopt);

} // namespace islab
