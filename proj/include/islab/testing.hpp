// Copyright islab contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Confirmation testing. A test case is a triple (d, U, k): input state d,
// acceptance predicate U over final states, and a step bound k saying the run
// must be observed for at least k operational steps. A confirmation test
// passes iff the effectuation terminates correctly, within the observation
// budget, in a state satisfying U; a successful test may cover more steps
// than k.
//
// Every effectuation in this module is logged to an append-only ledger with
// an explicit purpose tag — there are no unqualified effectuations, and
// outcomes are only meaningful relative to such a tag.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "islab/semantics.hpp"

namespace islab {

inline constexpr std::uint64_t kDefaultStepBound = 64;

/// Acceptance predicate U: the wildcard "any", or a conjunction of reg=bit
/// constraints. The empty conjunction normalizes to the wildcard.
struct AcceptancePredicate {
  bool wildcard = false;
  std::map<std::string, bool> constraints;

  static AcceptancePredicate any();
  static AcceptancePredicate constraint(std::string reg, bool bit);

  bool matches(const MachineState &state) const;
  bool is_wildcard() const { return wildcard || constraints.empty(); }

  /// "any" or "reg=bit(,reg=bit)*".
  static AcceptancePredicate parse(std::string_view text);
  std::string render() const;

  bool operator==(const AcceptancePredicate &other) const {
    return is_wildcard() == other.is_wildcard() &&
           (is_wildcard() || constraints == other.constraints);
  }
};

struct TestCase {
  std::string name;
  MachineState input;                           // d
  AcceptancePredicate accept;                   // U
  std::uint64_t step_bound = kDefaultStepBound; // k
  bool step_bound_defaulted = false;            // suite file omitted k
};

enum class FailReason {
  None,
  TerminatedOutsideU,
  Deadlock,
  ErrorHalt,
  Livelock,
  BudgetExhaustedAfterK,
  StaticallyRejected
};

const char *fail_reason_name(FailReason r);

struct TestResult {
  bool passed = false;
  FailReason reason = FailReason::None;
  Outcome outcome;
  std::uint64_t steps_observed = 0;
};

// ---------------------------------------------------------------------------
// Teleologically tagged effectuation ledger

enum class Purpose { ConfirmationTest, ExperimentationTest, Demonstration, PracticalUse };

const char *purpose_name(Purpose p);
Purpose parse_purpose(std::string_view text);
bool purpose_is_test(Purpose p);

struct EffectuationRecord {
  Purpose purpose = Purpose::ConfirmationTest;
  std::string program_id;
  MachineState input;
  Outcome outcome;
  std::uint64_t steps = 0;
  std::uint64_t timestamp = 0;  // append sequence number, stamped by the ledger

  // In-memory evidence beyond the persisted line: positions the run touched
  // (for coverage) and, for test records, whether the oracle was the wildcard.
  // Records parsed back from a ledger file carry neither.
  std::optional<std::vector<std::size_t>> positions_touched;
  std::optional<bool> wildcard_oracle;
};

/// Append-only; records are never mutated or removed. Appends must be
/// serialized by the caller (single-writer contract); reads take snapshots.
class EffectuationLedger {
public:
  const std::vector<EffectuationRecord> &records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  /// Stamps the record's timestamp with the append sequence number.
  const EffectuationRecord &append(EffectuationRecord record);

private:
  std::vector<EffectuationRecord> records_;
};

/// Appends `record` to the ledger; rejects records whose purpose tag is not
/// one of the four teleological categories.
void record_effectuation(EffectuationLedger &ledger, EffectuationRecord record);

/// Persisted form: "PURPOSE PROGRAM-ID OUTCOME STEPS".
std::string render_ledger_line(const EffectuationRecord &record);
EffectuationRecord parse_ledger_line(std::string_view line);

/// Builds a record from a finished effectuation.
EffectuationRecord make_record(Purpose purpose, std::string program_id,
                               const MachineState &input, const Effectuation &eff,
                               std::optional<bool> wildcard_oracle = std::nullopt);

// ---------------------------------------------------------------------------
// Specifications

/// The oracle: a register domain enumerated exhaustively (each register over
/// {0,1}) with an acceptance predicate per domain state. States beyond the
/// explicit expectations fall back to copy rules (dst=src per state), then to
/// the wildcard.
class Specification {
public:
  static constexpr std::size_t kMaxDomainRegisters = 16;  // 2^16 state cap

  Specification(std::vector<std::string> domain, std::uint64_t default_step_bound);

  /// Adds a closed-form register-copy rule "dst=src".
  void add_copy_rule(const std::string &dst, const std::string &src);
  /// Pins the expectation for one domain state.
  void add_expectation(const MachineState &state, AcceptancePredicate accept);

  const std::vector<std::string> &domain() const { return domain_; }
  std::uint64_t default_step_bound() const { return default_step_bound_; }

  /// Throws when the domain exceeds the 2^16-state cap.
  void check_cap() const;

  /// 2^|domain| states in binary counting order, first register most
  /// significant. Throws over cap.
  std::vector<MachineState> domain_states() const;

  AcceptancePredicate expected_for(const MachineState &state) const;

  bool same_domain(const Specification &other) const { return domain_ == other.domain_; }

private:
  std::vector<std::string> domain_;  // sorted, unique
  std::uint64_t default_step_bound_;
  std::vector<std::pair<std::string, std::string>> copy_rules_;  // dst=src
  std::map<std::string, AcceptancePredicate> expectations_;      // key: render_over(domain)
};

/// Spec file: a `domain REG(,REG)*` header, then any of
///   rule DST=SRC            closed-form copy rule
///   expect ASSIGN ; PRED    per-state expectation (ASSIGN may be empty)
///   k NAT                   default step bound (once)
/// '%' comments and blank lines are ignored.
Specification parse_spec_file(std::string_view text);

/// Suite file, one case per line:
///   case NAME: in ASSIGN ; expect (any | REG=BIT(,REG=BIT)*) ; k NAT
/// The `k` field is optional; omitted bounds default to 64 and are flagged.
std::vector<TestCase> parse_suite_file(std::string_view text);

// ---------------------------------------------------------------------------
// Operations

/// Runs one confirmation test. Requires budget >= tc.step_bound (the
/// mechanism must be able to observe at least k steps); violating that is an
/// error, not a Fail.
TestResult run_confirmation_test(const InstructionSequence &x, const TestCase &tc,
                                 const SemanticsVariant &v, std::uint64_t budget);

struct SuiteReport {
  std::vector<TestResult> results;  // suite order
  std::size_t passed = 0;
  std::size_t failed = 0;
};

/// Runs every case in order; each execution is appended to `ledger` (when
/// given) tagged ConfirmationTest.
SuiteReport run_suite(const InstructionSequence &x, std::span<const TestCase> suite,
                      const SemanticsVariant &v, std::uint64_t budget,
                      EffectuationLedger *ledger = nullptr,
                      const std::string &program_id = "x");

struct RegressionReport {
  bool passed = true;
  std::vector<std::size_t> newly_failing;  // indices into the case list
};

/// Re-runs previously passing cases on the repaired sequence.
RegressionReport regression_check(const InstructionSequence &x_repaired,
                                  std::span<const TestCase> previously_passing,
                                  const SemanticsVariant &v, std::uint64_t budget);

/// One test case per domain state (deterministic order), acceptance from the
/// spec, step bound = the spec default. Throws when the domain is over cap.
std::vector<TestCase> exhaustive_suite(const Specification &spec);

} // namespace islab
