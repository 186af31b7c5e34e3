// Copyright islab contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Step-counted operational semantics with configurable excess handling.
//
// A run starts at position 1 over a store of single-bit registers and takes
// one step per processed instruction (jumps, tests and idle steps included).
// Whenever the program counter would leave 1..len — a jump lands outside the
// range, or the instruction at position len completes without halting — the
// excess policy for that end of the sequence decides what happens:
//
//   Deadlock      halt without warning (outcome Deadlock)
//   Livelock      idle forever; reported exactly via configuration repetition
//   Error         halt with warning (outcome ErrorHalt, state preserved)
//   Terminate     treat as correct termination
//   Skip          retarget the offending move to the next position; if that
//                 also overflows, terminate correctly
//   StaticReject  a static check of that end's jump/fall-through targets runs
//                 before any step; violations abort the run untaken
//
// The two ends combine freely, giving 36 variants. Differences between
// variants appear only when a run actually reaches an excess; in-range
// halting programs behave identically everywhere.
//
// #0 and \#0 deadlock under every variant. Livelock detection is exact over
// the finite configuration space: a run over r registers and n positions that
// has not ended within n * 2^r + 1 steps must have repeated a (position,
// state) configuration and is classified Livelock, budget permitting.

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "islab/isa.hpp"

namespace islab {

inline constexpr std::uint64_t kDefaultBudget = 10000;

enum class ExcessPolicy { Deadlock, Livelock, Error, Terminate, Skip, StaticReject };

inline constexpr std::array<ExcessPolicy, 6> kAllPolicies = {
    ExcessPolicy::Deadlock, ExcessPolicy::Livelock,  ExcessPolicy::Error,
    ExcessPolicy::Terminate, ExcessPolicy::Skip, ExcessPolicy::StaticReject};

const char *policy_name(ExcessPolicy p);
ExcessPolicy parse_policy(std::string_view text);

/// One of the 36 operational meanings: an excess policy per sequence end.
struct SemanticsVariant {
  ExcessPolicy low_excess = ExcessPolicy::Deadlock;
  ExcessPolicy high_excess = ExcessPolicy::Deadlock;

  bool operator==(const SemanticsVariant &) const = default;
};

/// Text form "low=<policy>,high=<policy>" with policies deadlock, livelock,
/// error, terminate, skip, reject.
SemanticsVariant parse_variant(std::string_view text);
std::string render_variant(const SemanticsVariant &v);

/// Finite store of single-bit registers; unmapped registers read as 0.
/// Stored canonically (only registers holding 1), so states that agree on
/// every lookup compare equal.
class MachineState {
public:
  MachineState() = default;

  bool get(const std::string &reg) const { return ones_.count(reg) != 0; }
  void set(const std::string &reg, bool value);

  /// Registers currently holding 1, sorted.
  const std::map<std::string, bool> &entries() const { return ones_; }

  /// "reg=bit(,reg=bit)*"; empty text means the all-zero state.
  static MachineState parse(std::string_view text);

  std::string render() const;  // "{i=1,o=1}", "{}"
  /// Renders every listed register explicitly: "i=1,o=0".
  std::string render_over(std::span<const std::string> registers) const;

  bool operator==(const MachineState &) const = default;
  auto operator<=>(const MachineState &) const = default;

private:
  std::map<std::string, bool> ones_;  // value is always true
};

enum class OutcomeKind {
  Terminated,
  ErrorHalt,
  Deadlock,
  Livelock,
  BudgetExhausted,
  StaticallyRejected
};

const char *outcome_kind_name(OutcomeKind k);

/// Result of one effectuation. `steps` is the operational step count for
/// Terminated/ErrorHalt/Deadlock, the detection step for Livelock, and the
/// exhausted budget for BudgetExhausted. `position` is the first statically
/// flagged position for StaticallyRejected.
struct Outcome {
  OutcomeKind kind = OutcomeKind::Terminated;
  MachineState final_state;  // Terminated / ErrorHalt
  std::uint64_t steps = 0;
  std::size_t position = 0;  // StaticallyRejected

  bool operator==(const Outcome &) const = default;
  std::string render() const;
};

struct TraceStep {
  std::uint64_t step = 0;      // consecutive from 1
  std::size_t position = 0;    // 0 for idle steps outside the range
  std::string instruction;     // rendered; "(idle)" for idle steps
  MachineState state_after;
};

using Trace = std::vector<TraceStep>;

struct Effectuation {
  Outcome outcome;
  Trace trace;
};

/// Deterministic small-step run of x on input d under variant v, taking at
/// most `budget` steps (budget >= 1). See the file comment for the rules.
Effectuation effectuate(const InstructionSequence &x, const MachineState &d,
                        const SemanticsVariant &v, std::uint64_t budget);

/// Positions whose static successor targets (jump target; p+1 for a basic
/// instruction; p+1 and p+2 for a test) leave 1..len. Empty result = pass.
/// Offsets are static, so the check is exact: a sequence that passes can
/// never reach an excess at run time.
std::vector<std::size_t> static_check(const InstructionSequence &x);

/// All 36 variants, low policy varying slowest, in kAllPolicies order.
std::vector<SemanticsVariant> enumerate_variants();

/// A black-box machine under variant discrimination: runs a program on an
/// input and reports the outcome.
using EffectuationOracle =
    std::function<Outcome(const InstructionSequence &, const MachineState &)>;

struct Probe {
  InstructionSequence program;
  MachineState input;
};

/// The variants whose predicted outcome category (OutcomeKind) matches the
/// oracle on every probe, in enumeration order. Never empty when the oracle
/// implements one of the 36 variants; an empty result signals an
/// out-of-model machine.
std::vector<SemanticsVariant>
discriminate_variant(const EffectuationOracle &oracle,
                     const std::vector<Probe> &probes,
                     std::uint64_t budget = kDefaultBudget);

} // namespace islab
