// Copyright islab contributors.
// SPDX-License-Identifier: Apache-2.0

#include "islab/views.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace islab {

namespace {

// Successor positions under the default variant's control graph: deadlocking
// moves (#0, \#0) and out-of-range targets have no edge.
std::vector<std::size_t> successors(const InstructionSequence &x, std::size_t p) {
  const Instruction &ins = x.at(p);
  const std::size_t len = x.length();
  std::vector<std::size_t> out;
  auto push_in_range = [&](std::size_t q) {
    if (q >= 1 && q <= len) out.push_back(q);
  };
  switch (ins.kind) {
  case InstructionKind::Halt:
    break;
  case InstructionKind::Basic:
    push_in_range(p + 1);
    break;
  case InstructionKind::PosTest:
  case InstructionKind::NegTest:
    push_in_range(p + 1);
    push_in_range(p + 2);
    break;
  case InstructionKind::FwdJump:
    if (ins.offset >= 1 && ins.offset <= len) push_in_range(p + ins.offset);
    break;
  case InstructionKind::BwdJump:
    if (ins.offset >= 1 && ins.offset < p) out.push_back(p - ins.offset);
    break;
  }
  return out;
}

std::vector<bool> reachable_from_start(const InstructionSequence &x) {
  std::vector<bool> reachable(x.length() + 1, false);
  std::deque<std::size_t> work{1};
  reachable[1] = true;
  while (!work.empty()) {
    std::size_t p = work.front();
    work.pop_front();
    for (std::size_t q : successors(x, p)) {
      if (!reachable[q]) {
        reachable[q] = true;
        work.push_back(q);
      }
    }
  }
  return reachable;
}

bool jump_target(const InstructionSequence &x, std::size_t p, std::size_t &target) {
  const Instruction &ins = x.at(p);
  if (ins.kind == InstructionKind::FwdJump) {
    if (ins.offset > x.length()) return false;
    target = p + ins.offset;
  } else if (ins.kind == InstructionKind::BwdJump) {
    if (ins.offset >= p) return false;
    target = p - ins.offset;
  } else {
    return false;
  }
  return target >= 1 && target <= x.length();
}

void rule_unreachable(const InstructionSequence &x, std::vector<Violation> &out) {
  std::vector<bool> reachable = reachable_from_start(x);
  for (std::size_t p = 1; p <= x.length(); ++p) {
    if (!reachable[p])
      out.push_back({"unreachable",
                     {p},
                     "position " + std::to_string(p) + " is not reachable from position 1",
                     Severity::Style});
  }
}

void rule_oor_jump(const InstructionSequence &x, std::vector<Violation> &out) {
  for (std::size_t p = 1; p <= x.length(); ++p) {
    const Instruction &ins = x.at(p);
    if (!ins.is_jump() || ins.offset == 0) continue;
    std::size_t target = 0;
    if (!jump_target(x, p, target))
      out.push_back({"oor-jump",
                     {p},
                     render_instruction(ins) + " at position " + std::to_string(p) +
                         " jumps outside 1.." + std::to_string(x.length()),
                     Severity::Hazard});
  }
}

void rule_jump_chain(const InstructionSequence &x, std::vector<Violation> &out) {
  for (std::size_t p = 1; p <= x.length(); ++p) {
    if (!x.at(p).is_jump() || x.at(p).offset == 0) continue;
    std::size_t target = 0;
    if (jump_target(x, p, target) && x.at(target).is_jump())
      out.push_back({"jump-chain",
                     {p, target},
                     "jump at position " + std::to_string(p) + " lands on another jump at " +
                         std::to_string(target),
                     Severity::Style});
  }
}

void rule_no_halt(const InstructionSequence &x, std::vector<Violation> &out) {
  std::vector<bool> reachable = reachable_from_start(x);
  for (std::size_t p = 1; p <= x.length(); ++p)
    if (reachable[p] && x.at(p).kind == InstructionKind::Halt) return;
  out.push_back({"no-halt",
                 {},
                 "no termination instruction is reachable from position 1",
                 Severity::Hazard});
}

void rule_dead_store(const InstructionSequence &x, std::vector<Violation> &out) {
  const std::size_t len = x.length();
  for (std::size_t p = 1; p <= len; ++p) {
    const Instruction &store = x.at(p);
    if (store.kind != InstructionKind::Basic ||
        (store.method != Method::SetZero && store.method != Method::SetOne))
      continue;

    // Follow unconditional flow until the register is read, rewritten, or
    // the path becomes conditional.
    std::set<std::size_t> seen{p};
    std::size_t q = p + 1;
    while (q >= 1 && q <= len && !seen.count(q)) {
      seen.insert(q);
      const Instruction &cur = x.at(q);
      if (cur.uses_register() && cur.focus == store.focus) {
        if (cur.method == Method::Get || cur.method == Method::Negate) break;  // live
        out.push_back({"dead-store",
                       {p, q},
                       store.focus + " written at position " + std::to_string(p) +
                           " is unconditionally rewritten at " + std::to_string(q) +
                           " before any get",
                       Severity::Style});
        break;
      }
      if (cur.kind == InstructionKind::Basic) {
        ++q;
      } else if (cur.is_jump() && cur.offset >= 1) {
        std::size_t target = 0;
        if (!jump_target(x, q, target)) break;
        q = target;
      } else {
        break;  // halt, test (conditional), #0
      }
    }
  }
}

} // namespace

std::vector<Violation> lint(const InstructionSequence &x,
                            std::span<const std::string> rules) {
  std::vector<std::string> selected(rules.begin(), rules.end());
  if (selected.empty())
    selected.assign(kLintRules.begin(), kLintRules.end());
  for (const std::string &rule : selected)
    if (std::find(kLintRules.begin(), kLintRules.end(), rule) == kLintRules.end())
      throw Error("unknown lint rule '" + rule + "'");

  std::vector<Violation> out;
  for (const std::string &rule : selected) {
    if (rule == "unreachable") rule_unreachable(x, out);
    else if (rule == "oor-jump") rule_oor_jump(x, out);
    else if (rule == "jump-chain") rule_jump_chain(x, out);
    else if (rule == "no-halt") rule_no_halt(x, out);
    else if (rule == "dead-store") rule_dead_store(x, out);
  }
  std::stable_sort(out.begin(), out.end(), [](const Violation &a, const Violation &b) {
    std::size_t pa = a.positions.empty() ? 0 : a.positions.front();
    std::size_t pb = b.positions.empty() ? 0 : b.positions.front();
    if (pa != pb) return pa < pb;
    return a.rule < b.rule;
  });
  return out;
}

std::string render_violation_machine(const Violation &v) {
  std::string out = "VIOLATION " + v.rule;
  for (std::size_t i = 0; i < v.positions.size(); ++i)
    out += (i == 0 ? " " : ",") + std::to_string(v.positions[i]);
  return out;
}

IncorrectnessReport verify_exhaustive(const InstructionSequence &x,
                                      const Specification &spec,
                                      const SemanticsVariant &v, std::uint64_t budget) {
  spec.check_cap();
  IncorrectnessReport report;
  for (const MachineState &d : spec.domain_states()) {
    Effectuation eff = effectuate(x, d, v, budget);
    AcceptancePredicate expected = spec.expected_for(d);
    bool satisfied = eff.outcome.kind == OutcomeKind::Terminated &&
                     expected.matches(eff.outcome.final_state);
    if (!satisfied)
      report.witnesses.push_back({d, eff.outcome, std::move(expected)});
  }
  report.correct = report.witnesses.empty();
  return report;
}

DefectReport classify_defects(const InstructionSequence &x, const Specification &spec,
                              const Specification &intent, const SemanticsVariant &v,
                              std::uint64_t budget) {
  if (!spec.same_domain(intent))
    throw Error("specification and intent must share a domain");
  spec.check_cap();

  DefectReport report;
  for (const MachineState &d : spec.domain_states()) {
    AcceptancePredicate spec_pred = spec.expected_for(d);
    AcceptancePredicate intent_pred = intent.expected_for(d);

    Effectuation eff = effectuate(x, d, v, budget);
    bool terminated = eff.outcome.kind == OutcomeKind::Terminated;
    bool passes_spec = terminated && spec_pred.matches(eff.outcome.final_state);
    bool passes_intent = terminated && intent_pred.matches(eff.outcome.final_state);

    std::string behavior = terminated ? eff.outcome.final_state.render()
                                      : std::string(outcome_kind_name(eff.outcome.kind));
    if (!passes_spec && passes_intent) {
      report.phantom_failures.push_back(
          {d, "fails specification (" + spec_pred.render() + ") but matches intent (" +
                  intent_pred.render() + "); repairing would be headed the wrong way"});
    } else if (!(spec_pred == intent_pred)) {
      report.spec_defects.push_back(
          {d, "specification expects " + spec_pred.render() + ", intent expects " +
                  intent_pred.render()});
    } else if (!passes_spec) {
      report.sequence_faults.push_back(
          {d, "observed " + behavior + ", expected " + spec_pred.render()});
    }
  }
  return report;
}

ProcessReport process_report(const EffectuationLedger &ledger,
                             const ProcessThresholds &thresholds,
                             std::optional<std::size_t> program_length) {
  ProcessReport report;
  std::set<std::size_t> covered;
  bool any_trace = false;
  std::size_t oracle_known = 0;
  std::size_t oracle_wildcard = 0;

  for (const EffectuationRecord &record : ledger.records()) {
    switch (record.purpose) {
    case Purpose::ConfirmationTest: ++report.confirmation_tests; break;
    case Purpose::ExperimentationTest: ++report.experimentation_tests; break;
    case Purpose::Demonstration: ++report.demonstrations; break;
    case Purpose::PracticalUse: ++report.practical_uses; break;
    }
    if (purpose_is_test(record.purpose)) {
      if (record.positions_touched) {
        any_trace = true;
        covered.insert(record.positions_touched->begin(), record.positions_touched->end());
      }
      if (record.wildcard_oracle) {
        ++oracle_known;
        if (*record.wildcard_oracle) ++oracle_wildcard;
      }
    }
  }

  const std::size_t total = ledger.size();
  const std::size_t tests = report.confirmation_tests + report.experimentation_tests;
  report.testing_share =
      total == 0 ? 0.0 : static_cast<double>(tests) / static_cast<double>(total);
  report.below_testing_benchmark = report.testing_share < thresholds.testing_share_benchmark;

  if (program_length && *program_length > 0) {
    if (any_trace) {
      std::size_t in_range = 0;
      for (std::size_t p : covered)
        if (p >= 1 && p <= *program_length) ++in_range;
      report.instruction_coverage =
          static_cast<double>(in_range) / static_cast<double>(*program_length);
    } else if (total == 0) {
      report.instruction_coverage = 0.0;
    } else {
      report.notes.push_back(
          "instruction coverage unavailable: ledger records carry no trace data");
    }
  }

  if (oracle_known > 0) {
    report.wildcard_oracle_fraction =
        static_cast<double>(oracle_wildcard) / static_cast<double>(oracle_known);
    report.oracle_problem =
        *report.wildcard_oracle_fraction > thresholds.wildcard_fraction_threshold;
  } else if (tests > 0) {
    report.notes.push_back(
        "oracle quality unavailable: ledger records carry no oracle data");
  }

  if (report.instruction_coverage && report.wildcard_oracle_fraction &&
      *report.instruction_coverage >= thresholds.coverage_high &&
      *report.wildcard_oracle_fraction == 1.0)
    report.coverage_only = true;

  report.notes.push_back(
      "understanding and competence criteria are not mechanically measurable; "
      "this report covers shares, coverage and oracle wildcards only");
  return report;
}

} // namespace islab
