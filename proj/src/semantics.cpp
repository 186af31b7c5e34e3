// Copyright islab contributors.
// SPDX-License-Identifier: Apache-2.0

#include "islab/semantics.hpp"

#include <cctype>
#include <unordered_set>

namespace islab {

const char *policy_name(ExcessPolicy p) {
  switch (p) {
  case ExcessPolicy::Deadlock: return "deadlock";
  case ExcessPolicy::Livelock: return "livelock";
  case ExcessPolicy::Error: return "error";
  case ExcessPolicy::Terminate: return "terminate";
  case ExcessPolicy::Skip: return "skip";
  case ExcessPolicy::StaticReject: return "reject";
  }
  throw Error("unknown excess policy");
}

ExcessPolicy parse_policy(std::string_view text) {
  for (ExcessPolicy p : kAllPolicies)
    if (text == policy_name(p)) return p;
  throw Error("unknown excess policy '" + std::string(text) +
              "' (expected deadlock, livelock, error, terminate, skip or reject)");
}

SemanticsVariant parse_variant(std::string_view text) {
  auto bad = [&] {
    return Error("malformed variant '" + std::string(text) +
                 "' (expected low=<policy>,high=<policy>)");
  };
  std::size_t comma = text.find(',');
  if (comma == std::string_view::npos) throw bad();
  std::string_view low = text.substr(0, comma);
  std::string_view high = text.substr(comma + 1);
  if (!low.starts_with("low=") || !high.starts_with("high=")) throw bad();
  SemanticsVariant v;
  v.low_excess = parse_policy(low.substr(4));
  v.high_excess = parse_policy(high.substr(5));
  return v;
}

std::string render_variant(const SemanticsVariant &v) {
  return std::string("low=") + policy_name(v.low_excess) +
         ",high=" + policy_name(v.high_excess);
}

// ---------------------------------------------------------------------------
// Machine state

void MachineState::set(const std::string &reg, bool value) {
  if (value)
    ones_[reg] = true;
  else
    ones_.erase(reg);
}

MachineState MachineState::parse(std::string_view text) {
  MachineState state;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(start, end - start);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front())))
      item.remove_prefix(1);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back())))
      item.remove_suffix(1);
    if (!item.empty()) {
      std::size_t eq = item.find('=');
      if (eq == std::string_view::npos)
        throw Error("malformed register assignment '" + std::string(item) +
                    "' (expected reg=0 or reg=1)");
      std::string reg(item.substr(0, eq));
      std::string_view bit = item.substr(eq + 1);
      if (!valid_register_name(reg))
        throw Error("invalid register name '" + reg + "'");
      if (bit != "0" && bit != "1")
        throw Error("register value must be 0 or 1 in '" + std::string(item) + "'");
      state.set(reg, bit == "1");
    }
    start = end + 1;
  }
  return state;
}

std::string MachineState::render() const {
  std::string out = "{";
  bool first = true;
  for (const auto &[reg, value] : ones_) {
    if (!first) out += ",";
    first = false;
    out += reg + "=1";
  }
  out += "}";
  return out;
}

std::string MachineState::render_over(std::span<const std::string> registers) const {
  std::string out;
  for (std::size_t i = 0; i < registers.size(); ++i) {
    if (i > 0) out += ",";
    out += registers[i] + "=" + (get(registers[i]) ? "1" : "0");
  }
  return out;
}

const char *outcome_kind_name(OutcomeKind k) {
  switch (k) {
  case OutcomeKind::Terminated: return "terminated";
  case OutcomeKind::ErrorHalt: return "error-halt";
  case OutcomeKind::Deadlock: return "deadlock";
  case OutcomeKind::Livelock: return "livelock";
  case OutcomeKind::BudgetExhausted: return "budget-exhausted";
  case OutcomeKind::StaticallyRejected: return "statically-rejected";
  }
  throw Error("unknown outcome kind");
}

std::string Outcome::render() const {
  switch (kind) {
  case OutcomeKind::Terminated:
    return "Terminated " + final_state.render() + " steps=" + std::to_string(steps);
  case OutcomeKind::ErrorHalt:
    return "ErrorHalt " + final_state.render() + " steps=" + std::to_string(steps);
  case OutcomeKind::Deadlock:
    return "Deadlock steps=" + std::to_string(steps);
  case OutcomeKind::Livelock:
    return "Livelock detected_at_step=" + std::to_string(steps);
  case OutcomeKind::BudgetExhausted:
    return "BudgetExhausted budget=" + std::to_string(steps);
  case OutcomeKind::StaticallyRejected:
    return "StaticallyRejected position=" + std::to_string(position);
  }
  throw Error("unknown outcome kind");
}

// ---------------------------------------------------------------------------
// Static target checking

namespace {

// Signed 128-bit targets: offsets are unbounded 64-bit values, so p +/- k
// must not be computed in 64 bits.
using Target = __int128;

void append_targets(const Instruction &ins, std::size_t position,
                    std::vector<Target> &out) {
  out.clear();
  Target p = static_cast<Target>(position);
  switch (ins.kind) {
  case InstructionKind::Halt:
    break;
  case InstructionKind::FwdJump:
    out.push_back(p + static_cast<Target>(ins.offset));
    break;
  case InstructionKind::BwdJump:
    out.push_back(p - static_cast<Target>(ins.offset));
    break;
  case InstructionKind::Basic:
    out.push_back(p + 1);
    break;
  case InstructionKind::PosTest:
  case InstructionKind::NegTest:
    out.push_back(p + 1);
    out.push_back(p + 2);
    break;
  }
}

std::vector<std::size_t> static_violations(const InstructionSequence &x,
                                           bool check_low, bool check_high) {
  std::vector<std::size_t> violations;
  std::vector<Target> targets;
  Target len = static_cast<Target>(x.length());
  for (std::size_t p = 1; p <= x.length(); ++p) {
    append_targets(x.at(p), p, targets);
    for (Target t : targets) {
      if ((check_low && t < 1) || (check_high && t > len)) {
        violations.push_back(p);
        break;
      }
    }
  }
  return violations;
}

} // namespace

std::vector<std::size_t> static_check(const InstructionSequence &x) {
  return static_violations(x, true, true);
}

// ---------------------------------------------------------------------------
// Effectuation

namespace {

// Register service: applies a method and produces the boolean reply.
bool apply_method(MachineState &state, const std::string &focus, Method m) {
  switch (m) {
  case Method::Get:
    return state.get(focus);
  case Method::SetZero:
    state.set(focus, false);
    return true;
  case Method::SetOne:
    state.set(focus, true);
    return true;
  case Method::Negate: {
    bool value = !state.get(focus);
    state.set(focus, value);
    return value;
  }
  }
  throw Error("unknown method");
}

std::string config_key(long long position, const MachineState &state) {
  std::string key = std::to_string(position);
  key += '|';
  for (const auto &[reg, value] : state.entries()) {
    key += reg;
    key += ';';
  }
  return key;
}

constexpr long long kIdleLow = -1;
constexpr long long kIdleHigh = -2;

} // namespace

Effectuation effectuate(const InstructionSequence &x, const MachineState &d,
                        const SemanticsVariant &v, std::uint64_t budget) {
  if (budget < 1) throw Error("effectuation budget must be >= 1");

  const bool low_static = v.low_excess == ExcessPolicy::StaticReject;
  const bool high_static = v.high_excess == ExcessPolicy::StaticReject;
  if (low_static || high_static) {
    std::vector<std::size_t> flagged = static_violations(x, low_static, high_static);
    if (!flagged.empty()) {
      Outcome outcome;
      outcome.kind = OutcomeKind::StaticallyRejected;
      outcome.steps = 0;
      outcome.position = flagged.front();
      return {outcome, {}};
    }
  }

  const std::size_t len = x.length();
  MachineState state = d;
  Trace trace;
  std::uint64_t steps = 0;
  long long pc = 1;  // kIdleLow / kIdleHigh when idling outside the range
  std::unordered_set<std::string> visited;

  auto finish = [&](OutcomeKind kind) {
    Outcome outcome;
    outcome.kind = kind;
    outcome.steps = steps;
    if (kind == OutcomeKind::Terminated || kind == OutcomeKind::ErrorHalt)
      outcome.final_state = state;
    return Effectuation{outcome, std::move(trace)};
  };

  while (true) {
    if (!visited.insert(config_key(pc, state)).second)
      return finish(OutcomeKind::Livelock);
    if (steps == budget) {
      Outcome outcome;
      outcome.kind = OutcomeKind::BudgetExhausted;
      outcome.steps = budget;
      return {outcome, std::move(trace)};
    }

    if (pc == kIdleLow || pc == kIdleHigh) {
      ++steps;
      trace.push_back({steps, 0, "(idle)", state});
      continue;
    }

    const Instruction &ins = x.at(static_cast<std::size_t>(pc));
    const std::size_t position = static_cast<std::size_t>(pc);
    ++steps;

    Target next = 0;
    bool halted = false;
    bool dead = false;
    switch (ins.kind) {
    case InstructionKind::Halt:
      halted = true;
      break;
    case InstructionKind::Basic:
      apply_method(state, ins.focus, ins.method);
      next = static_cast<Target>(position) + 1;
      break;
    case InstructionKind::PosTest: {
      bool reply = apply_method(state, ins.focus, ins.method);
      next = static_cast<Target>(position) + (reply ? 1 : 2);
      break;
    }
    case InstructionKind::NegTest: {
      bool reply = apply_method(state, ins.focus, ins.method);
      next = static_cast<Target>(position) + (reply ? 2 : 1);
      break;
    }
    case InstructionKind::FwdJump:
      if (ins.offset == 0)
        dead = true;
      else
        next = static_cast<Target>(position) + static_cast<Target>(ins.offset);
      break;
    case InstructionKind::BwdJump:
      if (ins.offset == 0)
        dead = true;
      else
        next = static_cast<Target>(position) - static_cast<Target>(ins.offset);
      break;
    }

    trace.push_back({steps, position, render_instruction(ins), state});
    if (halted) return finish(OutcomeKind::Terminated);
    if (dead) return finish(OutcomeKind::Deadlock);

    if (next >= 1 && next <= static_cast<Target>(len)) {
      pc = static_cast<long long>(next);
      continue;
    }

    // Excess: the program counter left 1..len.
    const bool low = next < 1;
    switch (low ? v.low_excess : v.high_excess) {
    case ExcessPolicy::Deadlock:
      return finish(OutcomeKind::Deadlock);
    case ExcessPolicy::Error:
      return finish(OutcomeKind::ErrorHalt);
    case ExcessPolicy::Terminate:
      return finish(OutcomeKind::Terminated);
    case ExcessPolicy::Skip:
      // The offending move is treated as #1; a second overflow terminates
      // correctly.
      if (position + 1 > len) return finish(OutcomeKind::Terminated);
      pc = static_cast<long long>(position + 1);
      break;
    case ExcessPolicy::Livelock:
      pc = low ? kIdleLow : kIdleHigh;
      break;
    case ExcessPolicy::StaticReject:
      // Unreachable: the directional static pass above is exact.
      throw Error("internal: runtime excess under StaticReject");
    }
  }
}

std::vector<SemanticsVariant> enumerate_variants() {
  std::vector<SemanticsVariant> variants;
  variants.reserve(36);
  for (ExcessPolicy low : kAllPolicies)
    for (ExcessPolicy high : kAllPolicies)
      variants.push_back({low, high});
  return variants;
}

std::vector<SemanticsVariant>
discriminate_variant(const EffectuationOracle &oracle,
                     const std::vector<Probe> &probes, std::uint64_t budget) {
  if (probes.empty()) throw Error("variant discrimination needs at least one probe");
  std::vector<SemanticsVariant> surviving;
  for (const SemanticsVariant &v : enumerate_variants()) {
    bool consistent = true;
    for (const Probe &probe : probes) {
      OutcomeKind predicted = effectuate(probe.program, probe.input, v, budget).outcome.kind;
      OutcomeKind observed = oracle(probe.program, probe.input).kind;
      if (predicted != observed) {
        consistent = false;
        break;
      }
    }
    if (consistent) surviving.push_back(v);
  }
  return surviving;
}

} // namespace islab
