// Copyright islab contributors.
// SPDX-License-Identifier: Apache-2.0

#include "islab/testing.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace islab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

std::uint64_t parse_nat(std::string_view text, const std::string &what) {
  text = trim(text);
  if (text.empty()) throw Error(what + " expected");
  std::uint64_t value = 0;
  for (char c : text) {
    if (c < '0' || c > '9')
      throw Error("malformed " + what + " '" + std::string(text) + "'");
    std::uint64_t digit = static_cast<std::uint64_t>(c - '0');
    if (value > (UINT64_MAX - digit) / 10)
      throw Error(what + " out of range");
    value = value * 10 + digit;
  }
  return value;
}

} // namespace

// ---------------------------------------------------------------------------
// Acceptance predicates

AcceptancePredicate AcceptancePredicate::any() {
  AcceptancePredicate p;
  p.wildcard = true;
  return p;
}

AcceptancePredicate AcceptancePredicate::constraint(std::string reg, bool bit) {
  AcceptancePredicate p;
  p.constraints[std::move(reg)] = bit;
  return p;
}

bool AcceptancePredicate::matches(const MachineState &state) const {
  if (is_wildcard()) return true;
  for (const auto &[reg, bit] : constraints)
    if (state.get(reg) != bit) return false;
  return true;
}

AcceptancePredicate AcceptancePredicate::parse(std::string_view text) {
  text = trim(text);
  if (text == "any") return any();
  AcceptancePredicate p;
  for (std::string_view item : split(text, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::size_t eq = item.find('=');
    if (eq == std::string_view::npos)
      throw Error("malformed constraint '" + std::string(item) +
                  "' (expected reg=0, reg=1 or any)");
    std::string reg(trim(item.substr(0, eq)));
    std::string_view bit = trim(item.substr(eq + 1));
    if (!valid_register_name(reg))
      throw Error("invalid register name '" + reg + "'");
    if (bit != "0" && bit != "1")
      throw Error("constraint value must be 0 or 1 in '" + std::string(item) + "'");
    p.constraints[reg] = bit == "1";
  }
  if (p.constraints.empty()) return any();
  return p;
}

std::string AcceptancePredicate::render() const {
  if (is_wildcard()) return "any";
  std::string out;
  bool first = true;
  for (const auto &[reg, bit] : constraints) {
    if (!first) out += ",";
    first = false;
    out += reg + "=" + (bit ? "1" : "0");
  }
  return out;
}

const char *fail_reason_name(FailReason r) {
  switch (r) {
  case FailReason::None: return "none";
  case FailReason::TerminatedOutsideU: return "terminated-outside-U";
  case FailReason::Deadlock: return "deadlock";
  case FailReason::ErrorHalt: return "error-halt";
  case FailReason::Livelock: return "livelock";
  case FailReason::BudgetExhaustedAfterK: return "budget-exhausted-after-k";
  case FailReason::StaticallyRejected: return "statically-rejected";
  }
  throw Error("unknown fail reason");
}

// ---------------------------------------------------------------------------
// Ledger

const char *purpose_name(Purpose p) {
  switch (p) {
  case Purpose::ConfirmationTest: return "confirmation-test";
  case Purpose::ExperimentationTest: return "experimentation-test";
  case Purpose::Demonstration: return "demonstration";
  case Purpose::PracticalUse: return "practical-use";
  }
  throw Error("effectuation record without a valid purpose tag");
}

Purpose parse_purpose(std::string_view text) {
  if (text == "confirmation-test" || text == "confirmation") return Purpose::ConfirmationTest;
  if (text == "experimentation-test" || text == "experimentation") return Purpose::ExperimentationTest;
  if (text == "demonstration") return Purpose::Demonstration;
  if (text == "practical-use" || text == "use") return Purpose::PracticalUse;
  throw Error("unknown effectuation purpose '" + std::string(text) + "'");
}

bool purpose_is_test(Purpose p) {
  return p == Purpose::ConfirmationTest || p == Purpose::ExperimentationTest;
}

const EffectuationRecord &EffectuationLedger::append(EffectuationRecord record) {
  record.timestamp = records_.size() + 1;
  records_.push_back(std::move(record));
  return records_.back();
}

void record_effectuation(EffectuationLedger &ledger, EffectuationRecord record) {
  switch (record.purpose) {
  case Purpose::ConfirmationTest:
  case Purpose::ExperimentationTest:
  case Purpose::Demonstration:
  case Purpose::PracticalUse:
    break;
  default:
    throw Error("effectuation record without a valid purpose tag");
  }
  ledger.append(std::move(record));
}

std::string render_ledger_line(const EffectuationRecord &record) {
  return std::string(purpose_name(record.purpose)) + " " + record.program_id +
         " " + outcome_kind_name(record.outcome.kind) + " " +
         std::to_string(record.steps);
}

EffectuationRecord parse_ledger_line(std::string_view line) {
  std::vector<std::string_view> fields;
  for (std::string_view f : split(line, ' '))
    if (!trim(f).empty()) fields.push_back(trim(f));
  if (fields.size() != 4)
    throw Error("malformed ledger line '" + std::string(line) +
                "' (expected PURPOSE PROGRAM-ID OUTCOME STEPS)");
  EffectuationRecord record;
  record.purpose = parse_purpose(fields[0]);
  record.program_id = std::string(fields[1]);
  bool known = false;
  for (OutcomeKind k :
       {OutcomeKind::Terminated, OutcomeKind::ErrorHalt, OutcomeKind::Deadlock,
        OutcomeKind::Livelock, OutcomeKind::BudgetExhausted,
        OutcomeKind::StaticallyRejected}) {
    if (fields[2] == outcome_kind_name(k)) {
      record.outcome.kind = k;
      known = true;
      break;
    }
  }
  if (!known) throw Error("unknown outcome '" + std::string(fields[2]) + "' in ledger line");
  record.steps = parse_nat(fields[3], "step count");
  record.outcome.steps = record.steps;
  return record;
}

EffectuationRecord make_record(Purpose purpose, std::string program_id,
                               const MachineState &input, const Effectuation &eff,
                               std::optional<bool> wildcard_oracle) {
  EffectuationRecord record;
  record.purpose = purpose;
  record.program_id = std::move(program_id);
  record.input = input;
  record.outcome = eff.outcome;
  record.steps = eff.outcome.steps;
  record.wildcard_oracle = wildcard_oracle;
  std::set<std::size_t> positions;
  for (const TraceStep &ts : eff.trace)
    if (ts.position >= 1) positions.insert(ts.position);
  record.positions_touched.emplace(positions.begin(), positions.end());
  return record;
}

// ---------------------------------------------------------------------------
// Specifications

Specification::Specification(std::vector<std::string> domain,
                             std::uint64_t default_step_bound)
    : domain_(std::move(domain)), default_step_bound_(default_step_bound) {
  if (default_step_bound_ < 1) throw Error("default step bound must be >= 1");
  for (const std::string &reg : domain_)
    if (!valid_register_name(reg))
      throw Error("invalid register name '" + reg + "' in domain");
  std::sort(domain_.begin(), domain_.end());
  domain_.erase(std::unique(domain_.begin(), domain_.end()), domain_.end());
}

void Specification::add_copy_rule(const std::string &dst, const std::string &src) {
  auto known = [&](const std::string &reg) {
    return std::find(domain_.begin(), domain_.end(), reg) != domain_.end();
  };
  if (!known(dst) || !known(src))
    throw Error("copy rule " + dst + "=" + src + " uses registers outside the domain");
  copy_rules_.emplace_back(dst, src);
}

void Specification::add_expectation(const MachineState &state,
                                    AcceptancePredicate accept) {
  expectations_[state.render_over(domain_)] = std::move(accept);
}

void Specification::check_cap() const {
  if (domain_.size() > kMaxDomainRegisters)
    throw Error("domain of " + std::to_string(domain_.size()) +
                " registers exceeds the 2^16-state cap");
}

std::vector<MachineState> Specification::domain_states() const {
  check_cap();
  const std::size_t n = domain_.size();
  const std::size_t count = std::size_t(1) << n;
  std::vector<MachineState> states;
  states.reserve(count);
  for (std::size_t index = 0; index < count; ++index) {
    MachineState state;
    for (std::size_t j = 0; j < n; ++j) {
      bool bit = (index >> (n - 1 - j)) & 1;  // first register most significant
      if (bit) state.set(domain_[j], true);
    }
    states.push_back(std::move(state));
  }
  return states;
}

AcceptancePredicate Specification::expected_for(const MachineState &state) const {
  auto it = expectations_.find(state.render_over(domain_));
  if (it != expectations_.end()) return it->second;
  if (!copy_rules_.empty()) {
    AcceptancePredicate p;
    for (const auto &[dst, src] : copy_rules_)
      p.constraints[dst] = state.get(src);
    return p;
  }
  return AcceptancePredicate::any();
}

Specification parse_spec_file(std::string_view text) {
  std::optional<Specification> spec;
  std::uint64_t step_bound = kDefaultStepBound;
  std::vector<std::pair<std::string, std::string>> rules;
  std::vector<std::pair<MachineState, AcceptancePredicate>> expectations;

  std::size_t line_no = 0;
  for (std::string_view raw : split(text, '\n')) {
    ++line_no;
    std::size_t comment = raw.find('%');
    if (comment != std::string_view::npos) raw = raw.substr(0, comment);
    std::string_view line = trim(raw);
    if (line.empty()) continue;

    if (line.starts_with("domain")) {
      if (spec) throw ParseError("duplicate domain header", line_no, 1);
      std::vector<std::string> regs;
      for (std::string_view reg : split(line.substr(6), ','))
        if (!trim(reg).empty()) regs.emplace_back(trim(reg));
      spec.emplace(std::move(regs), kDefaultStepBound);
    } else if (line.starts_with("rule")) {
      std::string_view body = trim(line.substr(4));
      std::size_t eq = body.find('=');
      if (eq == std::string_view::npos)
        throw ParseError("malformed rule (expected DST=SRC)", line_no, 1);
      rules.emplace_back(std::string(trim(body.substr(0, eq))),
                         std::string(trim(body.substr(eq + 1))));
    } else if (line.starts_with("expect")) {
      std::string_view body = line.substr(6);
      std::size_t semi = body.find(';');
      if (semi == std::string_view::npos)
        throw ParseError("malformed expect line (expected ASSIGN ; PRED)", line_no, 1);
      MachineState state = MachineState::parse(trim(body.substr(0, semi)));
      AcceptancePredicate accept = AcceptancePredicate::parse(trim(body.substr(semi + 1)));
      expectations.emplace_back(std::move(state), std::move(accept));
    } else if (line.starts_with("k ") || line == "k") {
      step_bound = parse_nat(line.substr(1), "step bound");
    } else {
      throw ParseError("unrecognized spec line '" + std::string(line) + "'", line_no, 1);
    }
  }
  if (!spec) throw ParseError("spec file has no domain header", 1, 1);

  Specification result(spec->domain(), step_bound);
  for (const auto &[dst, src] : rules) result.add_copy_rule(dst, src);
  for (auto &[state, accept] : expectations) result.add_expectation(state, accept);
  return result;
}

std::vector<TestCase> parse_suite_file(std::string_view text) {
  std::vector<TestCase> cases;
  std::size_t line_no = 0;
  for (std::string_view raw : split(text, '\n')) {
    ++line_no;
    std::size_t comment = raw.find('%');
    if (comment != std::string_view::npos) raw = raw.substr(0, comment);
    std::string_view line = trim(raw);
    if (line.empty()) continue;

    if (!line.starts_with("case"))
      throw ParseError("suite line must start with 'case'", line_no, 1);
    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos)
      throw ParseError("missing ':' after case name", line_no, 1);

    TestCase tc;
    tc.name = std::string(trim(line.substr(4, colon - 4)));
    if (tc.name.empty()) throw ParseError("empty case name", line_no, 1);

    std::vector<std::string_view> fields = split(line.substr(colon + 1), ';');
    if (fields.size() < 2 || fields.size() > 3)
      throw ParseError("expected 'in ASSIGN ; expect PRED [; k NAT]'", line_no, 1);

    std::string_view in_field = trim(fields[0]);
    if (!in_field.starts_with("in"))
      throw ParseError("expected 'in' clause", line_no, 1);
    tc.input = MachineState::parse(trim(in_field.substr(2)));

    std::string_view expect_field = trim(fields[1]);
    if (!expect_field.starts_with("expect"))
      throw ParseError("expected 'expect' clause", line_no, 1);
    tc.accept = AcceptancePredicate::parse(trim(expect_field.substr(6)));

    if (fields.size() == 3) {
      std::string_view k_field = trim(fields[2]);
      if (!k_field.starts_with("k"))
        throw ParseError("expected 'k' clause", line_no, 1);
      tc.step_bound = parse_nat(k_field.substr(1), "step bound");
      if (tc.step_bound < 1) throw ParseError("step bound must be >= 1", line_no, 1);
    } else {
      tc.step_bound = kDefaultStepBound;
      tc.step_bound_defaulted = true;
    }
    cases.push_back(std::move(tc));
  }
  return cases;
}

// ---------------------------------------------------------------------------
// Operations

namespace {

TestResult judge(const Effectuation &eff, const TestCase &tc) {
  TestResult result;
  result.outcome = eff.outcome;
  result.steps_observed = eff.outcome.steps;
  switch (eff.outcome.kind) {
  case OutcomeKind::Terminated:
    if (tc.accept.matches(eff.outcome.final_state)) {
      result.passed = true;
      result.reason = FailReason::None;
    } else {
      result.reason = FailReason::TerminatedOutsideU;
    }
    break;
  case OutcomeKind::Deadlock:
    result.reason = FailReason::Deadlock;
    break;
  case OutcomeKind::ErrorHalt:
    result.reason = FailReason::ErrorHalt;
    break;
  case OutcomeKind::Livelock:
    result.reason = FailReason::Livelock;
    break;
  case OutcomeKind::BudgetExhausted:
    result.reason = FailReason::BudgetExhaustedAfterK;
    break;
  case OutcomeKind::StaticallyRejected:
    result.reason = FailReason::StaticallyRejected;
    break;
  }
  return result;
}

void require_observable(const TestCase &tc, std::uint64_t budget) {
  if (budget < tc.step_bound)
    throw Error("budget " + std::to_string(budget) +
                " cannot observe the required " + std::to_string(tc.step_bound) +
                " steps of case '" + tc.name + "'");
}

} // namespace

TestResult run_confirmation_test(const InstructionSequence &x, const TestCase &tc,
                                 const SemanticsVariant &v, std::uint64_t budget) {
  require_observable(tc, budget);
  return judge(effectuate(x, tc.input, v, budget), tc);
}

SuiteReport run_suite(const InstructionSequence &x, std::span<const TestCase> suite,
                      const SemanticsVariant &v, std::uint64_t budget,
                      EffectuationLedger *ledger, const std::string &program_id) {
  for (const TestCase &tc : suite) require_observable(tc, budget);

  SuiteReport report;
  for (const TestCase &tc : suite) {
    Effectuation eff = effectuate(x, tc.input, v, budget);
    TestResult result = judge(eff, tc);
    if (ledger)
      record_effectuation(*ledger,
                          make_record(Purpose::ConfirmationTest, program_id, tc.input,
                                      eff, tc.accept.is_wildcard()));
    if (result.passed)
      ++report.passed;
    else
      ++report.failed;
    report.results.push_back(std::move(result));
  }
  return report;
}

RegressionReport regression_check(const InstructionSequence &x_repaired,
                                  std::span<const TestCase> previously_passing,
                                  const SemanticsVariant &v, std::uint64_t budget) {
  RegressionReport report;
  for (std::size_t i = 0; i < previously_passing.size(); ++i) {
    TestResult result = run_confirmation_test(x_repaired, previously_passing[i], v, budget);
    if (!result.passed) {
      report.passed = false;
      report.newly_failing.push_back(i);
    }
  }
  return report;
}

std::vector<TestCase> exhaustive_suite(const Specification &spec) {
  spec.check_cap();
  std::vector<TestCase> cases;
  for (const MachineState &state : spec.domain_states()) {
    TestCase tc;
    tc.name = spec.domain().empty() ? std::string("empty")
                                    : state.render_over(spec.domain());
    tc.input = state;
    tc.accept = spec.expected_for(state);
    tc.step_bound = spec.default_step_bound();
    cases.push_back(std::move(tc));
  }
  return cases;
}

} // namespace islab
