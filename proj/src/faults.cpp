// Copyright islab contributors.
// SPDX-License-Identifier: Apache-2.0

#include "islab/faults.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

namespace islab {

namespace {

// Guards floor(fraction * len) against products like 0.1 * 30 landing a hair
// under the integer they denote.
constexpr double kSizeEpsilon = 1e-9;

std::size_t fraction_floor(double fraction, std::size_t len) {
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(len) + kSizeEpsilon));
}

std::string format_fraction(double f) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%g", f);
  return buffer;
}

} // namespace

FaultBudgetConfig FaultBudgetConfig::profile_s1() { return FaultBudgetConfig{}; }

FaultBudgetConfig FaultBudgetConfig::profile_s4() {
  FaultBudgetConfig cfg;
  cfg.single_fault_fraction = 0.10;
  return cfg;
}

FaultBudgetConfig FaultBudgetConfig::by_name(std::string_view name) {
  if (name == "s1") return profile_s1();
  if (name == "s4") return profile_s4();
  throw Error("unknown budget profile '" + std::string(name) + "' (expected s1 or s4)");
}

void FaultBudgetConfig::validate() const {
  auto in_unit = [](double f) { return f > 0.0 && f <= 1.0; };
  if (!in_unit(single_fault_fraction) || !in_unit(fix_length_deviation) ||
      !in_unit(total_fraction))
    throw Error("budget fractions must lie in (0,1]");
  if (length_floor < 1) throw Error("length floor must be >= 1");
}

std::size_t FaultBudgetConfig::single_fault_cap(std::size_t len) const {
  return std::max(length_floor, fraction_floor(single_fault_fraction, len));
}

std::size_t FaultBudgetConfig::total_cap(std::size_t len) const {
  return std::max(length_floor, fraction_floor(total_fraction, len));
}

std::pair<std::size_t, std::size_t>
FaultBudgetConfig::fix_length_bounds(std::size_t fault_len) const {
  double slack = fix_length_deviation * static_cast<double>(fault_len);
  double lo = std::ceil(static_cast<double>(fault_len) - slack - kSizeEpsilon);
  double hi = std::floor(static_cast<double>(fault_len) + slack + kSizeEpsilon);
  std::size_t lo_n = lo <= 0.0 ? 0 : static_cast<std::size_t>(lo);
  return {lo_n, static_cast<std::size_t>(hi)};
}

const char *rejection_reason_name(RejectionReason r) {
  switch (r) {
  case RejectionReason::SizeBudget: return "size-budget";
  case RejectionReason::FixLengthBound: return "fix-length-bound";
  case RejectionReason::RepairConfirmation: return "repair-confirmation";
  case RejectionReason::Regression: return "regression";
  case RejectionReason::Minimality: return "minimality";
  }
  throw Error("unknown rejection reason");
}

TestOracle TestOracle::from_spec(const Specification &spec) {
  TestOracle oracle;
  oracle.cases_ = exhaustive_suite(spec);
  oracle.exhaustive_ = true;
  return oracle;
}

TestOracle TestOracle::from_suite(std::vector<TestCase> suite) {
  TestOracle oracle;
  oracle.cases_ = std::move(suite);
  oracle.exhaustive_ = false;
  return oracle;
}

SearchConfig SearchConfig::default_for(std::size_t max_jump,
                                       const std::vector<std::string> &registers,
                                       std::size_t max_part_len) {
  SearchConfig cfg;
  cfg.max_part_len = max_part_len;
  std::vector<std::string> regs = registers;
  std::sort(regs.begin(), regs.end());
  regs.erase(std::unique(regs.begin(), regs.end()), regs.end());
  for (const std::string &r : regs) {
    cfg.alphabet.push_back(Instruction::pos_test(r, Method::Get));
    cfg.alphabet.push_back(Instruction::neg_test(r, Method::Get));
    cfg.alphabet.push_back(Instruction::basic(r, Method::SetZero));
    cfg.alphabet.push_back(Instruction::basic(r, Method::SetOne));
    cfg.alphabet.push_back(Instruction::basic(r, Method::Negate));
  }
  for (std::size_t k = 1; k <= max_jump; ++k)
    cfg.alphabet.push_back(Instruction::fwd_jump(k));
  cfg.alphabet.push_back(Instruction::halt());
  return cfg;
}

// ---------------------------------------------------------------------------
// Replacement enumeration

namespace {

// Invokes fn for every replacement of the given arity with total length in
// [lo, hi] and per-part length <= max_part_len, in a fixed order: total
// length ascending, then part-length composition, then alphabet index per
// slot. fn returns false to stop.
void for_each_replacement(std::size_t arity, std::size_t lo, std::size_t hi,
                          std::size_t max_part_len,
                          const std::vector<Instruction> &alphabet,
                          const std::function<bool(const Replacement &)> &fn) {
  if (alphabet.empty()) throw Error("replacement search alphabet is empty");

  std::vector<std::size_t> lens(arity, 0);
  bool stop = false;

  // Fills slots of the composition `lens` with alphabet choices.
  std::function<void(Replacement &, std::size_t)> fill =
      [&](Replacement &r, std::size_t part) {
        if (stop) return;
        if (part == arity) {
          if (!fn(r)) stop = true;
          return;
        }
        std::function<void(std::size_t)> choose = [&](std::size_t slot) {
          if (stop) return;
          if (slot == lens[part]) {
            fill(r, part + 1);
            return;
          }
          for (const Instruction &ins : alphabet) {
            r.parts[part].push_back(ins);
            choose(slot + 1);
            r.parts[part].pop_back();
            if (stop) return;
          }
        };
        choose(0);
      };

  // Part-length compositions of `total`, first part varying slowest.
  std::function<void(std::size_t, std::size_t)> compose =
      [&](std::size_t part, std::size_t remaining) {
        if (stop) return;
        if (part == arity) {
          if (remaining != 0) return;
          Replacement r;
          r.parts.assign(arity, {});
          fill(r, 0);
          return;
        }
        std::size_t cap = std::min(remaining, max_part_len);
        for (std::size_t l = 0; l <= cap; ++l) {
          lens[part] = l;
          compose(part + 1, remaining - l);
          if (stop) return;
        }
      };

  for (std::size_t total = lo; total <= hi && !stop; ++total)
    compose(0, total);
}

struct PassingSet {
  std::vector<TestCase> cases;      // cases that passed on x
  std::vector<std::size_t> indices; // their positions in the oracle
};

PassingSet passing_on(const InstructionSequence &x, const TestOracle &oracle,
                      const SemanticsVariant &v, std::uint64_t budget) {
  PassingSet set;
  for (std::size_t i = 0; i < oracle.cases().size(); ++i) {
    if (run_confirmation_test(x, oracle.cases()[i], v, budget).passed) {
      set.cases.push_back(oracle.cases()[i]);
      set.indices.push_back(i);
    }
  }
  return set;
}

CertificationResult
certify_impl(const InstructionSequence &x, const TestOracle &oracle,
             const FailureRecord &failing, const Fragment &f, const Replacement &r,
             const FaultBudgetConfig &cfg, const SemanticsVariant &v,
             std::uint64_t budget, const SearchConfig *minimality_search,
             bool check_minimality);

// Proper part-wise sub-fragments of f: each part shrunk to a subrange or
// dropped, at least one part kept, flattened position set strictly smaller.
std::vector<Fragment> proper_sub_fragments(const Fragment &f) {
  std::vector<Fragment> out;
  std::vector<IndexRange> current;

  std::function<void(std::size_t, bool)> rec = [&](std::size_t part, bool shrunk) {
    if (part == f.arity()) {
      if (shrunk && !current.empty()) out.emplace_back(current);
      return;
    }
    const IndexRange &range = f.parts()[part];
    rec(part + 1, true);  // drop this part
    for (std::size_t a = range.lo; a <= range.hi; ++a) {
      for (std::size_t b = a; b <= range.hi; ++b) {
        current.push_back({a, b});
        rec(part + 1, shrunk || a != range.lo || b != range.hi);
        current.pop_back();
      }
    }
  };
  rec(0, false);
  return out;
}

bool minimality_violated(const InstructionSequence &x, const TestOracle &oracle,
                         const FailureRecord &failing, const Fragment &f,
                         const FaultBudgetConfig &cfg, const SemanticsVariant &v,
                         std::uint64_t budget, const SearchConfig &search,
                         std::string &detail) {
  FaultBudgetConfig inner = cfg;
  inner.enforce_minimality = false;
  for (const Fragment &g : proper_sub_fragments(f)) {
    auto [lo, hi] = cfg.fix_length_bounds(g.total_length());
    bool found = false;
    for_each_replacement(
        g.arity(), lo, hi, search.max_part_len, search.alphabet,
        [&](const Replacement &candidate) {
          CertificationResult res = certify_impl(x, oracle, failing, g, candidate,
                                                 inner, v, budget, nullptr, false);
          if (res.ok()) {
            found = true;
            detail = "proper sub-fragment " + render_fragment(g) +
                     " admits replacement \"" + render_replacement(candidate) + "\"";
            return false;
          }
          return true;
        });
    if (found) return true;
  }
  return false;
}

CertificationResult
certify_impl(const InstructionSequence &x, const TestOracle &oracle,
             const FailureRecord &failing, const Fragment &f, const Replacement &r,
             const FaultBudgetConfig &cfg, const SemanticsVariant &v,
             std::uint64_t budget, const SearchConfig *minimality_search,
             bool check_minimality) {
  cfg.validate();
  f.validate_for(x);
  if (r.arity() != f.arity())
    throw Error("replacement arity does not match fragment arity");
  if (failing.result.passed)
    throw Error("failure record carries a passing result");

  // Re-verify the triggering failure.
  if (run_confirmation_test(x, failing.test_case, v, budget).passed)
    throw Error("stale failure: case '" + failing.test_case.name +
                "' passes on the unrepaired sequence");

  Rejection rejection;
  auto violate = [&](RejectionReason reason, std::string detail) {
    rejection.reasons.push_back(reason);
    rejection.details.push_back(std::move(detail));
  };

  const std::size_t len = x.length();
  const std::size_t fault_len = f.total_length();
  const std::size_t repair_len = r.total_length();

  // (1) size budget
  const std::size_t cap = cfg.single_fault_cap(len);
  if (fault_len > cap)
    violate(RejectionReason::SizeBudget,
            "fault length " + std::to_string(fault_len) + " > max(" +
                std::to_string(cfg.length_floor) + ", floor(" +
                format_fraction(cfg.single_fault_fraction) + "*" + std::to_string(len) +
                ")) = " + std::to_string(cap));

  // (2) fix-length bound
  auto [fix_lo, fix_hi] = cfg.fix_length_bounds(fault_len);
  if (repair_len < fix_lo || repair_len > fix_hi)
    violate(RejectionReason::FixLengthBound,
            "repair length " + std::to_string(repair_len) + " outside [" +
                std::to_string(fix_lo) + ", " + std::to_string(fix_hi) + "]");

  // (3) repair confirmation and (4) regression need the repaired sequence.
  PassingSet passing = passing_on(x, oracle, v, budget);
  bool have_repaired = false;
  InstructionSequence x_repaired = x;
  try {
    x_repaired = substitute(x, f, r);
    have_repaired = true;
  } catch (const Error &e) {
    violate(RejectionReason::RepairConfirmation,
            std::string("substitution failed: ") + e.what());
    violate(RejectionReason::Regression, "substitution failed");
  }

  RegressionEvidence evidence;
  evidence.exhaustive_suite_used = oracle.exhaustive();
  if (have_repaired) {
    TestResult confirmation = run_confirmation_test(x_repaired, failing.test_case, v, budget);
    if (!confirmation.passed)
      violate(RejectionReason::RepairConfirmation,
              "case '" + failing.test_case.name + "' still fails on the repaired sequence (" +
                  fail_reason_name(confirmation.reason) + ")");

    RegressionReport regression = regression_check(x_repaired, passing.cases, v, budget);
    evidence.cases_rerun = passing.cases.size();
    evidence.all_passed = regression.passed;
    if (!regression.passed) {
      std::string names;
      for (std::size_t idx : regression.newly_failing) {
        if (!names.empty()) names += ", ";
        names += passing.cases[idx].name;
      }
      violate(RejectionReason::Regression, "newly failing: " + names);
    }
  }

  // (5) minimality
  if (check_minimality && cfg.enforce_minimality && rejection.reasons.empty()) {
    SearchConfig fallback;
    const SearchConfig *search = minimality_search;
    if (!search) {
      std::vector<std::string> regs = x.registers();
      for (const TestCase &tc : oracle.cases()) {
        for (const auto &[reg, bit] : tc.accept.constraints) regs.push_back(reg);
        for (const auto &[reg, bit] : tc.input.entries()) regs.push_back(reg);
      }
      fallback = SearchConfig::default_for(x.length(), regs);
      search = &fallback;
    }
    std::string detail;
    if (minimality_violated(x, oracle, failing, f, cfg, v, budget, *search, detail))
      violate(RejectionReason::Minimality, detail);
  }

  if (!rejection.reasons.empty()) {
    CertificationResult result;
    result.rejection = std::move(rejection);
    return result;
  }

  CertifiedFault fault{f, r, failing, evidence,
                       SizeAccounting{fault_len, repair_len,
                                      static_cast<double>(fault_len) /
                                          static_cast<double>(len)}};
  CertificationResult result;
  result.certified = std::move(fault);
  return result;
}

} // namespace

CertificationResult certify_fault(const InstructionSequence &x, const TestOracle &oracle,
                                  const FailureRecord &failing, const Fragment &f,
                                  const Replacement &r, const FaultBudgetConfig &cfg,
                                  const SemanticsVariant &v, std::uint64_t budget,
                                  const SearchConfig *minimality_search) {
  return certify_impl(x, oracle, failing, f, r, cfg, v, budget, minimality_search, true);
}

std::vector<RepairCandidate>
search_repairs(const InstructionSequence &x, const TestOracle &oracle,
               std::span<const FailureRecord> failing, const Fragment &f,
               const FaultBudgetConfig &cfg, const SearchConfig &search,
               const SemanticsVariant &v, std::uint64_t budget) {
  cfg.validate();
  if (failing.empty())
    throw Error("repair search needs at least one failure to repair");
  if (search.alphabet.empty()) throw Error("replacement search alphabet is empty");

  const FailureRecord &trigger = failing.front();
  std::vector<RepairCandidate> certified;
  std::vector<RepairCandidate> rejected;

  auto [lo, hi] = cfg.fix_length_bounds(f.total_length());
  for_each_replacement(f.arity(), lo, hi, search.max_part_len, search.alphabet,
                       [&](const Replacement &candidate) {
                         CertificationResult res = certify_fault(
                             x, oracle, trigger, f, candidate, cfg, v, budget);
                         if (res.ok())
                           certified.push_back({candidate, std::move(res)});
                         else
                           rejected.push_back({candidate, std::move(res)});
                         return true;
                       });

  certified.insert(certified.end(), std::make_move_iterator(rejected.begin()),
                   std::make_move_iterator(rejected.end()));
  return certified;
}

IdealizedRegressionReport
idealized_regression_criterion(const InstructionSequence &x,
                               const InstructionSequence &x_repaired,
                               const Specification &spec, const SemanticsVariant &v,
                               std::uint64_t budget) {
  spec.check_cap();
  IdealizedRegressionReport report;
  for (const TestCase &tc : exhaustive_suite(spec)) {
    bool before = run_confirmation_test(x, tc, v, budget).passed;
    bool after = run_confirmation_test(x_repaired, tc, v, budget).passed;
    if (!before && after) report.flipped_to_pass.push_back(tc.input);
    if (before && !after) report.regressions.push_back(tc.input);
  }
  report.holds = !report.flipped_to_pass.empty() && report.regressions.empty();
  return report;
}

FaultAccountingReport fault_accounting(const InstructionSequence &x,
                                       std::span<const CertifiedFault> faults,
                                       const FaultBudgetConfig &cfg) {
  cfg.validate();
  for (std::size_t i = 0; i < faults.size(); ++i) {
    for (std::size_t j = i + 1; j < faults.size(); ++j) {
      for (const IndexRange &a : faults[i].fragment.parts()) {
        for (const IndexRange &b : faults[j].fragment.parts()) {
          if (a.lo <= b.hi && b.lo <= a.hi)
            throw Error("faults " + std::to_string(i + 1) + " and " +
                        std::to_string(j + 1) + " overlap (" + render_fragment(faults[i].fragment) +
                        " vs " + render_fragment(faults[j].fragment) + ")");
        }
      }
    }
  }

  FaultAccountingReport report;
  report.count = faults.size();
  for (const CertifiedFault &fault : faults)
    report.total_length += fault.fragment.total_length();
  report.total_fraction =
      static_cast<double>(report.total_length) / static_cast<double>(x.length());
  report.redesign_required = report.total_length > cfg.total_cap(x.length());
  return report;
}

AdequacyReport check_adequacy(const InstructionSequence &x, const Specification &spec,
                              const FaultBudgetConfig &cfg, const SearchConfig &search,
                              const SemanticsVariant &v, std::uint64_t budget) {
  cfg.validate();
  spec.check_cap();
  if (search.alphabet.empty()) throw Error("replacement search alphabet is empty");

  const TestOracle oracle = TestOracle::from_spec(spec);
  const std::size_t initial_len = x.length();
  const std::size_t total_cap = cfg.total_cap(initial_len);

  AdequacyReport report;
  bool budget_pruned = false;
  std::vector<CertifiedFault> chain;

  std::function<bool(const InstructionSequence &, std::size_t)> solve =
      [&](const InstructionSequence &current, std::size_t used) -> bool {
    SuiteReport sr = run_suite(current, oracle.cases(), v, budget);
    if (sr.failed == 0) return true;

    std::size_t trigger_index = 0;
    while (sr.results[trigger_index].passed) ++trigger_index;
    FailureRecord trigger{oracle.cases()[trigger_index], sr.results[trigger_index], v};

    const std::size_t room = total_cap - used;
    if (room == 0) {
      budget_pruned = true;
      return false;
    }

    const std::size_t per_fault_cap = cfg.single_fault_cap(current.length());
    for (const Fragment &f :
         enumerate_fragments(current, per_fault_cap, per_fault_cap)) {
      if (f.total_length() > room) {
        budget_pruned = true;
        continue;
      }
      auto [lo, hi] = cfg.fix_length_bounds(f.total_length());
      bool solved = false;
      for_each_replacement(
          f.arity(), lo, hi, search.max_part_len, search.alphabet,
          [&](const Replacement &candidate) {
            ++report.stats.candidates_tried;
            CertificationResult res =
                certify_fault(current, oracle, trigger, f, candidate, cfg, v, budget);
            if (!res.ok()) return true;
            ++report.stats.certified;
            chain.push_back(*res.certified);
            if (solve(substitute(current, f, candidate), used + f.total_length())) {
              solved = true;
              return false;
            }
            ++report.stats.backtracks;
            chain.pop_back();
            return true;
          });
      if (solved) return true;
    }
    return false;
  };

  if (solve(x, 0)) {
    report.verdict = AdequacyVerdict::Adequate;
    report.reason = InadequacyReason::None;
    report.chain = std::move(chain);
    std::size_t used = 0;
    for (const CertifiedFault &fault : report.chain)
      used += fault.fragment.total_length();
    report.total_fault_fraction =
        static_cast<double>(used) / static_cast<double>(initial_len);
  } else {
    report.verdict = AdequacyVerdict::NotAdequate;
    report.reason = budget_pruned ? InadequacyReason::BudgetExhausted
                                  : InadequacyReason::SearchExhausted;
  }
  return report;
}

} // namespace islab
