// Copyright islab contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Python surface over the main operations. Programs, specs and suites are
// passed as their text forms; states travel as {register: 0|1} dicts.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "islab/cli.hpp"
#include "islab/faults.hpp"
#include "islab/views.hpp"

namespace py = pybind11;
using namespace islab;

namespace {

MachineState state_from_dict(const py::dict &d) {
  MachineState state;
  for (auto item : d)
    state.set(py::cast<std::string>(item.first), py::cast<int>(item.second) != 0);
  return state;
}

py::dict state_to_dict(const MachineState &state) {
  py::dict d;
  for (const auto &[reg, value] : state.entries()) d[py::str(reg)] = 1;
  return d;
}

py::dict outcome_to_dict(const Outcome &outcome) {
  py::dict d;
  d["outcome"] = outcome_kind_name(outcome.kind);
  d["steps"] = outcome.steps;
  if (outcome.kind == OutcomeKind::Terminated || outcome.kind == OutcomeKind::ErrorHalt)
    d["state"] = state_to_dict(outcome.final_state);
  if (outcome.kind == OutcomeKind::StaticallyRejected)
    d["position"] = outcome.position;
  return d;
}

py::dict certification_to_dict(const CertificationResult &result) {
  py::dict d;
  d["certified"] = result.ok();
  if (result.ok()) {
    const CertifiedFault &fault = *result.certified;
    d["fragment"] = render_fragment(fault.fragment);
    d["replacement"] = render_replacement(fault.replacement);
    d["fault_length"] = fault.sizes.fault_length;
    d["repair_length"] = fault.sizes.repair_length;
    d["fault_fraction"] = fault.sizes.fault_fraction;
    d["cases_rerun"] = fault.regression.cases_rerun;
    d["exhaustive_suite_used"] = fault.regression.exhaustive_suite_used;
  } else {
    py::list reasons;
    for (std::size_t i = 0; i < result.rejection->reasons.size(); ++i)
      reasons.append(rejection_reason_name(result.rejection->reasons[i]));
    d["reasons"] = reasons;
    d["details"] = result.rejection->details;
  }
  return d;
}

FaultBudgetConfig profile_of(const std::string &name) {
  return FaultBudgetConfig::by_name(name);
}

TestOracle oracle_from_spec_text(const std::string &spec_text) {
  return TestOracle::from_spec(parse_spec_file(spec_text));
}

SearchConfig search_for(const InstructionSequence &x, const TestOracle &oracle,
                        std::size_t max_part_len) {
  std::vector<std::string> regs = x.registers();
  for (const TestCase &tc : oracle.cases()) {
    for (const auto &[reg, bit] : tc.accept.constraints) regs.push_back(reg);
    for (const auto &[reg, bit] : tc.input.entries()) regs.push_back(reg);
  }
  return SearchConfig::default_for(x.length(), regs, max_part_len);
}

FailureRecord first_failure(const InstructionSequence &x, const TestOracle &oracle,
                            const SemanticsVariant &v, std::uint64_t budget) {
  for (const TestCase &tc : oracle.cases()) {
    TestResult result = run_confirmation_test(x, tc, v, budget);
    if (!result.passed) return FailureRecord{tc, result, v};
  }
  throw Error("no oracle case fails on the program; nothing to repair");
}

} // namespace

PYBIND11_MODULE(_islab, m) {
  m.doc() = "instruction-sequence fault analysis laboratory";

  py::register_exception<Error>(m, "IslabError");

  m.def("canonicalize",
        [](const std::string &text) { return render_sequence(parse_sequence(text)); },
        py::arg("program"), "Parse program text and render it canonically.");

  m.def("program_length",
        [](const std::string &text) { return parse_sequence(text).length(); },
        py::arg("program"));

  m.def(
      "effectuate",
      [](const std::string &program, const py::dict &input, const std::string &variant,
         std::uint64_t budget, bool trace) {
        Effectuation eff = effectuate(parse_sequence(program), state_from_dict(input),
                                      parse_variant(variant), budget);
        py::dict d = outcome_to_dict(eff.outcome);
        if (trace) {
          py::list steps;
          for (const TraceStep &ts : eff.trace) {
            py::dict step;
            step["step"] = ts.step;
            step["position"] = ts.position;
            step["instruction"] = ts.instruction;
            step["state"] = state_to_dict(ts.state_after);
            steps.append(step);
          }
          d["trace"] = steps;
        }
        return d;
      },
      py::arg("program"), py::arg("input") = py::dict(),
      py::arg("variant") = "low=deadlock,high=deadlock",
      py::arg("budget") = kDefaultBudget, py::arg("trace") = false,
      "Run a program on an input state under a semantics variant.");

  m.def("static_check",
        [](const std::string &program) { return static_check(parse_sequence(program)); },
        py::arg("program"), "Positions whose static jump targets leave the range.");

  m.def("enumerate_variants", [] {
    std::vector<std::string> names;
    for (const SemanticsVariant &v : enumerate_variants())
      names.push_back(render_variant(v));
    return names;
  });

  m.def(
      "discriminate_variant",
      [](const std::string &oracle_variant,
         const std::vector<std::pair<std::string, py::dict>> &probes,
         std::uint64_t budget) {
        SemanticsVariant machine = parse_variant(oracle_variant);
        EffectuationOracle oracle = [&](const InstructionSequence &x,
                                        const MachineState &d) {
          return effectuate(x, d, machine, budget).outcome;
        };
        std::vector<Probe> parsed;
        for (const auto &[text, input] : probes)
          parsed.push_back({parse_sequence(text), state_from_dict(input)});
        std::vector<std::string> names;
        for (const SemanticsVariant &v : discriminate_variant(oracle, parsed, budget))
          names.push_back(render_variant(v));
        return names;
      },
      py::arg("oracle_variant"), py::arg("probes"), py::arg("budget") = kDefaultBudget,
      "Variants consistent with a simulated machine on the given probes.");

  m.def(
      "run_suite",
      [](const std::string &program, const std::string &suite_text,
         const std::string &variant, std::uint64_t budget) {
        std::vector<TestCase> suite = parse_suite_file(suite_text);
        SuiteReport report = run_suite(parse_sequence(program), suite,
                                       parse_variant(variant), budget);
        py::dict d;
        d["passed"] = report.passed;
        d["failed"] = report.failed;
        py::list cases;
        for (std::size_t i = 0; i < suite.size(); ++i) {
          py::dict c;
          c["name"] = suite[i].name;
          c["passed"] = report.results[i].passed;
          c["reason"] = fail_reason_name(report.results[i].reason);
          cases.append(c);
        }
        d["cases"] = cases;
        return d;
      },
      py::arg("program"), py::arg("suite"),
      py::arg("variant") = "low=deadlock,high=deadlock", py::arg("budget") = kDefaultBudget,
      "Run a suite of confirmation tests.");

  m.def(
      "verify",
      [](const std::string &program, const std::string &spec_text,
         const std::string &variant, std::uint64_t budget) {
        Specification spec = parse_spec_file(spec_text);
        IncorrectnessReport report = verify_exhaustive(parse_sequence(program), spec,
                                                       parse_variant(variant), budget);
        py::dict d;
        d["correct"] = report.correct;
        py::list witnesses;
        for (const IncorrectnessWitness &w : report.witnesses) {
          py::dict witness;
          witness["input"] = state_to_dict(w.input);
          witness["observed"] = outcome_to_dict(w.observed);
          witness["expected"] = w.expected.render();
          witnesses.append(witness);
        }
        d["witnesses"] = witnesses;
        return d;
      },
      py::arg("program"), py::arg("spec"),
      py::arg("variant") = "low=deadlock,high=deadlock", py::arg("budget") = kDefaultBudget,
      "Exhaustive verification against a specification.");

  m.def(
      "lint",
      [](const std::string &program, const std::vector<std::string> &rules) {
        py::list out;
        for (const Violation &v : lint(parse_sequence(program), rules)) {
          py::dict violation;
          violation["rule"] = v.rule;
          violation["positions"] = v.positions;
          violation["message"] = v.message;
          violation["severity"] = v.severity == Severity::Hazard ? "hazard" : "style";
          out.append(violation);
        }
        return out;
      },
      py::arg("program"), py::arg("rules") = std::vector<std::string>{},
      "Product-authority rule violations.");

  m.def(
      "certify_fault",
      [](const std::string &program, const std::string &spec_text,
         const std::string &fragment, const std::string &replacement,
         const std::string &profile, const std::string &variant, std::uint64_t budget) {
        InstructionSequence x = parse_sequence(program);
        TestOracle oracle = oracle_from_spec_text(spec_text);
        SemanticsVariant v = parse_variant(variant);
        Fragment f = parse_fragment(fragment);
        FailureRecord trigger = first_failure(x, oracle, v, budget);
        CertificationResult result =
            certify_fault(x, oracle, trigger, f, parse_replacement(replacement, f.arity()),
                          profile_of(profile), v, budget);
        return certification_to_dict(result);
      },
      py::arg("program"), py::arg("spec"), py::arg("fragment"), py::arg("replacement"),
      py::arg("profile") = "s1", py::arg("variant") = "low=deadlock,high=deadlock",
      py::arg("budget") = kDefaultBudget,
      "Certify a fragment/replacement pair against a specification.");

  m.def(
      "search_repairs",
      [](const std::string &program, const std::string &spec_text,
         const std::string &fragment, const std::string &profile,
         std::size_t max_part_len, const std::string &variant, std::uint64_t budget) {
        InstructionSequence x = parse_sequence(program);
        TestOracle oracle = oracle_from_spec_text(spec_text);
        SemanticsVariant v = parse_variant(variant);
        std::vector<FailureRecord> failing;
        for (const TestCase &tc : oracle.cases()) {
          TestResult result = run_confirmation_test(x, tc, v, budget);
          if (!result.passed) failing.push_back({tc, result, v});
        }
        std::vector<RepairCandidate> candidates =
            search_repairs(x, oracle, failing, parse_fragment(fragment),
                           profile_of(profile), search_for(x, oracle, max_part_len), v,
                           budget);
        py::list out;
        for (const RepairCandidate &candidate : candidates) {
          py::dict d = certification_to_dict(candidate.result);
          d["replacement"] = render_replacement(candidate.replacement);
          out.append(d);
        }
        return out;
      },
      py::arg("program"), py::arg("spec"), py::arg("fragment"), py::arg("profile") = "s1",
      py::arg("max_part_len") = 2, py::arg("variant") = "low=deadlock,high=deadlock",
      py::arg("budget") = kDefaultBudget,
      "Enumerate and certify candidate repairs for a fragment.");

  m.def(
      "check_adequacy",
      [](const std::string &program, const std::string &spec_text,
         const std::string &profile, std::size_t max_part_len, const std::string &variant,
         std::uint64_t budget) {
        InstructionSequence x = parse_sequence(program);
        Specification spec = parse_spec_file(spec_text);
        TestOracle oracle = TestOracle::from_spec(spec);
        AdequacyReport report =
            check_adequacy(x, spec, profile_of(profile),
                           search_for(x, oracle, max_part_len), parse_variant(variant),
                           budget);
        py::dict d;
        d["adequate"] = report.verdict == AdequacyVerdict::Adequate;
        if (report.verdict == AdequacyVerdict::NotAdequate)
          d["reason"] = report.reason == InadequacyReason::BudgetExhausted
                            ? "budget-exhausted"
                            : "search-exhausted";
        py::list chain;
        for (const CertifiedFault &fault : report.chain) {
          py::dict link;
          link["fragment"] = render_fragment(fault.fragment);
          link["replacement"] = render_replacement(fault.replacement);
          chain.append(link);
        }
        d["chain"] = chain;
        d["total_fault_fraction"] = report.total_fault_fraction;
        d["candidates_tried"] = report.stats.candidates_tried;
        d["backtracks"] = report.stats.backtracks;
        return d;
      },
      py::arg("program"), py::arg("spec"), py::arg("profile") = "s1",
      py::arg("max_part_len") = 2, py::arg("variant") = "low=deadlock,high=deadlock",
      py::arg("budget") = kDefaultBudget,
      "Adequacy modulo a limited volume of faults.");

  m.def(
      "classify_defects",
      [](const std::string &program, const std::string &spec_text,
         const std::string &intent_text, const std::string &variant,
         std::uint64_t budget) {
        DefectReport report =
            classify_defects(parse_sequence(program), parse_spec_file(spec_text),
                             parse_spec_file(intent_text), parse_variant(variant), budget);
        auto to_list = [](const std::vector<DefectFinding> &findings) {
          py::list out;
          for (const DefectFinding &finding : findings) {
            py::dict d;
            d["input"] = state_to_dict(finding.input);
            d["note"] = finding.note;
            out.append(d);
          }
          return out;
        };
        py::dict d;
        d["spec_defects"] = to_list(report.spec_defects);
        d["sequence_faults"] = to_list(report.sequence_faults);
        d["phantom_failures"] = to_list(report.phantom_failures);
        return d;
      },
      py::arg("program"), py::arg("spec"), py::arg("intent"),
      py::arg("variant") = "low=deadlock,high=deadlock", py::arg("budget") = kDefaultBudget,
      "Split discrepancies into spec defects, sequence faults "
      "and phantom failures.");

  m.def(
      "process_report",
      [](const std::string &program, const std::string &suite_text,
         const std::string &variant, std::uint64_t budget) {
        InstructionSequence x = parse_sequence(program);
        std::vector<TestCase> suite = parse_suite_file(suite_text);
        EffectuationLedger ledger;
        run_suite(x, suite, parse_variant(variant), budget, &ledger, "x");
        ProcessReport report = process_report(ledger, {}, x.length());
        py::dict d;
        d["confirmation_tests"] = report.confirmation_tests;
        d["experimentation_tests"] = report.experimentation_tests;
        d["demonstrations"] = report.demonstrations;
        d["practical_uses"] = report.practical_uses;
        d["testing_share"] = report.testing_share;
        if (report.instruction_coverage)
          d["instruction_coverage"] = *report.instruction_coverage;
        if (report.wildcard_oracle_fraction)
          d["wildcard_oracle_fraction"] = *report.wildcard_oracle_fraction;
        d["below_testing_benchmark"] = report.below_testing_benchmark;
        d["oracle_problem"] = report.oracle_problem;
        d["coverage_only"] = report.coverage_only;
        d["notes"] = report.notes;
        return d;
      },
      py::arg("program"), py::arg("suite"),
      py::arg("variant") = "low=deadlock,high=deadlock", py::arg("budget") = kDefaultBudget,
      "Process-authority report over a confirmation-test run of the suite.");

  m.def(
      "run_cli",
      [](const std::vector<std::string> &args) {
        std::ostringstream out, err;
        int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Invoke the islab CLI in-process: (exit_code, stdout, stderr).");
}
