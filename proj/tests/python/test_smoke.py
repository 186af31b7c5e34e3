# Copyright islab contributors.
# SPDX-License-Identifier: Apache-2.0
"""Smoke tests for the python module."""

import pytest

import islab

COPY = "+i.get; #3; o.set:0; !; o.set:1; !"
FLIPPED = "-i.get; #3; o.set:0; !; o.set:1; !"
OI_SPEC = "domain i,o\nrule o=i\n"


def test_canonicalize_round_trip():
    assert islab.canonicalize("  +i.get ;#3;!") == "+i.get; #3; !"
    assert islab.program_length(COPY) == 6
    with pytest.raises(islab.IslabError):
        islab.canonicalize("#-1; !")


def test_effectuate_copy_program():
    result = islab.effectuate(COPY, {"i": 1, "o": 0}, budget=100)
    assert result["outcome"] == "terminated"
    assert result["steps"] == 4
    assert result["state"] == {"i": 1, "o": 1}

    traced = islab.effectuate(COPY, {"i": 1}, trace=True)
    assert [step["position"] for step in traced["trace"]] == [1, 2, 5, 6]


def test_excess_policies_differ_only_in_marginal_cases():
    assert islab.effectuate("#5; !", variant="low=deadlock,high=terminate")["outcome"] == "terminated"
    assert islab.effectuate("#5; !", variant="low=deadlock,high=deadlock")["outcome"] == "deadlock"
    assert islab.effectuate("#5; !", variant="low=deadlock,high=reject")["outcome"] == "statically-rejected"
    assert islab.static_check("#5; !") == [1]
    assert islab.static_check(COPY) == []


def test_variant_enumeration_and_discrimination():
    variants = islab.enumerate_variants()
    assert len(variants) == 36
    assert "low=deadlock,high=deadlock" in variants

    surviving = islab.discriminate_variant(
        "low=deadlock,high=error", [("\\#3; !", {}), ("#5; !", {})]
    )
    assert surviving == ["low=deadlock,high=error"]


def test_suite_and_verification():
    suite = "case i1: in i=1 ; expect o=1 ; k 4\ncase i0: in i=0 ; expect o=0 ; k 4\n"
    report = islab.run_suite(COPY, suite)
    assert report["passed"] == 2 and report["failed"] == 0

    verdict = islab.verify(FLIPPED, OI_SPEC)
    assert not verdict["correct"]
    assert len(verdict["witnesses"]) == 4
    assert islab.verify(COPY, OI_SPEC)["correct"]


def test_fault_certification_and_adequacy():
    certified = islab.certify_fault(FLIPPED, OI_SPEC, "1", "+i.get", profile="s4")
    assert certified["certified"]
    assert certified["fault_length"] == 1
    assert certified["exhaustive_suite_used"]

    candidates = islab.search_repairs(FLIPPED, OI_SPEC, "1", profile="s4")
    assert any(c["certified"] and c["replacement"] == "+i.get" for c in candidates)

    report = islab.check_adequacy(FLIPPED, OI_SPEC, profile="s4")
    assert report["adequate"]
    assert len(report["chain"]) == 1

    stuck = islab.check_adequacy("o.set:0; !", OI_SPEC, profile="s4", max_part_len=1)
    assert not stuck["adequate"]
    assert stuck["reason"] == "search-exhausted"


def test_lint_and_defect_classification():
    violations = islab.lint("!; r.set:1")
    assert [v["rule"] for v in violations] == ["unreachable"]
    assert violations[0]["positions"] == [2]

    not_i = "domain i,o\nexpect i=0,o=0 ; o=1\nexpect i=0,o=1 ; o=1\nexpect i=1,o=0 ; o=0\nexpect i=1,o=1 ; o=0\n"
    report = islab.classify_defects(COPY, not_i, OI_SPEC)
    assert len(report["phantom_failures"]) == 4
    assert not report["sequence_faults"]


def test_process_report():
    suite = "case i1: in i=1 ; expect o=1 ; k 4\ncase i0: in i=0 ; expect any ; k 4\n"
    report = islab.process_report(COPY, suite)
    assert report["confirmation_tests"] == 2
    assert report["testing_share"] == 1.0
    assert report["instruction_coverage"] == 1.0
    assert report["wildcard_oracle_fraction"] == 0.5


def test_cli_in_process():
    code, out, err = islab.run_cli(["variants-enum"])
    assert code == 0
    assert len(out.splitlines()) == 36
    code, out, _ = islab.run_cli(["run", "--prog", "/nonexistent.isq"])
    assert code == 2
