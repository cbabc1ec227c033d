import asyncio

import pytest

from app.core.config import SizeGuards
from app.core.errors import SizeGuardExceeded
from app.core.verification import FAMILIES, FamilyResult, SuiteSizes, run_suite

SMALL = SuiteSizes(random_n3=20, orders=20, instances=20)
RESIDUE_ONLY = SizeGuards(max_k=1)


def test_suite_passes_with_small_sizes():
    report = asyncio.run(run_suite(7, guards=RESIDUE_ONLY, sizes=SMALL))

    assert report.passed, report.to_payload()["first_failure"]
    assert [f.name for f in report.families] == list(FAMILIES)
    exhaustive = {"criterion_equivalence", "quadratic_closed_form", "local_uniqueness", "product_formula"}
    assert all(f.checks > 0 for f in report.families if f.name in exhaustive)
    assert report.first_failure is None


def test_suite_passes_for_another_seed():
    families = ("type_group_structure", "sandwich_arithmetic", "emergent_consistency", "ramification_monotonicity")
    report = asyncio.run(run_suite(20240611, guards=RESIDUE_ONLY, sizes=SMALL, families=families))
    assert report.passed
    assert [f.name for f in report.families] == list(families)


def test_local_uniqueness_at_precision_two():
    report = asyncio.run(
        run_suite(3, guards=SizeGuards(max_q=2, max_n=2, max_k=2), sizes=SMALL, families=("local_uniqueness",))
    )
    assert report.passed
    # x^2 + x and x^2 + x + 1, once at k = 1 and twice at k = 2
    assert report.families[0].checks == 6


def test_mutant_is_caught_by_criterion_equivalence():
    report = asyncio.run(
        run_suite(
            7,
            guards=RESIDUE_ONLY,
            sizes=SuiteSizes(random_n3=0, orders=0, instances=0),
            inject_mutant=True,
            families=("criterion_equivalence",),
        )
    )

    assert report.passed is False
    failure = report.first_failure
    assert failure.name == "criterion_equivalence"
    assert failure.failures == 1
    assert failure.counterexample["error"]["error"] == "NotAHomomorphism"


def test_suite_is_deterministic_for_a_seed():
    families = ("type_group_structure", "selectivity_proportions", "cyclic_conjugator")
    first = asyncio.run(run_suite(11, guards=RESIDUE_ONLY, sizes=SMALL, families=families))
    second = asyncio.run(run_suite(11, guards=RESIDUE_ONLY, sizes=SMALL, families=families))
    assert first.to_payload() == second.to_payload()


def test_suite_rejects_guards_below_minimum():
    with pytest.raises(SizeGuardExceeded):
        asyncio.run(run_suite(7, guards=SizeGuards(max_n=1), sizes=SMALL))


def test_family_result_keeps_first_counterexample():
    result = FamilyResult("demo")
    result.record(True, lambda: {"never": True})
    result.record(False, lambda: {"first": 1})
    result.record(False, lambda: {"second": 2})

    assert result.checks == 3
    assert result.failures == 2
    assert result.counterexample == {"first": 1}
    assert result.to_payload()["passed"] is False
