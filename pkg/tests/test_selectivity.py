import random
from fractions import Fraction

import pytest

from app.core.abelian_groups import FiniteAbelianGroup, full_subgroup, subgroup, trivial_subgroup
from app.core.config import SizeGuards
from app.core.errors import InconsistentInstance, InputError, MissingFrobenius, SizeGuardExceeded
from app.core.selectivity import (
    AmbientKind,
    ExtensionData,
    Frobenius,
    GlobalInstance,
    RamifiedPrime,
    can_embed_globally,
    decide_selectivity,
    global_embedding_count,
    sandwich_report,
    type_distribution,
    type_group,
)
from app.core.verification import random_instance

Z3 = FiniteAbelianGroup((3,))


def _unramified_abelian(norm_subgroup):
    return ExtensionData(
        galois=True,
        abelian=True,
        unramified_finite=True,
        unramified_real=True,
        norm_subgroup=norm_subgroup,
    )


def _non_galois():
    return ExtensionData(galois=False, abelian=False, unramified_finite=True, unramified_real=True)


def _instance(class_group=Z3, ramified=(), K=None, p=3, numbers=(), ambient=AmbientKind.WIDE):
    return GlobalInstance(
        degree_p=p,
        class_group=class_group,
        ramified_primes=tuple(ramified),
        K=K if K is not None else _non_galois(),
        local_embedding_numbers=numbers,
        ambient=ambient,
    )


def test_selective_cyclic_example():
    inst = _instance(K=_unramified_abelian(trivial_subgroup(Z3)))
    report = decide_selectivity(inst)

    assert report.can_embed is True
    assert report.selective is True
    assert report.type_number == 3
    assert report.admitting_count == 1
    assert report.proportion == Fraction(1, 3)
    assert report.sandwich.indices == (1, 1, 3)

    payload = report.to_payload()
    assert payload["admitting"] == 1
    assert payload["of"] == 3
    assert payload["proportion"] == "1/3"
    assert payload["selective"] is True


def test_non_galois_is_never_selective():
    report = decide_selectivity(_instance())
    assert report.selective is False
    assert report.to_payload()["admitting"] == "all"
    assert report.to_payload()["proportion"] == "1/1"
    assert report.sandwich.indices == (1, 1, 1)
    assert report.sandwich.model == "non_galois"


def test_ramified_class_collapses_types():
    inst = _instance(
        ramified=[RamifiedPrime((1,), Frobenius.INERT)],
        K=_unramified_abelian(trivial_subgroup(Z3)),
    )
    report = decide_selectivity(inst)

    assert report.selective is False
    assert report.type_number == 1
    assert report.to_payload()["admitting"] == "all"
    assert report.sandwich.indices == (3, 1, 1)
    assert report.sandwich.model == "class_group"


def test_split_ramified_prime_blocks_embedding():
    inst = _instance(ramified=[RamifiedPrime((2,), Frobenius.SPLIT)])
    assert can_embed_globally(inst) is False

    report = decide_selectivity(inst)
    payload = report.to_payload()
    assert payload["can_embed"] is False
    assert payload["admitting"] == "none"
    assert payload["proportion"] == "0/1"
    assert not any(entry.admits for entry in type_distribution(inst))


def test_missing_frobenius():
    inst = _instance(ramified=[RamifiedPrime((1,), None)])
    with pytest.raises(MissingFrobenius):
        can_embed_globally(inst)
    with pytest.raises(MissingFrobenius):
        decide_selectivity(inst)


def test_inconsistent_instances():
    with pytest.raises(InconsistentInstance):
        decide_selectivity(_instance(K=_unramified_abelian(None)))

    # class 0 is a norm, so its Frobenius must be trivial
    with pytest.raises(InconsistentInstance):
        decide_selectivity(
            _instance(
                ramified=[RamifiedPrime((0,), Frobenius.INERT)],
                K=_unramified_abelian(trivial_subgroup(Z3)),
            )
        )

    with pytest.raises(InconsistentInstance):
        decide_selectivity(
            _instance(
                ramified=[RamifiedPrime((1,), Frobenius.NOT_APPLICABLE)],
                K=_unramified_abelian(trivial_subgroup(Z3)),
            )
        )

    with pytest.raises(InconsistentInstance):
        _instance(K=_unramified_abelian(full_subgroup(Z3)))

    with pytest.raises(InconsistentInstance):
        _instance(K=ExtensionData(galois=True, abelian=False, unramified_finite=True, unramified_real=True))


def test_degree_and_class_validation():
    with pytest.raises(InputError):
        _instance(p=4)
    with pytest.raises(InputError):
        _instance(class_group=FiniteAbelianGroup((2,)), p=2)
    narrow = _instance(class_group=FiniteAbelianGroup((2,)), p=2, ambient=AmbientKind.NARROW)
    assert decide_selectivity(narrow).type_number == 2
    with pytest.raises(InputError):
        _instance(ramified=[RamifiedPrime((3,), Frobenius.INERT)])


def test_type_group_examples():
    assert type_group(_instance(class_group=FiniteAbelianGroup((2,)))).type_number == 1
    assert type_group(_instance(class_group=FiniteAbelianGroup((9,)))).group.cyclic_orders == (3,)
    assert type_group(_instance(class_group=FiniteAbelianGroup((3, 3)))).type_number == 9
    assert type_group(_instance(class_group=FiniteAbelianGroup(()))).type_number == 1

    cl = FiniteAbelianGroup((3, 3))
    collapsed = type_group(_instance(class_group=cl, ramified=[RamifiedPrime((1, 0), Frobenius.INERT)]))
    assert collapsed.type_number == 3
    assert collapsed.u_o == subgroup(cl, [[1, 0]])


def test_sandwich_formal_model_for_ramified_k():
    inst = _instance(
        K=ExtensionData(galois=True, abelian=True, unramified_finite=False, unramified_real=True)
    )
    report = sandwich_report(inst)
    assert report.indices == (3, 1, 1)
    assert report.model == "formal"
    assert report.strict_steps == 1

    decision = decide_selectivity(inst)
    assert decision.selective is False
    assert decision.to_payload()["admitting"] == "all"


def test_type_distribution_for_selective_instance():
    inst = _instance(K=_unramified_abelian(trivial_subgroup(Z3)))
    entries = type_distribution(inst)
    assert len(entries) == 3
    assert [entry.type_vector for entry in entries if entry.admits] == [(0,)]


def test_selective_with_larger_class_group():
    cl = FiniteAbelianGroup((3, 3))
    u_k = subgroup(cl, [[1, 0]])
    inst = _instance(class_group=cl, K=_unramified_abelian(u_k))
    report = decide_selectivity(inst)
    assert report.selective is True
    assert (report.admitting_count, report.type_number) == (3, 9)
    assert report.admitting_types.index() == 3


def test_global_embedding_count():
    empty = global_embedding_count(_instance())
    assert (empty.value, empty.hypothesis_ok) == (1, True)

    ones = global_embedding_count(_instance(numbers=(1, 1, 1)))
    assert (ones.value, ones.hypothesis_ok) == (1, True)

    blocked = global_embedding_count(_instance(numbers=(1, 0)))
    assert (blocked.value, blocked.hypothesis_ok) == (0, False)
    assert blocked.note

    with pytest.raises(InputError):
        _instance(numbers=(1, -1))


def test_group_order_guard():
    inst = _instance(class_group=FiniteAbelianGroup((3, 3)))
    with pytest.raises(SizeGuardExceeded):
        decide_selectivity(inst, SizeGuards(max_group_order=5))


@pytest.mark.parametrize("seed", range(40))
def test_random_instances_respect_the_dichotomy(seed):
    rng = random.Random(seed)
    inst = random_instance(rng, rng.choice((3, 5)))
    report = decide_selectivity(inst)
    p = inst.degree_p

    assert p % report.type_group.exponent() == 0
    if not report.can_embed:
        assert report.admitting_count == 0
    elif report.selective:
        assert report.admitting_count * p == report.type_number
        assert not inst.ramified_primes
    else:
        assert report.admitting_count == report.type_number

    i1, i2, i3 = report.sandwich.indices
    if inst.K.galois:
        assert i1 * i2 * i3 == p
    else:
        assert (i1, i2, i3) == (1, 1, 1)
