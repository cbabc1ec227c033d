import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from app.core.errors import InvalidOrder
from app.core.local_arith import LocalRing
from app.core.orders import (
    ResidueAlgebraTag,
    classify_residue_algebra,
    from_monic_poly,
    from_structure_constants,
    rescale_monic_poly,
    validate,
)


def test_monogenic_constants_examples():
    ring = LocalRing(3, 2)
    order = from_monic_poly(ring, [8, 0])
    # x^2 = -8 = 1 modulo 9
    assert order.constants[1][1] == (1, 0)

    nilpotent = from_monic_poly(ring, [0, 0])
    assert nilpotent.constants[1][1] == (0, 0)

    cubic = from_monic_poly(LocalRing(2), [1, 1, 0])
    # x^3 = x + 1 and x^4 = x^2 + x over F_2
    assert cubic.constants[1][2] == (1, 1, 0)
    assert cubic.constants[2][2] == (0, 1, 1)


def test_monogenic_orders_validate():
    for q, coeffs in [(2, [1, 1]), (3, [2, 0]), (2, [1, 1, 0]), (5, [1, 2, 3])]:
        assert validate(from_monic_poly(LocalRing(q), coeffs)).ok


def test_arbitrary_rank_two_constants_validate():
    ring = LocalRing(5)
    for a in range(5):
        for b in range(5):
            order = from_structure_constants(ring, [[[1, 0], [0, 1]], [[0, 1], [a, b]]])
            assert validate(order).ok


def test_commutativity_violation_reports_indices():
    ring = LocalRing(2)
    constants = from_monic_poly(ring, [1, 1, 0]).to_lists()
    constants[1][2] = [1, 1, 1]

    report = validate(from_structure_constants(ring, constants))
    assert report.ok is False
    assert report.violation == "commutativity"
    assert report.indices == (2, 3)


def test_identity_violation_reports_indices():
    ring = LocalRing(3)
    report = validate(from_structure_constants(ring, [[[0, 1], [1, 0]], [[0, 1], [1, 0]]]))
    assert report.violation == "identity"
    assert report.indices == (1, 1, 1)


def test_invalid_shapes_rejected():
    with pytest.raises(InvalidOrder):
        from_monic_poly(LocalRing(3), [1])
    with pytest.raises(InvalidOrder):
        from_structure_constants(LocalRing(3), [[[1, 0], [0, 1]], [[0, 1]]])


def test_multiply_follows_structure_constants():
    order = from_monic_poly(LocalRing(3), [2, 0])
    # (1 + x)(1 + 2x) = 1 + 3x + 2x^2 = 3 + 3x = 0 modulo 3
    assert order.multiply((1, 1), (1, 2)) == (0, 0)
    assert order.multiply((0, 1), (0, 1)) == (1, 0)


def test_classify_examples():
    split = classify_residue_algebra(from_monic_poly(LocalRing(3), [2, 0]))
    assert split.tag == ResidueAlgebraTag.SPLIT_ETALE
    assert split.certificate["roots"] == [1, 2]

    field = classify_residue_algebra(from_monic_poly(LocalRing(2), [1, 1]))
    assert field.tag == ResidueAlgebraTag.UNRAMIFIED_FIELD
    assert field.certificate["roots"] == []

    assert classify_residue_algebra(from_monic_poly(LocalRing(3), [1, 0])).tag == ResidueAlgebraTag.UNRAMIFIED_FIELD
    assert classify_residue_algebra(from_monic_poly(LocalRing(2), [1, 1, 0])).tag == ResidueAlgebraTag.UNRAMIFIED_FIELD
    assert classify_residue_algebra(from_monic_poly(LocalRing(2), [1, 0, 1])).tag == ResidueAlgebraTag.UNRAMIFIED_FIELD


def test_classify_ramified_and_mixed():
    ramified = classify_residue_algebra(from_monic_poly(LocalRing(3), [0, 0]))
    assert ramified.tag == ResidueAlgebraTag.OTHER
    assert ramified.precision_sensitive is True

    # x^3 + 1 = (x + 1)(x^2 + x + 1) over F_2
    mixed = classify_residue_algebra(from_monic_poly(LocalRing(2), [1, 0, 0]))
    assert mixed.tag == ResidueAlgebraTag.OTHER
    assert mixed.precision_sensitive is False
    assert [f["degree"] for f in mixed.certificate["factors"]] == [1, 2]


def test_non_monogenic_classifies_as_other():
    order = from_structure_constants(LocalRing(3), [[[1, 0], [0, 1]], [[0, 1], [2, 0]]])
    assert classify_residue_algebra(order).tag == ResidueAlgebraTag.OTHER


@settings(max_examples=80, deadline=None)
@given(
    q=st.sampled_from([2, 3, 5]),
    n=st.sampled_from([2, 3]),
    data=st.data(),
)
def test_classification_invariant_under_unit_rescaling(q, n, data):
    ring = LocalRing(q)
    coeffs = data.draw(st.lists(st.integers(0, q - 1), min_size=n, max_size=n))
    u = data.draw(st.integers(1, q - 1))
    assume(u % q != 0)

    before = classify_residue_algebra(from_monic_poly(ring, coeffs))
    after = classify_residue_algebra(from_monic_poly(ring, rescale_monic_poly(ring, coeffs, u)))
    assert before.tag == after.tag
    assert len(before.certificate["roots"]) == len(after.certificate["roots"])
