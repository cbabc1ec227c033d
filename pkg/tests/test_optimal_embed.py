import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.core.config import SizeGuards
from app.core.errors import InvalidOrder, NotAHomomorphism, SizeGuardExceeded, WrongDimension
from app.core.local_arith import LocalMatrix, LocalRing, mat_det
from app.core.optimal_embed import (
    AlgebraKind,
    LocalEmbedding,
    WitnessKind,
    are_conjugate,
    assemble_V,
    check_homomorphism,
    count_orbits,
    cyclic_conjugator,
    conjugates_to_regular,
    det_v_expansion,
    embedding_from_matrix,
    enumerate_residue_embeddings,
    is_optimal_independence,
    is_optimal_minor,
    is_optimal_oracle,
    local_embedding_number,
    quadratic_criterion,
    regular_representation,
)
from app.core.orders import ResidueAlgebraTag, from_monic_poly, from_structure_constants


def _embedding(q, k, coeffs, rows):
    ring = LocalRing(q, k)
    order = from_monic_poly(ring, coeffs)
    return embedding_from_matrix(order, LocalMatrix.from_rows(ring, rows))


def _count(q, coeffs, precision=1):
    order = from_monic_poly(LocalRing(q), coeffs)
    found = enumerate_residue_embeddings(order, precision=precision)
    return found, count_orbits(found, q, len(coeffs), precision=precision)


def test_regular_representation_of_quadratic_orders():
    reg = regular_representation(from_monic_poly(LocalRing(3), [2, 0]))
    assert reg.matrices[0] == LocalRing(3).identity(2)
    assert reg.matrices[1].to_lists() == [[0, 1], [1, 0]]

    reg2 = regular_representation(from_monic_poly(LocalRing(2), [1, 1]))
    assert reg2.matrices[1].to_lists() == [[0, 1], [1, 1]]


def test_regular_representation_is_optimal_and_a_homomorphism():
    for q, coeffs in [(2, [1, 1]), (3, [0, 0]), (2, [1, 0, 0]), (3, [1, 2, 0])]:
        reg = regular_representation(from_monic_poly(LocalRing(q), coeffs))
        check_homomorphism(reg)
        assert is_optimal_independence(reg)
        assert is_optimal_minor(reg)[0]
        assert is_optimal_oracle(reg)
        # first column of A_i is e_i
        for i, a in enumerate(reg.matrices):
            assert a.column(0) == tuple(1 if l == i else 0 for l in range(len(coeffs)))


def test_regular_representation_rejects_invalid_order():
    order = from_structure_constants(LocalRing(3), [[[0, 1], [1, 0]], [[0, 1], [1, 0]]])
    with pytest.raises(InvalidOrder):
        regular_representation(order)


def test_minor_witness_for_jordan_block():
    emb = _embedding(3, 1, [1, 2], [[2, 1], [0, 2]])

    optimal, witness = is_optimal_minor(emb)
    assert optimal is True
    assert witness.kind == WitnessKind.MINOR
    assert witness.to_payload() == {"minor": [[1, 1], [1, 2]]}
    assert witness.verify(emb)
    assert quadratic_criterion(emb) is True


def test_scalar_lift_is_not_optimal():
    # diag(3, -3) over Z/9 reduces to the zero matrix
    emb = _embedding(3, 2, [0, 0], [[3, 0], [0, 6]])

    assert is_optimal_independence(emb) is False
    optimal, witness = is_optimal_minor(emb)
    assert optimal is False
    assert witness.to_payload() == {"dependence": [0, 1]}
    assert witness.verify(emb)
    assert is_optimal_oracle(emb) is False
    assert quadratic_criterion(emb) is False


def test_scalar_matrix_dependence_is_normalized():
    emb = _embedding(3, 1, [1, 2], [[2, 0], [0, 2]])
    optimal, witness = is_optimal_minor(emb)
    assert optimal is False
    # I + 2I = 0 modulo 3
    assert witness.dependence == (1, 1)


def test_quadratic_criterion_examples():
    assert quadratic_criterion(_embedding(3, 2, [0, 0], [[0, 3], [3, 0]])) is False
    assert quadratic_criterion(_embedding(3, 1, [2, 0], [[1, 0], [0, 2]])) is True
    with pytest.raises(WrongDimension):
        quadratic_criterion(regular_representation(from_monic_poly(LocalRing(2), [1, 1, 0])))


def test_homomorphism_errors():
    ring = LocalRing(3)
    order = from_monic_poly(ring, [2, 0])
    bad_identity = LocalEmbedding(order, (ring.matrix([[1, 1], [0, 1]]), ring.matrix([[0, 1], [1, 0]])))
    with pytest.raises(NotAHomomorphism):
        check_homomorphism(bad_identity)

    bad_square = LocalEmbedding(order, (ring.identity(2), ring.matrix([[1, 1], [0, 1]])))
    with pytest.raises(NotAHomomorphism) as info:
        is_optimal_independence(bad_square)
    assert info.value.detail["index"] == [2, 2]


def test_assemble_v_and_expansion():
    reg = regular_representation(from_monic_poly(LocalRing(3), [1, 2]))
    assert assemble_V(reg, [1, 0]) == LocalRing(3).identity(2)
    assert mat_det(assemble_V(reg, [0, 0])).value == 0

    emb = _embedding(3, 1, [1, 2], [[2, 1], [0, 2]])
    v = assemble_V(emb, [1, 1])
    assert v.to_lists() == [[1, 0], [1, 2]]
    assert det_v_expansion(emb, [1, 1]) == mat_det(v)
    assert det_v_expansion(emb, [1, 1]).value == 2


@settings(max_examples=60, deadline=None)
@given(alpha=st.lists(st.integers(0, 8), min_size=3, max_size=3))
def test_det_v_expansion_matches_direct_determinant(alpha):
    reg = regular_representation(from_monic_poly(LocalRing(3, 2), [4, 1, 7]))
    assert det_v_expansion(reg, alpha) == mat_det(assemble_V(reg, alpha))


def test_cyclic_conjugator_exists_exactly_for_optimal():
    emb = _embedding(3, 1, [2, 0], [[1, 0], [0, 2]])
    found = cyclic_conjugator(emb)
    assert found is not None
    alpha, v = found
    assert any(alpha)
    assert conjugates_to_regular(emb, v)

    assert cyclic_conjugator(_embedding(3, 2, [0, 0], [[3, 0], [0, 6]])) is None


def test_enumeration_counts():
    found, count = _count(2, [1, 1])
    assert (len(found), sum(e.optimal for e in found)) == (2, 2)
    assert count.m == 1

    found, count = _count(3, [2, 0])
    assert (len(found), sum(e.optimal for e in found)) == (14, 12)
    assert count.m == 1

    found, count = _count(2, [0, 0])
    assert (len(found), sum(e.optimal for e in found)) == (4, 3)
    assert count.m == 1


def test_orbit_counts_in_rank_three():
    found, count = _count(2, [1, 1, 0])
    assert count.optimal_embeddings == 24
    assert len(found) == 24
    assert count.m == 1

    found, count = _count(2, [1, 0, 0])
    assert count.optimal_embeddings == 56
    assert count.m == 1


def test_orbit_count_at_higher_precision():
    found, count = _count(2, [1, 1], precision=2)
    assert all(e.embedding.ring == LocalRing(2, 2) for e in found)
    assert count.precision == 2
    assert count.m == 1


def test_enumeration_respects_guards():
    order = from_monic_poly(LocalRing(2), [1, 1])
    with pytest.raises(SizeGuardExceeded):
        enumerate_residue_embeddings(order, guards=SizeGuards(max_n=1))
    with pytest.raises(SizeGuardExceeded):
        enumerate_residue_embeddings(order, precision=3)
    with pytest.raises(SizeGuardExceeded):
        enumerate_residue_embeddings(from_monic_poly(LocalRing(5), [1, 0, 1]))


def test_are_conjugate():
    first = _embedding(3, 1, [2, 0], [[1, 0], [0, 2]])
    second = _embedding(3, 1, [2, 0], [[2, 0], [0, 1]])
    assert are_conjugate(first, second)
    assert not are_conjugate(first, _embedding(3, 1, [2, 0], [[1, 0], [0, 1]]))


def test_local_embedding_number_cases():
    split = local_embedding_number(from_monic_poly(LocalRing(3), [2, 0]), AlgebraKind.MATRIX)
    assert split.value == 1
    assert split.theorem_applies is True
    assert split.consistent is True
    assert split.residue_class == ResidueAlgebraTag.SPLIT_ETALE

    ramified = local_embedding_number(from_monic_poly(LocalRing(2), [0, 0]), AlgebraKind.MATRIX)
    assert ramified.theorem_applies is False

    field = from_monic_poly(LocalRing(2), [1, 1])
    assert local_embedding_number(field, AlgebraKind.DIVISION, integrally_closed=True).value == 1
    assert local_embedding_number(field, AlgebraKind.DIVISION, integrally_closed=False).value == 0
    assert local_embedding_number(from_monic_poly(LocalRing(3), [2, 0]), AlgebraKind.DIVISION).value == 0


@st.composite
def _quadratic_embeddings(draw):
    q = draw(st.sampled_from([2, 3]))
    k = draw(st.integers(1, 2))
    ring = LocalRing(q, k)
    flat = draw(st.lists(st.integers(0, ring.modulus - 1), min_size=4, max_size=4))
    a = LocalMatrix.from_rows(ring, [flat[:2], flat[2:]])
    trace = (flat[0] + flat[3]) % ring.modulus
    det = (flat[0] * flat[3] - flat[1] * flat[2]) % ring.modulus
    order = from_monic_poly(ring, [det, -trace])
    return embedding_from_matrix(order, a)


@settings(max_examples=150, deadline=None)
@given(_quadratic_embeddings())
def test_all_criteria_agree_in_rank_two(emb):
    expected = is_optimal_independence(emb)
    optimal, witness = is_optimal_minor(emb)
    assert optimal == expected
    assert witness.verify(emb)
    assert is_optimal_oracle(emb) == expected
    assert quadratic_criterion(emb) == expected
    assert (cyclic_conjugator(emb) is not None) == expected
