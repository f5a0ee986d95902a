from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import pairalg
import piclattice
from piclattice import (
    P1XP1,
    P2,
    QUADRIC,
    DivClass,
    PicLattice,
    conj_pair,
    real_center,
)

bases = st.one_of(
    st.sampled_from([P2, QUADRIC, P1XP1]),
    st.integers(0, 5).map(piclattice.hirzebruch),
    st.integers(1, 9).map(piclattice.conic_bundle),
)
centers = st.builds(piclattice.Center, st.booleans(), st.booleans())


@st.composite
def lattices_with_class(draw):
    lattice = PicLattice(draw(bases), tuple(draw(st.lists(centers, max_size=6))))
    coords = draw(st.lists(st.integers(-6, 6), min_size=lattice.rank, max_size=lattice.rank))
    return lattice, DivClass(tuple(coords))


def test_intersection_numbers():
    assert piclattice.intersect(PicLattice(P1XP1), DivClass((1, 0)), DivClass((0, 1))) == 1
    assert piclattice.intersect(PicLattice(QUADRIC), DivClass((1,)), DivClass((1,))) == 2
    lattice = PicLattice(P2, (real_center(),))
    line_through_point = DivClass((1, -1))
    assert piclattice.intersect(lattice, line_through_point, line_through_point) == 0


def test_intersection_needs_matching_rank():
    with pytest.raises(piclattice.DimensionMismatch):
        piclattice.intersect(PicLattice(P2), DivClass((1, 0)), DivClass((1,)))


@pytest.mark.parametrize("lattice, expected", [
    (PicLattice(P2), 9),
    (PicLattice(P1XP1), 8),
    (PicLattice(QUADRIC), 8),
    (PicLattice(piclattice.hirzebruch(3)), 8),
    (PicLattice(P2, (real_center(),) * 7), 2),
    (PicLattice(P2, (conj_pair(),)), 7),
])
def test_canonical_self_intersection(lattice, expected):
    k = piclattice.canonical_class(lattice)
    assert piclattice.intersect(lattice, k, k) == expected


def test_unimodular_bases():
    assert PicLattice(P2, (real_center(), conj_pair())).is_unimodular()
    assert PicLattice(piclattice.hirzebruch(2)).is_unimodular()
    assert not PicLattice(QUADRIC).is_unimodular()


@pytest.mark.parametrize("lattice, det", [
    (PicLattice(P2), 1),
    (PicLattice(QUADRIC), 2),
    (PicLattice(P1XP1), -1),
    (PicLattice(piclattice.hirzebruch(3)), -1),
    (PicLattice(P2, (real_center(), conj_pair())), -1),
    (PicLattice(QUADRIC, (conj_pair(),) * 20), 2),
])
def test_gram_determinant_is_exact(lattice, det):
    value = piclattice.exact_det(lattice.gram())
    assert isinstance(value, Fraction)
    assert value == det


def test_exact_det_with_fractions_and_pivoting():
    assert piclattice.exact_det([[0, 1], [1, 0]]) == -1
    assert piclattice.exact_det([[Fraction(1, 3), 2], [1, 9]]) == 1
    assert piclattice.exact_det([[1, 2], [2, 4]]) == 0


@pytest.mark.parametrize("a1", range(0, 11))
@pytest.mark.parametrize("a2", [0, 1, 2, 5, 10])
def test_genus_on_p1xp1(a1, a2):
    assert piclattice.arithmetic_genus(PicLattice(P1XP1), DivClass((a1, a2))) == (a1 - 1) * (a2 - 1)


def test_genus_of_plane_cubic_and_conic():
    assert piclattice.arithmetic_genus(PicLattice(P2), DivClass((3,))) == 1
    assert piclattice.arithmetic_genus(PicLattice(P2), DivClass((2,))) == 0


def test_genus_needs_integral_class():
    with pytest.raises(piclattice.NonIntegralClass):
        piclattice.arithmetic_genus(PicLattice(P2), DivClass((Fraction(1, 2),)))


@given(lattices_with_class())
@settings(max_examples=100)
def test_canonical_class_is_characteristic(case):
    lattice, d = case
    assert piclattice.is_characteristic(lattice, d)


@given(lattices_with_class())
@settings(max_examples=100)
def test_conjugation_preserves_intersections(case):
    lattice, _ = case
    assert piclattice.conjugation_is_isometry(lattice)


@given(lattices_with_class(), centers)
@settings(max_examples=100)
def test_blow_up_then_down_restores_curve(case, center):
    lattice, curve = case
    raised, strict = piclattice.blow_up(lattice, center, curve)
    assert raised.rank == lattice.rank + center.size
    before = piclattice.intersect(lattice, curve, curve)
    drop = center.size * center.curve_coefficient ** 2
    assert piclattice.intersect(raised, strict, strict) == before - drop
    assert piclattice.blow_down(raised, len(raised.centers) - 1, strict) == (lattice, curve)


def test_blow_up_drops_self_intersection():
    lattice, curve = PicLattice(P2), DivClass((2,))
    for center, csq in ((real_center(), 4), (real_center(on_curve=True), 3), (conj_pair(on_curve=True), 1)):
        lattice, curve = piclattice.blow_up(lattice, center, curve)
        assert piclattice.intersect(lattice, curve, curve) == csq


def test_blow_down_unknown_center():
    with pytest.raises(piclattice.DomainError):
        piclattice.blow_down(PicLattice(P2), 0, DivClass((1,)))


def test_real_topology():
    assert piclattice.real_topology(PicLattice(P2, (real_center(),) * 2)) == pairalg.nonorientable_surface(3)
    assert piclattice.real_topology(PicLattice(QUADRIC, (conj_pair(),) * 3)) == pairalg.S2
    assert piclattice.real_topology(PicLattice(piclattice.hirzebruch(1))) == pairalg.KLEIN
    assert piclattice.real_topology(PicLattice(P1XP1, (real_center(),))) == pairalg.nonorientable_surface(3)
    with pytest.raises(piclattice.DomainError):
        piclattice.real_topology(PicLattice(piclattice.conic_bundle(4)))


@pytest.mark.parametrize("d, csq, k_coeff, verdict", [
    (3, 5, -1, "AntiAmpleish"),
    (6, -4, 0, "Trivial"),
    (7, -11, Fraction(1, 7), "Ample"),
])
def test_coble_examples(d, csq, k_coeff, verdict):
    result = piclattice.coble_example(d)
    assert result["csq"] == csq
    assert result["k_coeff"] == k_coeff
    assert result["verdict"] == verdict
    assert result["p_a"] == 0


@pytest.mark.parametrize("d", range(3, 10))
def test_coble_identity(d):
    assert piclattice.coble_example(d)["identity_holds"]


def test_coble_with_conjugate_nodes():
    result = piclattice.coble_example(6, real_nodes=4)
    assert result["csq"] == -4
    assert result["identity_holds"]
    with pytest.raises(piclattice.DomainError):
        piclattice.coble_example(6, real_nodes=3)
    with pytest.raises(piclattice.DomainError):
        piclattice.coble_example(2)


def test_tower_examples():
    assert piclattice.tower_example(1)["self_intersections"] == [-1, 0, 1, 0]
    result = piclattice.tower_example(3)
    assert result["self_intersections"] == [-2, -2, -1, -2, 1, 0]
    assert result["is_cycle"]
    assert result["minus_one_curves"] == ["E3"]
    assert piclattice.tower_example(4)["minus_one_curves"] == ["E4"]


def test_p1xp1_parity():
    assert piclattice.p1xp1_parity_check(2, 2) == {"a1": 2, "a2": 2, "p_a": 1, "real_singularity_forced": True}
    assert not piclattice.p1xp1_parity_check(1, 1)["real_singularity_forced"]
    assert piclattice.p1xp1_parity_check(4, 2)["real_singularity_forced"]
    assert not piclattice.p1xp1_parity_check(3, 3)["real_singularity_forced"]


@pytest.mark.parametrize("a", range(1, 21))
def test_degree_two_del_pezzo_forces_singularity(a):
    result = piclattice.dp2_check(a)
    assert result["self_pairing"] == 2 * a * (a - 1)
    assert result["forced"]


def test_dp2_known_value():
    assert piclattice.dp2_check(2) == {"self_pairing": 4, "p_a": 3, "forced": True}


def test_minus_two_curves_on_conic_bundles():
    assert set(piclattice.minus_two_candidates()) == {(-1, -1, 2), (-1, -2, 6)}
    assert piclattice.minus_two_solutions() == [{"a": -1, "b": -1, "d": 2}]
    assert len(piclattice.minus_two_solutions(reducibility_filter=False)) == 2


def test_nodal_cubic():
    result = piclattice.nodal_cubic_example()
    assert result["csq"] == 5
    assert result["p_a"] == 0
    assert result["pair"] == pairalg.K_LINE
    assert result["real_locus"] == pairalg.KLEIN


def test_text_forms():
    assert piclattice.parse_base("Hirzebruch(2)") == piclattice.hirzebruch(2)
    assert piclattice.parse_base("F1") == piclattice.hirzebruch(1)
    assert piclattice.parse_base("ConicBundle(4)") == piclattice.conic_bundle(4)
    assert str(piclattice.hirzebruch(1)) == "Hirzebruch(1)"
    lattice = PicLattice(P2, piclattice.parse_blowups("R, R*, C*"))
    assert lattice.rank == 5
    assert piclattice.parse_class(lattice, "3:1,2") == DivClass((3, -1, -2, 0, 0))
    assert PicLattice.from_dict(lattice.to_dict()) == lattice
    with pytest.raises(piclattice.DomainError):
        piclattice.parse_base("P3")
    with pytest.raises(piclattice.DimensionMismatch):
        piclattice.parse_class(PicLattice(P1XP1), "2")
