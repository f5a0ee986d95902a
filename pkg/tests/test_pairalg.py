import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import pairalg
from pairalg import (
    KLEIN,
    RP2,
    S2,
    T2,
    Side,
    nonorientable_surface,
    orientable_surface,
    separating,
)

surfaces = st.one_of(
    st.integers(0, 4).map(orientable_surface),
    st.integers(1, 8).map(nonorientable_surface),
)


def test_surface_names_and_euler():
    assert str(S2) == "S2" and str(KLEIN) == "K"
    assert str(orientable_surface(3)) == "Or(3)"
    assert str(nonorientable_surface(5)) == "NonOr(5)"
    assert orientable_surface(2).euler == -2
    assert nonorientable_surface(3).complexity == 3


def test_surface_sum_rules():
    assert pairalg.surface_sum(T2, RP2) == nonorientable_surface(3)
    assert pairalg.surface_sum(RP2, RP2) == KLEIN
    assert pairalg.surface_sum(T2, T2) == orientable_surface(2)
    assert pairalg.surface_sum(S2, KLEIN) == KLEIN


@given(surfaces, surfaces, surfaces)
@settings(max_examples=100)
def test_surface_sum_is_commutative_and_associative(a, b, c):
    assert pairalg.surface_sum(a, b) == pairalg.surface_sum(b, a)
    assert pairalg.surface_sum(pairalg.surface_sum(a, b), c) == pairalg.surface_sum(a, pairalg.surface_sum(b, c))
    assert pairalg.surface_sum(a, b).euler == a.euler + b.euler - 2


def test_parse_surface():
    assert pairalg.parse_surface("NonOr(4)") == nonorientable_surface(4)
    assert pairalg.parse_surface("Or(2)") == orientable_surface(2)
    assert pairalg.parse_surface("K") == KLEIN
    with pytest.raises(pairalg.ParseError):
        pairalg.parse_surface("NonOr(0)")


def test_separating_sides_are_sorted():
    assert separating(RP2, S2) == separating(S2, RP2)
    assert separating(KLEIN, T2).sides == (T2, KLEIN)


def test_named_pairs():
    assert str(pairalg.T2_NULL) == "(T2,null)"
    assert pairalg.euler_char(pairalg.S2_LINE) == 2
    assert pairalg.complexity(pairalg.K_FIBER) == 2
    assert pairalg.underlying_surface(pairalg.K_LINE) == KLEIN
    assert pairalg.underlying_surface(pairalg.T2_LINE) == T2


def test_normalize_four_pair_sums_on_sphere(torus_fiber_pair):
    assert pairalg.normalize("S2L + 4*RP2L") == torus_fiber_pair
    assert str(torus_fiber_pair) == "NonSepTwoSided{T2, false}"


def test_normalize_words():
    assert pairalg.normalize("RP2L + RP2") == pairalg.K_LINE
    assert pairalg.normalize("T2NULL") == pairalg.T2_NULL
    assert pairalg.normalize("S2L + L:T2") == pairalg.T2_NULL
    assert pairalg.normalize("S2L + 2*L:RP2") == separating(S2, KLEIN)
    assert pairalg.normalize("S2L + R:RP2 + L:RP2") == separating(RP2, RP2)
    assert pairalg.normalize("KF + 0*T2") == pairalg.K_FIBER


def test_sum_on_canonical_separating_pair():
    conic = separating(S2, RP2)
    assert pairalg.sum_surface(conic, RP2, Side.LEFT) == separating(KLEIN, S2)
    assert pairalg.sum_surface(conic, RP2, Side.RIGHT) == separating(RP2, RP2)
    assert pairalg.sum_surface(conic, S2) == conic


def test_side_errors():
    with pytest.raises(pairalg.SideRequired):
        pairalg.normalize("S2L + RP2")
    with pytest.raises(pairalg.SideForbidden):
        pairalg.normalize("S2L + RP2L + L:RP2")
    with pytest.raises(pairalg.SideForbidden):
        pairalg.sum_surface(pairalg.K_LINE, RP2, Side.LEFT)


@pytest.mark.parametrize("text", ["", "XYZ", "S2L + 2*FOO", "S2L + L:RP2L", "S2L + *RP2"])
def test_parse_errors(text):
    with pytest.raises(pairalg.ParseError):
        pairalg.parse_word(text)


def test_format_word_reparses():
    word = pairalg.parse_word("S2L + 2*L:RP2 + R:T2")
    assert pairalg.parse_word(str(word)) == word


general_summand = st.tuples(surfaces, st.sampled_from([Side.LEFT, Side.RIGHT]))


@given(st.sampled_from(["S2L", "T2NULL"]), st.lists(general_summand, max_size=5))
@settings(max_examples=100)
def test_format_word_reparses_general_summands(base, summands):
    """Words with Klein bottles and higher surfaces survive str and parse"""
    grouped = tuple(sorted(summands, key=lambda item: (str(item[0]), item[1].value)))
    word = pairalg.PairWord(base, 0, grouped)
    assert pairalg.parse_word(str(word)) == word


def test_format_word_names_general_summands():
    word = pairalg.PairWord("KF", 1, ((KLEIN, Side.ANY), (nonorientable_surface(3), Side.ANY), (orientable_surface(2), Side.ANY)))
    assert str(word) == "KF + 1*RP2L + 1*K + 1*NonOr(3) + 1*Or(2)"
    assert pairalg.parse_word("KF + RP2L + K + NonOr(3) + Or(2)") == word
    with pytest.raises(pairalg.SideRequired):
        pairalg.normalize(pairalg.PairWord("S2L", 0, ((KLEIN, Side.ANY),)))


summand = st.sampled_from([(RP2, Side.LEFT), (RP2, Side.RIGHT), (T2, Side.LEFT), (T2, Side.RIGHT)])


@given(st.lists(summand, max_size=6), st.randoms(use_true_random=False))
@settings(max_examples=100)
def test_normalize_is_order_independent(summands, rnd):
    shuffled = list(summands)
    rnd.shuffle(shuffled)
    for base in ("S2L", "T2NULL"):
        a = pairalg.normalize(pairalg.PairWord(base, 0, tuple(summands)))
        b = pairalg.normalize(pairalg.PairWord(base, 0, tuple(shuffled)))
        assert a == b


@given(st.sampled_from(sorted(pairalg.BASE_PAIRS)), st.integers(0, 6), st.integers(0, 3), st.integers(0, 4))
@settings(max_examples=100)
def test_normalize_complexity_adds_up(base, rp2l, tori, caps):
    summands = ((T2, Side.ANY),) * tori + ((RP2, Side.ANY),) * caps
    if base in pairalg.BASE_SIDES and rp2l == 0:
        summands = tuple((x, Side.LEFT) for x, _ in summands)
    pair = pairalg.normalize(pairalg.PairWord(base, rp2l, summands))
    expected = pairalg.complexity(pairalg.BASE_PAIRS[base]) + rp2l + 2 * tori + caps
    assert pairalg.complexity(pair) == expected


def test_pair_dict_round_trip():
    for pair in (pairalg.T2_NULL, pairalg.K_LINE, pairalg.T2_LINE, pairalg.non_separating(KLEIN, False)):
        assert pairalg.TopPair.from_dict(pair.to_dict()) == pair


def test_classify_case():
    label = pairalg.classify_case(pairalg.one_sided(nonorientable_surface(3)))
    assert label.group == pairalg.GROUP_ONE_SIDED
    assert label.template == "(RP2,l)#rRP2"
    assert dict(label.params) == {"r": 3}

    assert pairalg.classify_case(pairalg.T2_NULL).template == "(T2,null)"
    assert pairalg.classify_case(pairalg.S2_LINE).group == pairalg.GROUP_ORIENTABLE

    mobius_genus = pairalg.classify_case(separating(T2, RP2))
    assert mobius_genus.template == "r1RP2#(S2,l)#gT2"
    assert dict(mobius_genus.params) == {"g": 1, "r1": 1}

    crosscaps = pairalg.classify_case(separating(KLEIN, RP2))
    assert dict(crosscaps.params) == {"r1": 2, "r2": 1}

    assert pairalg.classify_case(pairalg.non_separating(T2, False)).template == "(K,f)#gT2"


def test_classify_case_rejects_genus_two():
    with pytest.raises(pairalg.NotComessatti):
        pairalg.classify_case(separating(orientable_surface(2), S2))


def test_comessatti():
    assert pairalg.comessatti_realizable(pairalg.T2_NULL)
    assert not pairalg.comessatti_realizable(pairalg.non_separating(T2, True))
    assert pairalg.comessatti_realizable(pairalg.non_separating(T2, False))


def test_diffeo_table_holds_up_to_eight():
    report = pairalg.verify_diffeo_table(8)
    assert len(report["elementary"]) == 6
    assert len(report["iterated"]) == 10 * 9 - 1
    (disputed,) = report["discrepancies"]
    assert disputed["holds"] is False
    assert disputed["substitute_holds"] is True
    assert disputed["lhs_two_sided"] and not disputed["rhs_two_sided"]


def test_table_check_reports_mismatch():
    with pytest.raises(pairalg.TableMismatch):
        pairalg.check_table_lines(lambda word: pairalg.S2_LINE if "T2L" in word else pairalg.K_LINE, 1, "broken")


def test_negative_table_range():
    with pytest.raises(pairalg.OutOfRange):
        pairalg.verify_diffeo_table(-1)
    with pytest.raises(pairalg.OutOfRange):
        pairalg.check_table_lines(pairalg.normalize, -2, "pairalg")
