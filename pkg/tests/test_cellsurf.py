import pytest

import cellsurf
import config
import pairalg
from cellsurf import CellSurface, CurveTrace, Location
from pairalg import KLEIN, RP2, S2, T2, nonorientable_surface, orientable_surface, separating


def _complex(text):
    surface, _ = cellsurf.parse_complex(text)
    return surface


def test_invariants_of_standard_words():
    assert cellsurf.invariants(_complex("a b a~ b~")) == {"euler": 0, "orientable": True}
    assert cellsurf.invariants(_complex("a a")) == {"euler": 1, "orientable": False}
    assert cellsurf.invariants(_complex("a b a b~")) == {"euler": 0, "orientable": False}
    assert cellsurf.surface_of(_complex("a b\nb~ a~")) == S2


def test_edge_used_once_is_rejected():
    with pytest.raises(cellsurf.InvalidComplex):
        cellsurf.invariants(CellSurface(((("a", 1),),)))


def test_disconnected_complex_is_rejected():
    with pytest.raises(cellsurf.InvalidComplex):
        cellsurf.invariants(_complex("a a\nb b"))


@pytest.mark.parametrize("builder, expected", [
    (cellsurf.sphere_equator, pairalg.S2_LINE),
    (cellsurf.torus_meridian, pairalg.T2_LINE),
    (cellsurf.klein_fiber, pairalg.K_FIBER),
    (cellsurf.klein_section, pairalg.K_LINE),
    (cellsurf.projective_line, pairalg.RP2_LINE),
    (cellsurf.torus_null, pairalg.T2_NULL),
])
def test_base_builders_classify(builder, expected):
    built = builder()
    assert cellsurf.canonical_pair(built.surface, built.curve) == expected
    assert cellsurf.surface_of(built.surface) == pairalg.underlying_surface(expected)


def test_curve_must_be_closed():
    surface = cellsurf.torus_meridian().surface
    with pytest.raises(cellsurf.InvalidComplex):
        cellsurf.crossings(surface, CurveTrace((("a1", 1), ("b", 1))))


def test_blow_up_off_curve_adds_crosscap_on_one_side():
    built = cellsurf.sphere_equator()
    surface, curve = cellsurf.blow_up_point(built.surface, built.curve, Location.OFF_CURVE, face=built.left_face)
    assert cellsurf.canonical_pair(surface, curve) == separating(S2, RP2)
    assert cellsurf.invariants(surface)["euler"] == 1


def test_blow_up_on_curve_is_pair_sum():
    built = cellsurf.sphere_equator()
    surface, curve = cellsurf.blow_up_point(built.surface, built.curve, Location.ON_CURVE)
    assert cellsurf.canonical_pair(surface, curve) == pairalg.RP2_LINE
    surface, curve = cellsurf.pair_sum_rp2_line(surface, curve)
    assert cellsurf.canonical_pair(surface, curve) == pairalg.K_FIBER


def test_unknown_location():
    built = cellsurf.sphere_equator()
    with pytest.raises(ValueError):
        cellsurf.blow_up_point(built.surface, built.curve, "Elsewhere")


@pytest.mark.parametrize("g", [1, 2, 3])
def test_equator_double_curve_counts(g):
    summary = cellsurf.equator_summary(g)
    assert summary["crossings"] == 2 * g + 1
    assert summary["lens_faces"] == 2 * g + 1
    assert summary["equator_points"] == 2 * g + 2
    assert summary["euler"] == 2


def test_double_curve_is_not_embedded():
    surface, curve = cellsurf.equator_double_curve(1)
    with pytest.raises(cellsurf.NotEmbedded):
        cellsurf.canonical_pair(surface, curve)


def test_equator_needs_positive_genus():
    with pytest.raises(pairalg.OutOfRange):
        cellsurf.equator_double_curve(0)


def test_blow_up_at_node_drops_euler_by_one():
    surface, curve = cellsurf.equator_double_curve(2)
    euler = cellsurf.invariants(surface)["euler"]
    nodes = len(cellsurf.crossings(surface, curve))
    while nodes:
        surface, curve = cellsurf.blow_up_point(surface, curve, Location.AT_NODE)
        euler -= 1
        nodes -= 1
        assert cellsurf.invariants(surface)["euler"] == euler
        assert len(cellsurf.crossings(surface, curve)) == nodes
    assert not cellsurf.invariants(surface)["orientable"]


def test_no_such_node():
    built = cellsurf.sphere_equator()
    with pytest.raises(cellsurf.NoSuchNode):
        cellsurf.resolve_node(built.surface, built.curve, 0)


@pytest.mark.parametrize("g", [1, 2, 3])
def test_equator_example_gives_genus_g_side(g):
    assert cellsurf.equator_example(g) == separating(nonorientable_surface(1), orientable_surface(g))


def test_equator_example_with_extra_crosscaps():
    assert cellsurf.equator_example(1, extra_crosscaps=2) == separating(nonorientable_surface(3), T2)


def test_realize_matches_normalize_on_examples():
    for text in ("S2L + 4*RP2L", "RP2L + RP2", "S2L + L:T2 + R:RP2", "KF + T2", "T2L + 3*RP2L + RP2"):
        assert cellsurf.oracle_pair(text) == pairalg.normalize(text)


def test_realize_needs_side_on_separating_base():
    with pytest.raises(pairalg.SideRequired):
        cellsurf.realize(pairalg.PairWord("S2L", 0, ((KLEIN, pairalg.Side.ANY),)))


def test_oracle_confirms_diffeo_table():
    report = cellsurf.oracle_verify_diffeo_table(config.ORACLE_R_MAX)
    (disputed,) = report["discrepancies"]
    assert disputed["substitute_holds"]


def test_oracle_sweep_has_no_mismatches():
    result = cellsurf.oracle_sweep(config.ORACLE_WORD_COMPLEXITY)
    assert result["words"] > 500
    assert result["mismatches"] == []


def test_complex_text_format():
    text = "# Klein bottle with a fiber\na1 a2 b a1 a2 b~\ncurve: a1 a2\n"
    surface, curve = cellsurf.parse_complex(text)
    assert surface == cellsurf.klein_fiber().surface
    assert curve == cellsurf.klein_fiber().curve
    assert cellsurf.parse_complex(cellsurf.format_complex(surface, curve)) == (surface, curve)
    assert cellsurf.parse_complex("a ~b a b\n")[0] == _complex("a b~ a b")


def test_empty_complex_text():
    with pytest.raises(cellsurf.InvalidComplex):
        cellsurf.parse_complex("# nothing here\n")
