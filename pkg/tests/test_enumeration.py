import pytest

import config
import enumeration
import pairalg
from golden import GoldenTable, GoldenTableMissing
from pairalg import KLEIN, S2, T2, nonorientable_surface, orientable_surface, separating


def test_reachable_examples():
    assert pairalg.S2_LINE in enumeration.reachable_types(2, 2)
    at_zero = enumeration.reachable_types(0, 2)
    assert {pairalg.K_FIBER, pairalg.T2_LINE, pairalg.S2_LINE} <= at_zero
    at_six = enumeration.reachable_types(6, 2)
    assert pairalg.T2_LINE in at_six
    assert pairalg.S2_LINE not in at_six


def test_reachable_respects_bound():
    for pair in enumeration.reachable_types(-2, 6):
        assert pairalg.complexity(pair) <= 6
    assert enumeration.reachable_types(2, 0) == {pairalg.S2_LINE}


@pytest.mark.parametrize("e, expected", [
    (-2, {pairalg.non_separating(T2, False)}),
    (-1, {pairalg.one_sided(T2)}),
    (0, {pairalg.K_FIBER}),
    (1, {pairalg.RP2_LINE}),
    (2, {pairalg.S2_LINE}),
    (3, set()),
])
def test_new_types(e, expected):
    assert enumeration.new_types(e, config.DEFAULT_BOUND) == expected


def test_new_types_at_minus_two_small_bound():
    assert enumeration.new_types(-2, 4) == {pairalg.normalize("KF + T2")}


def test_new_types_at_four_are_separating():
    found = enumeration.new_types(4, 6)
    assert separating(S2, pairalg.RP2) in found
    assert separating(KLEIN, nonorientable_surface(3)) in found
    assert all(pair.variant is pairalg.Variant.SEPARATING for pair in found)
    assert pairalg.S2_LINE not in found


@pytest.mark.parametrize("e", range(-2, 7))
def test_reachable_sets_shrink_as_e_grows(e):
    assert enumeration.reachable_types(e + 2, 8) <= enumeration.reachable_types(e, 8)


def test_torus_null_is_never_reached():
    for e in range(-2, 9):
        assert pairalg.T2_NULL not in enumeration.reachable_types(e, 8)


def test_reachable_types_satisfy_comessatti():
    for e in range(-2, 5):
        assert all(pairalg.comessatti_realizable(p) for p in enumeration.reachable_types(e, 8))


def test_stable_rows_alternate_sidedness():
    assert all(not p.is_two_sided for p in enumeration.reachable_types(7, 8))
    assert all(p.is_two_sided for p in enumeration.reachable_types(8, 8))


def test_out_of_scope():
    with pytest.raises(enumeration.OutOfScope):
        enumeration.reachable_types(-3, 5)
    with pytest.raises(enumeration.OutOfScope):
        enumeration.theorem_table(e_min=-3)


def test_theorem_table_matches_golden(golden_path):
    table = enumeration.theorem_table(-2, 8, config.DEFAULT_BOUND)
    assert GoldenTable(golden_path).compare(table) == []
    labels = table.labels()
    assert labels[3] == []
    assert labels[5] == ["(K,l)#rRP2"]
    assert labels[8] == ["(T2,l)#rRP2"]


def test_new_type_rows_are_disjoint():
    rows = {e: enumeration.new_types(e, 8) for e in range(-2, 5)}
    for e, types in rows.items():
        for other, other_types in rows.items():
            if e < other:
                assert not types & other_types


def test_table_dict_round_trip():
    table = enumeration.theorem_table(0, 5, 6)
    assert enumeration.TypeTable.from_dict(table.to_dict()) == table
    assert "nothing new" in table.format_text()


def test_family_instances():
    family = enumeration.FAMILY_CATALOG[0]
    instances = family.instances(4)
    assert instances[pairalg.T2_LINE] == "T2L + 0*RP2"
    assert len(instances) == 3
    separating_family = enumeration.ParamFamily.from_dict({"label": "r1RP2#(S2,l)#r2RP2"})
    assert pairalg.S2_LINE not in separating_family.instances(4)
    assert separating_family.constraints == ["r1 >= 0", "r2 >= 0", "r1 + r2 >= 1"]


def test_fit_failure():
    with pytest.raises(enumeration.FitFailure):
        enumeration.fit_families({pairalg.one_sided(orientable_surface(2))}, 10)
    with pytest.raises(enumeration.FitFailure):
        enumeration.ParamFamily.from_dict({"label": "(T2,null)#gT2"})


def test_classify_verdicts():
    assert enumeration.classify_approximable(pairalg.T2_NULL).to_dict() == {
        "verdict": "NotApproximable", "reason": "TorusNull"}
    assert enumeration.classify_approximable(separating(orientable_surface(2), S2)).kind == "NotRealizable"
    verdict = enumeration.classify_approximable(pairalg.normalize("KF + 5*RP2"))
    assert verdict.kind == "Approximable"
    assert enumeration.replay_plan(verdict.witness) == pairalg.normalize("KF + 5*RP2")
    assert enumeration.Verdict.from_dict(verdict.to_dict()) == verdict


def test_witness_examples():
    plan = enumeration.witness(pairalg.normalize("RP2L + 3*RP2"))
    assert plan.end == enumeration.mmp.p1_bundle_section(1)
    assert len(plan.steps) == 2

    equator = enumeration.witness(separating(nonorientable_surface(1), orientable_surface(2)))
    assert equator.to_dict() == {"kind": "equator", "g": 2, "extra_crosscaps": 0}

    sphere = enumeration.witness(pairalg.S2_LINE)
    assert sphere.end == enumeration.mmp.QUADRIC_SECTION
    assert sphere.steps == ()


def test_no_witness_for_torus_null():
    with pytest.raises(enumeration.NoWitness):
        enumeration.witness(pairalg.T2_NULL)


def test_sampled_witnesses_replay():
    """Every sampled approximable pair has a plan that replays to it"""
    targets = enumeration.sample_targets(config.WITNESS_SAMPLE_SIZE, config.DEFAULT_BOUND, config.RANDOM_SEED)
    assert len(targets) == config.WITNESS_SAMPLE_SIZE
    for target in targets:
        plan = enumeration.witness(target)
        assert enumeration.replay_plan(plan) == target
        assert enumeration.ConstructionPlan.from_dict(plan.to_dict()) == plan


def test_all_approximable_targets_have_witnesses():
    for target in enumeration.approximable_targets(6):
        assert enumeration.classify_approximable(target).kind == "Approximable"


def test_golden_table_is_read_only(golden_path):
    with open(golden_path, encoding="utf-8") as f:
        before = f.read()
    table = GoldenTable(golden_path)
    table.compare(enumeration.theorem_table(-2, 2, 6))
    with open(golden_path, encoding="utf-8") as f:
        assert f.read() == before


def test_unreadable_golden_table(tmp_path):
    path = tmp_path / "golden.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(GoldenTableMissing):
        GoldenTable(str(path))


def test_negative_bound():
    with pytest.raises(enumeration.OutOfScope):
        enumeration.reachable_types(0, -1)
