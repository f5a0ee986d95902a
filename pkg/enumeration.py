"""
Topological types of real curves on real rational surfaces by self-intersection

Builds the bounded set of pairs reachable from every end state of the
minimal model program, fits the new types per self-intersection into
parametric families, and decides which pairs are realizable and
approximable, with a replayable construction for each.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

import cellsurf
import config
import mmp
import pairalg
from pairalg import ClosedSurface, Side, TopPair, Variant
from utils import RealPairsError, logger, timed


class OutOfScope(RealPairsError):
    """Self-intersection below -2"""


class FitFailure(RealPairsError):
    """Concrete types that no family in the catalog explains"""


class NoWitness(RealPairsError):
    """No construction reproduces the target pair"""


E_FLOOR = -2
LARGEST_FIXED_CSQ = 4


def _end_pairs(e: int, bound: int):
    """(csq, pair) of every end state with csq >= e whose pair fits in the bound"""
    fixed = [
        (4, pairalg.separating(pairalg.S2, pairalg.RP2)),
        (2, pairalg.S2_LINE),
        (1, pairalg.RP2_LINE),
        (0, pairalg.T2_LINE),
        (0, pairalg.K_FIBER),
        (0, pairalg.S2_LINE),
        (-1, pairalg.one_sided(pairalg.T2)),
        (-1, pairalg.RP2_LINE),
        (-2, pairalg.non_separating(pairalg.T2, False)),
    ]
    fixed += [(-1, pairalg.one_sided(pairalg.nonorientable_surface(r))) for r in range(1, bound + 1)]
    sections = [(c, pairalg.T2_LINE if c % 2 == 0 else pairalg.K_LINE) for c in range(e, e + bound + 3)]
    for c, pair in fixed + sections:
        if c >= e and pairalg.complexity(pair) <= bound:
            yield c, pair


def _with_crosscaps(p: TopPair, bound: int):
    """p with any number of crosscaps added, on either side when the curve separates"""
    if p.variant is Variant.SEPARATING:
        first, second = p.sides
        spare = bound - pairalg.complexity(p)
        for right in range(spare + 1):
            for left in range(spare - right + 1):
                a = pairalg.surface_sum(first, pairalg.surface_power(pairalg.RP2, right)) if right else first
                b = pairalg.surface_sum(second, pairalg.surface_power(pairalg.RP2, left)) if left else second
                yield pairalg.separating(a, b)
        return
    while pairalg.complexity(p) <= bound:
        yield p
        p = pairalg.sum_surface(p, pairalg.RP2)


def reachable_types(e: int, bound: int) -> set:
    """
    Pairs with complexity at most bound realized by a curve with C.C = e

    An end state with self-intersection c reaches e through r1 real on-curve
    blow-ups (r1 = c - e mod 2) and conjugate on-curve pairs; real off-curve
    blow-ups add crosscaps on either side.

    Returns:
        set: TopPair values
    """
    if e < E_FLOOR:
        raise OutOfScope(f"self-intersection {e} is below {E_FLOOR}", e=e)
    if bound < 0:
        raise OutOfScope(f"bound must be non-negative, got {bound}", bound=bound)
    found = set()
    for c, pair in _end_pairs(e, bound):
        for r1 in range((c - e) % 2, c - e + 1, 2):
            p = pair
            for _ in range(r1):
                p = pairalg.sum_rp2_line(p)
            if pairalg.complexity(p) > bound:
                break
            found.update(_with_crosscaps(p, bound))
    return found


def new_types(e: int, bound: int) -> set:
    return reachable_types(e, bound) - reachable_types(e + 2, bound)


# ----------------------------------------------------------------------
# Families
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ParamFamily:
    """
    Pair word template with non-negative integer parameters

    Parameters are bounded below only through min_total, a lower bound on
    their sum.
    """
    label: str
    template: str
    params: tuple = ()
    min_total: int = 0

    @property
    def constraints(self) -> list:
        if not self.params:
            return []
        return [f"{p} >= 0" for p in self.params] + (
            [f"{' + '.join(self.params)} >= {self.min_total}"] if self.min_total else [])

    def instances(self, bound: int) -> dict:
        """Concrete pairs of complexity at most bound, mapped to the word producing them"""
        found = {}
        for values in _parameter_tuples(len(self.params), self.min_total, bound):
            word = self.template.format(**dict(zip(self.params, values)))
            pair = pairalg.normalize(word)
            if pairalg.complexity(pair) <= bound:
                found.setdefault(pair, word)
        return found

    def to_dict(self) -> dict:
        return {"label": self.label, "template": self.template,
                "params": list(self.params), "constraints": self.constraints}

    @classmethod
    def from_dict(cls, data: dict) -> ParamFamily:
        for family in FAMILY_CATALOG:
            if family.label == data["label"]:
                return family
        raise FitFailure(f"unknown family {data['label']!r}", label=data["label"])


def _parameter_tuples(arity: int, min_total: int, bound: int):
    if arity == 0:
        yield ()
        return
    if arity == 1:
        for r in range(min_total, bound + 1):
            yield (r,)
        return
    for first in range(bound + 1):
        for rest in _parameter_tuples(arity - 1, 0, bound - first):
            if first + sum(rest) >= min_total:
                yield (first,) + rest


FAMILY_CATALOG = [
    ParamFamily("(T2,l)#rRP2", "T2L + {r}*RP2", ("r",)),
    ParamFamily("(K,l)#rRP2", "KL + {r}*RP2", ("r",)),
    ParamFamily("r1RP2#(S2,l)#r2RP2", "S2L + {r1}*L:RP2 + {r2}*R:RP2", ("r1", "r2"), min_total=1),
    ParamFamily("(S2,l)", "S2L"),
    ParamFamily("(RP2,l)", "RP2L"),
    ParamFamily("(K,f)", "KF"),
    ParamFamily("(RP2,l)#T2", "RP2L + T2"),
    ParamFamily("(K,f)#T2", "KF + T2"),
]


def fit_families(types: set, bound: int, e: Optional[int] = None) -> list:
    """
    Explain a bounded set of pairs by catalog families

    A parametric family is taken when all its bounded instances lie in the
    set and there are at least MIN_FAMILY_INSTANCES of them; single pairs
    are matched by fixed families.

    Returns:
        list: ParamFamily values in catalog order
    """
    leftover = set(types)
    fitted = []
    for family in FAMILY_CATALOG:
        instances = set(family.instances(bound))
        if family.params:
            if len(instances) >= config.MIN_FAMILY_INSTANCES and instances <= types:
                fitted.append(family)
                leftover -= instances
        elif instances and instances <= leftover:
            fitted.append(family)
            leftover -= instances
    if leftover:
        raise FitFailure(f"no family explains {sorted(str(p) for p in leftover)}", e=e,
                         unexplained=sorted(str(p) for p in leftover))
    return fitted


@dataclass
class TypeTable:
    """Rows of fitted families keyed by self-intersection"""
    bound: int
    rows: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "bound": self.bound,
            "rows": [{"e": e, "families": [family.to_dict() for family in families]}
                     for e, families in sorted(self.rows.items())],
        }

    @classmethod
    def from_dict(cls, data: dict) -> TypeTable:
        return cls(int(data["bound"]), {int(row["e"]): [ParamFamily.from_dict(f) for f in row["families"]]
                                        for row in data["rows"]})

    def labels(self) -> dict:
        return {e: [family.label for family in families] for e, families in self.rows.items()}

    def format_text(self) -> str:
        lines = []
        for e, families in sorted(self.rows.items()):
            text = "; ".join(
                family.label + (f"  ({', '.join(family.constraints)})" if family.constraints else "")
                for family in families)
            lines.append(f"{e:>3}: {text or 'nothing new'}")
        return "\n".join(lines)


@timed("theorem table")
def theorem_table(e_min: int = config.DEFAULT_E_MIN, e_max: int = config.DEFAULT_E_MAX,
                  bound: int = config.DEFAULT_BOUND) -> TypeTable:
    """
    Fitted table of topological types per self-intersection

    Rows up to the largest fixed end-state self-intersection list the new
    types; above it the reachable sets repeat with period 2 and the row
    lists the whole reachable set.

    Returns:
        TypeTable: Table over e_min..e_max
    """
    if e_min < E_FLOOR:
        raise OutOfScope(f"e_min {e_min} is below {E_FLOOR}", e_min=e_min)
    reachable = {e: reachable_types(e, bound) for e in range(e_min, e_max + 3)}
    table = TypeTable(bound)
    for e in range(e_min, e_max + 1):
        types = reachable[e] - reachable[e + 2] if e <= LARGEST_FIXED_CSQ else reachable[e]
        table.rows[e] = fit_families(types, bound, e)
        logger.debug(f"row {e}: {len(types)} types, families {[f.label for f in table.rows[e]]}")
    logger.info(f"table for e in [{e_min}, {e_max}] with bound {bound}: {len(table.rows)} rows")
    return table


# ----------------------------------------------------------------------
# Approximability and witnesses
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ConstructionPlan:
    """
    Either an end state with inverse steps (kind "mmp"), or the doubled
    equator with all nodes blown up plus crosscaps on a lens face (kind "equator")
    """
    kind: str
    end: Optional[mmp.EndState] = None
    steps: tuple = ()
    g: int = 0
    extra_crosscaps: int = 0

    def to_dict(self) -> dict:
        if self.kind == "equator":
            return {"kind": "equator", "g": self.g, "extra_crosscaps": self.extra_crosscaps}
        return {"kind": "mmp", "end": self.end.to_dict(), "steps": [step.to_dict() for step in self.steps]}

    @classmethod
    def from_dict(cls, data: dict) -> ConstructionPlan:
        if data["kind"] == "equator":
            return cls("equator", g=int(data["g"]), extra_crosscaps=int(data["extra_crosscaps"]))
        return cls("mmp", mmp.EndState.from_dict(data["end"]),
                   tuple(mmp.Step.from_dict(step) for step in data["steps"]))


def replay_plan(plan: ConstructionPlan) -> TopPair:
    if plan.kind == "equator":
        return cellsurf.equator_example(plan.g, plan.extra_crosscaps)
    return mmp.replay(plan.end, plan.steps).pair


def _crosscaps(x: ClosedSurface) -> int:
    return 0 if x.orientable else x.crosscaps


def _mmp_plan(end, *steps) -> ConstructionPlan:
    return ConstructionPlan("mmp", end, tuple(steps))


def _propose(p: TopPair) -> Optional[ConstructionPlan]:
    if p.variant is Variant.SEPARATING:
        first, second = p.sides
        if first.orientable and first.genus > 0:
            if second.orientable:
                return None
            return ConstructionPlan("equator", g=first.genus, extra_crosscaps=second.crosscaps - 1)
        if second.orientable and second.genus > 0:
            return None
        small, large = sorted((_crosscaps(first), _crosscaps(second)))
        return _mmp_plan(mmp.QUADRIC_SECTION, *[mmp.real_off(Side.LEFT)] * large, *[mmp.real_off(Side.RIGHT)] * small)

    cap = p.cap
    if p.variant is Variant.ONE_SIDED:
        if cap.is_sphere:
            return _mmp_plan(mmp.P2_LINE)
        if cap.orientable:
            return _mmp_plan(mmp.QUADRIC_SECTION, *[mmp.REAL_ON] * (2 * cap.genus + 1))
        return _mmp_plan(mmp.p1_bundle_section(1), *[mmp.REAL_OFF] * (cap.crosscaps - 1))

    if p.total_orientable:
        return _mmp_plan(mmp.p1_bundle_section(0)) if cap.is_sphere else None
    if cap.orientable and cap.genus > 0:
        return _mmp_plan(mmp.P2_LINE, *[mmp.REAL_ON] * (2 * cap.genus + 1))
    return _mmp_plan(mmp.conic_bundle_fiber(pairalg.KLEIN), *[mmp.REAL_OFF] * _crosscaps(cap))


def witness(p: TopPair) -> ConstructionPlan:
    """
    Construction realizing p, checked by replaying it

    Returns:
        ConstructionPlan: Plan whose replay gives p
    """
    plan = _propose(p)
    if plan is None:
        raise NoWitness(f"no construction for {p}", pair=p.to_dict())
    replayed = replay_plan(plan)
    if replayed != p:
        raise NoWitness(f"plan for {p} replays to {replayed}", pair=p.to_dict(), plan=plan.to_dict())
    return plan


@dataclass(frozen=True)
class Verdict:
    kind: str
    reason: Optional[str] = None
    witness: Optional[ConstructionPlan] = None

    def to_dict(self) -> dict:
        data = {"verdict": self.kind}
        if self.reason:
            data["reason"] = self.reason
        if self.witness is not None:
            data["witness"] = self.witness.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: dict) -> Verdict:
        plan = data.get("witness")
        return cls(data["verdict"], data.get("reason"),
                   ConstructionPlan.from_dict(plan) if plan is not None else None)


NOT_REALIZABLE = "NotRealizable"
NOT_APPROXIMABLE = "NotApproximable"
APPROXIMABLE = "Approximable"


def classify_approximable(p: TopPair) -> Verdict:
    """Can (S(R), L) be approximated by real rational curves on a rational surface"""
    if not pairalg.comessatti_realizable(p):
        return Verdict(NOT_REALIZABLE, f"{pairalg.underlying_surface(p)} is not S2, T2 or a sum of crosscaps")
    if p == pairalg.T2_NULL:
        return Verdict(NOT_APPROXIMABLE, "TorusNull")
    return Verdict(APPROXIMABLE, witness=witness(p))


def all_pairs(max_complexity: int):
    """Every pair whose underlying surface has complexity at most max_complexity"""
    surfaces = [pairalg.orientable_surface(g) for g in range(max_complexity // 2 + 1)]
    surfaces += [pairalg.nonorientable_surface(k) for k in range(1, max_complexity + 1)]
    for i, a in enumerate(surfaces):
        for b in surfaces[i:]:
            if a.complexity + b.complexity <= max_complexity:
                yield pairalg.separating(a, b)
    for cap in surfaces:
        if cap.complexity + 1 <= max_complexity:
            yield pairalg.one_sided(cap)
        if cap.complexity + 2 <= max_complexity:
            yield pairalg.non_separating(cap, False)
            if cap.orientable:
                yield pairalg.non_separating(cap, True)


def approximable_targets(max_complexity: int) -> list:
    return [p for p in all_pairs(max_complexity)
            if pairalg.comessatti_realizable(p) and p != pairalg.T2_NULL]


def sample_targets(n: int = config.WITNESS_SAMPLE_SIZE, max_complexity: int = config.DEFAULT_BOUND,
                   seed: int = config.RANDOM_SEED) -> list:
    """n targets drawn with replacement from the realizable non torus-null pairs"""
    targets = approximable_targets(max_complexity)
    rng = random.Random(seed)
    return [rng.choice(targets) for _ in range(n)]
