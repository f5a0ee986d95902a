"""
Step calculus of the minimal model program for a pair (S, C)

States keep the Picard lattice, the curve class and the topological pair in
step. Inverse steps are blow-ups, forward steps contract tracked
exceptional classes or the curve itself.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

import pairalg
import piclattice
from pairalg import ClosedSurface, Side, TopPair
from piclattice import DivClass, PicLattice
from utils import RealPairsError, logger


class ParityError(RealPairsError):
    """Self-intersection parity does not match the real form"""


class NotContractible(RealPairsError):
    """Requested forward step does not exist on this state"""


class MinusThreeOutOfScope(RealPairsError):
    """Contracting a curve with self-intersection at most -3"""


class StepKind(Enum):
    CONJ_PAIR_OFF_CURVE = "ConjPairOffCurve"
    CONJ_PAIR_ON_CURVE = "ConjPairOnCurve"
    REAL_OFF_CURVE = "RealOffCurve"
    REAL_ON_CURVE = "RealOnCurve"
    CONTRACT_C = "ContractC"


@dataclass(frozen=True)
class Step:
    kind: StepKind
    side: Side = Side.ANY

    def to_dict(self) -> dict:
        data = {"kind": self.kind.value}
        if self.side is not Side.ANY:
            data["side"] = self.side.value
        return data

    @classmethod
    def from_dict(cls, data: dict) -> Step:
        return cls(StepKind(data["kind"]), Side(data.get("side", "any")))

    def __str__(self):
        if self.side is Side.ANY:
            return self.kind.value
        return f"{self.kind.value}:{self.side.value}"


CONJ_OFF = Step(StepKind.CONJ_PAIR_OFF_CURVE)
CONJ_ON = Step(StepKind.CONJ_PAIR_ON_CURVE)
REAL_OFF = Step(StepKind.REAL_OFF_CURVE)
REAL_ON = Step(StepKind.REAL_ON_CURVE)
CONTRACT_C = Step(StepKind.CONTRACT_C)


def real_off(side: Side = Side.ANY) -> Step:
    return Step(StepKind.REAL_OFF_CURVE, side)


def parse_step(text: str) -> Step:
    """ConjPairOffCurve, ConjPairOnCurve, RealOffCurve[:L|:R], RealOnCurve or ContractC"""
    name, _, side = text.strip().partition(":")
    try:
        kind = StepKind(name)
        return Step(kind, Side(side) if side else Side.ANY)
    except ValueError:
        raise pairalg.ParseError(f"unknown step {text!r}", step=text)


class EndKind(Enum):
    P1_BUNDLE_SECTION = "P1BundleSection"
    P2_CONIC = "P2Conic"
    QUADRIC_SECTION = "QuadricSection"
    P2_LINE = "P2Line"
    CONIC_BUNDLE_FIBER = "ConicBundleFiber"
    MINUS_ONE = "MinusOne"
    MINUS_TWO_KF_T2 = "MinusTwoKF_T2"


@dataclass(frozen=True)
class EndState:
    """
    Terminal state of the program, read backwards

    csq and real_form parametrize P1BundleSection, real_form alone selects the
    ConicBundleFiber type (T2, K or S2), rest is the summand of MinusOne.
    """
    kind: EndKind
    csq: Optional[int] = None
    real_form: Optional[ClosedSurface] = None
    rest: Optional[ClosedSurface] = None

    def to_dict(self) -> dict:
        data = {"kind": self.kind.value}
        if self.csq is not None:
            data["csq"] = self.csq
        if self.real_form is not None:
            data["real_form"] = self.real_form.to_dict()
        if self.rest is not None:
            data["rest"] = self.rest.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: dict) -> EndState:
        def surface(key):
            return ClosedSurface.from_dict(data[key]) if key in data else None
        return cls(EndKind(data["kind"]), data.get("csq"), surface("real_form"), surface("rest"))

    def __str__(self):
        if self.kind is EndKind.P1_BUNDLE_SECTION:
            form = f",{self.real_form}" if self.real_form is not None else ""
            return f"{self.kind.value}({self.csq}{form})"
        if self.kind is EndKind.CONIC_BUNDLE_FIBER:
            return f"{self.kind.value}({self.real_form})"
        if self.kind is EndKind.MINUS_ONE:
            return f"{self.kind.value}({self.rest})"
        return self.kind.value


def p1_bundle_section(csq: int, real_form: Optional[ClosedSurface] = None) -> EndState:
    return EndState(EndKind.P1_BUNDLE_SECTION, csq=csq, real_form=real_form)


def conic_bundle_fiber(real_form: ClosedSurface) -> EndState:
    return EndState(EndKind.CONIC_BUNDLE_FIBER, real_form=real_form)


def minus_one(rest: ClosedSurface) -> EndState:
    return EndState(EndKind.MINUS_ONE, rest=rest)


P2_CONIC = EndState(EndKind.P2_CONIC)
QUADRIC_SECTION = EndState(EndKind.QUADRIC_SECTION)
P2_LINE = EndState(EndKind.P2_LINE)
MINUS_TWO_KF_T2 = EndState(EndKind.MINUS_TWO_KF_T2)

_END = re.compile(r"^(\w+)(?:\((.*)\))?$")


def parse_end_state(text: str) -> EndState:
    """
    Read an end state such as P2Line, P1BundleSection(3), P1BundleSection(2,T2),
    ConicBundleFiber(K) or MinusOne(NonOr(2))
    """
    match = _END.match(text.strip())
    if not match:
        raise pairalg.ParseError(f"unknown end state {text!r}", end_state=text)
    name, args = match.group(1), match.group(2)
    try:
        kind = EndKind(name)
    except ValueError:
        raise pairalg.ParseError(f"unknown end state {name!r}", end_state=text)
    if kind is EndKind.P1_BUNDLE_SECTION:
        if not args:
            raise pairalg.ParseError("P1BundleSection needs a self-intersection", end_state=text)
        csq, _, form = args.partition(",")
        return p1_bundle_section(int(csq), pairalg.parse_surface(form) if form else None)
    if kind is EndKind.CONIC_BUNDLE_FIBER:
        return conic_bundle_fiber(pairalg.parse_surface(args or ""))
    if kind is EndKind.MINUS_ONE:
        return minus_one(pairalg.parse_surface(args or ""))
    if args:
        raise pairalg.ParseError(f"{name} takes no arguments", end_state=text)
    return EndState(kind)



def _sides_to_dict(sides):
    if sides is None:
        return None
    left, right = sides
    return {"left": left.to_dict(), "right": right.to_dict()}


def _sides_from_dict(data):
    if data is None:
        return None
    return ClosedSurface.from_dict(data["left"]), ClosedSurface.from_dict(data["right"])


@dataclass(frozen=True)
class HistoryEntry:
    """An applied inverse step, the center it created and what it replaced"""
    step: Step
    center: int
    pair_before: TopPair
    csq_before: int
    sides_before: Optional[tuple] = None

    def to_dict(self) -> dict:
        return {"step": self.step.to_dict(), "center": self.center,
                "pair_before": self.pair_before.to_dict(), "csq_before": self.csq_before,
                "sides_before": _sides_to_dict(self.sides_before)}

    @classmethod
    def from_dict(cls, data: dict) -> HistoryEntry:
        return cls(Step.from_dict(data["step"]), int(data["center"]),
                   TopPair.from_dict(data["pair_before"]), int(data["csq_before"]),
                   _sides_from_dict(data.get("sides_before")))


@dataclass(frozen=True)
class MmpState:
    """
    Lattice, curve class and pair in step

    sides holds the (left, right) surfaces of a separating curve in the order
    fixed by the end state; pair is their canonical form.
    """
    lattice: PicLattice
    curve: DivClass
    pair: TopPair
    csq: int
    end: EndState
    history: tuple = field(default_factory=tuple)
    sides: Optional[tuple] = None

    def to_dict(self) -> dict:
        return {
            "end": self.end.to_dict(),
            "lattice": self.lattice.to_dict(),
            "curve": self.curve.to_dict(),
            "pair": self.pair.to_dict(),
            "csq": self.csq,
            "history": [entry.to_dict() for entry in self.history],
            "sides": _sides_to_dict(self.sides),
        }

    @classmethod
    def from_dict(cls, data: dict) -> MmpState:
        return cls(
            PicLattice.from_dict(data["lattice"]),
            DivClass.from_dict(data["curve"]),
            TopPair.from_dict(data["pair"]),
            int(data["csq"]),
            EndState.from_dict(data["end"]),
            tuple(HistoryEntry.from_dict(entry) for entry in data["history"]),
            _sides_from_dict(data.get("sides")),
        )


def invariant_violations(s: MmpState) -> list:
    """Empty when csq, the pair and the lattice agree"""
    problems = []
    actual = piclattice.intersect(s.lattice, s.curve, s.curve)
    if actual != s.csq:
        problems.append(f"csq {s.csq} but C.C = {actual}")
    locus = piclattice.real_topology(s.lattice)
    if pairalg.underlying_surface(s.pair) != locus:
        problems.append(f"pair {s.pair} lives on {pairalg.underlying_surface(s.pair)}, lattice gives {locus}")
    if (s.csq % 2 == 0) != s.pair.is_two_sided:
        problems.append(f"csq {s.csq} parity disagrees with sidedness of {s.pair}")
    separates = s.pair.variant is pairalg.Variant.SEPARATING
    if separates != (s.sides is not None) or (s.sides and pairalg.separating(*s.sides) != s.pair):
        problems.append(f"tracked sides {s.sides} do not match {s.pair}")
    return problems


def _checked(s: MmpState) -> MmpState:
    problems = invariant_violations(s)
    assert not problems, "; ".join(problems)
    return s


def _state(lattice, curve, pair, end) -> MmpState:
    # Left starts on the side that sorts second
    sides = (pair.sides[1], pair.sides[0]) if pair.variant is pairalg.Variant.SEPARATING else None
    return _checked(MmpState(lattice, curve, pair, piclattice.intersect(lattice, curve, curve), end, (), sides))


def _with_untracked(base, centers, curve, pair, end) -> MmpState:
    lattice = PicLattice(base)
    for center in centers:
        lattice, curve = piclattice.blow_up(lattice, center, curve)
    return _state(lattice, curve, pair, end)


def end_state(k: EndState) -> MmpState:
    """
    Build the state of an end-state kind

    Centers blown up here are part of the end state and are never contracted
    by forward steps.

    Returns:
        MmpState: State with empty history
    """
    if k.kind is EndKind.P1_BUNDLE_SECTION:
        c = k.csq
        if k.real_form is not None:
            if k.real_form not in (pairalg.T2, pairalg.KLEIN):
                raise ParityError(f"a P1-bundle over P1 has real form T2 or K, not {k.real_form}")
            wanted = 0 if k.real_form == pairalg.T2 else 1
            if c % 2 != wanted:
                raise ParityError(f"section self-intersection {c} has the wrong parity for {k.real_form}",
                                  csq=c, real_form=str(k.real_form))
        if c <= 0:
            n, curve = -c, DivClass((1, 0))
        else:
            n = c % 2
            curve = DivClass((1, (c + n) // 2))
        pair = pairalg.T2_LINE if n % 2 == 0 else pairalg.K_LINE
        return _state(PicLattice(piclattice.hirzebruch(n)), curve, pair, k)

    if k.kind is EndKind.P2_CONIC:
        pair = pairalg.separating(pairalg.S2, pairalg.RP2)
        return _state(PicLattice(piclattice.P2), DivClass((2,)), pair, k)
    if k.kind is EndKind.QUADRIC_SECTION:
        return _state(PicLattice(piclattice.QUADRIC), DivClass((1,)), pairalg.S2_LINE, k)
    if k.kind is EndKind.P2_LINE:
        return _state(PicLattice(piclattice.P2), DivClass((1,)), pairalg.RP2_LINE, k)

    if k.kind is EndKind.CONIC_BUNDLE_FIBER:
        if k.real_form == pairalg.T2:
            return _state(PicLattice(piclattice.P1XP1), DivClass((0, 1)), pairalg.T2_LINE, k)
        if k.real_form == pairalg.KLEIN:
            return _state(PicLattice(piclattice.hirzebruch(1)), DivClass((0, 1)), pairalg.K_FIBER, k)
        if k.real_form == pairalg.S2:
            # conic bundle on the quadric blown up in a conjugate pair: H - E - E'
            return _with_untracked(piclattice.QUADRIC, [piclattice.conj_pair(on_curve=True)],
                                   DivClass((1,)), pairalg.S2_LINE, k)
        raise ParityError(f"conic bundle fibers live on T2, K or S2, not {k.real_form}")

    if k.kind is EndKind.MINUS_ONE:
        rest = k.rest
        if rest is None or (rest.orientable and rest.genus > 1):
            raise ParityError(f"MinusOne needs rest NonOr(r), T2 or S2, got {rest}")
        if rest.orientable:
            base = piclattice.P1XP1 if rest.genus == 1 else piclattice.QUADRIC
            extra = 0
        else:
            base, extra = piclattice.P2, rest.crosscaps - 1
        lattice = PicLattice(base, (piclattice.real_center(),) * extra)
        lattice, _ = piclattice.blow_up(lattice, piclattice.real_center(), DivClass((0,) * lattice.rank))
        curve = piclattice.exceptional_class(lattice, len(lattice.centers) - 1)
        return _state(lattice, curve, pairalg.one_sided(rest), k)

    if k.kind is EndKind.MINUS_TWO_KF_T2:
        return _with_untracked(piclattice.QUADRIC, [piclattice.real_center(on_curve=True)] * 4,
                               DivClass((1,)), pairalg.non_separating(pairalg.T2, False), k)
    raise ValueError(f"unknown end state {k}")


_CSQ_DROP = {
    StepKind.CONJ_PAIR_OFF_CURVE: 0,
    StepKind.CONJ_PAIR_ON_CURVE: 2,
    StepKind.REAL_OFF_CURVE: 0,
    StepKind.REAL_ON_CURVE: 1,
}


def apply_inverse_step(s: MmpState, k: Step) -> MmpState:
    """
    Blow up a center and update the pair

    Args:
        s: Current state
        k: Any step except ContractC

    Returns:
        MmpState: New state with the step recorded in its history
    """
    if k.kind is StepKind.CONTRACT_C:
        raise NotContractible("ContractC is a forward step only")
    if k.side is not Side.ANY and k.kind is not StepKind.REAL_OFF_CURVE:
        raise pairalg.SideForbidden(f"{k.kind.value} takes no side", step=str(k))

    sides = s.sides
    if k.kind is StepKind.REAL_OFF_CURVE and k.side is not Side.ANY and sides is not None:
        left, right = sides
        if k.side is Side.LEFT:
            left = pairalg.surface_sum(left, pairalg.RP2)
        else:
            right = pairalg.surface_sum(right, pairalg.RP2)
        sides = (left, right)
        pair = pairalg.separating(left, right)
    elif k.kind is StepKind.REAL_OFF_CURVE:
        pair = pairalg.sum_surface(s.pair, pairalg.RP2, k.side)
    elif k.kind is StepKind.REAL_ON_CURVE:
        pair = pairalg.sum_rp2_line(s.pair)
    else:
        pair = s.pair
    if pair.variant is not pairalg.Variant.SEPARATING:
        sides = None

    on_curve = k.kind in (StepKind.CONJ_PAIR_ON_CURVE, StepKind.REAL_ON_CURVE)
    real = k.kind in (StepKind.REAL_OFF_CURVE, StepKind.REAL_ON_CURVE)
    center = piclattice.Center(real=real, on_curve=on_curve, side=k.side)
    lattice, curve = piclattice.blow_up(s.lattice, center, s.curve)

    entry = HistoryEntry(k, len(s.lattice.centers), s.pair, s.csq, s.sides)
    state = _checked(MmpState(lattice, curve, pair, s.csq - _CSQ_DROP[k.kind], s.end, s.history + (entry,), sides))
    logger.debug(f"{k}: csq {s.csq} -> {state.csq}, pair {s.pair} -> {state.pair}")
    return state


def replay(end: EndState, steps) -> MmpState:
    state = end_state(end)
    for step in steps:
        state = apply_inverse_step(state, step)
    return state


@dataclass(frozen=True)
class ContractionResult:
    """Outcome of contracting a curve with self-intersection -1"""
    pair_before: TopPair
    real_locus: ClosedSurface
    k_squared_before: int
    k_squared_after: int
    rank_before: int
    rank_after: int

    def to_dict(self) -> dict:
        return {
            "pair_before": self.pair_before.to_dict(),
            "real_locus": self.real_locus.to_dict(),
            "k_squared_before": self.k_squared_before,
            "k_squared_after": self.k_squared_after,
            "rank_before": self.rank_before,
            "rank_after": self.rank_after,
        }


def minus_two_report(s: MmpState) -> dict:
    """
    What contracting a (-2)-curve can lead to

    The contraction lands on a quadric cone, a degree 1 or a degree 2 del
    Pezzo surface; only the cone is rational, where C is a section of even
    self-intersection.
    """
    k = piclattice.canonical_class(s.lattice)
    candidates = piclattice.minus_two_solutions(reducibility_filter=False)
    kept = piclattice.minus_two_solutions()
    degree_two = [sol for sol in kept if sol["d"] == 2]
    return {
        "csq": s.csq,
        "pair": s.pair.to_dict(),
        "k_squared": piclattice.intersect(s.lattice, k, k),
        "cases": [
            {"case": "quadric cone", "rational": True},
            {"case": "degree-1 del Pezzo", "rational": False, "k_t_squared": 1},
            {"case": "degree-2 del Pezzo", "rational": False, "c1_squared": 2, "k_squared": 2,
             "candidates": candidates, "solutions": degree_two},
        ],
        "verdict": "rational only in the quadric cone case: C is a section pair of even self-intersection",
    }


def _contract_curve(s: MmpState):
    if s.csq >= 0:
        raise NotContractible(f"C has self-intersection {s.csq}; only negative curves contract", csq=s.csq)
    if s.csq == -2:
        return minus_two_report(s)
    if s.csq <= -3:
        raise MinusThreeOutOfScope(f"contracting C with C.C = {s.csq} is out of scope", csq=s.csq)
    if s.pair.variant is not pairalg.Variant.ONE_SIDED:
        raise NotContractible(f"a (-1)-curve is a one-sided line, got {s.pair}", pair=s.pair.to_dict())
    k = piclattice.canonical_class(s.lattice)
    k_squared = piclattice.intersect(s.lattice, k, k)
    return ContractionResult(s.pair, s.pair.cap, k_squared, k_squared + 1, s.lattice.rank, s.lattice.rank - 1)


def _find_entry(s: MmpState, target) -> int:
    if isinstance(target, int):
        if not 0 <= target < len(s.history):
            raise NotContractible(f"no tracked blow-up {target}", target=target)
        return target
    for i, entry in enumerate(s.history):
        center = s.lattice.centers[entry.center]
        classes = [piclattice.exceptional_class(s.lattice, entry.center, j) for j in range(center.size)]
        if target in classes or (center.size == 2 and target == classes[0] + classes[1]):
            return i
    raise NotContractible(f"{target} is not a tracked exceptional class", target=str(target))


def apply_forward_step(s: MmpState, target: Union[DivClass, int, str]):
    """
    Contract a tracked exceptional class, or the curve itself with target 'C'

    Args:
        s: Current state
        target: Exceptional class, history index, or 'C'

    Returns:
        MmpState, ContractionResult (C.C = -1) or a report dict (C.C = -2)
    """
    if isinstance(target, str):
        if target != "C":
            raise NotContractible(f"unknown target {target!r}")
        return _contract_curve(s)

    i = _find_entry(s, target)
    entry = s.history[i]
    k = piclattice.canonical_class(s.lattice)
    for j in s.lattice.exceptional_indices(entry.center):
        e = DivClass(tuple(1 if x == j else 0 for x in range(s.lattice.rank)))
        if piclattice.intersect(s.lattice, e, e) != -1 or piclattice.intersect(s.lattice, e, k) >= 0:
            raise NotContractible(f"exceptional class {e} is not K-negative of square -1")

    if i == len(s.history) - 1:
        lattice, curve = piclattice.blow_down(s.lattice, entry.center, s.curve)
        return _checked(MmpState(lattice, curve, entry.pair_before, entry.csq_before, s.end,
                                 s.history[:-1], entry.sides_before))

    later = s.history[i + 1:]
    if any(e.step.side is not Side.ANY for e in later):
        raise NotContractible("contract the later side-tagged blow-ups first", target=i)
    steps = [e.step for j, e in enumerate(s.history) if j != i]
    try:
        return replay(s.end, steps)
    except RealPairsError as e:
        raise NotContractible(f"later steps do not apply once blow-up {i} is contracted: {e.message}",
                              target=i, blocking=e.code)


def _next_target(s: MmpState) -> int:
    """Conjugate pairs before real points, latest first, skipping ones a later side tag pins down"""
    order = sorted(range(len(s.history)),
                   key=lambda i: (s.lattice.centers[s.history[i].center].real, -i))
    for i in order:
        if all(e.step.side is Side.ANY for e in s.history[i + 1:]):
            return i
    return len(s.history) - 1


def trace_row(step: str, s: MmpState) -> dict:
    return {"step": step, "csq": s.csq, "pair": str(s.pair)}


def run_forward(s: MmpState):
    """
    Contract tracked exceptional classes until none are left

    Returns:
        tuple: (trace as a list of {step, csq, pair}, terminal state)
    """
    trace = [trace_row("start", s)]
    while s.history:
        i = _next_target(s)
        step = s.history[i].step
        contracted = apply_forward_step(s, i)
        assert contracted.csq >= s.csq, f"csq decreased from {s.csq} to {contracted.csq}"
        s = contracted
        trace.append(trace_row(f"contract {step}", s))
    logger.debug(f"forward run ended at {s.pair} with csq {s.csq}")
    return trace, s


def simulate(end: EndState, steps) -> list:
    """Trace of an end state followed by inverse steps, as emitted by the CLI"""
    state = end_state(end)
    trace = [trace_row(str(end), state)]
    for step in steps:
        state = apply_inverse_step(state, step)
        trace.append(trace_row(str(step), state))
    return trace
