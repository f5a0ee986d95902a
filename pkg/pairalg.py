"""
Topological pairs (closed surface, simple closed curve)

Canonical forms, connected sums, the pair-sum with (RP2, line) and the
classification of pairs that live on real rational surfaces.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

from utils import RealPairsError, logger


class ParseError(RealPairsError):
    """Malformed pair word"""


class SideRequired(RealPairsError):
    """A sum on a separating pair needs a side"""


class SideForbidden(RealPairsError):
    """A side tag was given where the curve does not separate"""


class NotComessatti(RealPairsError):
    """Underlying surface cannot be the real locus of a rational surface"""


class TableMismatch(RealPairsError):
    """A diffeomorphism table line does not hold"""


class OutOfRange(RealPairsError):
    """Numeric argument outside the range an operation accepts"""


class Side(Enum):
    LEFT = "L"
    RIGHT = "R"
    ANY = "any"


class Variant(Enum):
    SEPARATING = "Separating"
    ONE_SIDED = "OneSided"
    NON_SEP_TWO_SIDED = "NonSepTwoSided"


@dataclass(frozen=True)
class ClosedSurface:
    """Normal form of a closed connected surface: genus g or k crosscaps"""
    orientable: bool
    genus: int = 0
    crosscaps: int = 0

    def __post_init__(self):
        if self.orientable:
            if self.genus < 0 or self.crosscaps != 0:
                raise ValueError(f"bad orientable surface: genus={self.genus} crosscaps={self.crosscaps}")
        elif self.crosscaps < 1 or self.genus != 0:
            raise ValueError(f"bad non-orientable surface: genus={self.genus} crosscaps={self.crosscaps}")

    @property
    def euler(self) -> int:
        return 2 - 2 * self.genus if self.orientable else 2 - self.crosscaps

    @property
    def complexity(self) -> int:
        """Crosscaps plus twice the genus, i.e. 2 - chi"""
        return 2 - self.euler

    @property
    def is_sphere(self) -> bool:
        return self.orientable and self.genus == 0

    def sort_key(self):
        return (0 if self.orientable else 1, -self.euler)

    def to_dict(self) -> dict:
        if self.orientable:
            return {"orientable": True, "genus": self.genus}
        return {"orientable": False, "crosscaps": self.crosscaps}

    @classmethod
    def from_dict(cls, data: dict) -> ClosedSurface:
        if data["orientable"]:
            return orientable_surface(int(data["genus"]))
        return nonorientable_surface(int(data["crosscaps"]))

    def __str__(self):
        if self.orientable:
            return {0: "S2", 1: "T2"}.get(self.genus, f"Or({self.genus})")
        return {1: "RP2", 2: "K"}.get(self.crosscaps, f"NonOr({self.crosscaps})")


def orientable_surface(genus: int) -> ClosedSurface:
    return ClosedSurface(True, genus=genus)


def nonorientable_surface(crosscaps: int) -> ClosedSurface:
    return ClosedSurface(False, crosscaps=crosscaps)


S2 = orientable_surface(0)
T2 = orientable_surface(1)
RP2 = nonorientable_surface(1)
KLEIN = nonorientable_surface(2)

_SURFACE = re.compile(r"^(?:(S2|T2|RP2|K)|Or\((\d+)\)|NonOr\((\d+)\))$")


def parse_surface(text: str) -> ClosedSurface:
    """S2, T2, RP2, K, Or(g) or NonOr(k)"""
    match = _SURFACE.match(text.strip())
    if not match:
        raise ParseError(f"unknown surface {text!r}", surface=text)
    named, genus, crosscaps = match.groups()
    if named:
        return {"S2": S2, "T2": T2, "RP2": RP2, "K": KLEIN}[named]
    try:
        if genus is not None:
            return orientable_surface(int(genus))
        return nonorientable_surface(int(crosscaps))
    except ValueError as e:
        raise ParseError(str(e), surface=text)


def surface_sum(a: ClosedSurface, b: ClosedSurface) -> ClosedSurface:
    """
    Connected sum of two closed surfaces

    Returns:
        ClosedSurface: a # b in normal form (chi(a) + chi(b) - 2)
    """
    if a.orientable and b.orientable:
        return orientable_surface(a.genus + b.genus)
    return nonorientable_surface(a.complexity + b.complexity)


def surface_power(x: ClosedSurface, n: int) -> ClosedSurface:
    total = S2
    for _ in range(n):
        total = surface_sum(total, x)
    return total


@dataclass(frozen=True)
class TopPair:
    """
    Canonical form of a pair (S, L)

    Separating pairs keep their two capped sides sorted by ClosedSurface.sort_key.
    Use the constructors separating(), one_sided() and non_separating().
    """
    variant: Variant
    sides: tuple = ()
    cap: Optional[ClosedSurface] = None
    total_orientable: bool = False

    @property
    def is_two_sided(self) -> bool:
        return self.variant is not Variant.ONE_SIDED

    def to_dict(self) -> dict:
        data = {"variant": self.variant.value}
        if self.variant is Variant.SEPARATING:
            data["sides"] = [side.to_dict() for side in self.sides]
        else:
            data["cap"] = self.cap.to_dict()
        if self.variant is Variant.NON_SEP_TWO_SIDED:
            data["total_orientable"] = self.total_orientable
        return data

    @classmethod
    def from_dict(cls, data: dict) -> TopPair:
        variant = Variant(data["variant"])
        if variant is Variant.SEPARATING:
            a, b = (ClosedSurface.from_dict(side) for side in data["sides"])
            return separating(a, b)
        cap = ClosedSurface.from_dict(data["cap"])
        if variant is Variant.ONE_SIDED:
            return one_sided(cap)
        return non_separating(cap, bool(data["total_orientable"]))

    def __str__(self):
        name = PAIR_NAMES.get(self)
        if name:
            return name
        if self.variant is Variant.SEPARATING:
            return f"Separating{{{self.sides[0]}, {self.sides[1]}}}"
        if self.variant is Variant.ONE_SIDED:
            return f"OneSided{{{self.cap}}}"
        return f"NonSepTwoSided{{{self.cap}, {str(self.total_orientable).lower()}}}"


def separating(a: ClosedSurface, b: ClosedSurface) -> TopPair:
    return TopPair(Variant.SEPARATING, sides=tuple(sorted((a, b), key=ClosedSurface.sort_key)))


def one_sided(cap: ClosedSurface) -> TopPair:
    return TopPair(Variant.ONE_SIDED, cap=cap)


def non_separating(cap: ClosedSurface, total_orientable: bool) -> TopPair:
    if total_orientable and not cap.orientable:
        raise ValueError("an orientable ambient surface cannot have a non-orientable cut surface")
    return TopPair(Variant.NON_SEP_TWO_SIDED, cap=cap, total_orientable=total_orientable)


S2_LINE = separating(S2, S2)
T2_NULL = separating(T2, S2)
T2_LINE = non_separating(S2, True)
K_FIBER = non_separating(S2, False)
RP2_LINE = one_sided(S2)
K_LINE = one_sided(RP2)

PAIR_NAMES = {
    S2_LINE: "(S2,l)",
    T2_NULL: "(T2,null)",
    T2_LINE: "(T2,l)",
    K_FIBER: "(K,f)",
    RP2_LINE: "(RP2,l)",
    K_LINE: "(K,l)",
}

# Word tokens for the named pairs; separating bases also carry their (left, right) sides
BASE_PAIRS = {
    "S2L": S2_LINE,
    "T2L": T2_LINE,
    "KL": K_LINE,
    "KF": K_FIBER,
    "RP2L": RP2_LINE,
    "T2NULL": T2_NULL,
}
BASE_SIDES = {
    "S2L": (S2, S2),
    "T2NULL": (T2, S2),
}
SUMMAND_TOKENS = {"RP2": RP2, "T2": T2, "S2": S2}


def euler_char(p: TopPair) -> int:
    if p.variant is Variant.SEPARATING:
        a, b = p.sides
        return a.euler + b.euler - 2
    if p.variant is Variant.ONE_SIDED:
        return p.cap.euler - 1
    return p.cap.euler - 2


def underlying_surface(p: TopPair) -> ClosedSurface:
    if p.variant is Variant.SEPARATING:
        return surface_sum(*p.sides)
    if p.variant is Variant.ONE_SIDED:
        return surface_sum(RP2, p.cap)
    return surface_sum(p.cap, T2 if p.total_orientable else KLEIN)


def complexity(p: TopPair) -> int:
    """Crosscaps plus twice the genus of the underlying surface"""
    return 2 - euler_char(p)


def sum_surface(p: TopPair, x: ClosedSurface, side: Side = Side.ANY) -> TopPair:
    """
    Connected sum with a closed surface away from the curve

    On a separating pair Right adds to the side that sorts first and Left to
    the side that sorts second.

    Args:
        p: The pair
        x: Surface to glue in
        side: Side of a separating curve receiving x

    Returns:
        TopPair: p # x
    """
    if p.variant is Variant.SEPARATING:
        if side is Side.ANY:
            if x.is_sphere:
                return p
            raise SideRequired(f"summing {x} onto separating pair {p} needs a side", pair=p.to_dict())
        first, second = p.sides
        if side is Side.RIGHT:
            first = surface_sum(first, x)
        else:
            second = surface_sum(second, x)
        return separating(first, second)
    if side is not Side.ANY:
        raise SideForbidden(f"side {side.value} given for non-separating pair {p}", pair=p.to_dict())
    if p.variant is Variant.ONE_SIDED:
        return one_sided(surface_sum(p.cap, x))
    return non_separating(surface_sum(p.cap, x), p.total_orientable and x.orientable)


def sum_rp2_line(p: TopPair) -> TopPair:
    """
    Pair-sum with (RP2, l): the two curves join into one simple closed curve

    Returns:
        TopPair: p # (RP2, l), with chi lowered by one
    """
    if p.variant is Variant.SEPARATING:
        return one_sided(surface_sum(*p.sides))
    if p.variant is Variant.ONE_SIDED:
        return non_separating(p.cap, False)
    if p.total_orientable:
        return one_sided(surface_sum(p.cap, KLEIN))
    return one_sided(surface_sum(p.cap, T2))


def comessatti_realizable(p: TopPair) -> bool:
    """True iff the underlying surface is S2, T2 or a sum of crosscaps"""
    surface = underlying_surface(p)
    return not surface.orientable or surface.genus <= 1


# ----------------------------------------------------------------------
# Pair words
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class PairWord:
    """Base pair, number of (RP2,l) pair-sums, then surface summands with side tags"""
    base: str
    rp2l_count: int = 0
    summands: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.base not in BASE_PAIRS:
            raise ParseError(f"unknown base {self.base!r}", base=self.base)
        if self.rp2l_count < 0:
            raise ParseError("negative pair-sum count", rp2l_count=self.rp2l_count)
        sided = any(side is not Side.ANY for _, side in self.summands)
        if sided and (self.base not in BASE_SIDES or self.rp2l_count > 0):
            raise SideForbidden(
                f"side tags need a separating base without pair-sums: {self}",
                word=str(self),
            )

    @property
    def summand_complexity(self) -> int:
        return self.rp2l_count + sum(x.complexity for x, _ in self.summands)

    def __str__(self):
        return format_word(self)


_TERM = re.compile(r"^(?:(\d+)\s*\*\s*)?(?:([LR]):)?\s*([A-Za-z0-9]+(?:\(\d+\))?)$")


def parse_word(text: str) -> PairWord:
    """
    Parse BASE ( '+' [INT '*'] [L:|R:]TOKEN )*

    Args:
        text: Word such as "S2L + 2*RP2L + L:RP2"

    Returns:
        PairWord: Parsed word
    """
    parts = [part.strip() for part in text.split("+")]
    if not parts or not parts[0]:
        raise ParseError(f"empty pair word: {text!r}", word=text)
    base = parts[0]
    if base not in BASE_PAIRS:
        raise ParseError(f"unknown base {base!r}", word=text)

    rp2l_count = 0
    summands = []
    for part in parts[1:]:
        match = _TERM.match(part)
        if not match:
            raise ParseError(f"cannot read term {part!r}", word=text)
        count = int(match.group(1)) if match.group(1) is not None else 1
        tag, token = match.group(2), match.group(3)
        if token == "RP2L":
            if tag:
                raise ParseError("RP2L terms take no side tag", word=text)
            rp2l_count += count
            continue
        if token in SUMMAND_TOKENS:
            surface = SUMMAND_TOKENS[token]
        else:
            try:
                surface = parse_surface(token)
            except ParseError:
                raise ParseError(f"unknown token {token!r}", word=text)
        side = Side(tag) if tag else Side.ANY
        summands.extend([(surface, side)] * count)
    return PairWord(base, rp2l_count, tuple(summands))


def format_word(w: PairWord) -> str:
    terms = [w.base]
    if w.rp2l_count:
        terms.append(f"{w.rp2l_count}*RP2L")
    counts = {}
    for x, side in w.summands:
        counts[(str(x), side)] = counts.get((str(x), side), 0) + 1
    for (token, side), count in counts.items():
        prefix = "" if side is Side.ANY else f"{side.value}:"
        terms.append(f"{count}*{prefix}{token}")
    return " + ".join(terms)


def normalize(w) -> TopPair:
    """
    Evaluate a pair word to its canonical pair

    Side tags refer to the base's own left and right sides; canonical sorting
    happens once at the end so the result does not depend on summand order.

    Args:
        w: PairWord or its text form

    Returns:
        TopPair: Canonical pair
    """
    if isinstance(w, str):
        w = parse_word(w)

    if w.base in BASE_SIDES and w.rp2l_count == 0:
        left, right = BASE_SIDES[w.base]
        for x, side in w.summands:
            if side is Side.LEFT:
                left = surface_sum(left, x)
            elif side is Side.RIGHT:
                right = surface_sum(right, x)
            elif not x.is_sphere:
                raise SideRequired(f"summand {x} of {w} needs a side", word=str(w))
        return separating(left, right)

    pair = BASE_PAIRS[w.base]
    for _ in range(w.rp2l_count):
        pair = sum_rp2_line(pair)
    for x, side in w.summands:
        pair = sum_surface(pair, x, side)
    return pair


# ----------------------------------------------------------------------
# Case split for pairs on rational surfaces
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class CaseLabel:
    group: str
    template: str
    params: tuple = ()

    def to_dict(self) -> dict:
        return {"group": self.group, "template": self.template, "params": dict(self.params)}

    @classmethod
    def from_dict(cls, data: dict) -> CaseLabel:
        return cls(data["group"], data["template"], tuple(sorted(data["params"].items())))


GROUP_ORIENTABLE = "S orientable"
GROUP_ONE_SIDED = "S non-orientable along L"
GROUP_TWO_SIDED = "S non-orientable, L two-sided non-separating"
GROUP_SEPARATING = "S non-orientable, L separating"


def _crosscaps_or_zero(x: ClosedSurface) -> int:
    if x.orientable:
        return 0
    return x.crosscaps


def classify_case(p: TopPair) -> CaseLabel:
    """
    Place a pair in the case split of pairs on real rational surfaces

    Returns:
        CaseLabel: group, template and parameters
    """
    if not comessatti_realizable(p):
        raise NotComessatti(
            f"underlying surface {underlying_surface(p)} of {p} is not S2, T2 or a sum of crosscaps",
            pair=p.to_dict(),
        )
    if underlying_surface(p).orientable:
        if p == S2_LINE:
            return CaseLabel(GROUP_ORIENTABLE, "(S2,l)")
        if p == T2_LINE:
            return CaseLabel(GROUP_ORIENTABLE, "(T2,l)")
        return CaseLabel(GROUP_ORIENTABLE, "(T2,null)")

    if p.variant is Variant.ONE_SIDED:
        if p.cap.orientable and p.cap.genus > 0:
            return CaseLabel(GROUP_ONE_SIDED, "(RP2,l)#gT2", (("g", p.cap.genus),))
        return CaseLabel(GROUP_ONE_SIDED, "(RP2,l)#rRP2", (("r", _crosscaps_or_zero(p.cap)),))

    if p.variant is Variant.NON_SEP_TWO_SIDED:
        if p.cap.orientable and p.cap.genus > 0:
            return CaseLabel(GROUP_TWO_SIDED, "(K,f)#gT2", (("g", p.cap.genus),))
        return CaseLabel(GROUP_TWO_SIDED, "(K,f)#rRP2", (("r", _crosscaps_or_zero(p.cap)),))

    first, second = p.sides
    if first.orientable and first.genus > 0:
        return CaseLabel(GROUP_SEPARATING, "r1RP2#(S2,l)#gT2",
                         (("g", first.genus), ("r1", second.crosscaps)))
    return CaseLabel(GROUP_SEPARATING, "r1RP2#(S2,l)#r2RP2",
                     (("r1", _crosscaps_or_zero(second)), ("r2", _crosscaps_or_zero(first))))


# ----------------------------------------------------------------------
# Diffeomorphism tables
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class TableLine:
    label: str
    lhs: Callable[[int], str]
    rhs: Callable[[int], str]
    r_min: int = 0
    substitute: Optional[Callable[[int], str]] = None  # used when the printed line is disputed


def _fixed(word: str) -> Callable[[int], str]:
    return lambda r: word


ELEMENTARY_LINES = [
    TableLine("(RP2,l)#RP2 ~ (K,l)", _fixed("RP2L + RP2"), _fixed("KL")),
    TableLine("(T2,l)#RP2 ~ (K,l)#RP2", _fixed("T2L + RP2"), _fixed("KL + RP2"),
              substitute=_fixed("KF + RP2")),
    TableLine("(T2,l)#(RP2,l) ~ (K,l)#RP2", _fixed("T2L + RP2L"), _fixed("KL + RP2")),
    TableLine("(K,l)#(RP2,l) ~ (T2,l)#RP2", _fixed("KL + RP2L"), _fixed("T2L + RP2")),
    TableLine("(S2,l)#(RP2,l) ~ (RP2,l)", _fixed("S2L + RP2L"), _fixed("RP2L")),
    TableLine("(RP2,l)#(RP2,l) ~ (K,f)", _fixed("RP2L + RP2L"), _fixed("KF")),
    TableLine("(K,f)#(RP2,l) ~ (RP2,l)#T2", _fixed("KF + RP2L"), _fixed("RP2L + T2")),
]

ITERATED_LINES = [
    TableLine("(T2,l)#2r(RP2,l) ~ (T2,l)#2rRP2",
              lambda r: f"T2L + {2 * r}*RP2L", lambda r: f"T2L + {2 * r}*RP2"),
    TableLine("(T2,l)#(2r+1)(RP2,l) ~ (K,l)#(2r+1)RP2",
              lambda r: f"T2L + {2 * r + 1}*RP2L", lambda r: f"KL + {2 * r + 1}*RP2"),
    TableLine("(K,l)#2r(RP2,l) ~ (K,l)#2rRP2",
              lambda r: f"KL + {2 * r}*RP2L", lambda r: f"KL + {2 * r}*RP2"),
    TableLine("(K,l)#(2r+1)(RP2,l) ~ (T2,l)#(2r+1)RP2",
              lambda r: f"KL + {2 * r + 1}*RP2L", lambda r: f"T2L + {2 * r + 1}*RP2"),
    TableLine("(S2,l)#2r(RP2,l) ~ (K,f)#(r-1)T2",
              lambda r: f"S2L + {2 * r}*RP2L", lambda r: f"KF + {r - 1}*T2", r_min=1),
    TableLine("(S2,l)#(2r+1)(RP2,l) ~ (RP2,l)#rT2",
              lambda r: f"S2L + {2 * r + 1}*RP2L", lambda r: f"RP2L + {r}*T2"),
    TableLine("(RP2,l)#2r(RP2,l) ~ (RP2,l)#rT2",
              lambda r: f"RP2L + {2 * r}*RP2L", lambda r: f"RP2L + {r}*T2"),
    TableLine("(RP2,l)#(2r+1)(RP2,l) ~ (K,f)#rT2",
              lambda r: f"RP2L + {2 * r + 1}*RP2L", lambda r: f"KF + {r}*T2"),
    TableLine("(K,f)#2r(RP2,l) ~ (K,f)#rT2",
              lambda r: f"KF + {2 * r}*RP2L", lambda r: f"KF + {r}*T2"),
    TableLine("(K,f)#(2r+1)(RP2,l) ~ (RP2,l)#(r+1)T2",
              lambda r: f"KF + {2 * r + 1}*RP2L", lambda r: f"RP2L + {r + 1}*T2"),
]


def check_table_lines(evaluate: Callable[[str], TopPair], r_max: int, source: str) -> dict:
    """
    Evaluate both tables with a word evaluator

    Disputed lines are evaluated and reported, never asserted.

    Args:
        evaluate: Maps a pair word to its canonical pair
        r_max: Largest r for the iterated lines
        source: Name of the evaluator for the report

    Returns:
        dict: Report with checked lines and discrepancy records
    """
    if r_max < 0:
        raise OutOfRange(f"r_max must be non-negative, got {r_max}", r_max=r_max)
    report = {"source": source, "r_max": r_max, "elementary": [], "iterated": [], "discrepancies": []}

    for line in ELEMENTARY_LINES:
        lhs, rhs = evaluate(line.lhs(0)), evaluate(line.rhs(0))
        if line.substitute is not None:
            substitute = evaluate(line.substitute(0))
            report["discrepancies"].append({
                "line": line.label,
                "lhs": str(lhs),
                "rhs": str(rhs),
                "lhs_two_sided": lhs.is_two_sided,
                "rhs_two_sided": rhs.is_two_sided,
                "holds": lhs == rhs,
                "substitute_rhs": line.substitute(0),
                "substitute_holds": lhs == substitute,
            })
            continue
        if lhs != rhs:
            raise TableMismatch(f"{source}: elementary line {line.label} fails: {lhs} vs {rhs}",
                                line=line.label, source=source)
        report["elementary"].append({"line": line.label, "pair": str(lhs)})

    for line in ITERATED_LINES:
        for r in range(line.r_min, r_max + 1):
            lhs, rhs = evaluate(line.lhs(r)), evaluate(line.rhs(r))
            if lhs != rhs:
                raise TableMismatch(f"{source}: line {line.label} fails at r={r}: {lhs} vs {rhs}",
                                    line=line.label, r=r, source=source)
            report["iterated"].append({"line": line.label, "r": r, "pair": str(lhs)})

    logger.info(f"{source}: {len(report['elementary'])} elementary and "
                f"{len(report['iterated'])} iterated checks passed, "
                f"{len(report['discrepancies'])} discrepancy recorded")
    return report


def verify_diffeo_table(r_max: int) -> dict:
    """Check both diffeomorphism tables through normalize"""
    return check_table_lines(normalize, r_max, "pairalg")
