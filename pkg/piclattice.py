"""
Intersection lattices of blown-up real rational surfaces

A lattice is a base surface plus an ordered list of blow-up centers. Each
real center contributes one exceptional class, each conjugate pair two
classes swapped by complex conjugation. Classes are exact integer or
rational coordinate vectors; products go through numpy object arrays so
ints and Fractions never turn into floats.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Optional

import numpy as np

import pairalg
from pairalg import ClosedSurface, Side
from utils import RealPairsError, logger


class DimensionMismatch(RealPairsError):
    """Class length does not match the lattice rank"""


class NonIntegralClass(RealPairsError):
    """Operation needs an integral class"""


class DomainError(RealPairsError):
    """Argument outside the range an operation is defined on"""


class BaseKind(Enum):
    P2 = "P2"
    QUADRIC = "Quadric"
    HIRZEBRUCH = "Hirzebruch"
    P1XP1 = "P1xP1"
    CONIC_BUNDLE = "ConicBundle"


@dataclass(frozen=True)
class SurfaceBase:
    """
    Minimal surface the blow-ups start from

    Bases and their generators:
        P2: H
        Quadric: plane section, square 2 (not unimodular; only the real
            Picard part is tracked)
        Hirzebruch(n): negative section E (E.E = -n), fiber F
        P1xP1: the two rulings
        ConicBundle(d): (K, F) with K.K = d, K.F = -2, F.F = 0
    """
    kind: BaseKind
    n: int = 0

    def __post_init__(self):
        if self.kind is BaseKind.HIRZEBRUCH and self.n < 0:
            raise DomainError(f"Hirzebruch index must be non-negative, got {self.n}", n=self.n)

    @property
    def rank(self) -> int:
        return 1 if self.kind in (BaseKind.P2, BaseKind.QUADRIC) else 2

    def gram(self) -> list:
        if self.kind is BaseKind.P2:
            return [[1]]
        if self.kind is BaseKind.QUADRIC:
            return [[2]]
        if self.kind is BaseKind.HIRZEBRUCH:
            return [[-self.n, 1], [1, 0]]
        if self.kind is BaseKind.P1XP1:
            return [[0, 1], [1, 0]]
        return [[self.n, -2], [-2, 0]]

    def canonical(self) -> list:
        if self.kind is BaseKind.P2:
            return [-3]
        if self.kind is BaseKind.QUADRIC:
            return [-2]
        if self.kind is BaseKind.HIRZEBRUCH:
            return [-2, -(self.n + 2)]
        if self.kind is BaseKind.P1XP1:
            return [-2, -2]
        return [1, 0]

    def real_form(self) -> ClosedSurface:
        if self.kind is BaseKind.P2:
            return pairalg.RP2
        if self.kind is BaseKind.QUADRIC:
            return pairalg.S2
        if self.kind is BaseKind.HIRZEBRUCH:
            return pairalg.T2 if self.n % 2 == 0 else pairalg.KLEIN
        if self.kind is BaseKind.P1XP1:
            return pairalg.T2
        raise DomainError("ConicBundle lattices carry no fixed real form")

    def __str__(self):
        if self.kind in (BaseKind.HIRZEBRUCH, BaseKind.CONIC_BUNDLE):
            return f"{self.kind.value}({self.n})"
        return self.kind.value


P2 = SurfaceBase(BaseKind.P2)
QUADRIC = SurfaceBase(BaseKind.QUADRIC)
P1XP1 = SurfaceBase(BaseKind.P1XP1)


def hirzebruch(n: int) -> SurfaceBase:
    return SurfaceBase(BaseKind.HIRZEBRUCH, n)


def conic_bundle(d: int) -> SurfaceBase:
    return SurfaceBase(BaseKind.CONIC_BUNDLE, d)


@dataclass(frozen=True)
class Center:
    """A real point or a conjugate pair of points, on or off the curve"""
    real: bool = True
    on_curve: bool = False
    side: Side = Side.ANY
    multiplicity: int = 1

    @property
    def size(self) -> int:
        return 1 if self.real else 2

    @property
    def curve_coefficient(self) -> int:
        return -self.multiplicity if self.on_curve else 0

    def to_dict(self) -> dict:
        return {"real": self.real, "on_curve": self.on_curve,
                "side": self.side.value, "multiplicity": self.multiplicity}

    @classmethod
    def from_dict(cls, data: dict) -> Center:
        return cls(bool(data["real"]), bool(data["on_curve"]), Side(data.get("side", "any")),
                   int(data.get("multiplicity", 1)))

    def __str__(self):
        star = "*" if self.on_curve else ""
        return f"{'R' if self.real else 'C'}{star}"


def real_center(on_curve: bool = False, side: Side = Side.ANY, multiplicity: int = 1) -> Center:
    return Center(True, on_curve, side, multiplicity)


def conj_pair(on_curve: bool = False, multiplicity: int = 1) -> Center:
    return Center(False, on_curve, Side.ANY, multiplicity)


def _exact(value):
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else value
    return int(value)


@dataclass(frozen=True)
class DivClass:
    """Coordinates in the lattice basis: base generators, then exceptionals in center order"""
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(_exact(Fraction(x)) for x in self.coords))

    def __len__(self):
        return len(self.coords)

    def __add__(self, other: DivClass) -> DivClass:
        if len(self) != len(other):
            raise DimensionMismatch(f"cannot add classes of length {len(self)} and {len(other)}")
        return DivClass(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: DivClass) -> DivClass:
        return self + other.scale(-1)

    def scale(self, factor) -> DivClass:
        return DivClass(tuple(Fraction(factor) * x for x in self.coords))

    @property
    def is_integral(self) -> bool:
        return all(isinstance(x, int) for x in self.coords)

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coords)

    def to_dict(self) -> dict:
        return {"coords": [x if isinstance(x, int) else str(x) for x in self.coords]}

    @classmethod
    def from_dict(cls, data: dict) -> DivClass:
        return cls(tuple(Fraction(x) for x in data["coords"]))

    def __str__(self):
        return "(" + ", ".join(str(x) for x in self.coords) + ")"


def exact_det(matrix) -> Fraction:
    """Determinant by Gaussian elimination over Fractions"""
    rows = [[Fraction(x) for x in row] for row in np.asarray(matrix, dtype=object)]
    n = len(rows)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det *= rows[col][col]
        for r in range(col + 1, n):
            factor = rows[r][col] / rows[col][col]
            if factor:
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return det


@dataclass(frozen=True)
class PicLattice:
    base: SurfaceBase
    centers: tuple = field(default_factory=tuple)

    @property
    def rank(self) -> int:
        return self.base.rank + sum(center.size for center in self.centers)

    @property
    def exceptional_count(self) -> int:
        return self.rank - self.base.rank

    def exceptional_indices(self, k: int) -> list:
        """Coordinate positions of the classes created by center k"""
        start = self.base.rank + sum(center.size for center in self.centers[:k])
        return list(range(start, start + self.centers[k].size))

    def gram(self) -> np.ndarray:
        matrix = np.zeros((self.rank, self.rank), dtype=object)
        b = self.base.rank
        matrix[:b, :b] = np.array(self.base.gram(), dtype=object)
        for i in range(b, self.rank):
            matrix[i, i] = -1
        return matrix

    def conjugation(self) -> np.ndarray:
        """Permutation matrix of complex conjugation on the basis"""
        matrix = np.zeros((self.rank, self.rank), dtype=object)
        for i in range(self.base.rank):
            matrix[i, i] = 1
        for k, center in enumerate(self.centers):
            indices = self.exceptional_indices(k)
            if center.real:
                matrix[indices[0], indices[0]] = 1
            else:
                i, j = indices
                matrix[i, j] = matrix[j, i] = 1
        return matrix

    def is_unimodular(self) -> bool:
        return abs(exact_det(self.gram())) == 1

    def to_dict(self) -> dict:
        return {"base": str(self.base), "centers": [center.to_dict() for center in self.centers]}

    @classmethod
    def from_dict(cls, data: dict) -> PicLattice:
        return cls(parse_base(data["base"]), tuple(Center.from_dict(c) for c in data["centers"]))

    def __str__(self):
        if not self.centers:
            return str(self.base)
        return f"{self.base} + " + ",".join(str(center) for center in self.centers)


def _vector(L: PicLattice, c: DivClass) -> np.ndarray:
    if len(c) != L.rank:
        raise DimensionMismatch(f"class of length {len(c)} on lattice of rank {L.rank}",
                                length=len(c), rank=L.rank)
    return np.array(c.coords, dtype=object)


def intersect(L: PicLattice, a: DivClass, b: DivClass):
    """
    Intersection number of two classes

    Returns:
        int or Fraction: a.b, exact
    """
    return _exact(Fraction(_vector(L, a) @ L.gram() @ _vector(L, b)))


def canonical_class(L: PicLattice) -> DivClass:
    return DivClass(tuple(L.base.canonical()) + (1,) * L.exceptional_count)


def is_characteristic(L: PicLattice, d: DivClass) -> bool:
    """D.D and D.K have the same parity"""
    if not d.is_integral:
        raise NonIntegralClass(f"class {d} is not integral")
    return (intersect(L, d, d) + intersect(L, d, canonical_class(L))) % 2 == 0


def conjugation_is_isometry(L: PicLattice) -> bool:
    sigma = L.conjugation()
    return bool((sigma.T @ L.gram() @ sigma == L.gram()).all())


def arithmetic_genus(L: PicLattice, c: DivClass) -> int:
    """
    Adjunction: 2 p_a - 2 = C.(C + K)

    Returns:
        int: p_a(C)
    """
    if not c.is_integral:
        raise NonIntegralClass(f"class {c} is not integral", coords=c.to_dict()["coords"])
    pairing = intersect(L, c, c + canonical_class(L))
    if pairing % 2:
        raise NonIntegralClass(f"C.(C+K) = {pairing} is odd; canonical class is not characteristic")
    return pairing // 2 + 1


def blow_up(L: PicLattice, center: Center, c: DivClass):
    """
    Blow up a real point or a conjugate pair

    Args:
        L: Lattice
        center: Center to blow up
        c: Curve class on L

    Returns:
        tuple: (PicLattice, DivClass) with the strict transform of c
    """
    _vector(L, c)
    lattice = PicLattice(L.base, L.centers + (center,))
    curve = DivClass(c.coords + (center.curve_coefficient,) * center.size)
    logger.debug(f"blow-up {center}: rank {L.rank} -> {lattice.rank}")
    return lattice, curve


def blow_down(L: PicLattice, k: int, c: DivClass):
    """
    Contract the exceptional classes of center k

    The image of the curve is c plus its multiplicity times the exceptional
    class, which in this basis drops the exceptional coordinates.

    Returns:
        tuple: (PicLattice, DivClass)
    """
    _vector(L, c)
    if not 0 <= k < len(L.centers):
        raise DomainError(f"no center {k} on {L}", center=k)
    indices = set(L.exceptional_indices(k))
    lattice = PicLattice(L.base, L.centers[:k] + L.centers[k + 1:])
    curve = DivClass(tuple(x for i, x in enumerate(c.coords) if i not in indices))
    return lattice, curve


def exceptional_class(L: PicLattice, k: int, which: int = 0) -> DivClass:
    coords = [0] * L.rank
    coords[L.exceptional_indices(k)[which]] = 1
    return DivClass(tuple(coords))


def exceptional_sum(L: PicLattice) -> DivClass:
    return DivClass((0,) * L.base.rank + (1,) * L.exceptional_count)


def real_topology(L: PicLattice) -> ClosedSurface:
    """Base real form with one crosscap per real blow-up"""
    surface = L.base.real_form()
    real_count = sum(1 for center in L.centers if center.real)
    if real_count:
        surface = pairalg.surface_sum(surface, pairalg.nonorientable_surface(real_count))
    return surface


# ----------------------------------------------------------------------
# Worked examples
# ----------------------------------------------------------------------

def coble_example(d: int, real_nodes: Optional[int] = None) -> dict:
    """
    Plane rational curve of degree d with all its nodes blown up

    Args:
        d: Degree, at least 3
        real_nodes: How many of the (d-1)(d-2)/2 nodes are real; the rest
            come in conjugate pairs. Defaults to all real.

    Returns:
        dict: csq, k_coeff, verdict, p_a and the checked Q-divisor identity
    """
    if d < 3:
        raise DomainError(f"degree must be at least 3, got {d}", d=d)
    nodes = comb(d - 1, 2)
    real_nodes = nodes if real_nodes is None else real_nodes
    if not 0 <= real_nodes <= nodes or (nodes - real_nodes) % 2:
        raise DomainError(f"{real_nodes} real nodes out of {nodes} leaves no conjugate pairing",
                          d=d, real_nodes=real_nodes)

    lattice = PicLattice(P2)
    curve = DivClass((d,))
    for _ in range(real_nodes):
        lattice, curve = blow_up(lattice, real_center(on_curve=True, multiplicity=2), curve)
    for _ in range((nodes - real_nodes) // 2):
        lattice, curve = blow_up(lattice, conj_pair(on_curve=True, multiplicity=2), curve)

    csq = intersect(lattice, curve, curve)
    assert csq == d * d - 4 * nodes
    k_coeff = 1 - Fraction(6, d)
    identity = canonical_class(lattice) + curve.scale(Fraction(3, d)) - exceptional_sum(lattice).scale(k_coeff)

    if k_coeff < 0:
        verdict = "AntiAmpleish"
    elif k_coeff == 0:
        verdict = "Trivial"
    else:
        verdict = "Ample"
    return {
        "d": d,
        "nodes": nodes,
        "real_nodes": real_nodes,
        "csq": csq,
        "k_coeff": _exact(k_coeff),
        "verdict": verdict,
        "identity_holds": identity.is_zero(),
        "p_a": arithmetic_genus(lattice, curve),
    }


def tower_example(r: int) -> dict:
    """
    r infinitely near blow-ups over a point of a line in P2

    Returns:
        dict: nodes of the cycle of curves with classes and self-intersections
    """
    if r < 1:
        raise DomainError(f"r must be at least 1, got {r}", r=r)
    lattice = PicLattice(P2)
    curve = DivClass((1,))
    for _ in range(r):
        lattice, curve = blow_up(lattice, real_center(on_curve=True), curve)

    def e(i):
        return exceptional_class(lattice, i)

    h = DivClass((1,) + (0,) * r)
    nodes = [(f"E{i + 1}-E{i + 2}", e(i) - e(i + 1)) for i in range(r - 1)]
    nodes.append((f"E{r}", e(r - 1)))
    nodes.append(("L'", curve))
    nodes.append(("H", h))
    nodes.append(("H-E1", h - e(0)))

    count = len(nodes)
    is_cycle = all(
        intersect(lattice, nodes[i][1], nodes[j][1]) == (1 if (j - i) % count in (1, count - 1) else 0)
        for i in range(count) for j in range(i + 1, count)
    )
    squares = [intersect(lattice, cls, cls) for _, cls in nodes]
    minus_one = [name for (name, _), sq in zip(nodes, squares) if sq == -1]
    if r >= 3 and minus_one != [f"E{r}"]:
        raise DomainError(f"expected E{r} as the only (-1)-curve, found {minus_one}", r=r)
    return {
        "r": r,
        "nodes": [{"name": name, "class": cls.to_dict()["coords"], "self_intersection": sq}
                  for (name, cls), sq in zip(nodes, squares)],
        "self_intersections": squares,
        "is_cycle": is_cycle,
        "minus_one_curves": minus_one,
    }


def p1xp1_parity_check(a1: int, a2: int) -> dict:
    """A real curve of bidegree (a1, a2) with a1, a2 even and p_a odd must have a real singular point"""
    if a1 < 0 or a2 < 0:
        raise DomainError("bidegrees must be non-negative", a1=a1, a2=a2)
    lattice = PicLattice(P1XP1)
    p_a = arithmetic_genus(lattice, DivClass((a1, a2)))
    assert p_a == (a1 - 1) * (a2 - 1)
    return {
        "a1": a1,
        "a2": a2,
        "p_a": p_a,
        "real_singularity_forced": a1 % 2 == 0 and a2 % 2 == 0 and p_a % 2 == 1,
    }


def dp2_check(a: int) -> dict:
    """C = -aK on P2 blown up in 7 real points (degree 2 del Pezzo)"""
    if a < 1:
        raise DomainError(f"a must be at least 1, got {a}", a=a)
    lattice = PicLattice(P2, (real_center(),) * 7)
    k = canonical_class(lattice)
    curve = k.scale(-a)
    self_pairing = intersect(lattice, curve, curve + k)
    assert self_pairing == 2 * a * (a - 1) and self_pairing % 4 == 0
    p_a = arithmetic_genus(lattice, curve)
    return {"self_pairing": self_pairing, "p_a": p_a, "forced": p_a % 2 == 1}


def minus_two_candidates() -> list:
    """Integer solutions of a(ad - 4b) = -2 with a <= 0, 1 <= d <= 9 and |4b| <= |ad| + 2"""
    found = []
    for a in range(-9, 1):
        for d in range(1, 10):
            limit = (abs(a * d) + 2) // 4
            for b in range(-limit, limit + 1):
                if a * (a * d - 4 * b) == -2:
                    found.append((a, b, d))
    return found


def minus_two_solutions(reducibility_filter: bool = True) -> list:
    """
    Curves C = aK + bF of square -2 on a conic bundle with K.K = d

    With the filter on, solutions where C.(C+K) = -4 are dropped: such a
    curve is reducible.

    Returns:
        list: dicts {a, b, d}
    """
    solutions = []
    for a, b, d in minus_two_candidates():
        lattice = PicLattice(conic_bundle(d))
        curve = DivClass((a, b))
        assert intersect(lattice, curve, curve) == -2
        if reducibility_filter and intersect(lattice, curve, curve + canonical_class(lattice)) != -2:
            logger.debug(f"dropping reducible (a, b, d) = {(a, b, d)}")
            continue
        solutions.append({"a": a, "b": b, "d": d})
    return solutions


def nodal_cubic_example() -> dict:
    """
    (x^2 + y^2) z = x^3: a pseudo-line branch plus an isolated real node

    The node is blown up as a real center of multiplicity 2 lying off the
    real branch, so the pair picks up one crosscap away from the curve.
    """
    lattice, curve = blow_up(PicLattice(P2), real_center(on_curve=True, multiplicity=2), DivClass((3,)))
    pair = pairalg.sum_surface(pairalg.RP2_LINE, pairalg.RP2)
    locus = real_topology(lattice)
    assert pairalg.underlying_surface(pair) == locus
    return {
        "csq": intersect(lattice, curve, curve),
        "p_a": arithmetic_genus(lattice, curve),
        "pair": pair,
        "real_locus": locus,
    }


# ----------------------------------------------------------------------
# Text forms
# ----------------------------------------------------------------------

_BASE = re.compile(r"^(P2|Quadric|P1xP1|Hirzebruch|F|ConicBundle)(?:\((-?\d+)\)|(\d+))?$")


def parse_base(text: str) -> SurfaceBase:
    """P2, Quadric, P1xP1, Hirzebruch(n) (or Fn), ConicBundle(d)"""
    match = _BASE.match(text.strip())
    if not match:
        raise DomainError(f"unknown base {text!r}", base=text)
    name = match.group(1)
    number = match.group(2) or match.group(3)
    if name in ("Hirzebruch", "F", "ConicBundle"):
        if number is None:
            raise DomainError(f"base {name} needs an index", base=text)
        kind = BaseKind.CONIC_BUNDLE if name == "ConicBundle" else BaseKind.HIRZEBRUCH
        return SurfaceBase(kind, int(number))
    return SurfaceBase(BaseKind(name))


def parse_blowups(text: str) -> tuple:
    """Comma separated R, R*, C, C* (star: on the curve)"""
    centers = []
    for token in filter(None, (t.strip() for t in text.split(","))):
        if token not in ("R", "R*", "C", "C*"):
            raise DomainError(f"unknown center {token!r}", token=token)
        centers.append(Center(real=token[0] == "R", on_curve=token.endswith("*")))
    return tuple(centers)


def parse_class(L: PicLattice, text: str) -> DivClass:
    """
    "d:m1,m2,..." means d times the base generators minus sum m_i E_i

    On rank-2 bases the part before the colon lists both coordinates, e.g.
    "2,2" or "1,3:1".
    """
    head, _, tail = text.partition(":")
    base_coords = [int(x) for x in head.split(",") if x.strip()]
    if len(base_coords) != L.base.rank:
        raise DimensionMismatch(f"base part {head!r} needs {L.base.rank} entries", rank=L.base.rank)
    multiplicities = [int(x) for x in tail.split(",") if x.strip()]
    if len(multiplicities) > L.exceptional_count:
        raise DimensionMismatch(f"{len(multiplicities)} multiplicities on {L.exceptional_count} exceptionals")
    multiplicities += [0] * (L.exceptional_count - len(multiplicities))
    return DivClass(tuple(base_coords) + tuple(-m for m in multiplicities))
