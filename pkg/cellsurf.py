"""
Cell complex oracle for surface and curve pairs

Surfaces are polygons glued along edge labels; every label occurs exactly
twice. A curve is a closed path of edge occurrences on the 1-skeleton. The
pair is computed by cutting along the curve and classifying what is left,
independently of the algebra in pairalg.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import count
from typing import Optional

import pairalg
from pairalg import (
    ClosedSurface,
    PairWord,
    Side,
    TopPair,
    nonorientable_surface,
    orientable_surface,
)
from utils import RealPairsError, logger, timed


class InvalidComplex(RealPairsError):
    """Polygon gluing or curve is malformed"""


class NotEmbedded(RealPairsError):
    """Curve passes a vertex more than once"""


class NoSuchNode(RealPairsError):
    """Requested crossing does not exist"""


@dataclass(frozen=True)
class CellSurface:
    """Polygons as cyclic tuples of (label, +1/-1) occurrences"""
    polygons: tuple

    def labels(self) -> set:
        return {label for polygon in self.polygons for label, _ in polygon}


@dataclass(frozen=True)
class CurveTrace:
    """Closed edge path; a vertex visited twice is a transverse crossing"""
    cycle: tuple


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, item):
        self.parent.setdefault(item, item)
        root = item
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[item] != root:
            self.parent[item], item = root, self.parent[item]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _corner_after(cs, face, index):
    return (face, (index + 1) % len(cs.polygons[face]))


class _Analysis:
    """Corners, edge ends and vertex classes of a complex, optionally cut along some labels"""

    def __init__(self, cs: CellSurface, cut=frozenset()):
        self.cs = cs
        self.cut = frozenset(cut)
        self.occurrences = {}
        for f, polygon in enumerate(cs.polygons):
            if not polygon:
                raise InvalidComplex(f"polygon {f} is empty")
            for i, (label, sign) in enumerate(polygon):
                if sign not in (1, -1):
                    raise InvalidComplex(f"bad orientation {sign} on {label}")
                self.occurrences.setdefault(label, []).append((f, i, sign))
        for label, occs in self.occurrences.items():
            if len(occs) != 2:
                raise InvalidComplex(f"edge {label} occurs {len(occs)} times", label=label)

        self.corners = [(f, i) for f, polygon in enumerate(cs.polygons) for i in range(len(polygon))]
        self.uf = _UnionFind()
        for corner in self.corners:
            self.uf.find(corner)
        for label, occs in self.occurrences.items():
            if label in self.cut:
                continue
            (t1, h1), (t2, h2) = (self.ends(occ) for occ in occs)
            self.uf.union(t1, t2)
            self.uf.union(h1, h2)

    def ends(self, occ):
        """(tail corner, head corner) of one occurrence"""
        f, i, sign = occ
        start, end = (f, i), _corner_after(self.cs, f, i)
        return (start, end) if sign > 0 else (end, start)

    def vertex(self, corner):
        return self.uf.find(corner)

    def tail(self, label):
        return self.vertex(self.ends(self.occurrences[label][0])[0])

    def head(self, label):
        return self.vertex(self.ends(self.occurrences[label][0])[1])

    def start_vertex(self, occurrence):
        label, sign = occurrence
        return self.tail(label) if sign > 0 else self.head(label)

    def end_vertex(self, occurrence):
        label, sign = occurrence
        return self.head(label) if sign > 0 else self.tail(label)

    def face_components(self):
        uf = _UnionFind()
        for f in range(len(self.cs.polygons)):
            uf.find(f)
        for label, ((f1, _, _), (f2, _, _)) in self.occurrences.items():
            if label not in self.cut:
                uf.union(f1, f2)
        groups = {}
        for f in range(len(self.cs.polygons)):
            groups.setdefault(uf.find(f), []).append(f)
        return list(groups.values())

    def orientable(self, faces) -> bool:
        """Breadth-first coherent orientation search over the given faces"""
        faces = set(faces)
        orientation = {}
        for seed in sorted(faces):
            if seed in orientation:
                continue
            orientation[seed] = 1
            queue = [seed]
            while queue:
                face = queue.pop()
                for label, _ in self.cs.polygons[face]:
                    if label in self.cut:
                        continue
                    (f1, _, s1), (f2, _, s2) = self.occurrences[label]
                    if f1 not in faces:
                        continue
                    if f1 == f2:
                        if s1 == s2:
                            return False
                        continue
                    for here, there, s_here, s_there in ((f1, f2, s1, s2), (f2, f1, s2, s1)):
                        if here != face:
                            continue
                        wanted = -orientation[face] * s_here * s_there
                        if there not in orientation:
                            orientation[there] = wanted
                            queue.append(there)
                        elif orientation[there] != wanted:
                            return False
        return True


def _surface_from(euler: int, is_orientable: bool) -> ClosedSurface:
    if is_orientable:
        return orientable_surface((2 - euler) // 2)
    return nonorientable_surface(2 - euler)


def invariants(cs: CellSurface) -> dict:
    """
    Euler characteristic and orientability of a closed complex

    Returns:
        dict: {"euler": int, "orientable": bool}
    """
    analysis = _Analysis(cs)
    if len(analysis.face_components()) != 1:
        raise InvalidComplex("complex is not connected")
    vertices = {analysis.vertex(corner) for corner in analysis.corners}
    euler = len(vertices) - len(analysis.occurrences) + len(cs.polygons)
    return {"euler": euler, "orientable": analysis.orientable(range(len(cs.polygons)))}


def surface_of(cs: CellSurface) -> ClosedSurface:
    info = invariants(cs)
    return _surface_from(info["euler"], info["orientable"])


def _check_closed_path(analysis: _Analysis, c: CurveTrace):
    if not c.cycle:
        raise InvalidComplex("curve is empty")
    labels = [label for label, _ in c.cycle]
    for label in labels:
        if label not in analysis.occurrences:
            raise InvalidComplex(f"curve uses unknown edge {label}", label=label)
    if len(set(labels)) != len(labels):
        raise InvalidComplex("curve uses an edge twice")
    for k, occurrence in enumerate(c.cycle):
        following = c.cycle[(k + 1) % len(c.cycle)]
        if analysis.end_vertex(occurrence) != analysis.start_vertex(following):
            raise InvalidComplex(f"curve is not closed at position {k}", position=k)


def crossings(cs: CellSurface, c: CurveTrace) -> list:
    """
    Positions of the curve where it comes back to an already visited vertex

    Returns:
        list: Cycle positions of second visits, ordered along the curve
    """
    analysis = _Analysis(cs)
    _check_closed_path(analysis, c)
    seen = {}
    repeats = []
    for k, occurrence in enumerate(c.cycle):
        vertex = analysis.start_vertex(occurrence)
        visits = seen.setdefault(vertex, [])
        visits.append(k)
        if len(visits) == 2:
            repeats.append(k)
        elif len(visits) > 2:
            raise InvalidComplex("curve passes a vertex more than twice", position=k)
    return repeats


def canonical_pair(cs: CellSurface, c: CurveTrace) -> TopPair:
    """
    Classify an embedded curve by cutting the complex along it

    Returns:
        TopPair: Canonical pair computed from the cut surface
    """
    whole = _Analysis(cs)
    if len(whole.face_components()) != 1:
        raise InvalidComplex("complex is not connected")
    if crossings(cs, c):
        raise NotEmbedded("curve has crossings; resolve them first")

    cut_labels = frozenset(label for label, _ in c.cycle)
    cut = _Analysis(cs, cut_labels)

    boundary = _UnionFind()
    boundary_edges = []
    for label in cut_labels:
        for occ in cut.occurrences[label]:
            tail, head = (cut.vertex(corner) for corner in cut.ends(occ))
            boundary.union(tail, head)
            boundary_edges.append((occ[0], tail))

    pieces = []
    for faces in cut.face_components():
        face_set = set(faces)
        vertices = {cut.vertex(corner) for corner in cut.corners if corner[0] in face_set}
        interior = sum(1 for label, occs in cut.occurrences.items()
                       if label not in cut_labels and occs[0][0] in face_set)
        boundary_count = sum(1 for face, _ in boundary_edges if face in face_set)
        circles = {boundary.find(vertex) for face, vertex in boundary_edges if face in face_set}
        euler = len(vertices) - interior - boundary_count + len(faces)
        capped = _surface_from(euler + len(circles), cut.orientable(faces))
        pieces.append((capped, len(circles)))

    total_circles = sum(circles for _, circles in pieces)
    logger.debug(f"cut along {len(c.cycle)} edges: {len(pieces)} pieces, {total_circles} boundary circles")

    if total_circles == 1:
        return pairalg.one_sided(pieces[0][0])
    if len(pieces) == 2:
        return pairalg.separating(pieces[0][0], pieces[1][0])
    total_orientable = whole.orientable(range(len(cs.polygons)))
    return pairalg.non_separating(pieces[0][0], total_orientable)


# ----------------------------------------------------------------------
# Surgeries
# ----------------------------------------------------------------------

def _fresh_labels(cs: CellSurface, prefix: str):
    used = cs.labels()
    for n in count():
        label = f"{prefix}{n}"
        if label not in used:
            used.add(label)
            yield label


def insert_surface(cs: CellSurface, face: int, x: ClosedSurface) -> CellSurface:
    """
    Connected sum with x inside one face

    The one-vertex word of x is spliced into the face at its first corner.
    """
    if x.is_sphere:
        return cs
    fresh = _fresh_labels(cs, "s")
    word = []
    if x.orientable:
        for _ in range(x.genus):
            a, b = next(fresh), next(fresh)
            word += [(a, 1), (b, 1), (a, -1), (b, -1)]
    else:
        for _ in range(x.crosscaps):
            a = next(fresh)
            word += [(a, 1), (a, 1)]
    polygons = list(cs.polygons)
    polygons[face] = tuple(polygons[face]) + tuple(word)
    return CellSurface(tuple(polygons))


def pair_sum_rp2_line(cs: CellSurface, c: CurveTrace, position: int = 0):
    """
    Pair-sum with (RP2, l) at one curve edge

    The edge is opened into a slit and a Moebius band is glued in; the curve
    is rerouted along the band's transverse arc.

    Returns:
        tuple: (CellSurface, CurveTrace)
    """
    if len(c.cycle) < 2:
        raise InvalidComplex("curve needs at least two edges for a pair-sum")
    label, sign = c.cycle[position]
    fresh = _fresh_labels(cs, "m")
    x, y, t = next(fresh), next(fresh), next(fresh)

    replaced = 0
    polygons = []
    for polygon in cs.polygons:
        new_polygon = []
        for occ_label, occ_sign in polygon:
            if occ_label == label:
                new_polygon.append((x if replaced == 0 else y, occ_sign))
                replaced += 1
            else:
                new_polygon.append((occ_label, occ_sign))
        polygons.append(tuple(new_polygon))
    polygons.append(((x, 1), (t, 1), (y, 1), (t, 1)))

    cycle = list(c.cycle)
    cycle[position] = (t, -sign)
    return CellSurface(tuple(polygons)), CurveTrace(tuple(cycle))


def _link_walk(analysis: _Analysis, vertex):
    """Corners and edge ends around a vertex in cyclic order"""
    polygons = analysis.cs.polygons

    def in_end(corner):
        f, i = corner
        label, sign = polygons[f][i - 1]
        return (label, "head" if sign > 0 else "tail")

    def out_end(corner):
        f, i = corner
        label, sign = polygons[f][i]
        return (label, "tail" if sign > 0 else "head")

    at_vertex = sorted(corner for corner in analysis.corners if analysis.vertex(corner) == vertex)
    by_end = {}
    for corner in at_vertex:
        for end in (in_end(corner), out_end(corner)):
            by_end.setdefault(end, []).append(corner)

    corners, ends = [at_vertex[0]], []
    end = out_end(at_vertex[0])
    while True:
        ends.append(end)
        first, second = by_end[end]
        corner = second if first == corners[-1] else first
        if corner == corners[0]:
            break
        corners.append(corner)
        end = out_end(corner) if in_end(corner) == end else in_end(corner)
    return corners, ends, out_end


def resolve_node(cs: CellSurface, c: CurveTrace, node: int = 0):
    """
    Blow up a transverse crossing

    A disc around the crossing is replaced by a Moebius band in which the
    two branches run along disjoint arcs.

    Args:
        cs: Host complex
        c: Curve with crossings
        node: Index into crossings(cs, c)

    Returns:
        tuple: (CellSurface, CurveTrace)
    """
    positions = crossings(cs, c)
    if not 0 <= node < len(positions):
        raise NoSuchNode(f"curve has {len(positions)} crossings, no node {node}", node=node)
    analysis = _Analysis(cs)
    vertex = analysis.start_vertex(c.cycle[positions[node]])
    corners, ends, out_end = _link_walk(analysis, vertex)
    if len(corners) != 4:
        raise InvalidComplex(f"node has valence {len(corners)}, expected 4", node=node)

    fresh = _fresh_labels(cs, "n")
    t, d = next(fresh), next(fresh)
    cap_labels = {corner: next(fresh) for corner in corners}

    # beta_j runs between the points on ends j-1 and j
    betas = []
    for j, corner in enumerate(corners):
        forward = out_end(corner) == ends[j]
        betas.append((cap_labels[corner], 1 if forward else -1))

    def reverse(occ):
        return (occ[0], -occ[1])

    polygons = [list(polygon) for polygon in cs.polygons]
    for f, i in sorted(corners, key=lambda corner: (corner[0], -corner[1])):
        position = i if i > 0 else len(polygons[f])
        polygons[f].insert(position, (cap_labels[(f, i)], 1))
    polygons.append([betas[1], (t, 1), reverse(betas[3]), (d, -1)])
    polygons.append([reverse(betas[2]), (t, 1), betas[0], (d, 1)])

    connectors = {ends[0]: (d, 1), ends[2]: (d, -1), ends[1]: (t, 1), ends[3]: (t, -1)}
    pairing = {ends[0]: ends[2], ends[2]: ends[0], ends[1]: ends[3], ends[3]: ends[1]}
    cycle = []
    length = len(c.cycle)
    for k, occurrence in enumerate(c.cycle):
        cycle.append(occurrence)
        following = c.cycle[(k + 1) % length]
        if analysis.end_vertex(occurrence) != vertex:
            continue
        label, sign = occurrence
        arriving = (label, "head" if sign > 0 else "tail")
        next_label, next_sign = following
        leaving = (next_label, "tail" if next_sign > 0 else "head")
        if pairing.get(arriving) != leaving:
            raise InvalidComplex("branches at the node are not transverse", node=node)
        cycle.append(connectors[arriving])

    logger.debug(f"resolved node {node}: {len(positions) - 1} crossings remain")
    return CellSurface(tuple(tuple(p) for p in polygons)), CurveTrace(tuple(cycle))


class Location:
    OFF_CURVE = "OffCurve"
    ON_CURVE = "OnCurve"
    AT_NODE = "AtNode"


def blow_up_point(cs: CellSurface, c: CurveTrace, location: str, face: int = 0,
                  position: int = 0, node: int = 0):
    """
    Real blow-up of a point of the surface

    Args:
        cs: Host complex
        c: Curve
        location: Location.OFF_CURVE, ON_CURVE or AT_NODE
        face: Face receiving the crosscap (OffCurve)
        position: Curve edge to blow up on (OnCurve)
        node: Crossing index (AtNode)

    Returns:
        tuple: (CellSurface, CurveTrace)
    """
    if location == Location.OFF_CURVE:
        return insert_surface(cs, face, pairalg.RP2), c
    if location == Location.ON_CURVE:
        return pair_sum_rp2_line(cs, c, position)
    if location == Location.AT_NODE:
        return resolve_node(cs, c, node)
    raise ValueError(f"unknown blow-up location {location!r}")


# ----------------------------------------------------------------------
# Builders
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Realization:
    """A complex with a curve, and the faces on each side of a separating curve"""
    surface: CellSurface
    curve: CurveTrace
    left_face: Optional[int] = None
    right_face: Optional[int] = None


def _p(*occurrences):
    return tuple(occurrences)


def sphere_equator() -> Realization:
    surface = CellSurface((_p(("a", 1), ("b", 1)), _p(("b", -1), ("a", -1))))
    return Realization(surface, CurveTrace(_p(("a", 1), ("b", 1))), left_face=0, right_face=1)


def torus_meridian() -> Realization:
    surface = CellSurface((_p(("a1", 1), ("a2", 1), ("b", 1), ("a2", -1), ("a1", -1), ("b", -1)),))
    return Realization(surface, CurveTrace(_p(("a1", 1), ("a2", 1))))


def klein_fiber() -> Realization:
    """Klein word a b a b~ with the a edge split in two; a is a fiber"""
    surface = CellSurface((_p(("a1", 1), ("a2", 1), ("b", 1), ("a1", 1), ("a2", 1), ("b", -1)),))
    return Realization(surface, CurveTrace(_p(("a1", 1), ("a2", 1))))


def klein_section() -> Realization:
    """Klein word a b a b~ with the b edge split in two; b is a one-sided section"""
    surface = CellSurface((_p(("a", 1), ("b1", 1), ("b2", 1), ("a", 1), ("b2", -1), ("b1", -1)),))
    return Realization(surface, CurveTrace(_p(("b1", 1), ("b2", 1))))


def projective_line() -> Realization:
    surface = CellSurface((_p(("a", 1), ("b", 1), ("a", 1), ("b", 1)),))
    return Realization(surface, CurveTrace(_p(("a", 1), ("b", 1))))


def torus_null() -> Realization:
    base = sphere_equator()
    return Realization(insert_surface(base.surface, base.left_face, pairalg.T2), base.curve,
                       base.left_face, base.right_face)


BASE_BUILDERS = {
    "S2L": sphere_equator,
    "T2NULL": torus_null,
    "T2L": torus_meridian,
    "KF": klein_fiber,
    "KL": klein_section,
    "RP2L": projective_line,
}


def realize(w) -> Realization:
    """
    Explicit complex for a pair word

    Args:
        w: PairWord or its text form

    Returns:
        Realization: Complex and embedded curve
    """
    if isinstance(w, str):
        w = pairalg.parse_word(w)
    built = BASE_BUILDERS[w.base]()
    surface, curve = built.surface, built.curve

    if w.rp2l_count == 0 and built.left_face is not None:
        for x, side in w.summands:
            if side is Side.LEFT:
                surface = insert_surface(surface, built.left_face, x)
            elif side is Side.RIGHT:
                surface = insert_surface(surface, built.right_face, x)
            elif not x.is_sphere:
                raise pairalg.SideRequired(f"summand {x} of {w} needs a side", word=str(w))
        return Realization(surface, curve, built.left_face, built.right_face)

    for _ in range(w.rp2l_count):
        surface, curve = pair_sum_rp2_line(surface, curve)
    for x, _ in w.summands:
        surface = insert_surface(surface, 0, x)
    return Realization(surface, curve)


def oracle_pair(w) -> TopPair:
    built = realize(w)
    return canonical_pair(built.surface, built.curve)


def equator_double_curve(g: int):
    """
    Sphere with a curve running twice around the equator with 2g+1 crossings

    Faces: north (0), south (1) and the 2g+1 lens faces between the two
    branches (2, 3, ...).

    Returns:
        tuple: (CellSurface, CurveTrace)
    """
    if g < 1:
        raise pairalg.OutOfRange(f"g must be at least 1, got {g}", g=g)
    k = 2 * g + 1
    north = tuple((f"U{i}", 1) for i in range(k))
    south = tuple((f"D{i}", -1) for i in reversed(range(k)))
    lenses = tuple(((f"D{i}", 1), (f"U{i}", -1)) for i in range(k))
    first_lap = [(f"U{i}" if i % 2 == 0 else f"D{i}", 1) for i in range(k)]
    second_lap = [(f"D{i}" if i % 2 == 0 else f"U{i}", 1) for i in range(k)]
    surface = CellSurface((north, south) + lenses)
    return surface, CurveTrace(tuple(first_lap + second_lap))


def equator_summary(g: int) -> dict:
    surface, curve = equator_double_curve(g)
    return {
        "g": g,
        "crossings": len(crossings(surface, curve)),
        "lens_faces": len(surface.polygons) - 2,
        "equator_points": 2 * g + 2,
        "euler": invariants(surface)["euler"],
    }


def resolve_all_nodes(cs: CellSurface, c: CurveTrace):
    while crossings(cs, c):
        cs, c = resolve_node(cs, c, 0)
    return cs, c


def equator_example(g: int, extra_crosscaps: int = 0) -> TopPair:
    """
    Resolve every node of the doubled equator, then add crosscaps on the lens side

    Returns:
        TopPair: Separating{NonOr(1 + extra_crosscaps), Or(g)}
    """
    surface, curve = resolve_all_nodes(*equator_double_curve(g))
    lens_face = 2
    for _ in range(extra_crosscaps):
        surface = insert_surface(surface, lens_face, pairalg.RP2)
    return canonical_pair(surface, curve)


# ----------------------------------------------------------------------
# Checks against pairalg
# ----------------------------------------------------------------------

def oracle_verify_diffeo_table(r_max: int) -> dict:
    """Check both diffeomorphism tables on explicit complexes"""
    return pairalg.check_table_lines(oracle_pair, r_max, "cellsurf")


def all_words(max_complexity: int):
    """Every pair word whose summands add up to at most max_complexity"""
    for base in pairalg.BASE_PAIRS:
        for rp2l in range(max_complexity + 1):
            budget = max_complexity - rp2l
            sided = base in pairalg.BASE_SIDES and rp2l == 0
            for tori in range(budget // 2 + 1):
                for caps in range(budget - 2 * tori + 1):
                    if not sided:
                        summands = ((pairalg.T2, Side.ANY),) * tori + ((pairalg.RP2, Side.ANY),) * caps
                        yield PairWord(base, rp2l, summands)
                        continue
                    for left_tori in range(tori + 1):
                        for left_caps in range(caps + 1):
                            summands = (((pairalg.T2, Side.LEFT),) * left_tori
                                        + ((pairalg.T2, Side.RIGHT),) * (tori - left_tori)
                                        + ((pairalg.RP2, Side.LEFT),) * left_caps
                                        + ((pairalg.RP2, Side.RIGHT),) * (caps - left_caps))
                            yield PairWord(base, rp2l, summands)


@timed("oracle sweep")
def oracle_sweep(max_complexity: int) -> dict:
    """
    Compare normalize with the oracle on every word up to a complexity

    Returns:
        dict: {"words": int, "mismatches": [word, ...]}
    """
    checked = 0
    mismatches = []
    for word in all_words(max_complexity):
        checked += 1
        if pairalg.normalize(word) != oracle_pair(word):
            mismatches.append(str(word))
    logger.info(f"oracle sweep: {checked} words, {len(mismatches)} mismatches")
    return {"words": checked, "mismatches": mismatches}


# ----------------------------------------------------------------------
# Text format
# ----------------------------------------------------------------------

def _read_occurrence(token: str):
    if token.endswith("~"):
        return (token[:-1], -1)
    if token.startswith("~"):
        return (token[1:], -1)
    return (token, 1)


def parse_complex(text: str):
    """
    Read one polygon word per line and an optional "curve:" line

    Returns:
        tuple: (CellSurface, CurveTrace or None)
    """
    polygons, curve = [], None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("curve:"):
            curve = CurveTrace(tuple(_read_occurrence(tok) for tok in line[len("curve:"):].split()))
            continue
        polygons.append(tuple(_read_occurrence(tok) for tok in line.split()))
    if not polygons:
        raise InvalidComplex("no polygons given")
    return CellSurface(tuple(polygons)), curve


def format_complex(cs: CellSurface, c: Optional[CurveTrace] = None) -> str:
    def show(occurrence):
        label, sign = occurrence
        return label if sign > 0 else f"{label}~"

    lines = [" ".join(show(occ) for occ in polygon) for polygon in cs.polygons]
    if c is not None:
        lines.append("curve: " + " ".join(show(occ) for occ in c.cycle))
    return "\n".join(lines) + "\n"
