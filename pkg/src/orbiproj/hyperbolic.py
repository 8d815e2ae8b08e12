"""Hyperbolic generalized triangles in the Klein model and hyperbolic seeds for the D family.

A generalized triangle is cut out by three lines.  Two of them either meet
at an interior angle or are ultraparallel, in which case the common
perpendicular truncates the corner and contributes a side of known length.
Lines are represented by spacelike normals for J = diag(1, 1, -1); the Gram
matrix of the unit normals has entries -cos(angle) or -cosh(distance).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import BadOrder, DomainViolation, NonSpacelike
from .elementary.structure import Corner, ElementaryStructure, End, FullOrbifold
from .orbifold import ElementaryType
from .projective import Collineation, HomPoint

J = np.diag([1.0, 1.0, -1.0])
ORIGIN = np.array([0.0, 0.0, 1.0])


def lorentz(x: np.ndarray, y: np.ndarray) -> float:
    return float(x @ J @ y)


class TriangleKind(str, Enum):
    HEXAGON = "Hexagon"
    PENTAGON = "Pentagon"
    QUADRILATERAL = "Quadrilateral"
    TRIANGLE = "Triangle"


@dataclass(frozen=True)
class GeneralizedTriangleSpec:
    """Three lines L1, L2, L3.

    Hexagon: alpha, beta, gamma are the distances L1-L3, L2-L3, L1-L2.
    Pentagon: alpha, beta are the distances L1-L3, L2-L3; gamma the angle at L1, L2.
    Quadrilateral: gamma is the distance L1-L3; beta the angle at L2, L3; alpha the angle at L1, L2.
    Triangle: alpha, beta, gamma are the angles at L1-L3, L2-L3, L1-L2.
    The derived side lies on L3.
    """

    kind: TriangleKind
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        object.__setattr__(self, "kind", TriangleKind(self.kind))

    def check(self) -> "GeneralizedTriangleSpec":
        a, b, g = self.alpha, self.beta, self.gamma
        k = self.kind

        def need(ok: bool, text: str):
            if not ok:
                raise DomainViolation(f"{k.value}: {text} (alpha={a}, beta={b}, gamma={g})")

        if k is TriangleKind.HEXAGON:
            need(a > 0 and b > 0 and g > 0, "side lengths must be positive")
        elif k is TriangleKind.PENTAGON:
            need(a > 0 and b > 0, "alpha, beta must be positive")
            need(0 < g < math.pi, "gamma must lie in (0, pi)")
        elif k is TriangleKind.QUADRILATERAL:
            need(g > 0, "gamma must be positive")
            need(0 < a < math.pi and 0 < b < math.pi, "alpha, beta must lie in (0, pi)")
            need(a + b < math.pi, "alpha + beta < pi")
            # otherwise the fourth side would have negative length
            need(math.cosh(g) * math.cos(b) + math.cos(a) > 0,
                 "cosh(gamma) cos(beta) + cos(alpha) > 0")
        else:
            need(all(0 < x < math.pi for x in (a, b, g)), "angles must lie in (0, pi)")
            need(a + b + g < math.pi, "alpha + beta + gamma < pi")
        return self

    def pairs(self) -> dict:
        """Relation of each pair of lines: ("angle" | "length", value)."""
        a, b, g = self.alpha, self.beta, self.gamma
        k = self.kind
        if k is TriangleKind.HEXAGON:
            return {(0, 2): ("length", a), (1, 2): ("length", b), (0, 1): ("length", g)}
        if k is TriangleKind.PENTAGON:
            return {(0, 2): ("length", a), (1, 2): ("length", b), (0, 1): ("angle", g)}
        if k is TriangleKind.QUADRILATERAL:
            return {(0, 2): ("length", g), (1, 2): ("angle", b), (0, 1): ("angle", a)}
        return {(0, 2): ("angle", a), (1, 2): ("angle", b), (0, 1): ("angle", g)}


def generalized_triangle(spec: GeneralizedTriangleSpec) -> dict:
    """Closed-form side on L3: cosh C for hexagon, pentagon, triangle; sinh A for the quadrilateral."""
    spec.check()
    a, b, g = spec.alpha, spec.beta, spec.gamma
    k = spec.kind
    if k is TriangleKind.HEXAGON:
        c = (math.cosh(a) * math.cosh(b) + math.cosh(g)) / (math.sinh(a) * math.sinh(b))
    elif k is TriangleKind.PENTAGON:
        c = (math.cosh(a) * math.cosh(b) + math.cos(g)) / (math.sinh(a) * math.sinh(b))
    elif k is TriangleKind.TRIANGLE:
        c = (math.cos(a) * math.cos(b) + math.cos(g)) / (math.sin(a) * math.sin(b))
    else:
        s = (math.cosh(g) * math.cos(b) + math.cos(a)) / (math.sinh(g) * math.sin(b))
        return {"sinh": s, "value": math.asinh(s)}
    return {"cosh": c, "value": math.acosh(c)}


# --------------------------------------------------------------------------
# Klein model


def lorentz_reflection(normal) -> Collineation:
    v = np.asarray(normal, dtype=float).reshape(3)
    nn = lorentz(v, v)
    if not nn > 1e-14 * max(1.0, float(v @ v)):
        raise NonSpacelike(f"normal {v.tolist()} has Lorentz norm {nn} <= 0")
    return Collineation(np.eye(3) - (2.0 / nn) * np.outer(v, J @ v))


def hyperbolic_distance(x: np.ndarray, y: np.ndarray) -> float:
    num = abs(lorentz(x, y))
    den = math.sqrt(lorentz(x, x) * lorentz(y, y))
    return math.acosh(max(1.0, num / den))


def _timelike_point(v: np.ndarray) -> np.ndarray:
    v = v / v[2]
    if lorentz(v, v) >= 0:
        raise DomainViolation("constructed vertex is not inside the disk")
    return v


def _point_on(n1: np.ndarray, n2: np.ndarray) -> np.ndarray:
    """Point J-orthogonal to both normals."""
    return J @ np.cross(n1, n2)


def gram_normals(gram: np.ndarray) -> list[np.ndarray]:
    """Unit spacelike normals n_i with <n_i, n_j>_J = gram[i, j]."""
    w, q = np.linalg.eigh(gram)
    order = np.argsort(-w)
    w, q = w[order], q[:, order]
    if not (w[1] > 0 > w[2]):
        raise DomainViolation("the lines do not bound a hyperbolic generalized polygon")
    n = np.diag(np.sqrt(np.abs(w))) @ q.T
    return [n[:, i] for i in range(3)]


def _gram(pairs: dict) -> np.ndarray:
    g = np.eye(3)
    for (i, j), (kind, val) in pairs.items():
        g[i, j] = g[j, i] = -math.cos(val) if kind == "angle" else -math.cosh(val)
    return g


def _corner_points(normals, i: int, j: int, kind: str) -> list[np.ndarray]:
    """Points where line i hands over to line j: one vertex, or the two feet of the perpendicular."""
    if kind == "angle":
        return [_timelike_point(_point_on(normals[i], normals[j]))]
    pole = _point_on(normals[i], normals[j])  # normal of the common perpendicular
    return [_timelike_point(_point_on(normals[i], pole)),
            _timelike_point(_point_on(normals[j], pole))]


def _anchor(vertices: list[np.ndarray]) -> np.ndarray:
    """Lorentz map centring the polygon at the origin, with vertices[0] on the positive x-axis.

    Centring at the normalized sum of the unit vertices keeps the generator
    entries small, which matters for long products.
    """
    units = [v / math.sqrt(-lorentz(v, v)) for v in vertices]
    c = sum(units)
    c = c / math.sqrt(-lorentz(c, c))
    m = np.eye(3)
    if np.linalg.norm(c[:2]) > 1e-15:
        m = lorentz_reflection(c - ORIGIN).matrix
        m = m * np.sign((m @ c)[2])
    v0 = m @ vertices[0]
    ang = math.atan2(v0[1], v0[0])
    cs, sn = math.cos(-ang), math.sin(-ang)
    rot = np.array([[cs, -sn, 0.0], [sn, cs, 0.0], [0.0, 0.0, 1.0]])
    m = rot @ m
    # keep the boundary counterclockwise
    v1 = m @ vertices[1]
    if v1[1] < 0:
        m = np.diag([1.0, -1.0, 1.0]) @ m
    return m


@dataclass
class KleinPolygon:
    """Polygon in the chart z = 1 with its mirror lines given by Lorentz normals."""

    vertices: list  # of np.ndarray, z = 1
    normals: list  # unit spacelike normals of the three lines, in cyclic order
    line_of_side: list = field(default_factory=list)  # line index per side, or None for a perpendicular

    def side_reflections(self) -> list[Collineation]:
        return [lorentz_reflection(n) for n in self.normals]

    def hom_vertices(self) -> list[HomPoint]:
        return [HomPoint(v) for v in self.vertices]

    def max_radius(self) -> float:
        return max(math.hypot(v[0], v[1]) for v in self.vertices)


def klein_polygon(pairs: dict, start: int = 0) -> KleinPolygon:
    """Generalized polygon from relations of the cyclic line pairs (0,1), (1,2), (2,0)."""
    normals = gram_normals(_gram(pairs))
    pts, sides = [], []
    for i in range(3):
        j = (i + 1) % 3
        kind, _ = pairs[(i, j)] if (i, j) in pairs else pairs[(j, i)]
        corner = _corner_points(normals, i, j, kind)
        pts.extend(corner)
        if len(corner) == 2:
            sides.extend([None, j])  # perpendicular side, then the side along line j
        else:
            sides.append(j)
    # orient normals inward using the centroid
    centroid = np.mean(pts, axis=0)
    normals = [n if lorentz(n, centroid) > 0 else -n for n in normals]
    pts = pts[start:] + pts[:start]
    sides = sides[start:] + sides[:start]
    m = _anchor(pts)
    pts = [(m @ p) / (m @ p)[2] for p in pts]
    normals = [m @ n for n in normals]
    return KleinPolygon(pts, normals, sides)


def measured_side(spec: GeneralizedTriangleSpec) -> float:
    """Length of the derived side on L3, measured on the Klein-model construction."""
    spec.check()
    pairs = spec.pairs()
    normals = gram_normals(_gram(pairs))

    def end(other: int) -> np.ndarray:
        kind, _ = pairs[(min(other, 2), max(other, 2))]
        pts = _corner_points(normals, other, 2, kind)
        return pts[-1]

    return hyperbolic_distance(end(0), end(1))


# --------------------------------------------------------------------------
# hyperbolic D-family seeds


def full_invariant_of_length(length: float) -> float:
    """Boundary full 1-orbifold invariant of a perpendicular of the given length."""
    return 1.0 / math.cosh(length) ** 2


def closed_length(lam: float) -> float:
    """Hyperbolic length of a purely hyperbolic closed curve with smallest eigenvalue lam."""
    return -math.log(lam)


def _order(n) -> int:
    if int(n) != n or n < 2:
        raise BadOrder(f"corner order must be an integer >= 2, got {n!r}")
    return int(n)


def _w(*names) -> tuple:
    return tuple((n, 1) for n in names)


def build_hyperbolic_elementary(tag: str, lengths=(), orders=()) -> ElementaryStructure:
    """Hyperbolic structure on a D-type orbifold with the same generator names as the convex solvers.

    D1: lengths (e2, e4, e6).  D2: orders (n,), lengths (e1, e4).
    D3: orders (m, n) with m at v4 and n at v3, lengths (e1,).  D4: orders (p, q, r).
    """
    lengths = tuple(float(x) for x in lengths)
    orders = tuple(_order(n) for n in orders)
    for x in lengths:
        if not x > 0:
            raise DomainViolation(f"boundary lengths must be positive, got {x}")
    if tag == "D1":
        l2, l4, l6 = lengths
        names = ("r1", "r3", "r5")
        pairs = {(0, 1): ("length", l2), (1, 2): ("length", l4), (2, 0): ("length", l6)}
        start = 5
        spec = GeneralizedTriangleSpec(TriangleKind.HEXAGON, l2, l4, l6)
        ends = [End(FullOrbifold(full_invariant_of_length(l2)), (_w("r1"), _w("r3"))),
                End(FullOrbifold(full_invariant_of_length(l4)), (_w("r3"), _w("r5"))),
                End(FullOrbifold(full_invariant_of_length(l6)), (_w("r5"), _w("r1")))]
        corners = []
    elif tag == "D2":
        (n,), (l1, l4) = orders, lengths
        names = ("r2", "r3", "r5")
        pairs = {(0, 1): ("angle", math.pi / n), (1, 2): ("length", l4), (2, 0): ("length", l1)}
        start = 3
        spec = GeneralizedTriangleSpec(TriangleKind.PENTAGON, l1, l4, math.pi / n)
        ends = [End(FullOrbifold(full_invariant_of_length(l1)), (_w("r5"), _w("r2"))),
                End(Corner(n), (_w("r2"), _w("r3"))),
                End(FullOrbifold(full_invariant_of_length(l4)), (_w("r3"), _w("r5")))]
        corners = [("r2", "r3", n)]
    elif tag == "D3":
        (m, n), (l1,) = orders, lengths
        names = ("r2", "r3", "r4")
        pairs = {(0, 1): ("angle", math.pi / n), (1, 2): ("angle", math.pi / m), (2, 0): ("length", l1)}
        start = 2
        spec = GeneralizedTriangleSpec(TriangleKind.QUADRILATERAL, math.pi / n, math.pi / m, l1)
        ends = [End(FullOrbifold(full_invariant_of_length(l1)), (_w("r4"), _w("r2"))),
                End(Corner(n), (_w("r2"), _w("r3"))),
                End(Corner(m), (_w("r3"), _w("r4")))]
        corners = [("r2", "r3", n), ("r3", "r4", m)]
        orders = (n, m)
    elif tag == "D4":
        p, q, r = orders
        names = ("r1", "r2", "r3")
        pairs = {(0, 1): ("angle", math.pi / p), (1, 2): ("angle", math.pi / q), (2, 0): ("angle", math.pi / r)}
        start = 1
        spec = GeneralizedTriangleSpec(TriangleKind.TRIANGLE, math.pi / p, math.pi / q, math.pi / r)
        ends = [End(Corner(p), (_w("r1"), _w("r2"))),
                End(Corner(q), (_w("r2"), _w("r3"))),
                End(Corner(r), (_w("r3"), _w("r1")))]
        corners = [("r1", "r2", p), ("r2", "r3", q), ("r3", "r1", r)]
    else:
        raise DomainViolation(f"hyperbolic seeds are built for D1-D4 only, got {tag!r}")
    spec.check()
    poly = klein_polygon(pairs, start)
    gens = {name: lorentz_reflection(nrm) for name, nrm in zip(names, poly.normals)}
    relations = [((name, 2),) for name in names] + [_w(a, b) * k for a, b, k in corners]
    pairings = [{"tile": 0, "side": [i, (i + 1) % len(poly.vertices)], "word": names[j],
                 "to_tile": 0, "to_side": [i, (i + 1) % len(poly.vertices)]}
                for i, j in enumerate(poly.line_of_side) if j is not None]
    return ElementaryStructure(
        type=ElementaryType(tag, orders),
        generators=gens,
        relations=relations,
        tiles=[np.array(poly.vertices)],
        ends=ends,
        fiber_params=lengths,
        side_pairings=pairings,
        data={"klein": poly},
    )
