"""Solved elementary structures, end data, words and invariant extraction."""

from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from ..errors import BadCrossRatio, InvariantOutOfRegion, MalformedStructure
from ..orbifold import ElementaryType
from ..projective import Collineation, Kind, classify, cross_ratio_vectors, identity_residual, in_region
from ..tolerances import DEFAULT, Tolerances


# --------------------------------------------------------------------------
# end data


@dataclass(frozen=True)
class Hyp:
    lam: float
    tau: float

    def check(self) -> "Hyp":
        if not in_region(self.lam, self.tau):
            raise InvariantOutOfRegion(
                f"(lambda, tau) = ({self.lam}, {self.tau}) is outside the open region "
                "0 < lambda < 1, 2/sqrt(lambda) < tau < lambda + lambda^-2")
        return self

    def to_json(self):
        return {"hyp": [self.lam, self.tau]}


@dataclass(frozen=True)
class Cone:
    order: int

    def to_json(self):
        return {"cone": self.order}


@dataclass(frozen=True)
class Corner:
    order: int

    def to_json(self):
        return {"corner": self.order}


@dataclass(frozen=True)
class FullOrbifold:
    crossratio: float

    def check(self) -> "FullOrbifold":
        if not (0.0 < self.crossratio < 1.0):
            raise BadCrossRatio(f"full 1-orbifold invariant {self.crossratio} is not in (0, 1)")
        return self

    def to_json(self):
        return {"full": self.crossratio}


EndSpec = Union[Hyp, Cone, Corner, FullOrbifold]


def end_from_json(d: dict) -> EndSpec:
    if "hyp" in d:
        lam, tau = d["hyp"]
        return Hyp(float(lam), float(tau))
    if "cone" in d:
        return Cone(int(d["cone"]))
    if "corner" in d:
        return Corner(int(d["corner"]))
    if "full" in d:
        return FullOrbifold(float(d["full"]))
    raise MalformedStructure(f"unrecognized end {d!r}")


def check_full(x: float) -> float:
    FullOrbifold(x).check()
    return x


# --------------------------------------------------------------------------
# words


Word = tuple  # of (generator name, integer exponent)


def parse_word(text: Union[str, Word]) -> Word:
    """Parse ``"T r T^-1"`` into ``(("T", 1), ("r", 1), ("T", -1))``."""
    if not isinstance(text, str):
        return tuple((str(n), int(e)) for n, e in text)
    out = []
    for tok in text.split():
        if "^" in tok:
            name, exp = tok.split("^", 1)
            out.append((name, int(exp)))
        else:
            out.append((tok, 1))
    return tuple(out)


def format_word(word: Word) -> str:
    return " ".join(n if e == 1 else f"{n}^{e}" for n, e in word)


def evaluate(word, generators: dict) -> np.ndarray:
    """Matrix of a word (raw product of the stored representatives)."""
    m = np.eye(3)
    for name, e in parse_word(word):
        g = generators[name]
        g = g.matrix if isinstance(g, Collineation) else np.asarray(g, float)
        if e < 0:
            g = np.linalg.inv(g)
        m = m @ np.linalg.matrix_power(g, abs(e))
    return m


# --------------------------------------------------------------------------
# the solved structure


@dataclass
class End:
    """An end of an elementary orbifold and the words carrying its holonomy.

    ``words`` holds one word for a closed end or a cone, and two reflection
    words for a full 1-orbifold or a corner reflector.
    """

    spec: EndSpec
    words: tuple

    def to_json(self):
        d = self.spec.to_json()
        d["words"] = [format_word(parse_word(w)) for w in self.words]
        return d


@dataclass
class ElementaryStructure:
    type: ElementaryType
    generators: dict
    relations: list
    tiles: list
    ends: list
    fiber_params: tuple = ()
    side_pairings: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def tag(self) -> str:
        return self.type.tag

    def relation_residuals(self) -> dict:
        return {format_word(parse_word(w)): identity_residual(evaluate(w, self.generators))
                for w in self.relations}

    def max_residual(self) -> float:
        res = self.relation_residuals()
        return max(res.values()) if res else 0.0

    def generator_matrices(self) -> dict:
        return {k: (v.matrix if isinstance(v, Collineation) else np.asarray(v, float))
                for k, v in self.generators.items()}

    def to_json(self) -> dict:
        return {
            "type": self.type.tag,
            "orders": list(self.type.orders),
            "ends": [e.to_json() for e in self.ends],
            "fiber": list(self.fiber_params),
            "generators": {k: m.tolist() for k, m in self.generator_matrices().items()},
            "relations": [format_word(parse_word(w)) for w in self.relations],
            "tiles": [np.asarray(t).tolist() for t in self.tiles],
            "side_pairings": self.side_pairings,
        }

    @classmethod
    def from_json(cls, d: dict) -> "ElementaryStructure":
        try:
            gens = {k: Collineation(v) for k, v in d["generators"].items()}
            ends = []
            for e in d.get("ends", []):
                words = tuple(parse_word(w) for w in e.get("words", []))
                ends.append(End(end_from_json(e), words))
            return cls(
                type=ElementaryType(d["type"], tuple(d.get("orders", ()))),
                generators=gens,
                relations=[parse_word(w) for w in d.get("relations", [])],
                tiles=[np.asarray(t, dtype=float) for t in d.get("tiles", [])],
                ends=ends,
                fiber_params=tuple(d.get("fiber", ())),
                side_pairings=list(d.get("side_pairings", [])),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedStructure(f"bad structure JSON: {exc}") from None


# --------------------------------------------------------------------------
# reflections and invariant extraction


def reflection_data(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(isolated fixed point b, fixed-line covector a) with m ~ I - b a^T and a(b) = 2."""
    d = float(np.linalg.det(m))
    n = m / abs(d) ** (1.0 / 3.0)
    if d > 0:
        n = -n
    k = np.eye(3) - n
    i, j = np.unravel_index(int(np.argmax(np.abs(k))), k.shape)
    b = k[:, j].copy()
    a = k[i, :] / k[i, j]
    return b, a


def unit_columns(*cols) -> np.ndarray:
    return np.column_stack([c / np.linalg.norm(c) for c in cols])


def exact_conjugate(frame: np.ndarray, m: np.ndarray) -> np.ndarray:
    """frame^-1 m frame in exact rational arithmetic on the float entries, rounded once.

    Moving a structure into a well-conditioned frame is only useful if the move
    itself does not add the error of the badly conditioned one.
    """
    f = [[Fraction(float(x)) for x in row] for row in frame]
    g = [[Fraction(float(x)) for x in row] for row in m]
    adj = [[f[(j + 1) % 3][(i + 1) % 3] * f[(j + 2) % 3][(i + 2) % 3]
            - f[(j + 1) % 3][(i + 2) % 3] * f[(j + 2) % 3][(i + 1) % 3] for j in range(3)] for i in range(3)]
    det = sum(f[0][k] * adj[k][0] for k in range(3))
    gf = [[sum(g[i][k] * f[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
    return np.array([[float(sum(adj[i][k] * gf[k][j] for k in range(3)) / det) for j in range(3)]
                     for i in range(3)])


def full_invariant(r1: np.ndarray, r2: np.ndarray) -> float:
    """Cross-ratio [f1, f2; p1, p2] of the full 1-orbifold between two reflections.

    f_i is the isolated fixed point of r_i and p_i the point where the fixed
    line of r_i crosses the line through f1 and f2.
    """
    b1, a1 = reflection_data(r1)
    b2, a2 = reflection_data(r2)
    line = np.cross(b1, b2)
    p1 = np.cross(line, a1)
    p2 = np.cross(line, a2)
    return cross_ratio_vectors(b1, b2, p1, p2)


def element_order(m: np.ndarray, tol: Tolerances = DEFAULT, max_order: int = 1000) -> Optional[int]:
    """Smallest n with m^n = +-I, found through the spectrum and confirmed by powering."""
    c = classify(m, tol)
    if c.kind == Kind.REFLECTION:
        n = 2
    elif c.kind == Kind.ELLIPTIC and c.order:
        n = c.order
    else:
        return None
    # powers of an ill-conditioned elliptic lose digits in proportion to its condition number
    if identity_residual(np.linalg.matrix_power(m, n)) > tol.relation * max(1.0, np.linalg.cond(m)):
        return None
    return n


def extract_invariants(S: ElementaryStructure, tol: Tolerances = DEFAULT) -> list:
    """Recover the end invariants from the generators alone."""
    res = S.relation_residuals()
    bad = {w: r for w, r in res.items() if not r < tol.relation}
    if bad:
        worst = max(bad, key=bad.get)
        raise MalformedStructure(
            f"relation {worst!r} has residual {bad[worst]:.3e} (threshold {tol.relation:g})")
    gens = S.generators
    out = []
    for end in S.ends:
        mats = [evaluate(w, gens) for w in end.words]
        spec = end.spec
        if isinstance(spec, Hyp):
            c = classify(mats[0], tol)
            if c.kind != Kind.HYPERBOLIC:
                raise MalformedStructure(f"closed end holonomy is {c.kind.value}, not hyperbolic")
            out.append(Hyp(c.lam, c.tau))
        elif isinstance(spec, FullOrbifold):
            out.append(FullOrbifold(full_invariant(mats[0], mats[1])))
        elif isinstance(spec, Cone):
            n = element_order(mats[0], tol)
            if n is None:
                raise MalformedStructure("cone generator has no finite order")
            out.append(Cone(n))
        elif isinstance(spec, Corner):
            n = element_order(mats[0] @ mats[1], tol)
            if n is None:
                raise MalformedStructure("corner reflections do not generate a finite group")
            out.append(Corner(n))
        else:  # pragma: no cover
            raise MalformedStructure(f"unknown end {spec!r}")
    return out


def relative_close(a: float, b: float, rel: float) -> bool:
    return abs(a - b) <= rel * max(1.0, abs(a), abs(b))


def ends_match(found: list, wanted: list, rel: float = 1e-9) -> bool:
    if len(found) != len(wanted):
        return False
    for f, w in zip(found, wanted):
        if type(f) is not type(w):
            return False
        if isinstance(f, Hyp):
            if not (relative_close(f.lam, w.lam, rel) and relative_close(f.tau, w.tau, rel)):
                return False
        elif isinstance(f, FullOrbifold):
            if not relative_close(f.crossratio, w.crossratio, rel):
                return False
        elif f.order != w.order:
            return False
    return True


def positive_lifts(poly: np.ndarray) -> np.ndarray:
    """Unit vertex lifts, checked to lie in one open half-space."""
    pts = np.array(poly, dtype=float)
    pts = pts / np.linalg.norm(pts, axis=1)[:, None]
    center = pts.sum(axis=0)
    if not np.all(pts @ center > 0):
        raise MalformedStructure("tile vertices do not span a convex polygon")
    return pts


def tile_is_convex(poly: np.ndarray, straight_tol: float = 1e-9) -> bool:
    """Convexity of a polygon given by vertex lifts lying in a common half-space."""
    pts = positive_lifts(poly)
    n = len(pts)
    signs = []
    for i in range(n):
        d = float(np.linalg.det(np.array([pts[i - 1], pts[i], pts[(i + 1) % n]])))
        if abs(d) > straight_tol:
            signs.append(math.copysign(1.0, d))
    return len(set(signs)) <= 1
