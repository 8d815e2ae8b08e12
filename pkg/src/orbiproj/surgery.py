"""Holonomy-level sewing: pasting, cross-capping, silvering and folding.

A :class:`ConvexStructure` is a finitely presented group of collineations
with fundamental tiles and named open ends.  Every operation returns a new
structure; the inputs are never modified.

Boundary bookkeeping lives in ``circles``: a plain circle is
``("plain", end)`` and a circle with mirror points is ``("mirror", items)``
where an item is ``("full", end)`` or ``("corner", order)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from .errors import (
    BadParameter,
    InvariantMismatch,
    MissingComponent,
    NegativeEigenvalues,
    NotHyperbolic,
    NotPurelyHyperbolic,
    OrientationClash,
    WrongBoundaryKind,
)
from .orbifold import FULL, BoundaryPattern, OrbifoldSignature, euler_characteristic
from .projective import Kind, classify, cross_ratio_lines, identity_residual
from .elementary.structure import (
    Cone,
    Corner,
    ElementaryStructure,
    FullOrbifold,
    Hyp,
    evaluate,
    exact_conjugate,
    format_word,
    full_invariant,
    parse_word,
    reflection_data,
)
from .tolerances import DEFAULT, Tolerances


@dataclass
class OpenEnd:
    kind: str  # "closed" or "full"
    words: tuple  # one holonomy word, or the two reflection words of a full 1-orbifold
    invariant: object = None  # Hyp or FullOrbifold, informational


@dataclass
class ConvexStructure:
    generators: dict  # name -> 3x3 ndarray
    relations: list
    tiles: list
    ends: dict  # name -> OpenEnd
    cones: list = field(default_factory=list)
    circles: list = field(default_factory=list)
    genus: int = 0
    orientable: bool = True
    provenance: dict = field(default_factory=dict)

    # ------------------------------------------------------------------
    @classmethod
    def from_elementary(cls, S: ElementaryStructure, label: str = "S") -> "ConvexStructure":
        """Wrap a solved elementary structure; names become ``label.name`` and ends ``label.e<i>``."""
        def rename(word):
            return tuple((f"{label}.{n}", e) for n, e in parse_word(word))

        gens = {f"{label}.{k}": np.array(v, dtype=float) for k, v in S.generator_matrices().items()}
        ends, cones, circles, mirror_items = {}, [], [], []
        for i, end in enumerate(S.ends):
            name = f"{label}.e{i}"
            spec = end.spec
            if isinstance(spec, Hyp):
                ends[name] = OpenEnd("closed", (rename(end.words[0]),), spec)
                circles.append(("plain", name))
            elif isinstance(spec, Cone):
                cones.append(spec.order)
            elif isinstance(spec, FullOrbifold):
                ends[name] = OpenEnd("full", tuple(rename(w) for w in end.words), spec)
                mirror_items.append(("full", name))
            elif isinstance(spec, Corner):
                mirror_items.append(("corner", spec.order))
        if mirror_items:
            circles.append(("mirror", tuple(mirror_items)))
        return cls(
            generators=gens,
            relations=[rename(w) for w in S.relations],
            tiles=[np.array(t, dtype=float) for t in S.tiles],
            ends=ends, cones=cones, circles=circles,
            provenance={"op": "elementary", "type": S.tag, "label": label},
        )

    # ------------------------------------------------------------------
    def generator_matrices(self) -> dict:
        return dict(self.generators)

    def holonomy(self, word) -> np.ndarray:
        return evaluate(word, self.generators)

    def relation_residuals(self) -> dict:
        return {format_word(parse_word(w)): identity_residual(self.holonomy(w)) for w in self.relations}

    def max_residual(self) -> float:
        res = self.relation_residuals()
        return max(res.values()) if res else 0.0

    def signature(self) -> OrbifoldSignature:
        bnd = []
        for kind, data in self.circles:
            if kind == "plain":
                bnd.append(BoundaryPattern.plain())
            else:
                bnd.append(BoundaryPattern(tuple(FULL if k == "full" else v for k, v in data)))
        return OrbifoldSignature(self.genus, self.orientable, tuple(self.cones), tuple(bnd))

    def euler_characteristic(self):
        return euler_characteristic(self.signature())

    def to_json(self) -> dict:
        return {
            "generators": {k: v.tolist() for k, v in self.generators.items()},
            "relations": [format_word(parse_word(w)) for w in self.relations],
            "tiles": [t.tolist() for t in self.tiles],
            "ends": {k: {"kind": e.kind, "words": [format_word(w) for w in e.words]}
                     for k, e in self.ends.items()},
            "signature": self.signature().to_json(),
            "chi": str(self.euler_characteristic()),
            "provenance": self.provenance,
        }

    # ------------------------------------------------------------------
    def _end(self, name: str, kind: str) -> OpenEnd:
        if name not in self.ends:
            raise MissingComponent(f"no open end named {name!r}")
        end = self.ends[name]
        if end.kind != kind:
            raise WrongBoundaryKind(f"end {name!r} is a {end.kind} end, expected {kind}")
        return end

    def _copy(self, provenance: dict) -> "ConvexStructure":
        return ConvexStructure(
            generators=dict(self.generators), relations=list(self.relations),
            tiles=list(self.tiles), ends=dict(self.ends), cones=list(self.cones),
            circles=list(self.circles), genus=self.genus, orientable=self.orientable,
            provenance=provenance,
        )

    def _fresh(self, base: str) -> str:
        name = base
        while name in self.generators:
            name += "'"
        return name


# --------------------------------------------------------------------------
# spectral helpers


def _det_one(m: np.ndarray) -> np.ndarray:
    d = float(np.linalg.det(m))
    n = m / abs(d) ** (1.0 / 3.0)
    return n if d > 0 else -n


def _check_hyperbolic(m: np.ndarray, tol: Tolerances):
    c = classify(m, tol)
    if c.kind == Kind.HYPERBOLIC:
        return c
    ev = np.linalg.eigvals(_det_one(m))
    if np.all(np.abs(ev.imag) < 1e-9) and np.min(ev.real) < 0:
        vals = np.sort(np.abs(ev.real))
        if vals[1] - vals[0] > tol.repeated_eigenvalue and vals[2] - vals[1] > tol.repeated_eigenvalue:
            raise NegativeEigenvalues(f"holonomy has negative eigenvalues {np.sort(ev.real)}")
    raise NotHyperbolic(f"holonomy is {c.kind.value}, not hyperbolic")


def hyperbolic_frame(m: np.ndarray, inside: Optional[np.ndarray] = None) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvector columns (attracting, saddle, repelling) and eigenvalues of a hyperbolic element.

    When ``inside`` is given, the columns are signed so that it has positive
    coordinates in the frame.
    """
    m = _det_one(m)
    ev, vec = np.linalg.eig(m)
    order = np.argsort(-ev.real)
    ev, vec = ev.real[order], vec.real[:, order]
    if inside is not None:
        coef = np.linalg.solve(vec, inside)
        vec = vec * np.where(coef < 0, -1.0, 1.0)
    return vec, ev


def fixed_points(m: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    vec, _ = hyperbolic_frame(m)
    return vec[:, 0], vec[:, 1], vec[:, 2]


def configuration_invariants(g: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Pencil cross-ratios of the fixed points of two hyperbolic elements.

    Two generic hyperbolic pairs are simultaneously conjugate only if all of
    these agree, since four of the points already fix a projective frame.
    """
    ag, sg, rg = fixed_points(g)
    ah, sh, rh = fixed_points(h)

    def pencil(c, pts):
        return cross_ratio_lines(*(np.cross(c, p) for p in pts))

    return np.array([
        pencil(ag, (rg, ah, rh, sh)), pencil(rg, (ag, ah, rh, sh)),
        pencil(ah, (ag, rg, rh, sg)), pencil(rh, (ag, rg, ah, sg)),
    ])


def _interior_point(S: ConvexStructure) -> np.ndarray:
    tile = S.tiles[0]
    return tile.sum(axis=0)


def _positive_covector(S: ConvexStructure) -> np.ndarray:
    from .devmap import _best_covector, _unit_rows, group_ball
    pts = []
    for _, m in group_ball(S.generators, 1):
        for t in S.tiles:
            pts.append((m @ t.T).T)
    phi, margin = _best_covector(_unit_rows(np.vstack(pts)))
    if margin <= 0:
        phi, _ = _best_covector(_unit_rows(np.vstack(S.tiles)))
    return phi


# --------------------------------------------------------------------------
# reflection pairs


def full_frame(S: ConvexStructure, end: OpenEnd) -> tuple[np.ndarray, float]:
    """Frame (b1, b2, q) for a full 1-orbifold and its ratio c.

    b_i are the isolated fixed points of the two reflections, q the meet of
    their mirrors.  b1 + b2 and b1 + c b2 are positive lifts of the segment's
    endpoints, and the structure's tiles lie on the side q > 0.
    """
    r1, r2 = (S.holonomy(w) for w in end.words)
    b1, a1 = reflection_data(r1)
    b2, a2 = reflection_data(r2)
    q = np.cross(a1, a2)
    b2 = b2 * (-(a1 @ b1) / (a1 @ b2))  # a1(b1 + b2) = 0
    c = -(a2 @ b1) / (a2 @ b2)  # a2(b1 + c b2) = 0
    phi = _positive_covector(S)
    if phi @ (b1 + b2) < 0:
        b1, b2 = -b1, -b2
    frame = np.column_stack([b1, b2, q])
    if np.linalg.solve(frame, _interior_point(S))[2] < 0:
        frame[:, 2] *= -1
    return frame, c


# --------------------------------------------------------------------------
# operations


def _probe(S: ConvexStructure, tol: Tolerances) -> bool:
    from .devmap import convexity_check, enumerate_tiles
    try:
        return convexity_check(enumerate_tiles(S, 2, tol), tol).passed
    except Exception:
        return False


def _merge(S1: ConvexStructure, S2: ConvexStructure, conj: np.ndarray):
    """Union of S1 and the conjugate of S2 by ``conj``, with S2's names made distinct."""
    out = S1._copy({})
    names = {}
    for k, v in S2.generators.items():
        n = k
        while n in out.generators:
            n += "'"
        names[k] = n
        out.generators[n] = conj @ v @ np.linalg.inv(conj)
    rename = _renamer(names)
    out.relations += [rename(w) for w in S2.relations]
    out.tiles += [(conj @ t.T).T for t in S2.tiles]
    end_names = {}
    for k, e in S2.ends.items():
        n = k
        while n in out.ends:
            n += "'"
        end_names[k] = n
        out.ends[n] = OpenEnd(e.kind, tuple(rename(w) for w in e.words), e.invariant)
    out.cones += S2.cones
    for kind, data in S2.circles:
        if kind == "plain":
            out.circles.append(("plain", end_names[data]))
        else:
            out.circles.append(("mirror", tuple((k, end_names[v]) if k == "full" else (k, v)
                                                for k, v in data)))
    if S1.orientable and S2.orientable:
        out.genus, out.orientable = S1.genus + S2.genus, True
    else:
        out.genus = (2 * S1.genus if S1.orientable else S1.genus) + \
                    (2 * S2.genus if S2.orientable else S2.genus)
        out.orientable = False
    return out, names, end_names


def _renamer(names: dict):
    return lambda w: tuple((names[n], e) for n, e in parse_word(w))


def _min_norm_frame(mats: list) -> np.ndarray:
    """Frame W making the entries of W^-1 M W (and of the inverses) as small as possible overall."""
    mats = [m / np.cbrt(abs(np.linalg.det(m))) for m in mats]
    mats += [np.linalg.inv(m) for m in mats]

    def cost(x):
        g = x.reshape(3, 3)
        gi = np.linalg.inv(g)
        v, c = 0.0, np.zeros((3, 3))
        for m in mats:
            n = g @ m @ gi
            v += float(np.sum(n * n))
            c += n @ n.T - n.T @ n
        return math.log(v), (2.0 * gi.T @ c / v).ravel()

    res = minimize(cost, np.eye(3).ravel(), jac=True, method="BFGS")
    return np.linalg.inv(res.x.reshape(3, 3))


def _settle(out: ConvexStructure, parts: list) -> ConvexStructure:
    """Move a composite into its min-norm frame.

    ``parts`` lists (structure, conjugator, names) for the inputs; their
    generators are conjugated exactly from their own coordinates, so the
    rounding happens once and in the good frame.
    """
    w = _min_norm_frame(list(out.generators.values()))
    gens = {}
    for S, conj, names in parts:
        frame = w if conj is None else np.linalg.solve(conj, w)
        for k, m in S.generators.items():
            gens[names.get(k, k)] = exact_conjugate(frame, m)
    out.generators = {k: gens[k] if k in gens else exact_conjugate(w, m)
                      for k, m in out.generators.items()}
    out.tiles = [np.linalg.solve(w, t.T).T for t in out.tiles]
    return out


def _add_handles(S: ConvexStructure, crosscaps: int) -> None:
    if S.orientable and crosscaps % 2 == 0:
        S.genus += crosscaps // 2
    else:
        S.genus = (2 * S.genus if S.orientable else S.genus) + crosscaps
        S.orientable = False


def _drop_plain(S: ConvexStructure, end: str) -> None:
    S.circles.remove(("plain", end))
    del S.ends[end]


def _inverse_word(w) -> tuple:
    return tuple((n, -e) for n, e in reversed(parse_word(w)))


def paste(S1: ConvexStructure, b1: str, S2: Optional[ConvexStructure], b2: str,
          params=(0.0, 0.0), tol: Tolerances = DEFAULT) -> ConvexStructure:
    """Glue end ``b1`` of S1 to end ``b2`` of S2 (or of S1 itself when S2 is None or S1).

    Closed ends take ``params = (u, v)``, full 1-orbifolds take ``params = (u,)``.
    """
    same = S2 is None or S2 is S1
    S2 = S1 if same else S2
    e1 = S1.ends.get(b1)
    if e1 is None:
        raise MissingComponent(f"no open end named {b1!r}")
    e2 = S2.ends.get(b2)
    if e2 is None:
        raise MissingComponent(f"no open end named {b2!r}")
    if same and b1 == b2:
        raise WrongBoundaryKind("an end cannot be pasted to itself; use crosscap")
    if e1.kind != e2.kind:
        raise WrongBoundaryKind(f"cannot paste a {e1.kind} end to a {e2.kind} end")
    params = tuple(float(p) for p in params)
    if e1.kind == "closed":
        if len(params) != 2:
            raise BadParameter("pasting closed ends takes two parameters (u, v)")
        return _paste_closed(S1, b1, S2, b2, same, params, tol)
    if len(params) != 1:
        raise BadParameter("pasting full 1-orbifolds takes one parameter u")
    return _paste_full(S1, b1, S2, b2, same, params[0], tol)


def _closed_alignment(S1, b1, S2, b2, tol):
    m1 = S1.holonomy(S1.ends[b1].words[0])
    m2 = S2.holonomy(S2.ends[b2].words[0])
    c1, c2 = _check_hyperbolic(m1, tol), _check_hyperbolic(m2, tol)
    if abs(c1.lam - c2.lam) > tol.invariant_match or abs(c1.tau - c2.tau) > tol.invariant_match:
        raise InvariantMismatch(
            f"end invariants differ: ({c1.lam}, {c1.tau}) vs ({c2.lam}, {c2.tau})")
    p1, _ = hyperbolic_frame(m1, _interior_point(S1))
    p2, _ = hyperbolic_frame(m2, _interior_point(S2))
    return p1, p2


def _paste_closed(S1, b1, S2, b2, same, params, tol):
    u, v = params
    p1, p2 = _closed_alignment(S1, b1, S2, b2, tol)
    g = p1 @ np.diag([math.exp(u), math.exp(v), math.exp(-u - v)]) @ np.linalg.inv(p1)
    prov = {"op": "paste", "ends": [b1, b2], "params": [u, v],
            "inputs": [S1.provenance] if same else [S1.provenance, S2.provenance]}
    w1 = S1.ends[b1].words[0]
    for side in (-1.0, 1.0):
        # attractor, saddle, repeller to the same; the saddle sign puts S2 across the axis
        f = g @ p1 @ np.diag([1.0, side, 1.0]) @ np.linalg.inv(p2)
        if same:
            out = S1._copy(prov)
            t = out._fresh("t")
            out.generators[t] = f
            w2 = S1.ends[b2].words[0]
            out.relations.append(((t, 1),) + parse_word(w2) + ((t, -1),) + _inverse_word(w1))
            _drop_plain(out, b1)
            _drop_plain(out, b2)
            _add_handles(out, 2)
        else:
            out, names, end_names = _merge(S1, S2, f)
            out.provenance = prov
            w2 = _renamer(names)(S2.ends[b2].words[0])
            out.relations.append(parse_word(w1) + _inverse_word(w2))
            _drop_plain(out, b1)
            _drop_plain(out, end_names[b2])
        if _probe(out, tol):
            return _settle(out, [(S1, None, {})] + ([] if same else [(S2, f, names)]))
    raise OrientationClash("neither side alignment passes the local convexity probe")


def _paste_full(S1, b1, S2, b2, same, u, tol):
    x1 = full_invariant(*(S1.holonomy(w) for w in S1.ends[b1].words))
    x2 = full_invariant(*(S2.holonomy(w) for w in S2.ends[b2].words))
    if abs(x1 - x2) > tol.invariant_match:
        raise InvariantMismatch(f"full 1-orbifold invariants differ: {x1} vs {x2}")
    f1, _ = full_frame(S1, S1.ends[b1])
    f2, _ = full_frame(S2, S2.ends[b2])
    prov = {"op": "paste", "ends": [b1, b2], "params": [u],
            "inputs": [S1.provenance] if same else [S1.provenance, S2.provenance]}
    words1 = S1.ends[b1].words
    for side in (-1.0, 1.0):
        f = f1 @ np.diag([1.0, 1.0, side * math.exp(u)]) @ np.linalg.inv(f2)
        if same:
            out = S1._copy(prov)
            t = out._fresh("t")
            out.generators[t] = f
            words2 = S1.ends[b2].words
            for wa, wb in zip(words1, words2):
                out.relations.append(((t, 1),) + parse_word(wb) + ((t, -1),) + _inverse_word(wa))
            _paste_full_circles(out, b1, b2)
        else:
            out, names, end_names = _merge(S1, S2, f)
            out.provenance = prov
            for wa, wb in zip(words1, S2.ends[b2].words):
                out.relations.append(parse_word(wa) + _inverse_word(_renamer(names)(wb)))
            _paste_full_circles(out, b1, end_names[b2])
        if _probe(out, tol):
            return _settle(out, [(S1, None, {})] + ([] if same else [(S2, f, names)]))
    raise OrientationClash("neither side alignment passes the local convexity probe")


def _circle_with(S: ConvexStructure, end: str) -> tuple[int, int]:
    for ci, (kind, data) in enumerate(S.circles):
        if kind == "mirror":
            for ii, item in enumerate(data):
                if item == ("full", end):
                    return ci, ii
    raise MissingComponent(f"no full 1-orbifold named {end!r}")


def _paste_full_circles(S: ConvexStructure, a: str, b: str) -> None:
    ca, ia = _circle_with(S, a)
    cb, ib = _circle_with(S, b)
    items_a = S.circles[ca][1]
    items_a = items_a[ia:] + items_a[:ia]
    if ca == cb:
        j = (ib - ia) % len(items_a)
        left, right = items_a[1:j], items_a[j + 1:]
        S.circles[ca] = ("mirror", left)
        S.circles.append(("mirror", right))
    else:
        items_b = S.circles[cb][1]
        items_b = items_b[ib:] + items_b[:ib]
        # pasting two circles of one connected piece adds a handle; of two pieces, nothing
        merged = ("mirror", items_a[1:] + items_b[1:])
        for ci in sorted((ca, cb), reverse=True):
            del S.circles[ci]
        S.circles.append(merged)
    del S.ends[a]
    del S.ends[b]


def crosscap(S: ConvexStructure, b: str, tol: Tolerances = DEFAULT) -> ConvexStructure:
    """Close a boundary curve by the hyperbolic slide reflection squaring to its holonomy."""
    end = S._end(b, "closed")
    m = S.holonomy(end.words[0])
    _check_hyperbolic(m, tol)
    p, ev = hyperbolic_frame(m, _interior_point(S))
    big, mid, lam = ev
    half = p @ np.diag([math.sqrt(big), -math.sqrt(mid), math.sqrt(lam)]) @ np.linalg.inv(p)
    out = S._copy({"op": "crosscap", "end": b, "inputs": [S.provenance]})
    name = out._fresh("c")
    out.generators[name] = half
    w = parse_word(end.words[0])
    out.relations.append(((name, 2),) + _inverse_word(w))
    _drop_plain(out, b)
    _add_handles(out, 1)
    return out


def silver(S: ConvexStructure, b: str, tol: Tolerances = DEFAULT) -> ConvexStructure:
    """Turn a boundary component into mirror points."""
    if b not in S.ends:
        raise MissingComponent(f"no open end named {b!r}")
    end = S.ends[b]
    out = S._copy({"op": "silver", "end": b, "inputs": [S.provenance]})
    if end.kind == "closed":
        m = S.holonomy(end.words[0])
        _check_hyperbolic(m, tol)
        p, _ = hyperbolic_frame(m, _interior_point(S))
        refl = p @ np.diag([1.0, -1.0, 1.0]) @ np.linalg.inv(p)
        name = out._fresh("F")
        out.generators[name] = refl
        w = parse_word(end.words[0])
        out.relations += [((name, 2),), ((name, 1),) + w + ((name, -1),) + _inverse_word(w)]
        ci = out.circles.index(("plain", b))
        out.circles[ci] = ("mirror", ())
        del out.ends[b]
        return out
    frame, _ = full_frame(S, end)
    refl = frame @ np.diag([1.0, 1.0, -1.0]) @ np.linalg.inv(frame)
    name = out._fresh("F")
    out.generators[name] = refl
    w1, w2 = (parse_word(w) for w in end.words)
    out.relations += [((name, 2),), (((name, 1),) + w1) * 2, (((name, 1),) + w2) * 2]
    ci, ii = _circle_with(out, b)
    items = out.circles[ci][1]
    out.circles[ci] = ("mirror", items[:ii] + (("corner", 2), ("corner", 2)) + items[ii + 1:])
    del out.ends[b]
    return out


def fold(S: ConvexStructure, b: str, param: Optional[float] = None,
         tol: Tolerances = DEFAULT) -> ConvexStructure:
    """Fold a boundary component by an order-two symmetry.

    A closed end needs a purely hyperbolic holonomy and ``param = c > 0``,
    the position of the new isolated fixed point on the axis.  A full
    1-orbifold takes no parameter.
    """
    if b not in S.ends:
        raise MissingComponent(f"no open end named {b!r}")
    end = S.ends[b]
    out = S._copy({"op": "fold", "end": b, "param": param, "inputs": [S.provenance]})
    name = out._fresh("F")
    if end.kind == "closed":
        if param is None or not param > 0:
            raise BadParameter(f"folding a closed end needs c > 0, got {param!r}")
        m = S.holonomy(end.words[0])
        c = classify(m, tol)
        if c.kind != Kind.HYPERBOLIC:
            _check_hyperbolic(m, tol)
        if not c.purely_hyperbolic:
            raise NotPurelyHyperbolic(
                f"middle eigenvalue must be 1; invariants ({c.lam}, {c.tau}) give "
                f"tau - 1 - 1/lambda = {c.tau - 1 - 1 / c.lam:.3e}")
        p, _ = hyperbolic_frame(m, _interior_point(S))
        # e1 -> e3/c, e3 -> c e1 up to sign; the isolated point sqrt(c) e1 + e3/sqrt(c) sits on
        # the open axis segment and keeps eigenvalue +1 so positive lifts stay positive
        k = float(param)
        local = np.array([[0.0, 0.0, k], [0.0, -1.0, 0.0], [1.0 / k, 0.0, 0.0]])
        out.generators[name] = p @ local @ np.linalg.inv(p)
        w = parse_word(end.words[0])
        out.relations += [((name, 2),), (((name, 1),) + w) * 2]
        _drop_plain(out, b)
        out.cones += [2, 2]
        return out
    if param is not None:
        raise BadParameter("folding a full 1-orbifold takes no parameter")
    frame, ratio = full_frame(S, end)
    s = math.sqrt(ratio)
    # swaps b1 and b2 so that b1 + c b2 <-> b1 + b2; fixes q and the midpoint b1 + sqrt(c) b2
    local = np.array([[0.0, 1.0 / s, 0.0], [s, 0.0, 0.0], [0.0, 0.0, -1.0]])
    out.generators[name] = frame @ local @ np.linalg.inv(frame)
    w1, w2 = (parse_word(w) for w in end.words)
    out.relations += [((name, 2),), ((name, 1),) + w1 + ((name, -1),) + _inverse_word(w2)]
    ci, ii = _circle_with(out, b)
    items = out.circles[ci][1]
    out.circles[ci] = ("mirror", items[ii + 1:] + items[:ii])
    del out.ends[b]
    out.cones.append(2)
    return out
