"""Finite-depth developing maps: tile enumeration, convexity checks and SVG output."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import shapely
from scipy.optimize import linprog
from scipy.spatial import cKDTree

from .errors import ChartFailure, ExplosionLimit
from .projective import Collineation, identity_residual
from .tolerances import DEFAULT, Tolerances


@dataclass
class Tile:
    polygon: np.ndarray  # vertex lifts, one row per vertex
    word: str
    depth: int
    base: int  # index of the fundamental tile it translates


@dataclass
class Tessellation:
    tiles: list
    chart: np.ndarray  # covector of the affine patch; the excluded line is chart = 0
    source: str = ""
    elements: list = field(default_factory=list)  # (word, matrix) per group element

    def chart_points(self, tile: Tile) -> np.ndarray:
        return to_chart(self.chart, tile.polygon)

    def to_json(self) -> dict:
        return {
            "tiles": [{"word": t.word, "depth": t.depth,
                       "vertices": self.chart_points(t).tolist()} for t in self.ordered()],
            "chart": {"covector": self.chart.tolist()},
        }

    def ordered(self) -> list:
        return sorted(self.tiles, key=lambda t: (t.depth, t.word, t.base))


@dataclass
class ConvexityReport:
    passed: bool
    hull_defect: float
    overlap_count: int
    crossing_infinity: int = 0

    def to_json(self) -> dict:
        return {"passed": self.passed, "hull_defect": self.hull_defect,
                "overlap_count": self.overlap_count, "crossing_infinity": self.crossing_infinity}


# --------------------------------------------------------------------------
# group ball


def _letters(generators: dict) -> list:
    """(letter name, matrix, inverse letter name); involutions appear once."""
    out = []
    for name in sorted(generators):
        g = generators[name]
        m = g.matrix if isinstance(g, Collineation) else np.asarray(g, dtype=float)
        if identity_residual(m @ m) < 1e-8:
            out.append((name, m, name))
        else:
            out.append((name, m, f"{name}^-1"))
            out.append((f"{name}^-1", np.linalg.inv(m), name))
    return out


def _dedup_key(m: np.ndarray) -> np.ndarray:
    """Unit Frobenius norm; the sign is left free and both signs are searched."""
    flat = m.reshape(-1)
    return flat / np.linalg.norm(flat)


def group_ball(generators: dict, depth: int, tol: Tolerances = DEFAULT,
               cap: Optional[int] = None) -> list:
    """Distinct group elements of word length <= depth as (word tuple, matrix), shortest words first."""
    cap = tol.tile_cap if cap is None else cap
    letters = _letters(generators)
    inverse_of = {name: inv for name, _, inv in letters}
    elements = [((), np.eye(3))]
    keys = [_dedup_key(np.eye(3))]
    frontier = [((), np.eye(3))]
    for _ in range(depth):
        tree = cKDTree(np.array(keys))
        cands, cand_keys = [], []
        for word, m in frontier:
            last = word[-1] if word else None
            for name, g, _ in letters:
                if last is not None and inverse_of[last] == name:
                    continue
                nm = m @ g
                cands.append((word + (name,), nm))
                cand_keys.append(_dedup_key(nm))
        if not cands:
            break
        ck = np.array(cand_keys)
        n = len(ck)
        seen = np.array([bool(a) or bool(b) for a, b in zip(
            tree.query_ball_point(ck, tol.dedup, p=np.inf, return_length=True),
            tree.query_ball_point(-ck, tol.dedup, p=np.inf, return_length=True))])
        # duplicates inside the new layer, up to sign: keep the first occurrence
        ctree = cKDTree(np.vstack([ck, -ck]))
        drop = set()
        for i, j in sorted(ctree.query_pairs(tol.dedup, p=np.inf)):
            i, j = sorted((i % n, j % n))
            if i != j and i not in drop:
                drop.add(j)
        frontier = []
        for idx, (c, k) in enumerate(zip(cands, ck)):
            if seen[idx] or idx in drop:
                continue
            frontier.append(c)
            elements.append(c)
            keys.append(k)
        if len(elements) > cap:
            raise ExplosionLimit(f"group ball exceeds the cap of {cap} elements")
    return elements


def _word_text(word: tuple) -> str:
    return " ".join(word)


# --------------------------------------------------------------------------
# charts


def _best_covector(points: np.ndarray) -> tuple[np.ndarray, float]:
    """Covector maximizing the minimum of phi . p over unit lifts p, with |phi_i| <= 1."""
    n = len(points)
    c = np.zeros(4)
    c[3] = -1.0
    a_ub = np.hstack([-points, np.ones((n, 1))])
    b_ub = np.zeros(n)
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=[(-1, 1)] * 3 + [(None, 1)], method="highs")
    if res.status != 0:
        return np.array([0.0, 0.0, 1.0]), -math.inf
    return res.x[:3], float(res.x[3])


def _unit_rows(pts: np.ndarray) -> np.ndarray:
    return pts / np.linalg.norm(pts, axis=1)[:, None]


def choose_chart(tiles: list) -> np.ndarray:
    allpts = _unit_rows(np.vstack([t.polygon for t in tiles]))
    phi, margin = _best_covector(allpts)
    if margin > 1e-12:
        return phi
    near = [t for t in tiles if t.depth <= 1]
    pts = _unit_rows(np.vstack([t.polygon for t in near]))
    phi, margin = _best_covector(pts)
    if margin > 1e-12:
        return phi
    raise ChartFailure(f"no affine patch contains the depth-1 tiles (best margin {margin:.3e})")


def _chart_basis(phi: np.ndarray) -> np.ndarray:
    u = phi / np.linalg.norm(phi)
    basis = []
    for e in np.eye(3):
        w = e - (e @ u) * u
        for b in basis:
            w = w - (w @ b) * b
        if np.linalg.norm(w) > 1e-6:
            basis.append(w / np.linalg.norm(w))
        if len(basis) == 2:
            break
    return np.array(basis)


def to_chart(phi: np.ndarray, pts: np.ndarray) -> np.ndarray:
    pts = np.atleast_2d(pts)
    basis = _chart_basis(phi)
    denom = pts @ phi
    return (pts @ basis.T) / denom[:, None]


# --------------------------------------------------------------------------
# enumeration


def enumerate_tiles(S, depth: int, tol: Tolerances = DEFAULT) -> Tessellation:
    """Translates of the fundamental tiles by all group elements of word length <= depth."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    gens = S.generator_matrices() if hasattr(S, "generator_matrices") else S.generators
    ball = group_ball(gens, depth, tol)
    base = [np.asarray(t, dtype=float) for t in S.tiles]
    if len(ball) * len(base) > tol.tile_cap:
        raise ExplosionLimit(f"{len(ball) * len(base)} tiles exceed the cap of {tol.tile_cap}")
    tiles = []
    for word, m in ball:
        for i, poly in enumerate(base):
            tiles.append(Tile((m @ poly.T).T, _word_text(word), len(word), i))
    chart = choose_chart(tiles)
    return Tessellation(tiles, chart, source=getattr(S, "tag", ""),
                        elements=[(_word_text(w), m) for w, m in ball])


# --------------------------------------------------------------------------
# convexity


def _tile_defect(xy: np.ndarray) -> float:
    """Largest distance from the tile boundary to the boundary of its convex hull."""
    poly = shapely.Polygon(xy)
    if not poly.is_valid or poly.area <= DEFAULT.degenerate_area:
        return math.inf
    return float(shapely.hausdorff_distance(poly.exterior, poly.convex_hull.exterior))


def convexity_check(T: Tessellation, tol: Tolerances = DEFAULT) -> ConvexityReport:
    """Every tile convex and in the patch, and no two tile interiors overlap.

    ``hull_defect`` is the largest distance between a tile and its convex hull,
    in chart units with the diameter of all vertices scaled to 1.  It is
    infinite when a tile leaves the affine patch or is not a simple polygon.
    """
    phi = T.chart
    crossing = 0
    polys, samples, owners = [], [], []
    defect = 0.0
    for idx, t in enumerate(T.tiles):
        lifts = _unit_rows(t.polygon)
        side = lifts @ phi
        if not (np.all(side > 0) or np.all(side < 0)):
            crossing += 1
            polys.append(None)
            continue
        xy = to_chart(phi, t.polygon)
        defect = max(defect, _tile_defect(xy))
        poly = shapely.Polygon(xy)
        polys.append(poly)
        cen = xy.mean(axis=0)
        pts = [cen] + [0.5 * (cen + v) for v in xy]
        samples.extend(pts)
        owners.extend([idx] * len(pts))
    valid = [i for i, p in enumerate(polys) if p is not None]
    diam = 1.0
    if valid:
        allxy = np.vstack([np.asarray(polys[i].exterior.coords) for i in valid])
        diam = float(np.max(np.ptp(allxy, axis=0))) or 1.0
    defect = math.inf if crossing else defect / diam
    overlaps = 0
    if valid and samples:
        geoms = [polys[i] for i in valid]
        tree = shapely.STRtree(geoms)
        pts = shapely.points(np.array(samples))
        margin = 1e-10 * diam
        pi, gi = tree.query(pts, predicate="within")
        owners_arr = np.array(owners)
        hits = set()
        for p, g in zip(pi.tolist(), gi.tolist()):
            other = valid[g]
            if other == owners_arr[p]:
                continue
            if geoms[g].exterior.distance(pts[p]) <= margin:
                continue
            hits.add((min(other, owners_arr[p]), max(other, owners_arr[p])))
        overlaps = len(hits)
    passed = defect < tol.convexity and overlaps == 0 and crossing == 0
    return ConvexityReport(passed, defect, overlaps, crossing)


# --------------------------------------------------------------------------
# output

PALETTE = ("#f4d6a0", "#c8e0b4", "#a9cce3", "#d7bde2", "#f5b7b1", "#fad7a0", "#aed6f1")


def render_svg(T: Tessellation, width: int = 800, stroke: str = "#000000",
               palette=PALETTE, clip: Optional[tuple] = None, stroke_width: float = 0.6) -> str:
    """Standalone SVG 1.1 document, one path per tile, stable order by (depth, word)."""
    tiles = T.ordered()
    xys = [T.chart_points(t) for t in tiles]
    allxy = np.vstack(xys)
    if clip is not None:
        xmin, ymin, xmax, ymax = clip
    else:
        xmin, ymin = allxy.min(axis=0)
        xmax, ymax = allxy.max(axis=0)
    w, h = max(xmax - xmin, 1e-12), max(ymax - ymin, 1e-12)
    pad = 0.05 * max(w, h)
    xmin, ymin, w, h = xmin - pad, ymin - pad, w + 2 * pad, h + 2 * pad
    scale = width / w
    height = int(round(h * scale))

    def fmt(x: float) -> str:
        return f"{x:.3f}"

    lines = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
    ]
    for t, xy in zip(tiles, xys):
        px = (xy[:, 0] - xmin) * scale
        py = (ymin + h - xy[:, 1]) * scale
        d = "M " + " L ".join(f"{fmt(a)} {fmt(b)}" for a, b in zip(px, py)) + " Z"
        fill = palette[t.depth % len(palette)] if palette else "none"
        lines.append(f'<path d="{d}" fill="{fill}" stroke="{stroke}" '
                     f'stroke-width="{stroke_width}" data-word="{t.word}" data-depth="{t.depth}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def dump_json(T: Tessellation) -> str:
    return json.dumps(T.to_json(), indent=1)
