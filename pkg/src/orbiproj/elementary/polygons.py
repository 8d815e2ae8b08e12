"""Reflection polygons: D1 (hexagon), D2 (pentagon), D3 (quadrilateral), D4 (triangle).

Mirror edges carry reflections ``r_i = I - b_i a_i^T`` with ``a_i`` the line
of the edge (positive on the polygon) and ``a_i(b_i) = 2``.  At a corner
reflector of order n between mirrors i and j the Cartan entries
``c_ij = a_i(b_j)`` are negative with ``c_ij c_ji = 4 cos^2(pi/n)``; for
n = 2 both vanish.  Boundary full 1-orbifolds sit between two mirrors whose
isolated fixed points lie on the line of the boundary edge.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from ..errors import BadOrder, BadParameter, BothOrdersTwo, ConstraintViolated, FiberArityMismatch
from ..orbifold import ElementaryType
from ..projective import Collineation, reflection_matrix
from .structure import Corner, ElementaryStructure, End, FullOrbifold, check_full, reflection_data

V1 = np.array([0.0, 0.0, 1.0])
V2 = np.array([1.0, 0.0, 1.0])
V3 = np.array([1.0, 1.0, 1.0])
V4 = V3
V6 = np.array([0.0, 1.0, 1.0])


def _order(n, what: str = "corner order") -> int:
    if int(n) != n or n < 2:
        raise BadOrder(f"{what} must be an integer >= 2, got {n!r}")
    return int(n)


def _fiber(fiber, needed: bool, what: str) -> Optional[float]:
    if needed and fiber is None:
        raise FiberArityMismatch(f"{what} requires a fiber coordinate")
    if not needed and fiber is not None:
        raise FiberArityMismatch(f"{what} is rigid; omit the fiber coordinate")
    return None if fiber is None else float(fiber)


def _t_from_invariant(inv: float) -> float:
    return 1.0 / (1.0 - check_full(inv))


def _mirror_pairings(tile_len: int, mirrors: dict) -> list:
    out = []
    for side, name in mirrors.items():
        pair = [side, (side + 1) % tile_len]
        out.append({"tile": 0, "side": pair, "word": name, "to_tile": 0, "to_side": pair})
    return out


def _word(*names) -> tuple:
    return tuple((n, 1) for n in names)


def cartan_normal_form(gens: dict, corners: dict) -> tuple[dict, np.ndarray]:
    """Rebuild three reflections from their Cartan matrix in a balanced frame.

    ``corners`` maps a pair of generator names to its corner order; those
    products are reset to exactly 4 cos^2(pi/n) before the rebuild.  Returns
    the new generators and the frame (columns) they are written in.
    """
    names = list(gens)
    data = [reflection_data(np.asarray(gens[k], dtype=float)) for k in names]
    c = np.array([[a @ b for b, _ in data] for _, a in data])
    for (p, q), n in corners.items():
        i, j = names.index(p), names.index(q)
        if n == 2:
            c[i, j] = c[j, i] = 0.0
        else:
            scale = math.sqrt(4.0 * math.cos(math.pi / n) ** 2 / (c[i, j] * c[j, i]))
            c[i, j] *= scale
            c[j, i] *= scale
    # diagonal rescaling of the frame: make |c_ij| = |c_ji| where both are nonzero
    rows, rhs = [[1.0, 0.0, 0.0]], [0.0]
    for i in range(3):
        for j in range(i + 1, 3):
            if c[i, j] != 0.0 and c[j, i] != 0.0:
                e = np.zeros(3)
                e[j], e[i] = 1.0, -1.0
                rows.append(e)
                rhs.append(0.5 * math.log(abs(c[j, i] / c[i, j])))
    logd = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)[0]
    d = np.exp(logd)
    balanced = c * d[None, :] / d[:, None]
    frame = np.column_stack([data[j][0] * d[j] for j in range(3)])
    out = {}
    for i, k in enumerate(names):
        m = np.eye(3)
        m[i, :] -= balanced[i, :]
        out[k] = m
    return out, frame


def _structure(tag, orders, gens, tile, ends, fiber, relations, mirrors, data=None, corners=None):
    data = data or {}
    if corners:
        # high-order corners are too sensitive to store in the normalized vertex frame;
        # ``data`` keeps the construction-frame quantities and the frame that maps them over
        gens, frame = cartan_normal_form(gens, corners)
        tile = [np.linalg.solve(frame, v) for v in tile]
        data["frame"] = frame
    return ElementaryStructure(
        type=ElementaryType(tag, tuple(orders)),
        generators={k: Collineation(v) for k, v in gens.items()},
        relations=relations,
        tiles=[np.array(tile, dtype=float)],
        ends=ends,
        fiber_params=() if fiber is None else (fiber,),
        side_pairings=_mirror_pairings(len(tile), mirrors),
        data=data,
    )


def _corner_relation(a: str, b: str, n: int) -> tuple:
    return _word(a, b) * n


def solve_hexagon_D1(inv_e2: float, inv_e4: float, inv_e6: float, fiber: float) -> ElementaryStructure:
    """Hexagon with mirrors e1, e3, e5 alternating with boundary full 1-orbifolds e2, e4, e6."""
    t3 = _t_from_invariant(inv_e2)
    t5 = _t_from_invariant(inv_e6)
    check_full(inv_e4)
    fiber = _fiber(fiber, True, "D1")
    x1 = np.array([0.0, 1.0, 0.0])
    x3 = np.array([1.0, t3, 1.0])
    x5 = np.array([0.0, t5, 1.0])
    c = math.exp(fiber) * math.sqrt(inv_e4)
    v4 = x3 + c * x5
    v5 = x3 + (c / inv_e4) * x5
    v4, v5 = v4 / v4[2], v5 / v5[2]
    r1 = reflection_matrix(np.array([0.0, 1.0, 0.0]), x1)
    r3 = reflection_matrix(np.cross(V3, v4), x3)
    r5 = reflection_matrix(np.cross(v5, V6), x5)
    tile = [V1, V2, V3, v4, v5, V6]
    ends = [End(FullOrbifold(inv_e2), (_word("r1"), _word("r3"))),
            End(FullOrbifold(inv_e4), (_word("r3"), _word("r5"))),
            End(FullOrbifold(inv_e6), (_word("r5"), _word("r1")))]
    relations = [(("r1", 2),), (("r3", 2),), (("r5", 2),)]
    return _structure("D1", (), {"r1": r1, "r3": r3, "r5": r5}, tile, ends, fiber, relations,
                      {0: "r1", 2: "r3", 4: "r5"}, {"x": (x1, x3, x5)})


def solve_pentagon_D2(corner_order: int, inv_e1: float, inv_e4: float,
                      fiber: Optional[float] = None) -> ElementaryStructure:
    """Pentagon with one corner reflector of order n and boundary full 1-orbifolds e1, e4."""
    n = _order(corner_order)
    t2 = _t_from_invariant(inv_e1)
    t3 = _t_from_invariant(inv_e4)
    fiber = _fiber(fiber, n >= 3, f"D2 with corner order {n}")
    x2 = np.array([t2, 0.0, 1.0])
    x3 = np.array([t3, 1.0, 1.0])
    x5 = np.array([1.0, 0.0, 0.0])
    # a line through v2 (resp. v4) meets the segment x2 x3 at x3 + k x2 (resp. x2 + k' x3);
    # the corner has order n exactly when k k' = cos^2(pi/n) with k, k' >= 0
    if n == 2:
        k = kp = 0.0
    else:
        cn = math.cos(math.pi / n)
        k, kp = cn * math.exp(fiber), cn * math.exp(-fiber)
    l2 = np.cross(V2, x3 + k * x2)
    l3 = np.cross(V4, x2 + kp * x3)
    v3 = np.cross(l2, l3)
    v3 = v3 / v3[2]
    r2 = reflection_matrix(l2, x2)
    r3 = reflection_matrix(l3, x3)
    r5 = reflection_matrix(np.array([1.0, 0.0, 0.0]), x5)
    tile = [V1, V2, v3, V4, V6]
    ends = [End(FullOrbifold(inv_e1), (_word("r5"), _word("r2"))),
            End(Corner(n), (_word("r2"), _word("r3"))),
            End(FullOrbifold(inv_e4), (_word("r3"), _word("r5")))]
    relations = [(("r2", 2),), (("r3", 2),), (("r5", 2),), _corner_relation("r2", "r3", n)]
    return _structure("D2", (n,), {"r2": r2, "r3": r3, "r5": r5}, tile, ends, fiber, relations,
                      {1: "r2", 2: "r3", 4: "r5"}, {"x": (x2, x3, x5), "v3": v3},
                      corners={("r2", "r3"): n})


def quad_fiber_chart(inv: float, fiber: float) -> float:
    """Coefficient c in (inv, 1) placing the boundary pair of a quadrilateral."""
    sigma = 1.0 / (1.0 + math.exp(fiber))
    return inv ** sigma


def solve_quad_D3(order_m: int, order_n: int, inv_e1: float,
                  fiber: Optional[float] = None) -> ElementaryStructure:
    """Quadrilateral with corner reflectors of order n at v3 and m at v4 and a boundary edge e1."""
    m = _order(order_m)
    n = _order(order_n)
    if m == 2 and n == 2:
        raise BothOrdersTwo("two corner reflectors of order two leave Euler characteristic zero")
    check_full(inv_e1)
    fiber = _fiber(fiber, min(m, n) >= 3, f"D3 with corner orders ({m}, {n})")
    a2 = np.array([-1.0, 0.0, 1.0])
    a3 = np.array([0.0, -1.0, 1.0])
    a4 = np.array([1.0, 0.0, 0.0])
    # isolated fixed points of r2, r4 on the boundary line y = 0, lifted so a_i(b_i) = 2
    if n == 2:
        b2 = np.array([-2.0, 0.0, 0.0])
        t4 = -inv_e1 / (1.0 - inv_e1)
        b4 = np.array([2.0, 0.0, 2.0 / t4])
    elif m == 2:
        b4 = np.array([2.0, 0.0, 0.0])
        t2 = 1.0 / (1.0 - inv_e1)
        q = 2.0 / (1.0 - t2)
        b2 = np.array([t2 * q, 0.0, q])
    else:
        c = quad_fiber_chart(inv_e1, fiber)
        t2 = 1.0 / (1.0 - c)
        t4 = inv_e1 / (inv_e1 - c)
        q = 2.0 / (1.0 - t2)
        b2 = np.array([t2 * q, 0.0, q])
        b4 = np.array([2.0, 0.0, 2.0 / t4])
    cn = 4.0 * math.cos(math.pi / n) ** 2 if n > 2 else 0.0
    cm = 4.0 * math.cos(math.pi / m) ** 2 if m > 2 else 0.0
    c32 = float(a3 @ b2)
    c34 = float(a3 @ b4)
    rhs = np.array([2.0, cn / c32 if n > 2 else 0.0, cm / c34 if m > 2 else 0.0])
    b3 = np.linalg.solve(np.array([a3, a2, a4]), rhs)
    gens = {"r2": np.eye(3) - np.outer(b2, a2),
            "r3": np.eye(3) - np.outer(b3, a3),
            "r4": np.eye(3) - np.outer(b4, a4)}
    tile = [V1, V2, V3, V6]
    ends = [End(FullOrbifold(inv_e1), (_word("r4"), _word("r2"))),
            End(Corner(n), (_word("r2"), _word("r3"))),
            End(Corner(m), (_word("r3"), _word("r4")))]
    relations = [(("r2", 2),), (("r3", 2),), (("r4", 2),),
                 _corner_relation("r2", "r3", n), _corner_relation("r3", "r4", m)]
    return _structure("D3", (n, m), gens, tile, ends, fiber, relations,
                      {1: "r2", 2: "r3", 3: "r4"}, {"b": (b2, b3, b4)},
                      corners={("r2", "r3"): n, ("r3", "r4"): m})


def triangle_cartan(p: int, q: int, r: int, mu: float = 1.0) -> np.ndarray:
    """Cartan matrix with corners p (mirrors 1,2), q (2,3), r (3,1) and cyclic product ratio mu."""
    orders = {(0, 1): p, (1, 2): q, (2, 0): r}
    c = 2.0 * np.eye(3)
    k = mu ** (1.0 / 6.0)
    for (i, j), n in orders.items():
        base = -2.0 * math.cos(math.pi / n) if n > 2 else 0.0
        c[i, j] = base * k
        c[j, i] = base / k
    return c


def solve_triangle_D4(p: int, q: int, r: int, mu: Optional[float] = None) -> ElementaryStructure:
    """Reflection triangle with corner orders p, q, r; ``mu`` is the cyclic Cartan product ratio."""
    p, q, r = (_order(x) for x in (p, q, r))
    if 1.0 / p + 1.0 / q + 1.0 / r >= 1.0 - 1e-12:
        raise ConstraintViolated(f"1/{p} + 1/{q} + 1/{r} is not below 1")
    rigid = min(p, q, r) == 2
    if mu is not None and not rigid and not mu > 0:
        raise BadParameter(f"mu must be positive, got {mu!r}")
    mu = _fiber(mu, not rigid, f"D4 with orders ({p}, {q}, {r})")
    cartan = triangle_cartan(p, q, r, 1.0 if mu is None else mu)
    gens = {}
    for i in range(3):
        e = np.zeros(3)
        e[i] = 1.0
        gens[f"r{i + 1}"] = np.eye(3) - np.outer(cartan[:, i], e)
    # mirror i is the line x_i = 0; its side joins the two other vertices
    tile = [np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]), np.array([0.0, 0.0, 1.0])]
    ends = [End(Corner(p), (_word("r1"), _word("r2"))),
            End(Corner(q), (_word("r2"), _word("r3"))),
            End(Corner(r), (_word("r3"), _word("r1")))]
    relations = [(("r1", 2),), (("r2", 2),), (("r3", 2),),
                 _corner_relation("r1", "r2", p), _corner_relation("r2", "r3", q),
                 _corner_relation("r3", "r1", r)]
    return _structure("D4", (p, q, r), gens, tile, ends, mu, relations,
                      {1: "r1", 2: "r2", 0: "r3"}, {"cartan": cartan})
