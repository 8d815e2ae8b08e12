"""Annular and one-cone elementary orbifolds: A1, A2, A3, A4.

All four share the same picture: a holonomy ``T`` (hyperbolic for A1/A2, a
rotation for A3/A4) acting on a convex domain whose outer boundary is a
``T``-invariant polygonal arc through [1, 1, 1], and one reflection ``r``
whose conjugates by powers of ``T`` silver the mirror edges of that arc.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from ..errors import BadOrder, ConstraintViolated, FiberArityMismatch
from ..orbifold import ElementaryType
from ..projective import Collineation, hyperbolic_eigenvalues, reflection_matrix, rotation_of_order
from .structure import (Cone, Corner, ElementaryStructure, End, FullOrbifold, Hyp, check_full,
                        exact_conjugate, reflection_data, unit_columns)

ONE = np.array([1.0, 1.0, 1.0])
SADDLE = np.array([1.0, 0.0, 0.0])
CENTER = np.array([0.0, 0.0, 1.0])

FULL_WORDS = ((("r", 1),), (("T", 1), ("r", 1), ("T", -1)))


def _hyperbolic_theta(end: Hyp) -> np.ndarray:
    """Diagonal holonomy: [0,1,0] attracting, [1,0,0] saddle, [0,0,1] repelling."""
    end.check()
    big, mid, lam = hyperbolic_eigenvalues(end.lam, end.tau)
    return np.diag([mid, big, lam])


def _to_principal_line(p: np.ndarray) -> np.ndarray:
    """Projection from the saddle point onto the principal line x = 0."""
    return np.array([0.0, p[1], p[2]])


def _full_pair(theta: np.ndarray, full_inv: float, fiber: float):
    """Points p, q on the segment from [1,1,1] to T[1,1,1] with the given cross-ratio."""
    check_full(full_inv)
    y, z = ONE, theta @ ONE
    c = math.exp(fiber) * math.sqrt(full_inv)
    p = y + c * z
    q = y + (c / full_inv) * z
    return p / p.sum(), q / q.sum()


def _reflection_for_pair(theta, p, q) -> np.ndarray:
    """Reflection with isolated point [1,1,1] fixing the segment from p to T^-1 q."""
    q_back = np.linalg.solve(theta, q)
    axis = np.cross(p, q_back)
    return reflection_matrix(axis, ONE), q_back


def _require_fiber(fiber, needed: bool, what: str) -> Optional[float]:
    if needed and fiber is None:
        raise FiberArityMismatch(f"{what} requires a fiber coordinate")
    if not needed and fiber is not None:
        raise FiberArityMismatch(f"{what} is rigid; omit the fiber coordinate")
    return None if fiber is None else float(fiber)


def corner_cartan(order: int, fiber: Optional[float]) -> tuple[float, float]:
    """Off-diagonal Cartan magnitudes (u, w) with u w = 4 cos^2(pi/order)."""
    if order == 2:
        return 0.0, 0.0
    c = 2.0 * math.cos(math.pi / order)
    return c * math.exp(fiber), c * math.exp(-fiber)


def _cartan_reflection(theta: np.ndarray, axis: np.ndarray, inside: np.ndarray,
                       order: int, fiber: Optional[float]) -> np.ndarray:
    """Reflection in ``axis`` whose corner with its T-conjugate has the given order.

    With r = I - b axis^T and axis(b) = 2, the Cartan entries at the corner are
    axis(T^-1 b) and axis(T b); they must be negative with product
    4 cos^2(pi/order).  That is a linear system for b.
    """
    if axis @ inside < 0:
        axis = -axis
    u, w = corner_cartan(order, fiber)
    rows = np.array([axis, axis @ np.linalg.inv(theta), axis @ theta])
    b = np.linalg.solve(rows, np.array([2.0, -u, -w]))
    return np.eye(3) - np.outer(b, axis)


def _corner_frame(t: np.ndarray, r: np.ndarray, tile: list):
    """Rewrite (T, r, tile) in the frame of the corner between r and T r T^-1.

    The columns are the isolated points of the two reflections and the corner
    point, rescaled by powers of two; the change of frame is applied exactly so
    it adds no error of its own.
    """
    b1, a1 = reflection_data(r)
    b2, a2 = reflection_data(t @ r @ np.linalg.inv(t))
    frame = unit_columns(b1, b2, np.cross(a1, a2))
    t, r = exact_conjugate(frame, t), exact_conjugate(frame, r)
    d = _balancing_scale([t, np.linalg.inv(t), r])
    frame = frame / d[None, :]
    return (d[:, None] * t / d[None, :], d[:, None] * r / d[None, :],
            [np.linalg.solve(frame, v) for v in tile])


def _balancing_scale(mats, sweeps: int = 20) -> np.ndarray:
    """Powers of two d_i roughly minimizing the summed squared entries of D M D^-1.

    Osborne's iteration on the combined entry weights; powers of two keep the
    rescaling exact.
    """
    w = sum(np.asarray(m) ** 2 for m in mats)
    np.fill_diagonal(w, 0.0)
    d = np.ones(3)
    for _ in range(sweeps):
        for i in range(3):
            row = np.sum(w[i] / d ** 2)
            col = np.sum(w[:, i] * d ** 2)
            if row > 0 and col > 0:
                d[i] = (col / row) ** 0.25
    return 2.0 ** np.round(np.log2(d / d[0]))


def _det_one(m: np.ndarray) -> np.ndarray:
    d = np.linalg.det(m)
    return m / np.cbrt(d)


def _structure(tag, orders, theta, r, tiles, ends, fiber_params, relations, data, pairings):
    return ElementaryStructure(
        type=ElementaryType(tag, tuple(orders)),
        generators={"T": Collineation(theta), "r": Collineation(r)},
        relations=relations,
        tiles=[np.array(t, dtype=float) for t in tiles],
        ends=ends,
        fiber_params=tuple(fiber_params),
        side_pairings=pairings,
        data=data,
    )


def _translation_pairing(tile_len: int) -> list:
    # first side is carried by T onto the last side; the side through the reflection axis is a mirror
    return [{"tile": 0, "side": [0, 1], "word": "T", "to_tile": 0, "to_side": [tile_len - 1, tile_len - 2]}]


def solve_crown_A1(theta: Hyp, full_inv: float, fiber: float) -> ElementaryStructure:
    """Annulus with a closed end and one boundary full 1-orbifold."""
    t = _hyperbolic_theta(theta)
    t = _det_one(t)
    fiber = _require_fiber(fiber, True, "A1")
    p, q = _full_pair(t, full_inv, fiber)
    r, q_back = _reflection_for_pair(t, p, q)
    tile = [_to_principal_line(q_back), q_back, p, q, _to_principal_line(q)]
    ends = [End(theta, ((("T", 1),),)), End(FullOrbifold(full_inv), FULL_WORDS)]
    relations = [(("r", 2),)]
    pairings = _translation_pairing(5) + [
        {"tile": 0, "side": [1, 2], "word": "r", "to_tile": 0, "to_side": [1, 2]}]
    return _structure("A1", (), t, r, [tile], ends, (fiber,), relations,
                      {"p": p, "q": q}, pairings)


def solve_crown_A2(theta: Hyp, corner_order: int, fiber: Optional[float] = None) -> ElementaryStructure:
    """Annulus with a closed end and a mirror circle carrying one corner reflector."""
    if int(corner_order) != corner_order or corner_order < 2:
        raise BadOrder(f"corner order must be an integer >= 2, got {corner_order!r}")
    corner_order = int(corner_order)
    t = _det_one(_hyperbolic_theta(theta))
    fiber = _require_fiber(fiber, corner_order >= 3, f"A2 with corner order {corner_order}")
    tp = t @ ONE
    tp = tp / tp.sum()
    a, ta = _to_principal_line(ONE), _to_principal_line(tp)
    inside = (a + ONE / 3 + tp + ta) / 4
    r = _cartan_reflection(t, np.cross(ONE, tp), inside, corner_order, fiber)
    # with close eigenvalues the mirrors through ONE, T ONE, T^2 ONE are nearly parallel
    # in the eigenframe and the corner relation cannot be stored to working precision there
    t, r, tile = _corner_frame(t, r, [a, ONE / 3, tp, ta])
    corner_word = (("r", 1), ("T", 1), ("r", 1), ("T", -1))
    ends = [End(theta, ((("T", 1),),)), End(Corner(corner_order), FULL_WORDS)]
    relations = [(("r", 2),), corner_word * corner_order]
    pairings = [{"tile": 0, "side": [0, 1], "word": "T", "to_tile": 0, "to_side": [3, 2]},
                {"tile": 0, "side": [1, 2], "word": "r", "to_tile": 0, "to_side": [1, 2]}]
    return _structure("A2", (corner_order,), t, r, [tile], ends,
                      () if fiber is None else (fiber,), relations, {}, pairings)


def _check_cone(n: int, minimum: int) -> int:
    if int(n) != n or n < minimum:
        raise BadOrder(f"cone order must be an integer >= {minimum}, got {n!r}")
    return int(n)


def solve_disk_A3(cone_order: int, full_inv: float, fiber: float) -> ElementaryStructure:
    """Disk with one cone point and one boundary full 1-orbifold."""
    n = _check_cone(cone_order, 3)
    fiber = _require_fiber(fiber, True, "A3")
    t = rotation_of_order(n).matrix
    p, q = _full_pair(t, full_inv, fiber)
    r, q_back = _reflection_for_pair(t, p, q)
    tile = [CENTER, q_back, p, q]
    ends = [End(Cone(n), ((("T", 1),),)), End(FullOrbifold(full_inv), FULL_WORDS)]
    relations = [(("T", n),), (("r", 2),)]
    pairings = [{"tile": 0, "side": [0, 1], "word": "T", "to_tile": 0, "to_side": [0, 3]},
                {"tile": 0, "side": [1, 2], "word": "r", "to_tile": 0, "to_side": [1, 2]}]
    return _structure("A3", (n,), t, r, [tile], ends, (fiber,), relations,
                      {"p": p, "q": q}, pairings)


def solve_disk_A4(corner_order: int, cone_order: int, fiber: Optional[float] = None) -> ElementaryStructure:
    """Disk with one corner reflector of order m on a mirror circle and one cone point of order n."""
    if int(corner_order) != corner_order or corner_order < 2:
        raise BadOrder(f"corner order must be an integer >= 2, got {corner_order!r}")
    m = int(corner_order)
    n = _check_cone(cone_order, 2)
    if 1.0 / (2 * m) + 1.0 / n >= 0.5 - 1e-12:
        raise ConstraintViolated(f"1/(2m) + 1/n = {1 / (2 * m) + 1 / n} is not below 1/2")
    fiber = _require_fiber(fiber, m >= 3, f"A4 with corner order {m}")
    t = rotation_of_order(n).matrix
    tv = t @ ONE
    r = _cartan_reflection(t, np.cross(ONE, tv), CENTER, m, fiber)
    tile = [CENTER, ONE, tv]
    corner_word = (("r", 1), ("T", 1), ("r", 1), ("T", -1))
    ends = [End(Corner(m), FULL_WORDS), End(Cone(n), ((("T", 1),),))]
    relations = [(("T", n),), (("r", 2),), corner_word * m]
    pairings = [{"tile": 0, "side": [0, 1], "word": "T", "to_tile": 0, "to_side": [0, 2]},
                {"tile": 0, "side": [1, 2], "word": "r", "to_tile": 0, "to_side": [1, 2]}]
    return _structure("A4", (m, n), t, r, [tile], ends,
                      () if fiber is None else (fiber,), relations, {}, pairings)
