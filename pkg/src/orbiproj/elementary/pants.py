"""Pair-of-pants family: P1, P2, P3, P4.

The structure is glued from the standard triangle T0 = [e1, e2, e3] and three
neighbours Ta, Tb, Tc sharing the sides e2e3, e1e3, e1e2.  Generators

    A: Tb -> Tc,   B: Tc -> Ta,   C: Ta -> Tb

are rank-one sums whose coefficients (alpha_i, beta_i, gamma_i) are the
eigenvalues at the triangle vertices.  An end sitting at a generator is
either a closed geodesic (hyperbolic holonomy) or a cone point (elliptic).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..errors import ConstraintViolated, ConvexityFailure, FiberArityMismatch, TwoOrderTwoCones
from ..orbifold import ElementaryType
from ..projective import Collineation
from .structure import Cone, ElementaryStructure, End, Hyp

NAMES = ("A", "B", "C")


@dataclass(frozen=True)
class PantsSolution:
    alpha: tuple  # (alpha1, alpha2, alpha3)
    beta: tuple
    gamma: tuple
    rho: tuple
    a2: float
    a3: float
    b1: float
    b3: float
    c1: float
    c2: float

    @property
    def sigma1(self) -> float:
        return self.a2 * self.b3 * self.c1

    @property
    def sigma2(self) -> float:
        return self.a3 * self.b1 * self.c2

    def vertices(self) -> dict:
        return {
            "p1": np.array([1.0, 0.0, 0.0]),
            "p2": np.array([0.0, 1.0, 0.0]),
            "p3": np.array([0.0, 0.0, 1.0]),
            "va": np.array([-1.0, self.b1, self.c1]),
            "vb": np.array([self.a2, -1.0, self.c2]),
            "vc": np.array([self.a3, self.b3, -1.0]),
        }

    def matrices(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        (al1, al2, al3), (be1, be2, be3), (ga1, ga2, ga3) = self.alpha, self.beta, self.gamma
        v = self.vertices()
        e1, e2, e3 = v["p1"], v["p2"], v["p3"]
        a = (al1 * np.outer(e1, [1.0, self.a2, 0.0])
             + be1 * np.outer(e2, [0.0, -1.0, 0.0])
             + ga1 * np.outer(v["vc"], [0.0, self.c2, 1.0]))
        b = (al2 * np.outer(v["va"], [1.0, 0.0, self.a3])
             + be2 * np.outer(e2, [0.0, 1.0, self.b3])
             + ga2 * np.outer(e3, [0.0, 0.0, -1.0]))
        c = (al3 * np.outer(e1, [-1.0, 0.0, 0.0])
             + be3 * np.outer(v["vb"], [self.b1, 1.0, 0.0])
             + ga3 * np.outer(e3, [self.c1, 0.0, 1.0]))
        return a, b, c


def _targets(end) -> tuple[float, float]:
    """(eigenvalue at the triangle vertex, trace of the remaining 2x2 part)."""
    if isinstance(end, Hyp):
        end.check()
        return end.lam, end.tau
    if isinstance(end, Cone):
        return 1.0, 2.0 * math.cos(2.0 * math.pi / end.order)
    raise ConstraintViolated(f"pants ends must be closed or cone ends, got {end!r}")


def _solve_general(ends, s: float, t: float) -> PantsSolution:
    (al1, tau1), (be2, tau2), (ga3, tau3) = (_targets(e) for e in ends)
    # particular solution with gamma1 = 1, then slide along the kernel by s
    be1 = 1.0 / al1
    ga2 = 1.0 / ga3
    al2 = ga3 / be2
    al3 = be2 / (al1 * ga3)
    be3 = al1 / be2
    ga1 = 1.0
    al2, al3, be1, be3, ga1, ga2 = al2 * s, al3 / s, be1 / s, be3 * s, ga1 * s, ga2 / s
    rho1 = (tau1 + be1) / ga1 + 1.0
    rho2 = (tau2 + ga2) / al2 + 1.0
    rho3 = (tau3 + al3) / be3 + 1.0
    return PantsSolution((al1, al2, al3), (be1, be2, be3), (ga1, ga2, ga3),
                         (rho1, rho2, rho3),
                         a2=t, a3=2.0, b1=rho3 / t, b3=2.0, c1=rho2 / 2.0, c2=rho1 / 2.0)


def _solve_order_two(ends) -> PantsSolution:
    """Unique solution when the end at C is a cone point of order two."""
    (al1, tau1), (be2, tau2), _ = (_targets(e) for e in ends)
    al2 = 1.0 / al1
    be1 = 1.0 / be2
    ga1 = be2 / al1
    ga2 = al1 / be2
    rho1 = (tau1 + be1) / ga1 + 1.0
    rho2 = (tau2 + ga2) / al2 + 1.0
    return PantsSolution((al1, al2, 1.0), (be1, be2, 1.0), (ga1, ga2, 1.0),
                         (rho1, rho2, 0.0),
                         a2=0.0, a3=rho2, b1=0.0, b3=rho1, c1=1.0, c2=1.0)


def _check_rho(sol: PantsSolution, ends) -> None:
    for rho, end in zip(sol.rho, ends):
        if isinstance(end, Cone) and end.order == 2:
            continue
        if isinstance(end, Cone) and end.order == 3:
            ok = rho > 0.0
        else:
            ok = rho > 1.0
        if not ok:
            raise ConvexityFailure(f"configuration invariant rho = {rho} violates convexity")


def pants_tag(ends) -> str:
    cones = sum(isinstance(e, Cone) for e in ends)
    return ("P1", "P2", "P3", "P4")[cones]


def solve_pants_family(ends: Sequence, fiber: Optional[Sequence[float]] = None) -> ElementaryStructure:
    """Convex structure on a P-type orbifold from its three end invariants.

    ``ends`` are :class:`Hyp` or :class:`Cone` values assigned to A, B, C in
    order.  ``fiber = (s, t)`` is required unless an end is an order-two cone.
    """
    ends = list(ends)
    if len(ends) != 3:
        raise ConstraintViolated("a pants-type orbifold has exactly three ends")
    for e in ends:
        _targets(e)
    twos = [i for i, e in enumerate(ends) if isinstance(e, Cone) and e.order == 2]
    if len(twos) > 1:
        raise TwoOrderTwoCones("at most one end may be a cone point of order two")
    chi = -1.0 + sum(1.0 / e.order for e in ends if isinstance(e, Cone))
    if chi >= -1e-12:
        raise ConstraintViolated("the cone orders give a non-negative Euler characteristic")

    if twos:
        if fiber is not None and len(fiber):
            raise FiberArityMismatch("an order-two cone fixes the structure; omit the fiber")
        shift = (twos[0] + 1) % 3  # rotate so the order-two end sits at C
        rotated = ends[shift:] + ends[:shift]
        sol = _solve_order_two(rotated)
        mats = sol.matrices()
        # generator k of the rotated problem is generator (k + shift) of the original
        gens = {NAMES[(k + shift) % 3]: Collineation(mats[k]) for k in range(3)}
        fiber_params: tuple = ()
    else:
        if fiber is None or len(fiber) != 2:
            raise FiberArityMismatch("fiber (s, t) is required when no end is an order-two cone")
        s, t = float(fiber[0]), float(fiber[1])
        if not (s > 0 and t > 0):
            raise ConstraintViolated("fiber parameters must be positive")
        shift = 0
        rotated = ends
        sol = _solve_general(ends, s, t)
        mats = sol.matrices()
        gens = {NAMES[k]: Collineation(mats[k]) for k in range(3)}
        fiber_params = (s, t)
    _check_rho(sol, rotated)

    v = sol.vertices()
    tiles = [np.array([v["p1"], v["p2"], v["p3"]]), np.array([v["va"], v["p3"], v["p2"]])]
    # the exterior sides of T0 + Ta are paired by the generators playing B and C
    nb, nc = NAMES[(1 + shift) % 3], NAMES[(2 + shift) % 3]
    pairings = [
        {"tile": 0, "side": [0, 1], "word": nb, "to_tile": 1, "to_side": [0, 2]},
        {"tile": 1, "side": [0, 1], "word": nc, "to_tile": 0, "to_side": [0, 2]},
    ]
    words = [((name, 1),) for name in NAMES]
    # relation: product around the three ends; orientation fixed by the rank-one sums
    relations = [(("C", 1), ("B", 1), ("A", 1))]
    orders = tuple(e.order for e in ends if isinstance(e, Cone))
    for name, e in zip(NAMES, ends):
        if isinstance(e, Cone):
            relations.append(((name, e.order),))
    structure = ElementaryStructure(
        type=ElementaryType(pants_tag(ends), orders),
        generators=gens,
        relations=relations,
        tiles=tiles,
        ends=[End(e, (w,)) for e, w in zip(ends, words)],
        fiber_params=fiber_params,
        side_pairings=pairings,
        data={"solution": sol, "shift": shift},
    )
    return structure
