"""Convex projective structures on the twelve elementary orbifolds."""

from __future__ import annotations

from ..errors import FiberArityMismatch, MalformedStructure
from .crowns import solve_crown_A1, solve_crown_A2, solve_disk_A3, solve_disk_A4
from .pants import solve_pants_family
from .polygons import solve_hexagon_D1, solve_pentagon_D2, solve_quad_D3, solve_triangle_D4
from .structure import (
    Cone,
    Corner,
    ElementaryStructure,
    End,
    FullOrbifold,
    Hyp,
    end_from_json,
    evaluate,
    extract_invariants,
    format_word,
    parse_word,
)

__all__ = [
    "Cone", "Corner", "ElementaryStructure", "End", "FullOrbifold", "Hyp",
    "end_from_json", "evaluate", "extract_invariants", "format_word", "parse_word",
    "solve_pants_family", "solve_crown_A1", "solve_crown_A2", "solve_disk_A3", "solve_disk_A4",
    "solve_hexagon_D1", "solve_pentagon_D2", "solve_quad_D3", "solve_triangle_D4",
    "solve_elementary", "solve_request", "scalar_input_count",
]


def _one(fiber):
    if not fiber:
        return None
    if len(fiber) != 1:
        raise FiberArityMismatch(f"expected one fiber coordinate, got {len(fiber)}")
    return float(fiber[0])


def _kinds(ends, *types):
    if len(ends) != len(types) or not all(isinstance(e, t) for e, t in zip(ends, types)):
        want = ", ".join(t.__name__ for t in types)
        raise MalformedStructure(f"expected ends ({want}), got {ends!r}")


def solve_elementary(tag: str, ends: list, fiber=()) -> ElementaryStructure:
    """Dispatch on the elementary type.  ``ends`` follow the order of the solved structure's ends."""
    fiber = list(fiber or ())
    if tag in ("P1", "P2", "P3", "P4"):
        S = solve_pants_family(ends, fiber if fiber else None)
        if S.tag != tag:
            raise MalformedStructure(f"ends describe a {S.tag} orbifold, not {tag}")
        return S
    if tag == "A1":
        _kinds(ends, Hyp, FullOrbifold)
        return solve_crown_A1(ends[0], ends[1].crossratio, _one(fiber))
    if tag == "A2":
        _kinds(ends, Hyp, Corner)
        return solve_crown_A2(ends[0], ends[1].order, _one(fiber))
    if tag == "A3":
        _kinds(ends, Cone, FullOrbifold)
        return solve_disk_A3(ends[0].order, ends[1].crossratio, _one(fiber))
    if tag == "A4":
        _kinds(ends, Corner, Cone)
        return solve_disk_A4(ends[0].order, ends[1].order, _one(fiber))
    if tag == "D1":
        _kinds(ends, FullOrbifold, FullOrbifold, FullOrbifold)
        return solve_hexagon_D1(*(e.crossratio for e in ends), _one(fiber))
    if tag == "D2":
        _kinds(ends, FullOrbifold, Corner, FullOrbifold)
        return solve_pentagon_D2(ends[1].order, ends[0].crossratio, ends[2].crossratio, _one(fiber))
    if tag == "D3":
        _kinds(ends, FullOrbifold, Corner, Corner)
        return solve_quad_D3(ends[2].order, ends[1].order, ends[0].crossratio, _one(fiber))
    if tag == "D4":
        _kinds(ends, Corner, Corner, Corner)
        return solve_triangle_D4(*(e.order for e in ends), _one(fiber))
    raise MalformedStructure(f"unknown elementary type {tag!r}")


def solve_request(request: dict) -> ElementaryStructure:
    """Solve ``{"type": "P2", "ends": [{"cone": 5}, {"hyp": [l, t]}, ...], "fiber": [s, t]}``."""
    try:
        tag = request["type"]
        ends = [end_from_json(e) for e in request["ends"]]
        fiber = [float(x) for x in request.get("fiber", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedStructure(f"bad solve request: {exc}") from None
    return solve_elementary(tag, ends, fiber)


def scalar_input_count(ends, fiber=()) -> int:
    """Continuous inputs of a solve: two per closed end, one per full 1-orbifold, plus the fiber."""
    n = len(tuple(fiber or ()))
    for e in ends:
        if isinstance(e, Hyp):
            n += 2
        elif isinstance(e, FullOrbifold):
            n += 1
    return n
