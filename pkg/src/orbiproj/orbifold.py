"""Orbifold signatures, Euler characteristics and dimension counts.

A boundary circle of the underlying surface is either a plain circle or a
cyclic sequence of *items*.  An item is a corner-reflector order (an
``int``) or :data:`FULL`, a boundary full 1-orbifold.  Consecutive items
are separated by one mirror arc, so ``()`` is a mirror circle without
corners and ``(FULL, FULL, FULL)`` is the boundary of a hexagon.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .errors import (
    MalformedSignature,
    MissingComponent,
    NonNegativeEuler,
    WrongBoundaryKind,
)

FULL = "F"
Item = Union[int, str]

PLAIN, MIRROR, MIXED = "plain", "mirror", "mixed"


def _item_key(item: Item) -> int:
    return 0 if item == FULL else int(item)


def canonical_cycle(items: tuple) -> tuple:
    """Least dihedral rotation of a cyclic item tuple."""
    if not items:
        return ()
    n = len(items)
    best = None
    for seq in (items, items[::-1]):
        for k in range(n):
            cand = seq[k:] + seq[:k]
            key = tuple(_item_key(x) for x in cand)
            if best is None or key < best[0]:
                best = (key, cand)
    return tuple(best[1])


@dataclass(frozen=True)
class BoundaryPattern:
    """One boundary circle of the underlying surface; ``items is None`` means plain."""

    items: Optional[tuple] = None

    def __post_init__(self):
        if self.items is None:
            return
        items = tuple(self.items)
        for x in items:
            if x != FULL and (not isinstance(x, int) or isinstance(x, bool) or x < 2):
                raise MalformedSignature(f"bad boundary item {x!r}")
        object.__setattr__(self, "items", canonical_cycle(items))

    @classmethod
    def plain(cls) -> "BoundaryPattern":
        return cls(None)

    @property
    def kind(self) -> str:
        if self.items is None:
            return PLAIN
        return MIXED if FULL in self.items else MIRROR

    @property
    def corners(self) -> list[int]:
        return [x for x in (self.items or ()) if x != FULL]

    @property
    def full_count(self) -> int:
        return sum(1 for x in (self.items or ()) if x == FULL)

    def sort_key(self):
        if self.items is None:
            return (0,)
        return (1, len(self.items), tuple(_item_key(x) for x in self.items))

    def to_json(self) -> dict:
        if self.items is None:
            return {"kind": PLAIN}
        if FULL not in self.items:
            return {"kind": MIRROR, "corners": list(self.items)}
        items = self.items
        n = len(items)
        segments, corners = [], []
        for i, item in enumerate(items):
            nxt = items[(i + 1) % n]
            if item == FULL:
                segments.append("full")
                corners.append(None)
            segments.append("mirror")
            corners.append(nxt if nxt != FULL else None)
        return {"kind": MIXED, "segments": segments, "corners": corners}

    @classmethod
    def from_json(cls, data: dict) -> "BoundaryPattern":
        kind = data.get("kind")
        if kind == PLAIN:
            return cls(None)
        if kind == MIRROR:
            return cls(tuple(_order(c) for c in data.get("corners", [])))
        if kind != MIXED:
            raise MalformedSignature(f"unknown boundary kind {kind!r}")
        segments = list(data.get("segments", []))
        corners = list(data.get("corners", [None] * len(segments)))
        if not segments or len(corners) != len(segments):
            raise MalformedSignature("mixed boundary needs matching segments and corners")
        n = len(segments)
        items: list = []
        for i, seg in enumerate(segments):
            nxt = segments[(i + 1) % n]
            if seg not in ("full", "mirror"):
                raise MalformedSignature(f"bad segment {seg!r}")
            if seg == "full":
                items.append(FULL)
                if nxt == "full":
                    raise MalformedSignature("two full 1-orbifolds must be separated by a mirror arc")
            corner = corners[i]
            if seg == "mirror" and nxt == "mirror":
                if corner is None:
                    raise MalformedSignature("mirror-mirror junction needs a corner order")
                items.append(_order(corner))
            elif corner is not None:
                raise MalformedSignature("corners only sit between two mirror arcs")
        return cls(tuple(items))


def _order(x) -> int:
    if isinstance(x, bool) or int(x) != x or int(x) < 2:
        raise MalformedSignature(f"orders must be integers >= 2, got {x!r}")
    return int(x)


@dataclass(frozen=True)
class OrbifoldSignature:
    """Underlying surface, cone orders and boundary circles, kept in canonical order.

    For a non-orientable surface ``genus`` counts cross-caps.
    """

    genus: int = 0
    orientable: bool = True
    cones: tuple = ()
    boundary: tuple = field(default=())

    def __post_init__(self):
        if self.genus < 0 or (not self.orientable and self.genus < 1):
            raise MalformedSignature("bad genus for the underlying surface")
        cones = tuple(sorted(_order(c) for c in self.cones))
        bnd = []
        for b in self.boundary:
            bnd.append(b if isinstance(b, BoundaryPattern) else BoundaryPattern(b))
        bnd.sort(key=BoundaryPattern.sort_key)
        object.__setattr__(self, "cones", cones)
        object.__setattr__(self, "boundary", tuple(bnd))

    # derived counts -------------------------------------------------------
    @property
    def corners(self) -> list[int]:
        return [c for b in self.boundary for c in b.corners]

    @property
    def full_count(self) -> int:
        return sum(b.full_count for b in self.boundary)

    @property
    def underlying_euler(self) -> int:
        h = len(self.boundary)
        if self.orientable:
            return 2 - 2 * self.genus - h
        return 2 - self.genus - h

    @property
    def crosscap_number(self) -> int:
        """Cross-caps of an equivalent non-orientable description (2g when orientable)."""
        return 2 * self.genus if self.orientable else self.genus

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "orientable": self.orientable,
            "cones": list(self.cones),
            "boundary": [b.to_json() for b in self.boundary],
        }

    @classmethod
    def from_json(cls, data: dict) -> "OrbifoldSignature":
        try:
            return cls(
                genus=int(data.get("genus", 0)),
                orientable=bool(data.get("orientable", True)),
                cones=tuple(data.get("cones", ())),
                boundary=tuple(BoundaryPattern.from_json(b) for b in data.get("boundary", ())),
            )
        except (TypeError, ValueError, AttributeError) as exc:
            raise MalformedSignature(str(exc)) from None


def sphere(*cones: int) -> OrbifoldSignature:
    return OrbifoldSignature(cones=cones)


def disk(boundary=None, cones=()) -> OrbifoldSignature:
    return OrbifoldSignature(cones=cones, boundary=(BoundaryPattern(boundary),))


# --------------------------------------------------------------------------
# Euler characteristic and dimensions


def euler_characteristic(sig: OrbifoldSignature) -> Fraction:
    chi = Fraction(sig.underlying_euler)
    chi -= sum((1 - Fraction(1, q) for q in sig.cones), Fraction(0))
    chi -= Fraction(1, 2) * sum((1 - Fraction(1, r) for r in sig.corners), Fraction(0))
    chi -= Fraction(sig.full_count, 2)
    return chi


def _require_negative(sig: OrbifoldSignature) -> None:
    if euler_characteristic(sig) >= 0:
        raise NonNegativeEuler(f"Euler characteristic {euler_characteristic(sig)} is not negative")


def deformation_dimension(sig: OrbifoldSignature) -> int:
    """Dimension of the space of convex projective structures."""
    _require_negative(sig)
    k_c = len(sig.cones)
    b_c = sig.cones.count(2)
    corners = sig.corners
    k_r, b_r = len(corners), corners.count(2)
    return (-8 * sig.underlying_euler + (6 * k_c - 2 * b_c)
            + (3 * k_r - b_r) + 4 * sig.full_count)


def teichmuller_dimension(sig: OrbifoldSignature) -> int:
    """Dimension of the space of hyperbolic structures."""
    _require_negative(sig)
    return (-3 * sig.underlying_euler + 2 * len(sig.cones)
            + len(sig.corners) + 2 * sig.full_count)


# --------------------------------------------------------------------------
# classification


TAGS = ("P1", "P2", "P3", "P4", "A1", "A2", "A3", "A4", "D1", "D2", "D3", "D4")


@dataclass(frozen=True)
class ElementaryType:
    tag: str
    orders: tuple = ()

    def signature(self) -> OrbifoldSignature:
        return elementary_signature(self.tag, self.orders)


NOT_ELEMENTARY = None


def elementary_signature(tag: str, orders=()) -> OrbifoldSignature:
    """The signature of an elementary type with the given orders."""
    o = tuple(orders)
    plain = BoundaryPattern.plain()
    table = {
        "P1": lambda: OrbifoldSignature(boundary=(plain, plain, plain)),
        "P2": lambda: OrbifoldSignature(cones=o, boundary=(plain, plain)),
        "P3": lambda: OrbifoldSignature(cones=o, boundary=(plain,)),
        "P4": lambda: OrbifoldSignature(cones=o),
        "A1": lambda: OrbifoldSignature(boundary=(plain, BoundaryPattern((FULL,)))),
        "A2": lambda: OrbifoldSignature(boundary=(plain, BoundaryPattern(o))),
        "A3": lambda: OrbifoldSignature(cones=o, boundary=(BoundaryPattern((FULL,)),)),
        "A4": lambda: OrbifoldSignature(cones=o[1:], boundary=(BoundaryPattern(o[:1]),)),
        "D1": lambda: disk((FULL, FULL, FULL)),
        "D2": lambda: disk((FULL, FULL) + o),
        "D3": lambda: disk((FULL,) + o),
        "D4": lambda: disk(o),
    }
    if tag not in table:
        raise MalformedSignature(f"unknown elementary tag {tag!r}")
    return table[tag]()


def classify_elementary(sig: OrbifoldSignature) -> Optional[ElementaryType]:
    """Match a signature against the twelve elementary patterns; None if no match."""
    if not sig.orientable or sig.genus != 0:
        return NOT_ELEMENTARY
    if euler_characteristic(sig) >= 0:
        return NOT_ELEMENTARY
    kinds = sorted(b.kind for b in sig.boundary)
    cones = sig.cones
    nb = len(sig.boundary)
    plains = kinds.count(PLAIN)
    others = [b for b in sig.boundary if b.kind != PLAIN]

    if plains == nb:
        tag = {3: "P1", 2: "P2", 1: "P3", 0: "P4"}.get(nb)
        if tag and len(cones) == 3 - nb:
            return ElementaryType(tag, cones)
        return NOT_ELEMENTARY

    if len(others) != 1:
        return NOT_ELEMENTARY
    items = others[0].items
    n_full = items.count(FULL)
    corners = tuple(x for x in items if x != FULL)
    if plains == 1 and not cones:
        if items == (FULL,):
            return ElementaryType("A1")
        if n_full == 0 and len(corners) == 1:
            return ElementaryType("A2", corners)
        return NOT_ELEMENTARY
    if plains:
        return NOT_ELEMENTARY
    if len(cones) == 1:
        if items == (FULL,) and cones[0] >= 3:
            return ElementaryType("A3", cones)
        if n_full == 0 and len(corners) == 1:
            return ElementaryType("A4", corners + cones)
        return NOT_ELEMENTARY
    if cones:
        return NOT_ELEMENTARY
    if n_full == 3 and not corners:
        return ElementaryType("D1")
    if n_full == 2 and len(corners) == 1 and len(items) == 3:
        return ElementaryType("D2", corners)
    if n_full == 1 and len(corners) == 2:
        return ElementaryType("D3", corners)
    if n_full == 0 and len(corners) == 3:
        return ElementaryType("D4", corners)
    return NOT_ELEMENTARY


ANNULAR_NAMES = {
    1: "annulus",
    2: "Moebius band",
    3: "silvered annulus",
    4: "(;2,2)-disk",
    5: "silvered strip",
    6: "bigon with a cone-point of order two",
    7: "half-square",
}


def classify_zero_euler(sig: OrbifoldSignature) -> Optional[int]:
    """Number 1..7 of the annular type, or None."""
    if euler_characteristic(sig) != 0:
        return None
    has_boundary = any(b.kind == PLAIN or b.full_count for b in sig.boundary)
    if not has_boundary:
        return None
    kinds = sorted((b.kind for b in sig.boundary))
    cones = sig.cones
    if not sig.orientable:
        if sig.genus == 1 and kinds == [PLAIN] and not cones:
            return 2
        return None
    if sig.genus:
        return None
    if kinds == [PLAIN, PLAIN] and not cones:
        return 1
    if kinds == [MIRROR, PLAIN] and not cones and not sig.corners:
        return 3
    if kinds == [PLAIN] and cones == (2, 2):
        return 4
    if len(sig.boundary) == 1 and sig.boundary[0].kind == MIXED:
        items = sig.boundary[0].items
        if items == (FULL, FULL) and not cones:
            return 5
        if items == (FULL,) and cones == (2,):
            return 6
        if items == canonical_cycle((FULL, 2, 2)) and not cones:
            return 7
    return None


# --------------------------------------------------------------------------
# signature-level surgery


@dataclass(frozen=True)
class PasteClosed:
    b1: int
    b2: int


@dataclass(frozen=True)
class Crosscap:
    b: int


@dataclass(frozen=True)
class SilverClosed:
    b: int


@dataclass(frozen=True)
class FoldClosed:
    b: int


@dataclass(frozen=True)
class PasteFull:
    b1: int
    i1: int
    b2: int
    i2: int


@dataclass(frozen=True)
class SilverFull:
    b: int
    i: int


@dataclass(frozen=True)
class FoldFull:
    b: int
    i: int


SewOp = Union[PasteClosed, Crosscap, SilverClosed, FoldClosed, PasteFull, SilverFull, FoldFull]


@dataclass(frozen=True)
class SignatureDelta:
    """A reversible edit of a signature: multiset swaps plus an underlying-surface change."""

    cones_removed: tuple = ()
    cones_added: tuple = ()
    circles_removed: tuple = ()
    circles_added: tuple = ()
    underlying_before: tuple = (0, True)
    underlying_after: tuple = (0, True)

    def inverse(self) -> "SignatureDelta":
        return SignatureDelta(self.cones_added, self.cones_removed,
                              self.circles_added, self.circles_removed,
                              self.underlying_after, self.underlying_before)


def _remove_multiset(pool: list, items, what: str) -> None:
    for x in items:
        try:
            pool.remove(x)
        except ValueError:
            raise MissingComponent(f"no {what} {x!r} to remove") from None


def apply_delta(sig: OrbifoldSignature, delta: SignatureDelta) -> OrbifoldSignature:
    if (sig.genus, sig.orientable) != tuple(delta.underlying_before):
        raise WrongBoundaryKind("underlying surface does not match the recorded edit")
    cones = list(sig.cones)
    _remove_multiset(cones, delta.cones_removed, "cone")
    circles = list(sig.boundary)
    _remove_multiset(circles, delta.circles_removed, "boundary circle")
    genus, orientable = delta.underlying_after
    return OrbifoldSignature(genus, orientable, tuple(cones) + tuple(delta.cones_added),
                             tuple(circles) + tuple(delta.circles_added))


def _circle(sig: OrbifoldSignature, b: int) -> BoundaryPattern:
    if not 0 <= b < len(sig.boundary):
        raise MissingComponent(f"no boundary component {b}")
    return sig.boundary[b]


def _plain(sig, b) -> BoundaryPattern:
    c = _circle(sig, b)
    if c.kind != PLAIN:
        raise WrongBoundaryKind(f"boundary component {b} is {c.kind}, not plain")
    return c


def _full_at(sig, b, i) -> tuple:
    """Items of circle b rotated so that the full 1-orbifold at position i is first."""
    c = _circle(sig, b)
    items = c.items or ()
    if not 0 <= i < len(items):
        raise MissingComponent(f"boundary component {b} has no item {i}")
    if items[i] != FULL:
        raise WrongBoundaryKind(f"item {i} of boundary component {b} is not a full 1-orbifold")
    return items[i:] + items[:i]


def _underlying_plus(sig, crosscaps: int) -> tuple:
    """Underlying surface after adding handles worth ``crosscaps`` cross-caps."""
    if sig.orientable and crosscaps % 2 == 0:
        return (sig.genus + crosscaps // 2, True)
    return (sig.crosscap_number + crosscaps, False)


def sewing_delta(sig: OrbifoldSignature, op: SewOp) -> SignatureDelta:
    """The reversible edit performed by one sewing operation on a single component."""
    here = (sig.genus, sig.orientable)
    plain = BoundaryPattern.plain()
    if isinstance(op, SilverClosed):
        _plain(sig, op.b)
        return SignatureDelta(circles_removed=(plain,), circles_added=(BoundaryPattern(()),),
                              underlying_before=here, underlying_after=here)
    if isinstance(op, FoldClosed):
        _plain(sig, op.b)
        return SignatureDelta(cones_added=(2, 2), circles_removed=(plain,),
                              underlying_before=here, underlying_after=here)
    if isinstance(op, Crosscap):
        _plain(sig, op.b)
        return SignatureDelta(circles_removed=(plain,), underlying_before=here,
                              underlying_after=_underlying_plus(sig, 1))
    if isinstance(op, PasteClosed):
        if op.b1 == op.b2:
            raise WrongBoundaryKind("pasting needs two distinct circles; use Crosscap for one")
        _plain(sig, op.b1)
        _plain(sig, op.b2)
        return SignatureDelta(circles_removed=(plain, plain), underlying_before=here,
                              underlying_after=_underlying_plus(sig, 2))
    if isinstance(op, SilverFull):
        items = _full_at(sig, op.b, op.i)
        old = sig.boundary[op.b]
        return SignatureDelta(circles_removed=(old,),
                              circles_added=(BoundaryPattern((2, 2) + items[1:]),),
                              underlying_before=here, underlying_after=here)
    if isinstance(op, FoldFull):
        items = _full_at(sig, op.b, op.i)
        old = sig.boundary[op.b]
        return SignatureDelta(cones_added=(2,), circles_removed=(old,),
                              circles_added=(BoundaryPattern(items[1:]),),
                              underlying_before=here, underlying_after=here)
    if isinstance(op, PasteFull):
        first = _full_at(sig, op.b1, op.i1)
        if op.b1 == op.b2:
            if op.i1 == op.i2:
                raise WrongBoundaryKind("cannot paste a full 1-orbifold to itself")
            _full_at(sig, op.b2, op.i2)
            n = len(first)
            j = (op.i2 - op.i1) % n
            left = BoundaryPattern(first[1:j])
            right = BoundaryPattern(first[j + 1:])
            return SignatureDelta(circles_removed=(sig.boundary[op.b1],),
                                  circles_added=(left, right),
                                  underlying_before=here, underlying_after=here)
        second = _full_at(sig, op.b2, op.i2)
        merged = BoundaryPattern(first[1:] + second[1:])
        return SignatureDelta(circles_removed=(sig.boundary[op.b1], sig.boundary[op.b2]),
                              circles_added=(merged,), underlying_before=here,
                              underlying_after=_underlying_plus(sig, 2))
    raise TypeError(f"unknown sewing operation {op!r}")


def sew_signature(sig: OrbifoldSignature, op: SewOp) -> OrbifoldSignature:
    return apply_delta(sig, sewing_delta(sig, op))


def split_signature(sig: OrbifoldSignature, delta: SignatureDelta) -> OrbifoldSignature:
    """Undo a sewing edit recorded by :func:`sewing_delta`."""
    return apply_delta(sig, delta.inverse())


def paste_signatures(sig1: OrbifoldSignature, sig2: OrbifoldSignature,
                     op: Union[PasteClosed, PasteFull]) -> OrbifoldSignature:
    """Paste a boundary of ``sig1`` to a boundary of a separate ``sig2``.

    Indices ``b1``/``i1`` refer to ``sig1`` and ``b2``/``i2`` to ``sig2``.
    """
    if sig1.orientable and sig2.orientable:
        underlying = (sig1.genus + sig2.genus, True)
    else:
        underlying = (sig1.crosscap_number + sig2.crosscap_number, False)
    rest1 = list(sig1.boundary)
    rest2 = list(sig2.boundary)
    if isinstance(op, PasteClosed):
        _plain(sig1, op.b1)
        _plain(sig2, op.b2)
        del rest1[op.b1]
        del rest2[op.b2]
        circles = rest1 + rest2
    elif isinstance(op, PasteFull):
        first = _full_at(sig1, op.b1, op.i1)
        second = _full_at(sig2, op.b2, op.i2)
        del rest1[op.b1]
        del rest2[op.b2]
        circles = rest1 + rest2 + [BoundaryPattern(first[1:] + second[1:])]
    else:
        raise TypeError(f"cannot paste two components with {op!r}")
    return OrbifoldSignature(underlying[0], underlying[1], sig1.cones + sig2.cones, tuple(circles))
