"""Homogeneous-coordinate geometry of the real projective plane.

Points and lines are 3-vectors up to scale; a line ``l`` contains a point
``p`` when ``l @ p == 0``.  Collineations are 3x3 matrices up to scale,
stored with ``|det| = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import (
    BadOrder,
    CoincidentArguments,
    Degenerate,
    DegenerateLocus,
    IncidentCenter,
    NonCollinear,
    NonConcurrent,
)
from .tolerances import DEFAULT, Tolerances

ArrayLike = Union[Sequence[float], np.ndarray]


def _vec(x) -> np.ndarray:
    if isinstance(x, (HomPoint, HomLine)):
        return x.coords
    v = np.asarray(x, dtype=float).reshape(3)
    return v


def _unit(v: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(v)
    if n == 0.0:
        raise Degenerate("zero vector has no projective class")
    return v / n


def _normalize_max(v: np.ndarray) -> np.ndarray:
    i = int(np.argmax(np.abs(v)))
    if v[i] == 0.0:
        raise Degenerate("zero vector has no projective class")
    out = v / v[i]
    out.setflags(write=False)
    return out


def same_class(a, b, tol: float = DEFAULT.projective_equal) -> bool:
    """True when two nonzero 3-vectors span the same line through 0."""
    ua, ub = _unit(_vec(a)), _unit(_vec(b))
    return float(np.linalg.norm(np.cross(ua, ub))) < tol


class _Hom:
    __slots__ = ("coords",)

    def __init__(self, coords: ArrayLike):
        self.coords = _normalize_max(np.array(coords, dtype=float).reshape(3))

    def __iter__(self):
        return iter(self.coords.tolist())

    def __getitem__(self, i):
        return self.coords[i]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype)

    def __eq__(self, other):
        if not isinstance(other, type(self)):
            return NotImplemented
        return same_class(self.coords, other.coords)

    __hash__ = None

    def __repr__(self):
        body = ":".join(f"{c:.6g}" for c in self.coords)
        return f"{type(self).__name__}[{body}]"


class HomPoint(_Hom):
    """A point [x:y:z], normalized so its largest coordinate is 1."""

    def affine(self) -> tuple[float, float]:
        x, y, z = self.coords
        return (x / z, y / z)


class HomLine(_Hom):
    """A line given by its covector (a, b, c): ax + by + cz = 0."""

    def contains(self, p, tol: float = DEFAULT.incidence) -> bool:
        return abs(float(_unit(self.coords) @ _unit(_vec(p)))) < tol


def join(p, q, tol: Tolerances = DEFAULT) -> HomLine:
    """Line through two distinct points."""
    a, b = _unit(_vec(p)), _unit(_vec(q))
    c = np.cross(a, b)
    if np.linalg.norm(c) < tol.projective_equal:
        raise CoincidentArguments("join of coincident points")
    return HomLine(c)


def meet(l, m, tol: Tolerances = DEFAULT) -> HomPoint:
    """Intersection point of two distinct lines."""
    a, b = _unit(_vec(l)), _unit(_vec(m))
    c = np.cross(a, b)
    if np.linalg.norm(c) < tol.projective_equal:
        raise CoincidentArguments("meet of coincident lines")
    return HomPoint(c)


# --------------------------------------------------------------------------
# collineations


class Collineation:
    """An element of PGL(3, R) with a fixed |det| = 1 representative."""

    __slots__ = ("matrix", "det_sign")

    def __init__(self, matrix: ArrayLike):
        m = np.array(matrix, dtype=float).reshape(3, 3)
        d = float(np.linalg.det(m))
        if d == 0.0 or not math.isfinite(d):
            raise Degenerate("singular matrix is not a collineation")
        m = m / abs(d) ** (1.0 / 3.0)
        m.setflags(write=False)
        self.matrix = m
        self.det_sign = 1 if d > 0 else -1

    @classmethod
    def identity(cls) -> "Collineation":
        return cls(np.eye(3))

    def __matmul__(self, other):
        if isinstance(other, Collineation):
            return Collineation(self.matrix @ other.matrix)
        if isinstance(other, HomPoint):
            return HomPoint(self.matrix @ other.coords)
        return self.matrix @ np.asarray(other, dtype=float)

    def inverse(self) -> "Collineation":
        return Collineation(np.linalg.inv(self.matrix))

    def __pow__(self, n: int) -> "Collineation":
        if n < 0:
            return Collineation(np.linalg.matrix_power(np.linalg.inv(self.matrix), -n))
        return Collineation(np.linalg.matrix_power(self.matrix, n))

    def apply_line(self, line) -> HomLine:
        """Image of a line: covectors transform by the inverse transpose."""
        return HomLine(np.linalg.solve(self.matrix.T, _vec(line)))

    def conjugate(self, g: "Collineation") -> "Collineation":
        """Return g self g^-1."""
        return Collineation(g.matrix @ self.matrix @ np.linalg.inv(g.matrix))

    def distance(self, other: "Collineation") -> float:
        """Max-entry distance between the two matrices, up to global sign."""
        a, b = self.matrix, other.matrix
        return float(min(np.max(np.abs(a - b)), np.max(np.abs(a + b))))

    def identity_residual(self) -> float:
        return self.distance(Collineation.identity())

    def __eq__(self, other):
        if not isinstance(other, Collineation):
            return NotImplemented
        return self.distance(other) < DEFAULT.matrix_equal

    __hash__ = None

    def __repr__(self):
        return f"Collineation({np.array2string(self.matrix, precision=6)})"


def identity_residual(m: np.ndarray) -> float:
    """Distance of a raw matrix from +-I after normalizing |det| to 1."""
    d = abs(float(np.linalg.det(m)))
    if d == 0.0:
        return math.inf
    n = m / d ** (1.0 / 3.0)
    eye = np.eye(3)
    return float(min(np.max(np.abs(n - eye)), np.max(np.abs(n + eye))))


# --------------------------------------------------------------------------
# classification


class Kind(str, Enum):
    HYPERBOLIC = "Hyperbolic"
    QUASI_HYPERBOLIC = "QuasiHyperbolic"
    ELLIPTIC = "Elliptic"
    REFLECTION = "Reflection"
    PARABOLIC_LIKE = "Parabolic-like"
    OTHER = "Other"


@dataclass(frozen=True)
class CollineationClass:
    kind: Kind
    lam: Optional[float] = None
    tau: Optional[float] = None
    purely_hyperbolic: bool = False
    positive_proximal: bool = False
    order: Optional[int] = None  # elliptic order; None when irrational

    def in_region(self) -> bool:
        return self.lam is not None and in_region(self.lam, self.tau)


def in_region(lam: float, tau: float) -> bool:
    """Membership in the open region of hyperbolic invariants."""
    if not (0.0 < lam < 1.0):
        return False
    return 2.0 / math.sqrt(lam) < tau < lam + lam ** -2


def hyperbolic_eigenvalues(lam: float, tau: float) -> tuple[float, float, float]:
    """Eigenvalues (largest, middle, smallest) realizing invariants (lam, tau)."""
    disc = tau * tau - 4.0 / lam
    root = math.sqrt(max(disc, 0.0))
    big = 0.5 * (tau + root)
    mid = (1.0 / lam) / big  # avoids cancellation in (tau - root) / 2
    return big, mid, lam


def _det_one(m: np.ndarray) -> np.ndarray:
    d = float(np.linalg.det(m))
    n = m / abs(d) ** (1.0 / 3.0)
    return n if d > 0 else -n


def classify(g, tol: Tolerances = DEFAULT) -> CollineationClass:
    """Spectral type of a collineation.

    The determinant-one representative is used, so a reflection shows up
    with spectrum {-1, -1, 1}.
    """
    m = _det_one(g.matrix if isinstance(g, Collineation) else np.asarray(g, float))
    eye = np.eye(3)
    if np.max(np.abs(m - eye)) < tol.matrix_equal:
        return CollineationClass(Kind.OTHER)
    if np.max(np.abs(m @ m - eye)) < 1e3 * tol.matrix_equal:
        return CollineationClass(Kind.REFLECTION, order=2)

    ev = np.linalg.eigvals(m)
    scale = max(1.0, float(np.max(np.abs(ev))))
    real_mask = np.abs(ev.imag) <= 1e-9 * scale
    if real_mask.all():
        vals = sorted(ev.real.tolist(), key=abs, reverse=True)
        l1, l2, l3 = vals
        rel = tol.repeated_eigenvalue
        proximal = l1 > 0 and abs(l1) - abs(l2) > rel * abs(l1)
        if min(vals) <= 0:
            return CollineationClass(Kind.OTHER, positive_proximal=proximal)
        gap12 = (l1 - l2) / l1
        gap23 = (l2 - l3) / l2
        if gap12 > rel and gap23 > rel:
            # the smallest eigenvalue from the determinant keeps its relative accuracy
            lam, tau = float(np.linalg.det(m)) / (l1 * l2), l1 + l2
            if not in_region(lam, tau):
                return CollineationClass(Kind.OTHER, positive_proximal=proximal)
            purely = abs(tau - (1.0 + 1.0 / lam)) < tol.purely_hyperbolic * max(1.0, tau)
            return CollineationClass(Kind.HYPERBOLIC, lam=lam, tau=tau,
                                     purely_hyperbolic=purely,
                                     positive_proximal=True)
        # repeated eigenvalue: decide between a Jordan block and a diagonal one
        if gap12 <= rel and gap23 <= rel:
            return CollineationClass(Kind.PARABOLIC_LIKE)
        rep = 0.5 * (l1 + l2) if gap12 <= rel else 0.5 * (l2 + l3)
        sv = np.linalg.svd(m - rep * eye, compute_uv=False)
        if sv[1] > 1e-6 * scale:
            return CollineationClass(Kind.QUASI_HYPERBOLIC, positive_proximal=proximal)
        return CollineationClass(Kind.OTHER, positive_proximal=proximal)

    # one real eigenvalue and a complex pair
    z = ev[~real_mask][0]
    if abs(abs(z) - 1.0) > 1e-7:
        return CollineationClass(Kind.OTHER)
    theta = abs(math.atan2(z.imag, z.real)) / (2.0 * math.pi)
    for n in range(2, tol.elliptic_order_max + 1):
        k = round(theta * n)
        if k and abs(theta * n - k) < 1e-7 * n and math.gcd(k, n) == 1:
            return CollineationClass(Kind.ELLIPTIC, order=n)
    return CollineationClass(Kind.ELLIPTIC, order=None)


# --------------------------------------------------------------------------
# reflections and rotations


def reflection_matrix(axis: np.ndarray, center: np.ndarray) -> np.ndarray:
    """Raw matrix of x -> x - 2 (axis(x) / axis(center)) center."""
    return np.eye(3) - (2.0 / float(axis @ center)) * np.outer(center, axis)


def reflection_through(axis, center, tol: Tolerances = DEFAULT) -> Collineation:
    """Reflection with fixed line ``axis`` and isolated fixed point ``center``."""
    a, c = _vec(axis), _vec(center)
    if abs(float(_unit(a) @ _unit(c))) < tol.incidence:
        raise IncidentCenter("reflection center lies on its axis")
    return Collineation(reflection_matrix(a, c))


def _check_order(n: int) -> None:
    if int(n) != n or n < 2:
        raise BadOrder(f"order must be an integer >= 2, got {n!r}")


def rotation_of_order(n: int) -> Collineation:
    _check_order(n)
    c, s = math.cos(2 * math.pi / n), math.sin(2 * math.pi / n)
    return Collineation([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def rotation_at(n: int, center, invariant_line, tol: Tolerances = DEFAULT) -> Collineation:
    """Rotation of order n fixing ``center`` and preserving ``invariant_line``."""
    _check_order(n)
    c, line = _vec(center), _vec(invariant_line)
    if abs(float(_unit(c) @ _unit(line))) < tol.incidence:
        raise IncidentCenter("rotation center lies on the invariant line")
    # two points spanning the invariant line
    _, _, vt = np.linalg.svd(line.reshape(1, 3))
    frame = np.column_stack([vt[1], vt[2], c])
    return Collineation(frame @ rotation_of_order(n).matrix @ np.linalg.inv(frame))


# --------------------------------------------------------------------------
# cross-ratios


def _decompose(y: np.ndarray, z: np.ndarray, w: np.ndarray) -> tuple[float, float]:
    basis = np.column_stack([y, z])
    coef, *_ = np.linalg.lstsq(basis, w, rcond=None)
    return float(coef[0]), float(coef[1])


def cross_ratio_vectors(y, z, u, v) -> float:
    """Unchecked cross-ratio of four collinear 3-vectors.

    With u = l1 y + l2 z and v = m1 y + m2 z this is l2 m1 / (l1 m2).
    """
    l1, l2 = _decompose(y, z, u)
    m1, m2 = _decompose(y, z, v)
    return (l2 * m1) / (l1 * m2)


def cross_ratio_points(y, z, u, v, tol: Tolerances = DEFAULT) -> float:
    """Cross-ratio [y, z; u, v] of four collinear points."""
    ys, zs, us, vs = (_unit(_vec(p)) for p in (y, z, u, v))
    if np.linalg.norm(np.cross(ys, zs)) < tol.projective_equal:
        raise Degenerate("first two points coincide")
    normal = _unit(np.cross(ys, zs))
    if abs(float(normal @ us)) > tol.incidence or abs(float(normal @ vs)) > tol.incidence:
        raise NonCollinear("cross-ratio needs four collinear points")
    l1, l2 = _decompose(ys, zs, us)
    m1, m2 = _decompose(ys, zs, vs)
    small = tol.projective_equal
    if min(abs(l1), abs(l2), abs(m1), abs(m2)) < small:
        raise Degenerate("a third or fourth point coincides with y or z")
    return (l2 * m1) / (l1 * m2)


def cross_ratio_lines(a, b, c, d, tol: Tolerances = DEFAULT) -> float:
    """Cross-ratio of four concurrent lines (the dual of the point version)."""
    vecs = [_unit(_vec(x)) for x in (a, b, c, d)]
    if np.linalg.norm(np.cross(vecs[0], vecs[1])) < tol.projective_equal:
        raise Degenerate("first two lines coincide")
    normal = _unit(np.cross(vecs[0], vecs[1]))
    if abs(float(normal @ vecs[2])) > tol.incidence or abs(float(normal @ vecs[3])) > tol.incidence:
        raise NonConcurrent("cross-ratio needs four concurrent lines")
    try:
        return cross_ratio_points(*vecs, tol=tol)
    except NonCollinear as exc:  # pragma: no cover - guarded above
        raise NonConcurrent(str(exc)) from None


def corner_cross_ratio(n: int) -> float:
    """Cross-ratio of the line pencil at a corner reflector of order n.

    Order 2 has no finite value and yields ``math.inf``; callers treat it
    as the right-angle special case.
    """
    _check_order(n)
    if n == 2:
        return math.inf
    return 2.0 / (math.cos(2.0 * math.pi / n) + 1.0)


def points_with_cross_ratio(y: np.ndarray, z: np.ndarray, value: float,
                            position: float) -> tuple[np.ndarray, np.ndarray]:
    """Two points u, v on the segment of lifts y + c z (c > 0) with [y, z; u, v] = value.

    ``position`` slides the pair along the segment: u = y + c z with
    c = exp(position) * sqrt(value) and v = y + (c / value) z.
    """
    c = math.exp(position) * math.sqrt(value)
    return y + c * z, y + (c / value) * z


# --------------------------------------------------------------------------
# conics


class Conic:
    """Zero locus of a symmetric form, normalized so the largest entry is 1."""

    __slots__ = ("coeff_matrix",)

    def __init__(self, q: ArrayLike):
        q = np.array(q, dtype=float).reshape(3, 3)
        q = 0.5 * (q + q.T)
        q = q / np.max(np.abs(q))
        q.setflags(write=False)
        self.coeff_matrix = q

    def residual(self, x) -> float:
        v = _unit(_vec(x))
        return abs(float(v @ self.coeff_matrix @ v))

    def signature(self) -> tuple[int, int]:
        ev = np.linalg.eigvalsh(self.coeff_matrix)
        pos, neg = int(np.sum(ev > 1e-12)), int(np.sum(ev < -1e-12))
        return (pos, neg) if pos >= neg else (neg, pos)

    def __repr__(self):
        return f"Conic({np.array2string(self.coeff_matrix, precision=6)})"


def _monomials(pts: np.ndarray) -> np.ndarray:
    x, y, z = pts[:, 0], pts[:, 1], pts[:, 2]
    return np.column_stack([x * x, y * y, z * z, x * y, x * z, y * z])


def fit_conic(points: Iterable, tol: Tolerances = DEFAULT) -> Conic:
    """Least-squares conic through at least five points (null vector of the design matrix)."""
    pts = np.array([_unit(_vec(p)) for p in points])
    if len(pts) < 5:
        raise DegenerateLocus("need at least five points")
    _, s, vt = np.linalg.svd(_monomials(pts))
    if len(s) >= 6 and s[-2] < tol.conic_singular * s[0]:
        raise DegenerateLocus("points do not determine a unique conic")
    a, b, c, d, e, f = vt[-1]
    q = np.array([[a, d / 2, e / 2], [d / 2, b, f / 2], [e / 2, f / 2, c]])
    conic = Conic(q)
    if abs(np.linalg.det(conic.coeff_matrix)) < tol.conic_singular:
        raise DegenerateLocus("locus is a line pair")
    return conic


def pencil_basis(p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal covectors spanning the pencil of lines through p."""
    _, _, vt = np.linalg.svd(_unit(p).reshape(1, 3))
    return vt[1], vt[2]


def steiner_points(p1, p2, phi, count: int = 8, offset: float = 0.1234) -> list[np.ndarray]:
    """Points l & phi(l) for ``count`` evenly spread lines l through p1."""
    a = _vec(p1)
    m = phi.matrix if isinstance(phi, Collineation) else np.asarray(phi, float)
    e1, e2 = pencil_basis(a)
    out = []
    for k in range(count):
        t = offset + math.pi * k / count
        line = math.cos(t) * e1 + math.sin(t) * e2
        image = m @ line
        out.append(np.cross(line, image))
    return out


def steiner_conic(p1, p2, phi, tol: Tolerances = DEFAULT) -> Conic:
    """Conic traced by l & phi(l) where phi maps the pencil at p1 to the pencil at p2.

    ``phi`` acts on line covectors.  The locus passes through p1 and p2.
    """
    a, b = _unit(_vec(p1)), _unit(_vec(p2))
    m = phi.matrix if isinstance(phi, Collineation) else np.asarray(phi, float)
    e1, e2 = pencil_basis(a)
    for line in (e1, e2):
        img = m @ line
        if abs(float(_unit(img) @ b)) > 1e-7:
            raise DegenerateLocus("phi does not map the pencil at p1 into the pencil at p2")
    pts = steiner_points(a, b, m)
    norms = [np.linalg.norm(p) for p in pts]
    if max(norms) < tol.projective_equal:
        raise DegenerateLocus("every line is fixed by phi; no locus")
    pts = [p for p, n in zip(pts, norms) if n > tol.projective_equal]
    return fit_conic(pts, tol)


def pencil_projectivity(p1, p2, lines1: Sequence, lines2: Sequence) -> Collineation:
    """Collineation on covectors sending three lines through p1 to three lines through p2.

    The induced map on pencils is the unique projectivity with those
    correspondences; the complementary direction is sent to p2 itself.
    """
    a, b = _vec(p1), _vec(p2)
    e1, e2 = pencil_basis(a)
    f1, f2 = pencil_basis(b)
    src = np.array([[_vec(l) @ e1, _vec(l) @ e2] for l in lines1])
    dst = np.array([[_vec(l) @ f1, _vec(l) @ f2] for l in lines2])
    h = _projectivity_2d(src, dst)
    # covector maps: (e1, e2, a) -> (f1, f2, b) columns through h
    to = np.column_stack([f1, f2, _unit(b)])
    frm = np.column_stack([e1, e2, _unit(a)])
    big = np.zeros((3, 3))
    big[:2, :2] = h
    big[2, 2] = 1.0
    return Collineation(to @ big @ frm.T)


def _projectivity_2d(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """2x2 matrix h with h src[i] ~ dst[i] for three pairs of RP^1 points."""
    # columns src0, src1 scaled so that their sum is src2; same for dst
    def frame(pts):
        m = np.column_stack([pts[0], pts[1]])
        k = np.linalg.solve(m, pts[2])
        return m * k
    return frame(dst) @ np.linalg.inv(frame(src))
