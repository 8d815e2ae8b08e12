import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from orbiproj.errors import (
    CoincidentArguments,
    Degenerate,
    DegenerateLocus,
    IncidentCenter,
    NonCollinear,
    NonConcurrent,
)
from orbiproj.projective import (
    Collineation,
    HomLine,
    HomPoint,
    Kind,
    classify,
    corner_cross_ratio,
    cross_ratio_lines,
    cross_ratio_points,
    fit_conic,
    hyperbolic_eigenvalues,
    in_region,
    join,
    meet,
    pencil_projectivity,
    reflection_through,
    rotation_at,
    rotation_of_order,
    steiner_conic,
    steiner_points,
)

coord = st.floats(-3, 3, allow_nan=False)
vec3 = st.tuples(coord, coord, coord).map(np.array)
mat3 = st.lists(coord, min_size=9, max_size=9).map(lambda v: np.array(v).reshape(3, 3))


def line_point(a, b):
    """The point [a:b] of the line z = 0 written in the plane."""
    return np.array([a, b, 0.0])


# ---------- points, lines, incidence -----------------------------------------

def test_hom_point_equality_is_projective():
    assert HomPoint([1, 2, 3]) == HomPoint([-2, -4, -6])
    assert HomPoint([1, 2, 3]) != HomPoint([1, 2, 3.1])
    assert max(abs(c) for c in HomPoint([0.5, -4, 2])) == 1.0


def test_zero_vector_rejected():
    with pytest.raises(Degenerate):
        HomPoint([0, 0, 0])


def test_join_and_meet():
    assert join([1, 0, 0], [0, 1, 0]) == HomLine([0, 0, 1])
    assert meet([0, 0, 1], [0, 1, 0]) == HomPoint([1, 0, 0])
    with pytest.raises(CoincidentArguments):
        join([1, 2, 3], [2, 4, 6])
    with pytest.raises(CoincidentArguments):
        meet([1, 1, 0], [1, 1, 0])


@given(vec3, vec3)
def test_join_contains_both_points(p, q):
    assume(np.linalg.norm(np.cross(p, q)) > 1e-3 * np.linalg.norm(p) * np.linalg.norm(q) + 1e-6)
    line = join(p, q)
    assert line.contains(p) and line.contains(q)


# ---------- cross-ratios -----------------------------------------------------

def test_cross_ratio_of_affine_points():
    # y = 1, z = 0, u = 1/2, v = 1/4 on the affine line
    pts = [line_point(x, 1) for x in (1.0, 0.0, 0.5, 0.25)]
    assert cross_ratio_points(*pts) == pytest.approx((1 - 0.5) / 0.5 * 0.25 / (1 - 0.25), rel=1e-12)
    assert cross_ratio_points(*pts) == pytest.approx(1 / 3, rel=1e-12)


def test_cross_ratio_zero_infinity_one():
    # with u = l1 y + l2 z and v = m1 y + m2 z the value is l2 m1 / (l1 m2),
    # which for the affine points 0, inf, 1, z is 1/z
    y, z, u, v = line_point(0, 1), line_point(1, 0), line_point(1, 1), line_point(3, 1)
    assert cross_ratio_points(y, z, u, v) == pytest.approx(1 / 3, rel=1e-12)
    assert cross_ratio_points(y, z, v, u) == pytest.approx(3.0, rel=1e-12)


def test_cross_ratio_repeated_third_point():
    pts = [line_point(x, 1) for x in (0.0, 2.0, 0.7)]
    assert cross_ratio_points(pts[0], pts[1], pts[2], pts[2]) == pytest.approx(1.0)


def test_cross_ratio_rejects_bad_input():
    with pytest.raises(NonCollinear):
        cross_ratio_points([1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1])
    with pytest.raises(Degenerate):
        cross_ratio_points([1, 0, 0], [2, 0, 0], [1, 1, 0], [0, 1, 0])


def test_cross_ratio_of_lines_is_dual():
    # lines through [0:0:1] with the covectors of the points in the first example
    a, b, c, d = ([p[0], p[1], 0.0] for p in ([0, 1], [1, 0], [1, 1], [3, 1]))
    assert cross_ratio_lines(a, b, c, d) == pytest.approx(1 / 3, rel=1e-12)


@pytest.mark.parametrize("z", [0.3, 2.0, 5.5, -1.5])
def test_cross_ratio_of_lines_by_slope(z):
    # slopes 0, inf, 1, z through the origin; a transversal x = 1 meets them at
    # heights 0, inf, 1, z, so the point value there is the oracle
    lines = [HomLine([0, 1, 0]), HomLine([1, 0, 0]), HomLine([1, -1, 0]), HomLine([z, -1, 0])]
    transversal = HomLine([1, 0, -1])
    pts = [meet(l, transversal) for l in lines]
    expected = cross_ratio_points(*pts)
    assert cross_ratio_lines(*lines) == pytest.approx(expected, rel=1e-12)
    assert expected == pytest.approx(1 / z, rel=1e-12)


def test_cross_ratio_of_lines_needs_concurrency():
    with pytest.raises(NonConcurrent):
        cross_ratio_lines([1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1])


@settings(max_examples=200)
@given(vec3, vec3, st.floats(0.1, 5), st.floats(0.1, 5), st.floats(-5, 5), st.floats(-5, 5), mat3)
def test_cross_ratio_is_projectively_invariant(y, z, a, b, c, d, g):
    assume(np.linalg.norm(np.cross(y, z)) > 0.1)
    assume(abs(c) > 0.1 and abs(d) > 0.1)
    assume(abs(np.linalg.det(g)) > 0.1 and np.linalg.cond(g) < 1e3)
    u, v = a * y + b * z, c * y + d * z
    before = cross_ratio_points(y, z, u, v)
    after = cross_ratio_points(g @ y, g @ z, g @ u, g @ v)
    assert after == pytest.approx(before, rel=1e-9)


# ---------- classification ---------------------------------------------------

def test_classify_diagonal_hyperbolic():
    c = classify(np.diag([4.0, 1.0, 0.25]))
    assert c.kind is Kind.HYPERBOLIC
    assert c.lam == pytest.approx(0.25, rel=1e-12)
    assert c.tau == pytest.approx(5.0, rel=1e-12)
    assert c.purely_hyperbolic


def test_classify_not_purely_hyperbolic():
    c = classify(np.diag([4.0, 2.0, 0.125]))
    assert c.kind is Kind.HYPERBOLIC and not c.purely_hyperbolic


def test_classify_rotation():
    c = classify(rotation_of_order(5))
    assert c.kind is Kind.ELLIPTIC and c.order == 5


def test_classify_quasi_hyperbolic():
    m = np.array([[2.0, 1.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 0.25]])
    assert classify(m).kind is Kind.QUASI_HYPERBOLIC


def test_classify_unipotent():
    m = np.array([[1.0, 1.0, 0.5], [0.0, 1.0, 1.0], [0.0, 0.0, 1.0]])
    assert classify(m).kind is Kind.PARABOLIC_LIKE


def test_classify_reflection():
    c = classify(np.diag([1.0, 1.0, -1.0]))
    assert c.kind is Kind.REFLECTION and c.order == 2


def test_region_is_open():
    assert not in_region(0.25, 4.0)
    assert not in_region(0.25, 16.25)
    assert in_region(0.25, 5.0)


lam_tau = st.floats(0.05, 0.95).flatmap(
    lambda lam: st.tuples(st.just(lam), st.floats(2 / math.sqrt(lam), lam + lam ** -2).filter(
        lambda t: in_region(lam, t) and min(t - 2 / math.sqrt(lam), lam + lam ** -2 - t) > 1e-3)))


@settings(max_examples=200)
@given(lam_tau, mat3)
def test_classify_conjugation_invariant(lt, g):
    lam, tau = lt
    assume(abs(np.linalg.det(g)) > 0.1 and np.linalg.cond(g) < 50)
    m = np.diag(hyperbolic_eigenvalues(lam, tau))
    c0 = classify(m)
    c1 = classify(g @ m @ np.linalg.inv(g))
    assert c0.kind is c1.kind is Kind.HYPERBOLIC
    assert c1.lam == pytest.approx(c0.lam, rel=1e-9)
    assert c1.tau == pytest.approx(c0.tau, rel=1e-9)
    assert in_region(c1.lam, c1.tau)


@given(mat3)
def test_hyperbolic_classification_stays_in_region(m):
    assume(abs(np.linalg.det(m)) > 1e-3)
    c = classify(m)
    if c.kind is Kind.HYPERBOLIC:
        assert 0 < c.lam < 1
        assert 2 / math.sqrt(c.lam) < c.tau < c.lam + c.lam ** -2


# ---------- reflections and rotations -----------------------------------------

def test_reflection_through_standard():
    r = reflection_through([0, 0, 1], [0, 0, 1])
    assert r == Collineation(np.diag([1.0, 1.0, -1.0]))
    assert (r @ r).identity_residual() < 1e-12


def test_reflection_center_on_axis():
    with pytest.raises(IncidentCenter):
        reflection_through([0, 0, 1], [1, 0, 0])


@given(vec3, vec3)
def test_reflection_is_involution(axis, center):
    assume(np.linalg.norm(axis) > 0.1 and np.linalg.norm(center) > 0.1)
    assume(abs(axis @ center) > 0.2 * np.linalg.norm(axis) * np.linalg.norm(center))
    r = reflection_through(axis, center)
    assert (r @ r).identity_residual() < 1e-12
    assert r @ HomPoint(center) == HomPoint(center)


def test_rotation_of_order_two_is_reflection():
    r = rotation_of_order(2)
    assert r == Collineation(np.diag([-1.0, -1.0, 1.0]))
    assert classify(r).kind is Kind.REFLECTION


@pytest.mark.parametrize("n", range(2, 25))
def test_rotation_orders_exact(n):
    g = rotation_at(n, [1, 1, 1], [0, 0, 1]) if n % 2 else rotation_of_order(n)
    for k in range(1, n):
        assert (g ** k).identity_residual() > 1e-6
    assert (g ** n).identity_residual() < 1e-12


def test_rotation_at_fixes_center_and_line():
    g = rotation_at(3, [1, 1, 1], [0, 0, 1])
    assert g @ HomPoint([1, 1, 1]) == HomPoint([1, 1, 1])
    assert g.apply_line([0, 0, 1]) == HomLine([0, 0, 1])
    assert (g ** 3).identity_residual() < 1e-12


# ---------- corner cross-ratios and conics ------------------------------------

def test_corner_cross_ratio():
    assert corner_cross_ratio(2) == math.inf
    assert corner_cross_ratio(3) == pytest.approx(4.0, rel=1e-12)
    assert corner_cross_ratio(4) == pytest.approx(2.0, rel=1e-12)


def _example_projectivity():
    p1, p2 = np.array([1.0, 0.0, 1.0]), np.array([0.0, 1.0, 1.0])
    src = [np.cross(p1, q) for q in ([0, 0, 1], [1, 1, 1], [2, -1, 1])]
    dst = [np.cross(p2, q) for q in ([0, 0, 1], [1, 1, 1], [-1, 3, 1])]
    return p1, p2, pencil_projectivity(p1, p2, src, dst)


def test_steiner_conic_passes_through_centers():
    p1, p2, phi = _example_projectivity()
    q = steiner_conic(p1, p2, phi)
    assert q.residual(p1) < 1e-9 and q.residual(p2) < 1e-9
    assert q.residual([0, 0, 1]) < 1e-9 and q.residual([1, 1, 1]) < 1e-9


def test_steiner_conic_fresh_samples():
    p1, p2, phi = _example_projectivity()
    q = steiner_conic(p1, p2, phi)
    fresh = steiner_points(p1, p2, phi, count=100, offset=0.0371)
    assert max(q.residual(x) for x in fresh if np.linalg.norm(x) > 1e-9) < 1e-9


def test_steiner_identity_is_degenerate():
    p = np.array([1.0, 2.0, 1.0])
    with pytest.raises(DegenerateLocus):
        steiner_conic(p, p, np.eye(3))


def test_fit_conic_needs_five_points():
    with pytest.raises(DegenerateLocus):
        fit_conic([[1, 0, 1], [0, 1, 1], [-1, 0, 1], [0, -1, 1]])
