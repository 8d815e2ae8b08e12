import math

import numpy as np
import pytest

from orbiproj.devmap import convexity_check, enumerate_tiles
from orbiproj.elementary import solve_request
from orbiproj.errors import (
    BadParameter,
    InvariantMismatch,
    MissingComponent,
    NotHyperbolic,
    NotPurelyHyperbolic,
    WrongBoundaryKind,
)
from orbiproj.projective import Kind, classify, identity_residual
from orbiproj.surgery import (
    ConvexStructure,
    OpenEnd,
    configuration_invariants,
    crosscap,
    fold,
    hyperbolic_frame,
    paste,
    silver,
)

P1 = {"type": "P1", "ends": [{"hyp": [0.25, 5]}] * 3, "fiber": [1, 1]}
P2 = {"type": "P2", "ends": [{"hyp": [0.25, 5]}, {"hyp": [0.25, 5]}, {"cone": 5}], "fiber": [1.5, 0.8]}
D1 = {"type": "D1", "ends": [{"full": 0.2}, {"full": 0.4}, {"full": 0.3}], "fiber": [0]}


def structure(request, label):
    return ConvexStructure.from_elementary(solve_request(request), label)


def bare(matrix):
    """A one-generator structure whose only end has the given holonomy."""
    tile = np.array([[1.0, 0.0, 1.0], [0.0, 1.0, 1.0], [0.0, 0.0, 1.0]])
    return ConvexStructure(generators={"g": np.asarray(matrix, float)}, relations=[], tiles=[tile],
                           ends={"b": OpenEnd("closed", ((("g", 1),),))}, circles=[("plain", "b")])


def assert_sound(S, depth=3):
    assert S.max_residual() < 1e-8
    report = convexity_check(enumerate_tiles(S, depth))
    assert report.passed, report


# --------------------------------------------------------------------------
# pasting


def test_paste_closed_ends():
    P, Q = structure(P1, "P"), structure(P1, "Q")
    out = paste(P, "P.e0", Q, "Q.e0", (0.0, 0.0))
    assert out.euler_characteristic() == P.euler_characteristic() + Q.euler_characteristic()
    assert set(out.ends) == {"P.e1", "P.e2", "Q.e1", "Q.e2"}
    assert out.genus == 0 and len(out.circles) == 4
    assert_sound(out)


def test_paste_mismatch():
    P = structure(P1, "P")
    Q = structure({**P1, "ends": [{"hyp": [0.26, 5]}] * 3}, "Q")
    with pytest.raises(InvariantMismatch):
        paste(P, "P.e0", Q, "Q.e0", (0.0, 0.0))


def test_paste_parameters_are_faithful():
    P, Q = structure(P1, "P"), structure(P1, "Q")
    a = paste(P, "P.e0", Q, "Q.e0", (0.0, 0.0))
    b = paste(P, "P.e0", Q, "Q.e0", (1.0, 0.0))
    ia = configuration_invariants(a.generators["P.B"], a.generators["Q.B"])
    ib = configuration_invariants(b.generators["P.B"], b.generators["Q.B"])
    assert np.max(np.abs(ia - ib)) > 1e-3
    # the same parameters reproduce the same configuration
    again = paste(P, "P.e0", Q, "Q.e0", (1.0, 0.0))
    assert configuration_invariants(again.generators["P.B"], again.generators["Q.B"]) == \
        pytest.approx(ib, abs=1e-9)


def test_configuration_invariants_are_conjugation_invariant():
    P = structure(P1, "P")
    g, h = P.generators["P.A"], P.generators["P.B"]
    c = np.array([[2.0, 0.3, -0.1], [0.1, 1.0, 0.4], [0.2, -0.5, 1.5]])
    ci = np.linalg.inv(c)
    assert configuration_invariants(c @ g @ ci, c @ h @ ci) == \
        pytest.approx(configuration_invariants(g, h), rel=1e-8)


def test_paste_within_one_structure():
    P = structure(P1, "P")
    out = paste(P, "P.e0", None, "P.e1", (0.3, -0.2))
    assert out.euler_characteristic() == P.euler_characteristic()
    assert out.genus == 1 and "t" in out.generators
    assert list(out.ends) == ["P.e2"]
    assert_sound(out)


def test_paste_full_ends():
    P, Q = structure(D1, "P"), structure(D1, "Q")
    out = paste(P, "P.e0", Q, "Q.e0", (0.4,))
    assert out.euler_characteristic() == P.euler_characteristic() + Q.euler_characteristic()
    assert_sound(out)


def test_paste_rejects_bad_input():
    P, Q, R = structure(P1, "P"), structure(P1, "Q"), structure(D1, "R")
    with pytest.raises(WrongBoundaryKind):
        paste(P, "P.e0", R, "R.e0", (0.0, 0.0))
    with pytest.raises(MissingComponent):
        paste(P, "P.e7", Q, "Q.e0", (0.0, 0.0))
    with pytest.raises(BadParameter):
        paste(P, "P.e0", Q, "Q.e0", (0.0,))
    with pytest.raises(WrongBoundaryKind):
        paste(P, "P.e0", P, "P.e0", (0.0, 0.0))


# --------------------------------------------------------------------------
# cross-caps, mirrors and folds


def test_crosscap_square_root():
    P = structure(P1, "P")
    out = crosscap(P, "P.e0")
    c = out.generators["c"]
    theta = P.holonomy(P.ends["P.e0"].words[0])
    assert identity_residual(c @ c @ np.linalg.inv(theta)) < 1e-10
    frame, ev = hyperbolic_frame(theta)
    ev_half = np.linalg.solve(frame, c @ frame) / np.cbrt(np.prod(ev))
    assert np.diag(ev_half) == pytest.approx(np.sqrt(ev) * [1, -1, 1], abs=1e-9)
    assert np.linalg.det(c) < 0
    assert out.euler_characteristic() == P.euler_characteristic()
    assert not out.orientable
    assert_sound(out)


def test_crosscap_diagonal_example():
    S = crosscap(bare(np.diag([4.0, 1.0, 0.25])), "b")
    c = S.generators["c"]
    assert np.allclose(np.abs(c), np.diag([2.0, 1.0, 0.5]), atol=1e-12)
    assert np.linalg.det(c) < 0
    assert np.allclose(c @ c, np.diag([4.0, 1.0, 0.25]), atol=1e-12)


def test_silver_closed_end():
    P = structure(P2, "P")
    out = silver(P, "P.e0")
    F = out.generators["F"]
    theta = P.holonomy(P.ends["P.e0"].words[0])
    assert np.max(np.abs(F @ theta - theta @ F)) < 1e-12 * np.max(np.abs(theta))
    assert classify(F).kind == Kind.REFLECTION
    assert out.euler_characteristic() == P.euler_characteristic()
    assert_sound(out)
    with pytest.raises(MissingComponent):
        silver(out, "P.e0")


def test_silver_full_end():
    P = structure(D1, "P")
    out = silver(P, "P.e1")
    assert out.euler_characteristic() == P.euler_characteristic()
    assert_sound(out)


def test_fold_closed_end():
    P = structure(P1, "P")
    out = fold(P, "P.e0", 1.0)
    F = out.generators["F"]
    theta = P.holonomy(P.ends["P.e0"].words[0])
    assert identity_residual(F @ F) < 1e-10
    assert identity_residual(F @ theta @ np.linalg.inv(F) @ theta) < 1e-9
    assert classify(theta @ F).kind == Kind.REFLECTION
    assert out.euler_characteristic() == P.euler_characteristic()
    assert sorted(out.cones) == [2, 2]
    assert_sound(out)


def test_fold_diagonal_example():
    S = fold(bare(np.diag([4.0, 1.0, 0.25])), "b", 1.0)
    F = S.generators["F"]
    assert np.allclose(np.abs(F), np.fliplr(np.eye(3)), atol=1e-12)
    assert np.allclose(F @ np.diag([4.0, 1.0, 0.25]) @ np.linalg.inv(F), np.diag([0.25, 1.0, 4.0]),
                       atol=1e-12)


def test_fold_parameter_is_faithful():
    P = structure(P1, "P")
    a, b = fold(P, "P.e0", 1.0), fold(P, "P.e0", 2.0)
    g = P.generators["P.B"]
    ia = configuration_invariants(g, a.generators["F"] @ g @ a.generators["F"])
    ib = configuration_invariants(g, b.generators["F"] @ g @ b.generators["F"])
    assert np.max(np.abs(ia - ib)) > 1e-3


def test_fold_full_end():
    P = structure(D1, "P")
    out = fold(P, "P.e1")
    assert 2 in out.cones
    assert out.euler_characteristic() == P.euler_characteristic()
    assert_sound(out)


def test_fold_errors():
    with pytest.raises(NotPurelyHyperbolic):
        fold(bare(np.diag([4.0, 2.0, 1 / 8])), "b", 1.0)
    with pytest.raises(BadParameter):
        fold(bare(np.diag([4.0, 1.0, 0.25])), "b", -1.0)
    with pytest.raises(BadParameter):
        fold(structure(D1, "P"), "P.e0", 1.0)


QUASI = np.array([[1.0, 1.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]) @ np.diag([2.0, 2.0, 0.25])


@pytest.mark.parametrize("op", [silver, crosscap, lambda S, b: fold(S, b, 1.0)])
def test_quasi_hyperbolic_end_is_rejected(op):
    with pytest.raises(NotHyperbolic):
        op(bare(QUASI), "b")


def test_chain_of_operations():
    P, Q = structure(P1, "P"), structure(P2, "Q")
    out = paste(P, "P.e1", Q, "Q.e0", (0.2, 0.1))
    out = crosscap(out, "P.e2")
    out = silver(out, "Q.e1")
    chi = P.euler_characteristic() + Q.euler_characteristic()
    assert out.euler_characteristic() == chi
    assert math.isfinite(out.max_residual())
    assert_sound(out)
