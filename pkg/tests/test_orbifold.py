import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from orbiproj.errors import MalformedSignature, MissingComponent, NonNegativeEuler, WrongBoundaryKind
from inputs import applicable_ops, random_signature
from orbiproj.orbifold import (
    FULL,
    TAGS,
    BoundaryPattern,
    Crosscap,
    FoldClosed,
    FoldFull,
    OrbifoldSignature,
    PasteClosed,
    PasteFull,
    SilverClosed,
    SilverFull,
    classify_elementary,
    classify_zero_euler,
    deformation_dimension,
    disk,
    elementary_signature,
    euler_characteristic,
    paste_signatures,
    sew_signature,
    sewing_delta,
    sphere,
    split_signature,
    teichmuller_dimension,
)

PLAIN = BoundaryPattern.plain()


# ---------- Euler characteristic ------------------------------------------------

def test_euler_sphere_237():
    assert euler_characteristic(sphere(2, 3, 7)) == Fraction(-1, 42)


def test_euler_mirrored_disk_237():
    assert euler_characteristic(disk((2, 3, 7))) == Fraction(-1, 84)


def test_euler_annulus():
    assert euler_characteristic(OrbifoldSignature(boundary=(PLAIN, PLAIN))) == 0


def test_euler_counts_full_orbifolds():
    # hexagon: disk minus three halves
    assert euler_characteristic(disk((FULL, FULL, FULL))) == Fraction(-1, 2)


# ---------- dimension tables ----------------------------------------------------

@pytest.mark.parametrize("p,q,r", [(3, 3, 4), (3, 5, 5), (4, 4, 4), (3, 7, 11)])
def test_sphere_three_cones_at_least_three(p, q, r):
    s = sphere(p, q, r)
    assert (deformation_dimension(s), teichmuller_dimension(s)) == (2, 0)


@pytest.mark.parametrize("q,r", [(3, 7), (4, 5), (5, 5), (3, 100)])
def test_sphere_with_order_two(q, r):
    s = sphere(2, q, r)
    assert (deformation_dimension(s), teichmuller_dimension(s)) == (0, 0)


@pytest.mark.parametrize("p,q", [(3, 4), (5, 4), (7, 3), (4, 3), (3, 7)])
def test_disk_cone_and_corner(p, q):
    s = disk((q,), cones=(p,))
    assert (deformation_dimension(s), teichmuller_dimension(s)) == (1, 0)


@pytest.mark.parametrize("p,q", [(5, 2), (7, 2), (12, 2)])
def test_disk_cone_and_right_corner(p, q):
    s = disk((q,), cones=(p,))
    assert (deformation_dimension(s), teichmuller_dimension(s)) == (0, 0)


@pytest.mark.parametrize("p,q,r", [(3, 3, 4), (4, 4, 4), (3, 5, 5)])
def test_triangle_corners(p, q, r):
    s = disk((p, q, r))
    assert (deformation_dimension(s), teichmuller_dimension(s)) == (1, 0)


@pytest.mark.parametrize("q,r", [(3, 7), (4, 5), (5, 5)])
def test_triangle_with_right_corner(q, r):
    s = disk((2, q, r))
    assert (deformation_dimension(s), teichmuller_dimension(s)) == (0, 0)


# d and Teichmueller dimension of every elementary type, worked out by hand
ELEMENTARY_TABLE = [
    ("P1", (), 8, 3),
    ("P2", (5,), 6, 2),
    ("P2", (2,), 4, 2),
    ("P3", (3, 5), 4, 1),
    ("P3", (2, 7), 2, 1),
    ("P4", (3, 5, 5), 2, 0),
    ("P4", (2, 5, 7), 0, 0),
    ("A1", (), 4, 2),
    ("A2", (3,), 3, 1),
    ("A2", (2,), 2, 1),
    ("A3", (5,), 2, 1),
    ("A4", (3, 5), 1, 0),
    ("A4", (2, 5), 0, 0),
    ("D1", (), 4, 3),
    ("D2", (5,), 3, 2),
    ("D2", (2,), 2, 2),
    ("D3", (3, 5), 2, 1),
    ("D3", (2, 3), 1, 1),
    ("D4", (3, 3, 4), 1, 0),
    ("D4", (2, 3, 7), 0, 0),
]


@pytest.mark.parametrize("tag,orders,d,t", ELEMENTARY_TABLE)
def test_elementary_dimensions(tag, orders, d, t):
    sig = elementary_signature(tag, orders)
    assert deformation_dimension(sig) == d
    assert teichmuller_dimension(sig) == t
    et = classify_elementary(sig)
    assert et is not None and et.tag == tag


def test_all_tags_in_table():
    assert {row[0] for row in ELEMENTARY_TABLE} == set(TAGS)


def test_pants_teichmuller():
    assert teichmuller_dimension(OrbifoldSignature(boundary=(PLAIN,) * 3)) == 3


def test_dimensions_need_negative_euler():
    with pytest.raises(NonNegativeEuler):
        deformation_dimension(sphere(2, 3, 6))
    with pytest.raises(NonNegativeEuler):
        teichmuller_dimension(OrbifoldSignature(genus=1))


# ---------- classification -------------------------------------------------------

def test_classify_annulus_with_cone():
    et = classify_elementary(OrbifoldSignature(cones=(5,), boundary=(PLAIN, PLAIN)))
    assert et.tag == "P2" and et.orders == (5,)


def test_classify_disk_two_cones_not_elementary():
    assert classify_elementary(OrbifoldSignature(cones=(2, 2), boundary=(PLAIN,))) is None


def test_classify_quadrilateral():
    et = classify_elementary(disk((FULL, 3, 5)))
    assert et.tag == "D3"


def test_classify_a3_needs_order_three():
    assert classify_elementary(disk((FULL,), cones=(2,))) is None


def test_annular_types():
    assert classify_zero_euler(OrbifoldSignature(boundary=(PLAIN, PLAIN))) == 1
    assert classify_zero_euler(OrbifoldSignature(genus=1, orientable=False, boundary=(PLAIN,))) == 2
    assert classify_zero_euler(OrbifoldSignature(boundary=(PLAIN, BoundaryPattern(())))) == 3
    assert classify_zero_euler(OrbifoldSignature(cones=(2, 2), boundary=(PLAIN,))) == 4
    assert classify_zero_euler(disk((FULL, FULL))) == 5
    assert classify_zero_euler(disk((FULL,), cones=(2,))) == 6
    assert classify_zero_euler(disk((FULL, 2, 2))) == 7


def test_torus_not_annular():
    assert classify_zero_euler(OrbifoldSignature(genus=1)) is None


def test_mirrored_annulus_without_boundary_not_annular():
    assert classify_zero_euler(OrbifoldSignature(boundary=(BoundaryPattern(()), BoundaryPattern(())))) is None


# ---------- JSON -----------------------------------------------------------------

def test_json_round_trip():
    sig = OrbifoldSignature(genus=1, cones=(3, 2), boundary=(PLAIN, BoundaryPattern((FULL, 3, 4))))
    assert OrbifoldSignature.from_json(sig.to_json()) == sig


def test_json_rejects_corner_next_to_full():
    with pytest.raises(MalformedSignature):
        BoundaryPattern.from_json({"kind": "mixed", "segments": ["full", "mirror"], "corners": [3, None]})


def test_bad_cone_order():
    with pytest.raises(MalformedSignature):
        sphere(1, 3, 7)


# ---------- sewing -----------------------------------------------------------------

def test_silver_plain_circle():
    sig = OrbifoldSignature(cones=(5,), boundary=(PLAIN, PLAIN))
    out = sew_signature(sig, SilverClosed(0))
    assert sorted(b.kind for b in out.boundary) == ["mirror", "plain"]
    assert euler_characteristic(out) == euler_characteristic(sig)


def test_fold_plain_circle():
    sig = OrbifoldSignature(cones=(5,), boundary=(PLAIN, PLAIN))
    out = sew_signature(sig, FoldClosed(0))
    assert out.cones == (2, 2, 5) and len(out.boundary) == 1
    assert euler_characteristic(out) == euler_characteristic(sig)


def test_silver_full_orbifold():
    sig = disk((FULL, FULL, FULL))
    out = sew_signature(sig, SilverFull(0, 0))
    assert sorted(out.corners) == [2, 2] and out.full_count == 2
    assert euler_characteristic(out) == euler_characteristic(sig)


def test_sewing_errors():
    sig = disk((FULL, 3, 5))
    with pytest.raises(WrongBoundaryKind):
        sew_signature(sig, SilverClosed(0))
    with pytest.raises(MissingComponent):
        sew_signature(sig, SilverFull(4, 0))
    with pytest.raises(WrongBoundaryKind):
        sew_signature(sig, SilverFull(0, 1))


BATTERY = [random_signature(random.Random(seed)) for seed in range(240)]


def test_battery_covers_every_operation():
    kinds = {type(op) for sig in BATTERY for op in applicable_ops(sig)}
    assert kinds == {SilverClosed, FoldClosed, Crosscap, PasteClosed, SilverFull, FoldFull, PasteFull}
    assert len(BATTERY) >= 200


@pytest.mark.parametrize("idx", range(0, len(BATTERY), 8))
def test_sewing_preserves_euler_and_splits_back(idx):
    for sig in BATTERY[idx:idx + 8]:
        chi = euler_characteristic(sig)
        for op in applicable_ops(sig):
            delta = sewing_delta(sig, op)
            out = sew_signature(sig, op)
            assert euler_characteristic(out) == chi
            assert split_signature(out, delta) == sig


def test_pasting_two_pieces_is_additive():
    rng = random.Random(7)
    done = 0
    while done < 200:
        a, b = random_signature(rng), random_signature(rng)
        pa = [i for i, c in enumerate(a.boundary) if c.kind == "plain"]
        pb = [i for i, c in enumerate(b.boundary) if c.kind == "plain"]
        if pa and pb:
            out = paste_signatures(a, b, PasteClosed(pa[0], pb[0]))
            assert euler_characteristic(out) == euler_characteristic(a) + euler_characteristic(b)
            done += 1
        fa = [(i, k) for i, c in enumerate(a.boundary) for k, x in enumerate(c.items or ()) if x == FULL]
        fb = [(i, k) for i, c in enumerate(b.boundary) for k, x in enumerate(c.items or ()) if x == FULL]
        if fa and fb:
            out = paste_signatures(a, b, PasteFull(*fa[0], *fb[0]))
            assert euler_characteristic(out) == euler_characteristic(a) + euler_characteristic(b)
            done += 1


@given(st.lists(st.sampled_from([2, 3, 4, 5, 6, 7, 8]), min_size=0, max_size=4),
       st.lists(st.sampled_from([None, (), (FULL,), (FULL, 3), (2, 3, 4), (FULL, FULL, 5)]),
                min_size=0, max_size=3),
       st.integers(0, 2))
def test_elementary_implies_negative_euler(cones, circles, genus):
    sig = OrbifoldSignature(genus, True, tuple(cones), tuple(BoundaryPattern(c) for c in circles))
    if classify_elementary(sig) is not None:
        assert euler_characteristic(sig) < 0
