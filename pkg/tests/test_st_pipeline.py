import itertools
import random

import pytest

from fixtures import rectangle_split, rf, running_pair, static_object, tri, x_plus_t
from stnf.exact_arith import (
    Polynomial,
    RationalFunction,
    TimeValue,
    rat,
    tv_compare,
)
from stnf.oracle import interiors_disjoint, membership_sample, union_area
from stnf.planar_geom import Triangle, pt
from stnf.st_model import (
    AtomicObject,
    GeometricObject,
    MovingPoint,
    TimeDepAffinity,
    TimeInterval,
    moving_corners,
    snapshot_geometric,
)
from stnf.st_pipeline import (
    EventList,
    InvalidObjectError,
    moving_carrier,
    normal_form_equal,
    pair_events,
    partition,
    recover_affinity,
    sample_time,
    t_st,
    triangulate_steps,
    triple_events,
)


def mp(fx, fy, lo=0, hi=4):
    return MovingPoint(fx, fy, TimeInterval.closed(lo, hi))


def carrier_of(p1, p2):
    return moving_carrier(p1, p2)


# carriers of the running example (Table-3 style data)
def running_carriers():
    I = TimeInterval.closed(0, 4)
    c1 = carrier_of(mp(rf(-1), rf(0)), mp(rf(1), rf(0)))      # y = 0
    c2 = carrier_of(mp(rf(-1), rf(0)), mp(rf(0), rf(2)))      # y = 2x + 2
    c3 = carrier_of(mp(rf(0), rf(2)), mp(rf(1), rf(0)))       # y = -2x + 2
    c4 = carrier_of(mp(rf(-3, 1), rf(1)), mp(rf(-1, 1), rf(1)))   # y = 1
    c5 = carrier_of(mp(rf(-3, 1), rf(1)), mp(rf(-2, 1), rf(3)))   # y = 2x + 7 - 2t
    c6 = carrier_of(mp(rf(-2, 1), rf(3)), mp(rf(-1, 1), rf(1)))   # y = -2x - 1 + 2t
    return I, (c1, c2, c3, c4, c5, c6)


def test_moving_carrier_goldens():
    _, (c1, c2, c3, c4, c5, c6) = running_carriers()
    P = lambda *cs: Polynomial([rat(c) for c in cs])
    assert (c1.a, c1.b, c1.c) == (P(), P(1), P())            # y = 0
    assert (c4.a, c4.b, c4.c) == (P(), P(1), P(1))           # y = 1
    assert (c5.a, c5.b, c5.c) == (P(2), P(-1), P(-7, 2))     # 2x - y = 2t - 7
    assert (c6.a, c6.b, c6.c) == (P(2), P(1), P(-1, 2))      # 2x + y = 2t - 1
    moving_diag = carrier_of(mp(rf(0), rf(0)), mp(rf(0, 1), rf(0, 1)))
    assert (moving_diag.a, moving_diag.b, moving_diag.c) == (P(1), P(-1), P())


def test_moving_carrier_rejects_point():
    with pytest.raises(ValueError):
        carrier_of(mp(rf(1), rf(2)), mp(rf(1), rf(2)))


def test_pair_events_goldens():
    I, (c1, c2, c3, c4, c5, c6) = running_carriers()
    ev = pair_events(c2, c5, I)
    assert len(ev) == 1 and ev[0].value == rat(5, 2)
    ev = pair_events(c3, c6, I)
    assert len(ev) == 1 and ev[0].value == rat(3, 2)
    assert pair_events(c1, c4, I) == []


def test_triple_events_goldens():
    I, (c1, c2, c3, c4, c5, c6) = running_carriers()
    ev = triple_events(c2, c4, c6, I)
    assert len(ev) == 1 and ev[0].value == rat(1, 2)
    ev = triple_events(c3, c4, c5, I)
    assert len(ev) == 1 and ev[0].value == rat(7, 2)
    # identically concurrent static lines: no isolated events
    s1 = carrier_of(mp(rf(0), rf(0)), mp(rf(1), rf(1)))
    s2 = carrier_of(mp(rf(0), rf(0)), mp(rf(1), rf(-1)))
    s3 = carrier_of(mp(rf(0), rf(0)), mp(rf(1), rf(0)))
    assert triple_events(s1, s2, s3, I) == []


def test_partition_golden_running_example():
    chi = partition(running_pair())
    values = [tv.value for tv in chi.times]
    assert values == [rat(0), rat(1, 2), rat(3, 2), rat(5, 2), rat(7, 2), rat(4)]


def test_partition_static_inputs():
    g = static_object([tri((0, 0), (1, 0), (0, 1))])
    assert [tv.value for tv in partition(g).times] == [rat(0), rat(4)]
    a1 = AtomicObject(tri((0, 0), (1, 0), (0, 1)), TimeInterval.closed(0, 1), TimeDepAffinity.identity())
    a2 = AtomicObject(tri((5, 5), (6, 5), (5, 6)), TimeInterval.closed(2, 3), TimeDepAffinity.identity())
    g = GeometricObject.make("two", (a1, a2))
    assert [tv.value for tv in partition(g).times] == [rat(0), rat(1), rat(2), rat(3)]


def test_sample_time():
    assert sample_time(TimeValue.exact(0), TimeValue.exact(rat(1, 2))) == rat(1, 4)
    assert sample_time(TimeValue.exact(rat(1, 2)), TimeValue.exact(rat(3, 2))) == 1
    sqrt2 = TimeValue.algebraic(Polynomial([rat(-2), rat(0), rat(1)]), rat(1), rat(2))
    s = sample_time(sqrt2, TimeValue.exact(2))
    assert s * s > 2 and s < 2


def test_recover_affinity_golden():
    ref = tri((rat(-11, 4), 1), (rat(-3, 4), 1), (rat(-7, 4), 3))
    trajectories = ((rf(-3, 1), rf(1)), (rf(-1, 1), rf(1)), (rf(-2, 1), rf(3)))
    f = recover_affinity(ref, trajectories)
    assert f.a11 == rf(1) and f.a12 == rf(0) and f.b1 == rf(rat(-1, 4), 1)
    assert f.a21 == rf(0) and f.a22 == rf(1) and f.b2 == rf(0)


def test_recover_affinity_identity_and_rotation():
    ref = tri((0, 0), (3, 0), (0, 3))
    statics = tuple((rf(c[0]), rf(c[1])) for c in ref.corners)
    ident = recover_affinity(ref, statics)
    assert ident == TimeDepAffinity.identity()
    # rational rotation family: cos = (1-t^2)/(1+t^2), sin = 2t/(1+t^2)
    den = Polynomial([rat(1), rat(0), rat(1)])
    cos = RationalFunction(Polynomial([rat(1), rat(0), rat(-1)]), den)
    sin = RationalFunction(Polynomial([rat(0), rat(2)]), den)
    rot = TimeDepAffinity(cos, -sin, sin, cos, rf(0), rf(0))
    trajectories = tuple(rot.moving_image(c) for c in ref.corners)
    back = recover_affinity(ref, trajectories)
    assert back == rot


def test_recover_affinity_degenerate():
    seg = tri((0, 0), (2, 0), (2, 0))
    trajectories = ((rf(0, 1), rf(0)), (rf(2, 1), rf(0)), (rf(2, 1), rf(0)))
    f = recover_affinity(seg, trajectories)
    assert f.b1 == rf(0, 1) and f.a11 == rf(1) and f.det() == rf(1)
    point = tri((1, 1), (1, 1), (1, 1))
    f = recover_affinity(point, ((rf(1, 2), rf(1)),) * 3)
    assert f.b1 == rf(0, 2) and f.b2 == rf(0) and f.a11 == rf(1)


def test_triangulate_steps_running_example():
    g = running_pair()
    chi = partition(g)
    elements, atoms_per, _ = triangulate_steps(g, chi)
    assert len(elements) == 11  # 6 points and 5 open intervals
    first_open = elements[1]
    assert not first_open.is_point
    atoms = atoms_per[1]
    # every atom descending from the moving triangle carries (x - 1/4 + t, y)
    expected = TimeDepAffinity(rf(1), rf(0), rf(0), rf(1), rf(rat(-1, 4), 1), rf(0))
    o2_snap = tri((rat(-11, 4), 1), (rat(-3, 4), 1), (rat(-7, 4), 3))
    moved = [a for a in atoms if all(o2_snap.contains(c) for c in a.ref_triangle.corners)]
    assert len(moved) == 3
    for a in moved:
        assert a.transform == expected
    # the static top piece of the other triangle is fanned from (0, 4/3)
    top_corners = {pt(0, 2), pt(rat(-1, 2), 1), pt(rat(1, 2), 1), pt(0, rat(4, 3))}
    top = [a for a in atoms if set(a.ref_triangle.corners) <= top_corners]
    assert len(top) == 3
    for a in top:
        assert a.transform == TimeDepAffinity.identity()


def test_t_st_merges_first_event():
    nf = t_st(running_pair())
    first = nf.partition[0]
    assert first.lo.value == 0 and first.hi.value == rat(1, 2)
    assert first.closed_lo and not first.closed_hi
    # and the trailing point merges symmetrically
    last = nf.partition[-1]
    assert last.lo.value == rat(7, 2) and last.hi.value == 4
    assert not last.closed_lo and last.closed_hi
    assert len(nf.partition) == 9


def test_t_st_static_atom_merges_fully():
    g = static_object([tri((0, 0), (2, 0), (0, 2))])
    nf = t_st(g)
    assert len(nf.partition) == 1
    only = nf.partition[0]
    assert only == TimeInterval.closed(0, 4)
    assert len(nf.atoms) == 3
    for a in nf.atoms:
        assert a.transform == TimeDepAffinity.identity()
        assert a.domain == TimeInterval.closed(0, 4)


def test_t_st_mismatched_shapes_keep_point():
    a1 = AtomicObject(tri((0, 0), (2, 0), (0, 2)), TimeInterval.closed(0, 1), TimeDepAffinity.identity())
    a2 = AtomicObject(tri((10, 0), (12, 0), (10, 2)), TimeInterval.closed(1, 2), TimeDepAffinity.identity())
    nf = t_st(GeometricObject.make("abut", (a1, a2)))
    # at t = 1 both triangles exist; neither open side matches it
    assert any(iv.is_point and iv.lo.value == 1 for iv in nf.partition)


def test_t_st_gap_produces_empty_element():
    a1 = AtomicObject(tri((0, 0), (2, 0), (0, 2)), TimeInterval.closed(0, 1), TimeDepAffinity.identity())
    a2 = AtomicObject(tri((0, 0), (2, 0), (0, 2)), TimeInterval.closed(2, 3), TimeDepAffinity.identity())
    nf = t_st(GeometricObject.make("gap", (a1, a2)))
    assert [_fmt(iv) for iv in nf.partition] == ["[0,1]", "]1,2[", "[2,3]"]
    alive_in_gap = nf.alive_atoms(rat(3, 2))
    assert alive_in_gap == []


def _fmt(iv):
    lo = "[" if iv.closed_lo else "]"
    hi = "]" if iv.closed_hi else "["
    return f"{lo}{iv.lo.value},{iv.hi.value}{hi}"


def test_rectangle_normal_form_unique():
    nfa = t_st(rectangle_split("a"))
    nfb = t_st(rectangle_split("b"))
    assert normal_form_equal(rectangle_split("a"), rectangle_split("b"))
    assert nfa.partition == (TimeInterval.closed(0, 4),)
    assert len(nfa.atoms) == 4
    expected = TimeDepAffinity(rf(1), rf(0), rf(0), rf(1), rf(-4, 2), rf(2, -1))
    for a in nfa.atoms:
        assert a.transform == expected
    assert [a.ref_triangle.corners for a in nfa.atoms] == [
        a.ref_triangle.corners for a in nfb.atoms
    ]


def test_normal_form_equal_redundant_atom():
    g = rectangle_split("a")
    extra = GeometricObject.make("rect", g.atoms + (g.atoms[0],))
    assert normal_form_equal(g, extra)
    other = static_object([tri((0, 0), (1, 0), (0, 1))])
    assert not normal_form_equal(g, other)


def test_t_st_rejects_invalid():
    f = TimeDepAffinity(rf(-2, 1), rf(0), rf(0), rf(1), rf(0), rf(0))
    bad = GeometricObject.make(
        "bad", (AtomicObject(tri((0, 0), (1, 0), (0, 1)), TimeInterval.closed(0, 4), f),)
    )
    with pytest.raises(InvalidObjectError):
        t_st(bad)


def sampled_times(nf, per_interval=5):
    out = []
    for iv in nf.partition:
        if iv.is_point:
            if iv.lo.is_exact:
                out.append(iv.lo.value)
            continue
        lo, hi = iv.lo, iv.hi
        base = sample_time(lo, hi)
        out.append(base)
        for k in range(1, per_interval):
            # nudge within the interval deterministically
            t = sample_time(lo, TimeValue.exact(base)) if k % 2 else sample_time(TimeValue.exact(base), hi)
            out.append(t)
            base = t
    return out


def assert_normal_form_sound(g, nf, k_membership=60):
    for tau in sampled_times(nf):
        snap_in = snapshot_geometric(g, tau)
        alive = nf.alive_atoms(tau)
        tris = [a.transform.apply_triangle(a.ref_triangle, tau) for a in alive]
        for x, y in itertools.combinations(tris, 2):
            assert interiors_disjoint(x, y)
        assert union_area(tris) == union_area(snap_in)
        for v in membership_sample(snap_in, tris, k_membership, seed=99):
            assert v.in_input == v.in_output


def test_running_example_normal_form_sound():
    g = running_pair()
    assert_normal_form_sound(g, t_st(g))


def test_rectangle_normal_form_sound():
    g = rectangle_split("a")
    assert_normal_form_sound(g, t_st(g))


def test_fixpoint_partition_and_snapshots():
    for g in (running_pair(), rectangle_split("a")):
        nf = t_st(g)
        again = t_st(nf.as_geometric(g.id))
        assert nf.partition == again.partition
        for tau in sampled_times(nf, per_interval=3):
            assert nf.snapshot(tau) == again.snapshot(tau)


def test_affine_invariance_snapshot_level():
    g = running_pair()
    nf = t_st(g)
    alpha = TimeDepAffinity.constant(2, 1, 1, 1, rat(1, 2), -3)  # det = 1
    mapped = GeometricObject.make(
        "m", tuple(
            AtomicObject(a.ref_triangle, a.domain, alpha.compose(a.transform), a.source_id)
            for a in g.atoms
        )
    )
    nfm = t_st(mapped)
    assert len(nf.partition) == len(nfm.partition)
    for tau in sampled_times(nf, per_interval=2):
        lhs = sorted(
            alpha.apply_triangle(t, tau).canonicalize().corners for t in nf.snapshot(tau)
        )
        rhs = [t.corners for t in nfm.snapshot(tau)]
        assert lhs == rhs


def test_quadratic_motion_algebraic_events():
    # (x + t^2, y): carrier coincidences at t = sqrt(5/2) and sqrt(3/2)
    f = TimeDepAffinity(rf(1), rf(0), rf(0), rf(1), rf(0, 0, 1), rf(0))
    o1 = AtomicObject(tri((-1, 0), (1, 0), (0, 2)), TimeInterval.closed(0, 2), TimeDepAffinity.identity())
    o2 = AtomicObject(tri((-3, 1), (-1, 1), (-2, 3)), TimeInterval.closed(0, 2), f)
    g = GeometricObject.make("quad", (o1, o2))
    chi = partition(g)
    algebraic = [tv for tv in chi.times if not tv.is_exact]
    assert algebraic, "expected irrational event times"
    nf = t_st(g)
    approx = [a for a in nf.atoms if a.approximate]
    exact = [a for a in nf.atoms if not a.approximate]
    assert approx and exact
    assert_normal_form_sound(g, nf, k_membership=40)
