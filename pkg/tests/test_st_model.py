import pytest

from fixtures import rectangle_split, rf, running_pair, tri, x_plus_t
from stnf.exact_arith import Polynomial, RationalFunction, TimeValue, rat
from stnf.oracle import union_area
from stnf.planar_geom import pt
from stnf.st_model import (
    AtomicObject,
    GeometricObject,
    TimeDepAffinity,
    TimeInterval,
    atomic_from_json,
    atomic_to_json,
    geometric_from_json,
    geometric_to_json,
    moving_corners,
    snapshot_atomic,
    snapshot_geometric,
    time_domain,
    validate_atomic,
)


def test_interval_basics():
    iv = TimeInterval.closed(0, 4)
    assert iv.contains_rat(rat(1, 4)) and iv.contains_rat(0) and iv.contains_rat(4)
    assert not iv.contains_rat(5)
    half_open = TimeInterval(TimeValue.exact(0), TimeValue.exact(1), True, False)
    assert half_open.contains_rat(0) and not half_open.contains_rat(1)
    with pytest.raises(ValueError):
        TimeInterval.closed(3, 1)
    with pytest.raises(ValueError):
        TimeInterval(TimeValue.exact(1), TimeValue.exact(1), True, False)
    got = TimeInterval.closed(0, 2).intersect(TimeInterval(TimeValue.exact(1), TimeValue.exact(5), False, True))
    assert got == TimeInterval(TimeValue.exact(1), TimeValue.exact(2), False, True)
    assert TimeInterval.closed(0, 1).intersect(TimeInterval.closed(2, 3)) is None


def test_validate_translation_ok():
    g = running_pair()
    assert validate_atomic(g.atoms[0]) == []
    assert validate_atomic(g.atoms[1]) == []


def test_validate_singular_matrix():
    f = TimeDepAffinity(rf(-2, 1), rf(0), rf(0), rf(1), rf(0), rf(0))  # a11 = t - 2
    o = AtomicObject(tri((0, 0), (1, 0), (0, 1)), TimeInterval.closed(0, 4), f)
    vs = validate_atomic(o)
    assert len(vs) == 1
    assert vs[0].kind == "singular-at" and vs[0].time.value == 2


def test_validate_pole_in_domain():
    b1 = RationalFunction(Polynomial([rat(1)]), Polynomial([rat(-1), rat(1)]))  # 1/(t-1)
    f = TimeDepAffinity(rf(1), rf(0), rf(0), rf(1), b1, rf(0))
    o = AtomicObject(tri((0, 0), (1, 0), (0, 1)), TimeInterval.closed(0, 4), f)
    vs = validate_atomic(o)
    assert any(v.kind == "pole-in-domain" and v.entry == "b1" for v in vs)
    # the same pole outside the domain is fine
    o2 = AtomicObject(tri((0, 0), (1, 0), (0, 1)), TimeInterval.closed(2, 4), f)
    assert validate_atomic(o2) == []


def test_snapshot_running_object_golden():
    g = running_pair()
    t = snapshot_atomic(g.atoms[1], rat(1, 4))
    assert t.corners == (pt(rat(-11, 4), 1), pt(rat(-3, 4), 1), pt(rat(-7, 4), 3))
    ident = snapshot_atomic(g.atoms[0], rat(1, 4))
    assert ident.corners == g.atoms[0].ref_triangle.corners
    assert snapshot_atomic(g.atoms[1], 5) is None


def test_snapshot_geometric():
    g = running_pair()
    snap = snapshot_geometric(g, rat(1, 4))
    assert len(snap) == 2
    assert snapshot_geometric(g, 5) == []


def test_snapshot_rectangle_at_zero():
    g = rectangle_split("a")
    snap = snapshot_geometric(g, 0)
    assert len(snap) == 2
    assert union_area(snap) == 2  # the 2 x 1 rectangle, shifted to [2,4]x[-2,-1]
    corners = {c for t in snap for c in t.corners}
    assert corners == {pt(2, -1), pt(4, -1), pt(4, -2), pt(2, -2)}


def test_time_domain():
    g = running_pair()
    dom = time_domain(g)
    assert dom == TimeInterval.closed(0, 4)
    o1 = AtomicObject(tri((0, 0), (1, 0), (0, 1)), TimeInterval.closed(0, 1), TimeDepAffinity.identity())
    o2 = AtomicObject(tri((0, 0), (1, 0), (0, 1)), TimeInterval.closed(3, 5), TimeDepAffinity.identity())
    assert time_domain(GeometricObject.make("g", (o1, o2))) == TimeInterval.closed(0, 5)
    o3 = AtomicObject(tri((0, 0), (1, 0), (0, 1)), TimeInterval.point(2), TimeDepAffinity.identity())
    assert time_domain(GeometricObject.make("g", (o3,))) == TimeInterval.point(2)
    with pytest.raises(ValueError):
        time_domain(GeometricObject.make("empty", ()))


def test_moving_corners_golden():
    g = running_pair()
    mps = moving_corners(g.atoms[1])
    assert [ (mp.fx, mp.fy) for mp in mps ] == [
        (rf(-3, 1), rf(1)),
        (rf(-1, 1), rf(1)),
        (rf(-2, 1), rf(3)),
    ]
    static = moving_corners(g.atoms[0])
    assert all(mp.fx.is_constant and mp.fy.is_constant for mp in static)


def test_snapshot_commutes_with_static_affinity():
    g = running_pair()
    alpha = TimeDepAffinity.constant(2, 1, 0, 1, rat(1, 3), -2)
    for atom in g.atoms:
        composed = AtomicObject(atom.ref_triangle, atom.domain, alpha.compose(atom.transform))
        for tau in (rat(0), rat(1, 4), rat(3), rat(4)):
            direct = alpha.apply_triangle(snapshot_atomic(atom, tau), rat(0))
            via = snapshot_atomic(composed, tau)
            assert direct.corners == via.corners


def test_nondegenerate_snapshot_preserved():
    g = running_pair()
    for tau in (0, 1, 2, 3, 4):
        assert snapshot_atomic(g.atoms[1], tau).degeneracy == "full"


def test_json_roundtrip():
    g = running_pair()
    data = geometric_to_json(g)
    g2 = geometric_from_json(data)
    assert g2.id == g.id and len(g2.atoms) == 2
    assert g2.atoms[1].transform == g.atoms[1].transform
    assert g2.atoms[1].ref_triangle == g.atoms[1].ref_triangle
    assert g2.atoms[1].domain == g.atoms[1].domain
    a = atomic_from_json(atomic_to_json(g.atoms[1]), source_id="x")
    assert a.source_id == "x" and not a.approximate
