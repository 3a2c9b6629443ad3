"""Shared builders for the worked objects used across the test suite."""

from stnf.exact_arith import Polynomial, Rat, RationalFunction, rat
from stnf.planar_geom import Triangle
from stnf.st_model import AtomicObject, GeometricObject, TimeDepAffinity, TimeInterval


def rf(*coeffs) -> RationalFunction:
    """Polynomial rational function from ascending coefficients."""
    return RationalFunction(Polynomial([rat(c) for c in coeffs]))


def tri(*corners) -> Triangle:
    return Triangle.make(*corners)


def x_plus_t() -> TimeDepAffinity:
    """(x, y, t) -> (x + t, y)"""
    return TimeDepAffinity(rf(1), rf(0), rf(0), rf(1), rf(0, 1), rf(0))


def running_pair() -> GeometricObject:
    """Two moving triangles: a static one and one translating rightwards,
    both alive on [0, 4]; partition events at 1/2, 3/2, 5/2, 7/2."""
    o1 = AtomicObject(tri((-1, 0), (1, 0), (0, 2)), TimeInterval.closed(0, 4),
                      TimeDepAffinity.identity(), source_id="pair")
    o2 = AtomicObject(tri((-3, 1), (-1, 1), (-2, 3)), TimeInterval.closed(0, 4),
                      x_plus_t(), source_id="pair")
    return GeometricObject.make("pair", (o1, o2))


def rect_transform() -> TimeDepAffinity:
    """(x, y, t) -> (x + 2t + 2, y - t - 1)"""
    return TimeDepAffinity(rf(1), rf(0), rf(0), rf(1), rf(2, 2), rf(-1, -1))


def rectangle_split(diagonal: str = "a") -> GeometricObject:
    """The translated rectangle, encoded with either diagonal split."""
    f = rect_transform()
    dom = TimeInterval.closed(0, 4)
    if diagonal == "a":
        t1 = tri((0, 0), (2, 0), (2, -1))
        t2 = tri((0, 0), (0, -1), (2, -1))
    else:
        t1 = tri((0, 0), (2, 0), (0, -1))
        t2 = tri((2, 0), (2, -1), (0, -1))
    atoms = (
        AtomicObject(t1, dom, f, source_id="rect"),
        AtomicObject(t2, dom, f, source_id="rect"),
    )
    return GeometricObject.make("rect", atoms)


def static_object(triangles, lo=0, hi=4, gid="static") -> GeometricObject:
    dom = TimeInterval.closed(lo, hi)
    atoms = tuple(
        AtomicObject(t, dom, TimeDepAffinity.identity(), source_id=gid) for t in triangles
    )
    return GeometricObject.make(gid, atoms)
