"""The geometric data model: atomic objects (reference triangle, time
interval, time-dependent affinity), geometric objects, snapshots, and
validity checking.

An atomic object is valid when every transform coefficient is pole-free on
its time domain and the matrix determinant never vanishes there; the
pipeline refuses invalid inputs rather than clipping domains.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Sequence, Tuple

from .exact_arith import (
    Polynomial,
    Rat,
    RationalFunction,
    TimeValue,
    poly_from_json,
    poly_real_roots,
    poly_to_json,
    rat_from_pair,
    rat_to_pair,
    ratfun_from_json,
    ratfun_to_json,
    tv_compare,
    tv_from_json,
    tv_to_json,
)
from .planar_geom import Point, Triangle


@dataclass(frozen=True)
class TimeInterval:
    """A point or interval of time with open/closed endpoint flags."""

    lo: TimeValue
    hi: TimeValue
    closed_lo: bool = True
    closed_hi: bool = True

    def __post_init__(self):
        c = tv_compare(self.lo, self.hi)
        if c > 0:
            raise ValueError("interval with lo > hi")
        if c == 0 and not (self.closed_lo and self.closed_hi):
            raise ValueError("a time point must be closed on both sides")

    @staticmethod
    def closed(lo, hi) -> "TimeInterval":
        return TimeInterval(TimeValue.exact(lo), TimeValue.exact(hi))

    @staticmethod
    def point(tau) -> "TimeInterval":
        tv = tau if isinstance(tau, TimeValue) else TimeValue.exact(tau)
        return TimeInterval(tv, tv)

    @property
    def is_point(self) -> bool:
        return tv_compare(self.lo, self.hi) == 0

    def contains_tv(self, tv: TimeValue) -> bool:
        c = tv_compare(tv, self.lo)
        if c < 0 or (c == 0 and not self.closed_lo):
            return False
        c = tv_compare(tv, self.hi)
        if c > 0 or (c == 0 and not self.closed_hi):
            return False
        return True

    def contains_rat(self, tau) -> bool:
        return self.contains_tv(TimeValue.exact(tau))

    def intersect(self, other: "TimeInterval") -> Optional["TimeInterval"]:
        lo, closed_lo = self.lo, self.closed_lo
        c = tv_compare(other.lo, lo)
        if c > 0:
            lo, closed_lo = other.lo, other.closed_lo
        elif c == 0:
            closed_lo = closed_lo and other.closed_lo
        hi, closed_hi = self.hi, self.closed_hi
        c = tv_compare(other.hi, hi)
        if c < 0:
            hi, closed_hi = other.hi, other.closed_hi
        elif c == 0:
            closed_hi = closed_hi and other.closed_hi
        c = tv_compare(lo, hi)
        if c > 0 or (c == 0 and not (closed_lo and closed_hi)):
            return None
        return TimeInterval(lo, hi, closed_lo, closed_hi)

    def sort_key(self):
        # deterministic order for canonical output: by refined brackets,
        # resolved exactly by tv ordering (used only on comparable lists)
        return _IntervalKey(self)


class _IntervalKey:
    __slots__ = ("iv",)

    def __init__(self, iv: TimeInterval):
        self.iv = iv

    def __lt__(self, other: "_IntervalKey"):
        a, b = self.iv, other.iv
        c = tv_compare(a.lo, b.lo)
        if c != 0:
            return c < 0
        if a.closed_lo != b.closed_lo:
            return a.closed_lo  # closed start sorts first
        c = tv_compare(a.hi, b.hi)
        if c != 0:
            return c < 0
        return a.closed_hi < b.closed_hi


@dataclass(frozen=True)
class TimeDepAffinity:
    """Affinity (x, y) -> A(t)(x, y) + b(t) with rational-function entries."""

    a11: RationalFunction
    a12: RationalFunction
    a21: RationalFunction
    a22: RationalFunction
    b1: RationalFunction
    b2: RationalFunction

    @staticmethod
    def identity() -> "TimeDepAffinity":
        one = RationalFunction.const(1)
        zero = RationalFunction.const(0)
        return TimeDepAffinity(one, zero, zero, one, zero, zero)

    @staticmethod
    def constant(a11, a12, a21, a22, b1, b2) -> "TimeDepAffinity":
        return TimeDepAffinity(*(RationalFunction.const(v) for v in (a11, a12, a21, a22, b1, b2)))

    @staticmethod
    def translation(fx: RationalFunction, fy: RationalFunction) -> "TimeDepAffinity":
        one = RationalFunction.const(1)
        zero = RationalFunction.const(0)
        return TimeDepAffinity(one, zero, zero, one, fx, fy)

    def entries(self) -> Tuple[RationalFunction, ...]:
        return (self.a11, self.a12, self.a21, self.a22, self.b1, self.b2)

    def det(self) -> RationalFunction:
        return self.a11 * self.a22 - self.a12 * self.a21

    def apply_point(self, p: Point, tau) -> Point:
        tau = Rat(tau)
        x = self.a11.eval(tau) * p.x + self.a12.eval(tau) * p.y + self.b1.eval(tau)
        y = self.a21.eval(tau) * p.x + self.a22.eval(tau) * p.y + self.b2.eval(tau)
        return Point(x, y)

    def apply_triangle(self, t: Triangle, tau) -> Triangle:
        return Triangle(tuple(self.apply_point(c, tau) for c in t.corners))

    def moving_image(self, p: Point) -> Tuple[RationalFunction, RationalFunction]:
        """Coordinate functions of the trajectory of a fixed point."""
        x = RationalFunction.const(p.x)
        y = RationalFunction.const(p.y)
        return (self.a11 * x + self.a12 * y + self.b1,
                self.a21 * x + self.a22 * y + self.b2)

    def compose(self, inner: "TimeDepAffinity") -> "TimeDepAffinity":
        """self after inner: (self . inner)(p, t) = self(inner(p, t), t)."""
        s, f = self, inner
        return TimeDepAffinity(
            s.a11 * f.a11 + s.a12 * f.a21,
            s.a11 * f.a12 + s.a12 * f.a22,
            s.a21 * f.a11 + s.a22 * f.a21,
            s.a21 * f.a12 + s.a22 * f.a22,
            s.a11 * f.b1 + s.a12 * f.b2 + s.b1,
            s.a21 * f.b1 + s.a22 * f.b2 + s.b2,
        )


@dataclass(frozen=True)
class MovingPoint:
    fx: RationalFunction
    fy: RationalFunction
    domain: TimeInterval

    def at(self, tau) -> Point:
        return Point(self.fx.eval(tau), self.fy.eval(tau))


@dataclass(frozen=True)
class AtomicObject:
    ref_triangle: Triangle
    domain: TimeInterval
    transform: TimeDepAffinity
    source_id: str = ""
    approximate: bool = False


@dataclass(frozen=True)
class GeometricObject:
    id: str
    atoms: Tuple[AtomicObject, ...]

    @staticmethod
    def make(id: str, atoms: Sequence[AtomicObject]) -> "GeometricObject":
        return GeometricObject(id, tuple(atoms))


class Violation(NamedTuple):
    kind: str       # "pole-in-domain" | "singular-at" | "singular-identically"
    entry: str      # which coefficient (or "det")
    time: Optional[TimeValue]

    def render(self) -> str:
        if self.time is None:
            return f"{self.kind}({self.entry})"
        lo, hi = self.time.bracket()
        where = f"{lo}" if lo == hi else f"[{lo},{hi}]"
        return f"{self.kind}-{where}({self.entry})"


def _interval_rational_bounds(iv: TimeInterval) -> Tuple[Rat, Rat]:
    lo, _ = iv.lo.bracket()
    _, hi = iv.hi.bracket()
    return lo, hi


def roots_in_interval(p: Polynomial, iv: TimeInterval) -> List[TimeValue]:
    """Real roots of p lying inside the time interval (flags respected)."""
    if p.is_zero:
        raise ValueError("indeterminate roots: zero polynomial")
    if p.degree < 1:
        return []
    lo, hi = _interval_rational_bounds(iv)
    return [r for r in poly_real_roots(p, lo, hi) if iv.contains_tv(r)]


def validate_atomic(o: AtomicObject) -> List[Violation]:
    """Check pole-freeness of every coefficient and nonsingularity of the
    matrix over the whole time domain; empty list means valid."""
    out: List[Violation] = []
    names = ("a11", "a12", "a21", "a22", "b1", "b2")
    for name, f in zip(names, o.transform.entries()):
        if f.den.degree >= 1:
            for r in roots_in_interval(f.den, o.domain):
                out.append(Violation("pole-in-domain", name, r))
    det = o.transform.det()
    if det.is_zero:
        out.append(Violation("singular-identically", "det", None))
    else:
        if det.den.degree >= 1:
            for r in roots_in_interval(det.den, o.domain):
                out.append(Violation("pole-in-domain", "det", r))
        if det.num.degree >= 1:
            for r in roots_in_interval(det.num, o.domain):
                out.append(Violation("singular-at", "det", r))
    return out


def validate_geometric(g: GeometricObject) -> List[Tuple[int, Violation]]:
    out = []
    for i, atom in enumerate(g.atoms):
        for v in validate_atomic(atom):
            out.append((i, v))
    return out


def snapshot_atomic(o: AtomicObject, tau) -> Optional[Triangle]:
    """The snapshot triangle at a rational time, or None outside the domain."""
    tau = Rat(tau)
    if not o.domain.contains_rat(tau):
        return None
    return o.transform.apply_triangle(o.ref_triangle, tau)


def snapshot_geometric(g: GeometricObject, tau) -> List[Triangle]:
    """Union of atomic snapshots, deduplicated and canonically ordered."""
    seen = set()
    out = []
    for atom in g.atoms:
        t = snapshot_atomic(atom, tau)
        if t is None:
            continue
        c = t.canonicalize()
        if c.corners not in seen:
            seen.add(c.corners)
            out.append(c)
    out.sort(key=lambda t: t.sort_key())
    return out


def time_domain(g: GeometricObject) -> TimeInterval:
    """Convex closure of the atom domains."""
    if not g.atoms:
        raise ValueError("empty geometric object has no time domain")
    lo, closed_lo = g.atoms[0].domain.lo, g.atoms[0].domain.closed_lo
    hi, closed_hi = g.atoms[0].domain.hi, g.atoms[0].domain.closed_hi
    for atom in g.atoms[1:]:
        d = atom.domain
        c = tv_compare(d.lo, lo)
        if c < 0:
            lo, closed_lo = d.lo, d.closed_lo
        elif c == 0:
            closed_lo = closed_lo or d.closed_lo
        c = tv_compare(d.hi, hi)
        if c > 0:
            hi, closed_hi = d.hi, d.closed_hi
        elif c == 0:
            closed_hi = closed_hi or d.closed_hi
    return TimeInterval(lo, hi, closed_lo, closed_hi)


def moving_corners(o: AtomicObject) -> Tuple[MovingPoint, MovingPoint, MovingPoint]:
    """Trajectories of the three reference corners under the transform."""
    out = []
    for c in o.ref_triangle.corners:
        fx, fy = o.transform.moving_image(c)
        out.append(MovingPoint(fx, fy, o.domain))
    return tuple(out)


# ---------------------------------------------------------------------------
# JSON interchange (shared with the CLI)


def point_to_json(p: Point):
    return [list(rat_to_pair(p.x)), list(rat_to_pair(p.y))]


def point_from_json(data) -> Point:
    return Point(rat_from_pair(data[0]), rat_from_pair(data[1]))


def triangle_to_json(t: Triangle):
    return [point_to_json(c) for c in t.corners]


def triangle_from_json(data) -> Triangle:
    if len(data) != 3:
        raise ValueError("triangle needs exactly three corners")
    return Triangle(tuple(point_from_json(c) for c in data))


def interval_to_json(iv: TimeInterval):
    return {
        "lo": tv_to_json(iv.lo),
        "hi": tv_to_json(iv.hi),
        "closed_lo": iv.closed_lo,
        "closed_hi": iv.closed_hi,
    }


def interval_from_json(data) -> TimeInterval:
    return TimeInterval(
        tv_from_json(data["lo"]),
        tv_from_json(data["hi"]),
        bool(data["closed_lo"]),
        bool(data["closed_hi"]),
    )


def transform_to_json(f: TimeDepAffinity):
    names = ("a11", "a12", "a21", "a22", "b1", "b2")
    return {n: ratfun_to_json(e) for n, e in zip(names, f.entries())}


def transform_from_json(data) -> TimeDepAffinity:
    return TimeDepAffinity(*(ratfun_from_json(data[n]) for n in ("a11", "a12", "a21", "a22", "b1", "b2")))


def atomic_to_json(o: AtomicObject, include_flags: bool = False):
    out = {
        "triangle": triangle_to_json(o.ref_triangle),
        "interval": interval_to_json(o.domain),
        "transform": transform_to_json(o.transform),
    }
    if include_flags:
        out["approximate"] = o.approximate
    return out


def atomic_from_json(data, source_id: str = "") -> AtomicObject:
    return AtomicObject(
        ref_triangle=triangle_from_json(data["triangle"]),
        domain=interval_from_json(data["interval"]),
        transform=transform_from_json(data["transform"]),
        source_id=source_id,
        approximate=bool(data.get("approximate", False)),
    )


def geometric_to_json(g: GeometricObject, include_flags: bool = False):
    return {
        "id": g.id,
        "atoms": [atomic_to_json(a, include_flags) for a in g.atoms],
    }


def geometric_from_json(data) -> GeometricObject:
    gid = str(data.get("id", ""))
    atoms = tuple(atomic_from_json(a, source_id=gid) for a in data.get("atoms", []))
    return GeometricObject(gid, atoms)
