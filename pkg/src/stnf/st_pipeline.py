"""The spatio-temporal triangulation pipeline.

Three stages: Partition (event times where the time-dependent carrier
arrangement changes topology), Triangulate (per partition element, replay
the spatial triangulation at a sample time while tracking every produced
point as a rational function of t, then recover the transformation function
of each output triangle), and Merge (greedy left-to-right coalescing of
adjacent partition elements whose triangulations continue each other).

The composition is the normal form: a canonical, affine-invariant
representation shared by all encodings of the same spatio-temporal object.
"""

from __future__ import annotations

import dataclasses
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .exact_arith import (
    Polynomial,
    Rat,
    RationalFunction,
    TimeValue,
    _root_bound,
    poly_gcd,
    poly_real_roots,
    rat,
    ratfun_eval_at,
    refine,
    simplest_between,
    squarefree_part,
    tv_compare,
    tv_sorted_dedup,
)
from .planar_geom import FULL, POINT, SEGMENT, Point, Triangle, rot90, sub
from .spatial_tri import triangulate_snapshot
from .st_model import (
    AtomicObject,
    GeometricObject,
    MovingPoint,
    TimeDepAffinity,
    TimeInterval,
    moving_corners,
    roots_in_interval,
    snapshot_geometric,
    time_domain,
    validate_geometric,
)

DEFAULT_EPS = rat(1, 1 << 32)

_roots_cache: Dict[tuple, tuple] = {}


def poly_real_roots_cached(p: Polynomial, lo, hi):
    key = (p.coeffs, lo, hi)
    got = _roots_cache.get(key)
    if got is None:
        got = tuple(poly_real_roots(p, lo, hi))
        _roots_cache[key] = got
    return got


class InvalidObjectError(ValueError):
    def __init__(self, violations):
        self.violations = violations
        super().__init__(f"{len(violations)} validation violation(s)")


class EventList(NamedTuple):
    """Sorted distinct event times; always contains every atom domain
    endpoint."""

    times: Tuple[TimeValue, ...]

    def __len__(self):
        return len(self.times)


class MovingCarrier(NamedTuple):
    """Time-dependent line a(t)x + b(t)y = c(t) through a moving segment,
    with polynomial coefficients in canonical form (integer content 1, first
    nonzero of (a, b) has positive leading coefficient)."""

    a: Polynomial
    b: Polynomial
    c: Polynomial
    domain: TimeInterval


def moving_carrier(p1: MovingPoint, p2: MovingPoint) -> MovingCarrier:
    """Carrier line through two moving points (pointwise-coincident inputs
    are rejected: a moving point has no carrier)."""
    if p1.fx == p2.fx and p1.fy == p2.fy:
        raise ValueError("degenerate moving segment")
    dx = p2.fx - p1.fx
    dy = p2.fy - p1.fy
    a = -dy
    b = dx
    c = a * p1.fx + b * p1.fy
    dom = p1.domain.intersect(p2.domain)
    if dom is None:
        raise ValueError("moving points with disjoint domains")
    return _canonical_carrier(a, b, c, dom)


def _canonical_carrier(a: RationalFunction, b: RationalFunction, c: RationalFunction,
                       dom: TimeInterval) -> MovingCarrier:
    from math import gcd

    pa = a.num * (b.den * c.den)
    pb = b.num * (a.den * c.den)
    pc = c.num * (a.den * b.den)
    g = poly_gcd(poly_gcd(pa, pb), pc)
    if g.degree >= 1:
        pa, pb, pc = pa // g, pb // g, pc // g
    lead = pa if not pa.is_zero else pb
    if lead.is_zero:
        raise ValueError("degenerate moving segment")
    # scale by one rational constant: joint integer content 1, positive
    # leading coefficient on the first nonzero of (a, b)
    coeffs = tuple(pa.coeffs) + tuple(pb.coeffs) + tuple(pc.coeffs)
    den_lcm = 1
    for q in coeffs:
        d = int(q.denominator)
        den_lcm = den_lcm // gcd(den_lcm, d) * d
    num_gcd = 0
    for q in coeffs:
        num_gcd = gcd(num_gcd, abs(int(q.numerator) * (den_lcm // int(q.denominator))))
    scale = rat(den_lcm, num_gcd or 1)
    if lead.leading < 0:
        scale = -scale
    return MovingCarrier(pa.scale(scale), pb.scale(scale), pc.scale(scale), dom)


def carrier_parallel_det(c1: MovingCarrier, c2: MovingCarrier) -> Polynomial:
    return c1.a * c2.b - c2.a * c1.b


def pair_events(c1: MovingCarrier, c2: MovingCarrier, iv: TimeInterval) -> List[TimeValue]:
    """Times in iv at which the intersection of the two carriers starts or
    ceases to exist: isolated roots of the parallelism determinant, plus
    isolated coincidence moments of identically-parallel carriers."""
    d = carrier_parallel_det(c1, c2)
    if not d.is_zero:
        return roots_in_interval(d, iv)
    e1 = c1.a * c2.c - c2.a * c1.c
    e2 = c1.b * c2.c - c2.b * c1.c
    if e1.is_zero and e2.is_zero:
        return []
    if e1.is_zero:
        g = e2
    elif e2.is_zero:
        g = e1
    else:
        g = poly_gcd(e1, e2)
    if g.degree < 1:
        return []
    return roots_in_interval(g, iv)


def triple_events(c1: MovingCarrier, c2: MovingCarrier, c3: MovingCarrier,
                  iv: TimeInterval) -> List[TimeValue]:
    """Times in iv at which the three carriers are concurrent (isolated
    roots of the 3x3 determinant; identical vanishing yields no events)."""
    def det3(m):
        (a1, b1, q1), (a2, b2, q2), (a3, b3, q3) = m
        return (a1 * (b2 * q3 - b3 * q2)
                - b1 * (a2 * q3 - a3 * q2)
                + q1 * (a2 * b3 - a3 * b2))

    d = det3(((c1.a, c1.b, c1.c), (c2.a, c2.b, c2.c), (c3.a, c3.b, c3.c)))
    if d.is_zero:
        return []
    return roots_in_interval(d, iv)


def _atom_moving_segments(g: GeometricObject):
    """All boundary segments of all atoms as moving corner-point pairs."""
    out = []
    for atom in g.atoms:
        mps = moving_corners(atom)
        kind = atom.ref_triangle.degeneracy
        if kind == POINT:
            continue
        if kind == SEGMENT:
            t = atom.ref_triangle.canonicalize()
            i = atom.ref_triangle.corners.index(t.corners[0])
            j = atom.ref_triangle.corners.index(t.corners[1])
            out.append((mps[i], mps[j], atom.domain))
        else:
            for i, j in ((0, 1), (1, 2), (2, 0)):
                out.append((mps[i], mps[j], atom.domain))
    return out


def _merged_domains(domains: List[TimeInterval]) -> List[TimeInterval]:
    keyed = sorted(domains, key=lambda iv: iv.sort_key())
    out: List[TimeInterval] = []
    for iv in keyed:
        if out:
            cur = out[-1]
            c = tv_compare(iv.lo, cur.hi)
            if c < 0 or (c == 0 and (cur.closed_hi or iv.closed_lo)):
                ch = tv_compare(iv.hi, cur.hi)
                if ch > 0:
                    out[-1] = TimeInterval(cur.lo, iv.hi, cur.closed_lo, iv.closed_hi)
                elif ch == 0 and iv.closed_hi and not cur.closed_hi:
                    out[-1] = TimeInterval(cur.lo, cur.hi, cur.closed_lo, True)
                continue
        out.append(iv)
    return out


_det_roots_cache: Dict[tuple, tuple] = {}


def _det_roots(p: Polynomial):
    """All real roots of a determinant polynomial, cached by coefficients."""
    key = p.coeffs
    got = _det_roots_cache.get(key)
    if got is None:
        bound = _root_bound(p) + 1
        got = tuple(poly_real_roots(p, -bound, bound))
        _det_roots_cache[key] = got
    return got


def _roots_within(p: Polynomial, domains_a, domains_b, domains_c=None) -> List[TimeValue]:
    if p.degree < 1:
        return []
    out = []
    for r in _det_roots(p):
        if any(d.contains_tv(r) for d in domains_a):
            if any(d.contains_tv(r) for d in domains_b):
                if domains_c is None or any(d.contains_tv(r) for d in domains_c):
                    out.append(r)
    return out


class _CarrierFamily(NamedTuple):
    carrier: MovingCarrier
    domains: List[TimeInterval]  # merged union of the owning atoms' domains


def _distinct_carriers(g: GeometricObject) -> List[_CarrierFamily]:
    by_coeffs: Dict[tuple, List[TimeInterval]] = {}
    reps: Dict[tuple, MovingCarrier] = {}
    order: List[tuple] = []
    for p1, p2, dom in _atom_moving_segments(g):
        c = moving_carrier(MovingPoint(p1.fx, p1.fy, dom), MovingPoint(p2.fx, p2.fy, dom))
        key = (c.a.coeffs, c.b.coeffs, c.c.coeffs)
        if key not in by_coeffs:
            by_coeffs[key] = []
            reps[key] = c
            order.append(key)
        by_coeffs[key].append(dom)
    return [_CarrierFamily(reps[k], _merged_domains(by_coeffs[k])) for k in order]


def partition(g: GeometricObject) -> EventList:
    """All atom domain endpoints plus every pairwise and triple carrier
    event, sorted and deduplicated.

    Carriers are deduplicated by their canonical coefficient triple first:
    pairs or triples using one carrier twice have identically vanishing
    determinants and so contribute no events.
    """
    times: List[TimeValue] = []
    for atom in g.atoms:
        times.append(atom.domain.lo)
        times.append(atom.domain.hi)
    fams = _distinct_carriers(g)
    n = len(fams)

    def overlaps(a: _CarrierFamily, b: _CarrierFamily) -> bool:
        return any(da.intersect(db) is not None for da in a.domains for db in b.domains)

    # per overlapping pair: the three 2x2 minors (reused by the triple scan)
    minors: Dict[Tuple[int, int], Tuple[Polynomial, Polynomial, Polynomial]] = {}
    for i in range(n):
        ci = fams[i].carrier
        for j in range(i + 1, n):
            if not overlaps(fams[i], fams[j]):
                continue
            cj = fams[j].carrier
            mab = ci.a * cj.b - cj.a * ci.b
            mac = ci.a * cj.c - cj.a * ci.c
            mbc = ci.b * cj.c - cj.b * ci.c
            minors[(i, j)] = (mab, mac, mbc)
            if not mab.is_zero:
                d = mab
            elif mac.is_zero and mbc.is_zero:
                continue
            elif mac.is_zero:
                d = mbc
            elif mbc.is_zero:
                d = mac
            else:
                d = poly_gcd(mac, mbc)
            times.extend(_roots_within(d, fams[i].domains, fams[j].domains))

    for (i, j), (mab, mac, mbc) in minors.items():
        for k in range(j + 1, n):
            if (i, k) not in minors or (j, k) not in minors:
                continue
            ck = fams[k].carrier
            d = ck.a * mbc - ck.b * mac + ck.c * mab
            if d.is_zero:
                continue
            times.extend(_roots_within(d, fams[i].domains, fams[j].domains, fams[k].domains))
    return EventList(tuple(tv_sorted_dedup(times)))


def sample_time(lo: TimeValue, hi: TimeValue) -> Rat:
    """A canonical rational strictly inside ]lo, hi[: the midpoint when both
    ends are exact, else the smallest-denominator rational separating the
    refined brackets."""
    if tv_compare(lo, hi) >= 0:
        raise ValueError("empty open interval")
    if lo.is_exact and hi.is_exact:
        return (lo.value + hi.value) / 2
    llo, lhi = lo.bracket()
    hlo, hhi = hi.bracket()
    eps = rat(1, 2)
    while lhi >= hlo:
        eps = eps / 16
        llo, lhi = refine(lo, eps)
        hlo, hhi = refine(hi, eps)
    # an exact endpoint equals its bracket, so it must stay excluded; an
    # algebraic bracket endpoint already lies strictly beyond the root
    return simplest_between(lhi, hlo, open_lo=lo.is_exact, open_hi=hi.is_exact)


def recover_affinity(ref: Triangle, trajectories: Sequence[Tuple[RationalFunction, RationalFunction]]) -> TimeDepAffinity:
    """The unique affinity mapping the reference corners along the given
    trajectories.  Degenerate references use the canonical completion: a
    segment's frame is closed with p1 + rot90(p2 - p1); a point yields a
    pure translation."""
    kind = ref.degeneracy
    if kind == POINT:
        p = ref.corners[0]
        fx, fy = trajectories[0]
        return TimeDepAffinity.translation(
            fx - RationalFunction.const(p.x), fy - RationalFunction.const(p.y)
        )
    if kind == SEGMENT:
        canon = ref.canonicalize()
        p, q = canon.corners[0], canon.corners[1]
        ip = ref.corners.index(p)
        iq = ref.corners.index(q)
        tp, tq = trajectories[ip], trajectories[iq]
        third = Point(p.x - (q.y - p.y), p.y + (q.x - p.x))
        t3 = (tp[0] - (tq[1] - tp[1]), tp[1] + (tq[0] - tp[0]))
        return _recover_full((p, q, third), (tp, tq, t3))
    return _recover_full(ref.corners, trajectories)


def _recover_full(corners, trajectories) -> TimeDepAffinity:
    (x1, y1), (x2, y2), (x3, y3) = corners
    det = x1 * (y2 - y3) + x2 * (y3 - y1) + x3 * (y1 - y2)
    if det == 0:
        raise ValueError("degenerate reference triangle in affinity recovery")
    cu = ((y2 - y3) / det, (y3 - y1) / det, (y1 - y2) / det)
    cv = ((x3 - x2) / det, (x1 - x3) / det, (x2 - x1) / det)
    cw = ((x2 * y3 - x3 * y2) / det, (x3 * y1 - x1 * y3) / det, (x1 * y2 - x2 * y1) / det)

    def solve(h):
        u = _lincomb(h, cu)
        v = _lincomb(h, cv)
        w = _lincomb(h, cw)
        return u, v, w

    hx = tuple(tr[0] for tr in trajectories)
    hy = tuple(tr[1] for tr in trajectories)
    a11, a12, b1 = solve(hx)
    a21, a22, b2 = solve(hy)
    return TimeDepAffinity(a11, a12, a21, a22, b1, b2)


def _lincomb(fs, coeffs) -> RationalFunction:
    acc = RationalFunction.const(0)
    for f, c in zip(fs, coeffs):
        if c != 0:
            acc = acc + f * RationalFunction.const(c)
    return acc


# ---------------------------------------------------------------------------
# the triangulation step


def _partition_elements(g: GeometricObject, chi: EventList) -> List[TimeInterval]:
    dom = time_domain(g)
    times = list(chi.times)
    elements: List[TimeInterval] = []
    for i, tvi in enumerate(times):
        if dom.contains_tv(tvi):
            elements.append(TimeInterval(tvi, tvi))
        if i + 1 < len(times):
            elements.append(TimeInterval(tvi, times[i + 1], False, False))
    return elements


def _triangulate_point_element(g: GeometricObject, tvi: TimeValue, eps) -> List[AtomicObject]:
    interval = TimeInterval(tvi, tvi)
    if tvi.is_exact:
        snap = snapshot_geometric(g, tvi.value)
        result = triangulate_snapshot(snap)
        return [
            AtomicObject(t, interval, TimeDepAffinity.identity(), source_id=g.id)
            for t in result.triangles
        ]
    approx: List[Triangle] = []
    seen = set()
    for atom in g.atoms:
        if not atom.domain.contains_tv(tvi):
            continue
        corners = []
        for c in atom.ref_triangle.corners:
            fx, fy = atom.transform.moving_image(c)
            corners.append(Point(ratfun_eval_at(fx, tvi, eps), ratfun_eval_at(fy, tvi, eps)))
        t = Triangle(tuple(corners)).canonicalize()
        if t.corners not in seen:
            seen.add(t.corners)
            approx.append(t)
    result = triangulate_snapshot(approx)
    return [
        AtomicObject(t, interval, TimeDepAffinity.identity(), source_id=g.id, approximate=True)
        for t in result.triangles
    ]


def _triangulate_interval_element(g: GeometricObject, element: TimeInterval,
                                  tau_m: Rat) -> List[AtomicObject]:
    alive = [atom for atom in g.atoms if atom.domain.contains_rat(tau_m)]
    if not alive:
        return []

    moving: List[Tuple[Tuple[RationalFunction, RationalFunction], ...]] = []
    static: List[Triangle] = []
    for atom in alive:
        mps = moving_corners(atom)
        moving.append(tuple((mp.fx, mp.fy) for mp in mps))
        static.append(Triangle(tuple(mp.at(tau_m) for mp in mps)))

    result = triangulate_snapshot(static)

    carriers: Dict[int, MovingCarrier] = {}
    for line_id, seg in result.carrier_lines.items():
        tri = static[seg.tri]
        ia = tri.corners.index(seg.a)
        ib = tri.corners.index(seg.b)
        dom = alive[seg.tri].domain
        carriers[line_id] = moving_carrier(
            MovingPoint(*moving[seg.tri][ia], dom),
            MovingPoint(*moving[seg.tri][ib], dom),
        )

    memo: Dict[tuple, Tuple[RationalFunction, RationalFunction]] = {}

    def resolve(deriv) -> Tuple[RationalFunction, RationalFunction]:
        got = memo.get(deriv)
        if got is not None:
            return got
        kind = deriv[0]
        if kind == "corner":
            val = moving[deriv[1]][deriv[2]]
        elif kind == "xing":
            ca, cb = carriers[deriv[1]], carriers[deriv[2]]
            det = carrier_parallel_det(ca, cb)
            d = RationalFunction(det)
            x = RationalFunction(ca.c * cb.b - cb.c * ca.b) / d
            y = RationalFunction(ca.a * cb.c - cb.a * ca.c) / d
            val = (x, y)
        elif kind == "mean":
            parts = [resolve(d) for d in deriv[1]]
            n = RationalFunction.const(rat(1, len(parts)))
            fx = _sum_rf([p[0] for p in parts]) * n
            fy = _sum_rf([p[1] for p in parts]) * n
            val = (fx, fy)
        else:
            raise AssertionError(f"unknown derivation {deriv!r}")
        memo[deriv] = val
        return val

    out: List[AtomicObject] = []
    for t, derivs in zip(result.triangles, result.provenance):
        trajectories = tuple(resolve(d) for d in derivs)
        for corner, (fx, fy) in zip(t.corners, trajectories):
            assert fx.eval(tau_m) == corner.x and fy.eval(tau_m) == corner.y, (
                "moving counterpart disagrees with the sampled snapshot"
            )
        transform = recover_affinity(t, trajectories)
        out.append(AtomicObject(t, element, transform, source_id=g.id))
    return out


def _sum_rf(fs: Sequence[RationalFunction]) -> RationalFunction:
    acc = fs[0]
    for f in fs[1:]:
        acc = acc + f
    return acc


def triangulate_steps(g: GeometricObject, chi: EventList, eps=DEFAULT_EPS):
    """Per partition element (points and open intervals of the event list),
    the atomic objects triangulating the object there.  Returns the aligned
    lists (elements, atoms_per_element, alive_source_atoms_per_element)."""
    elements = _partition_elements(g, chi)
    atoms_per: List[List[AtomicObject]] = []
    alive_per: List[frozenset] = []
    for el in elements:
        if el.is_point:
            atoms_per.append(_triangulate_point_element(g, el.lo, eps))
            alive_per.append(frozenset(
                i for i, a in enumerate(g.atoms) if a.domain.contains_tv(el.lo)
            ))
        else:
            tau_m = sample_time(el.lo, el.hi)
            atoms_per.append(_triangulate_interval_element(g, el, tau_m))
            alive_per.append(frozenset(
                i for i, a in enumerate(g.atoms) if a.domain.contains_rat(tau_m)
            ))
    return elements, atoms_per, alive_per


# ---------------------------------------------------------------------------
# the merge step


class NormalForm(NamedTuple):
    atoms: Tuple[AtomicObject, ...]
    partition: Tuple[TimeInterval, ...]

    def alive_atoms(self, tau) -> List[AtomicObject]:
        return [a for a in self.atoms if a.domain.contains_rat(tau)]

    def snapshot(self, tau) -> List[Triangle]:
        seen = set()
        out = []
        for a in self.alive_atoms(tau):
            t = a.transform.apply_triangle(a.ref_triangle, Rat(tau)).canonicalize()
            if t.corners not in seen:
                seen.add(t.corners)
                out.append(t)
        out.sort(key=lambda t: t.sort_key())
        return out

    def as_geometric(self, gid: str = "normal-form") -> GeometricObject:
        return GeometricObject.make(gid, self.atoms)


def _transform_defined_at(f: TimeDepAffinity, tvi: TimeValue) -> bool:
    """All six coefficients defined and the matrix nonsingular at the time."""
    for entry in f.entries():
        if _is_root(entry.den, tvi):
            return False
    det = f.det()
    if det.is_zero:
        return False
    if _is_root(det.den, tvi) or _is_root(det.num, tvi):
        return False
    return True


def _is_root(p: Polynomial, tvi: TimeValue) -> bool:
    if p.degree < 1:
        return p.is_zero
    if tvi.is_exact:
        return p.eval(tvi.value) == 0
    g = poly_gcd(p, tvi.poly)
    if g.degree < 1:
        return False
    slo = g.eval(tvi.lo)
    shi = g.eval(tvi.hi)
    return (slo > 0) != (shi > 0)


def _transform_valid_on(f: TimeDepAffinity, iv: TimeInterval) -> bool:
    det = f.det()
    if det.is_zero:
        return False
    for entry in f.entries():
        if entry.den.degree >= 1 and roots_in_interval(entry.den, iv):
            return False
    if det.den.degree >= 1 and roots_in_interval(det.den, iv):
        return False
    if det.num.degree >= 1 and roots_in_interval(det.num, iv):
        return False
    return True


def _trajectory_signature(atom: AtomicObject, cache: Optional[Dict[int, tuple]] = None):
    if cache is not None:
        got = cache.get(id(atom))
        if got is not None and got[0] is atom:  # ids can be recycled
            return got[1]
    trs = []
    for c in atom.ref_triangle.corners:
        fx, fy = atom.transform.moving_image(c)
        trs.append((fx.num.coeffs, fx.den.coeffs, fy.num.coeffs, fy.den.coeffs))
    sig = tuple(sorted(trs))
    if cache is not None:
        cache[id(atom)] = (atom, sig)
    return sig


def _limit_snapshot_key(atom: AtomicObject, tau: Rat):
    return atom.transform.apply_triangle(atom.ref_triangle, tau).canonicalize().corners


def _match_point_with_interval(point_atoms: Sequence[AtomicObject],
                               interval_atoms: Sequence[AtomicObject],
                               tau: Rat) -> bool:
    """One-to-one matching of the point triangulation against the limits of
    the interval triangulation at the junction (everything exact)."""
    if len(point_atoms) != len(interval_atoms):
        return False
    want = {}
    for a in point_atoms:
        key = a.ref_triangle.canonicalize().corners
        if key in want:
            return False
        want[key] = True
    tv = TimeValue.exact(tau)
    seen = set()
    for a in interval_atoms:
        if not _transform_defined_at(a.transform, tv):
            return False
        key = _limit_snapshot_key(a, tau)
        if key not in want or key in seen:
            return False
        seen.add(key)
    return True


def _match_interval_with_interval(left: Sequence[AtomicObject],
                                  right: Sequence[AtomicObject],
                                  junction: TimeValue,
                                  right_element: TimeInterval,
                                  sig_cache: Optional[Dict[int, tuple]] = None) -> bool:
    """Symbolic continuation test: a bijection under which the per-corner
    trajectory rational functions are identical, plus validity of the kept
    transforms across the junction and the right interval."""
    if len(left) != len(right):
        return False
    want: Dict[tuple, int] = {}
    for a in right:
        sig = _trajectory_signature(a, sig_cache)
        want[sig] = want.get(sig, 0) + 1
    closure = TimeInterval(junction, right_element.hi, True, right_element.closed_hi)
    for a in left:
        sig = _trajectory_signature(a, sig_cache)
        if want.get(sig, 0) == 0:
            return False
        want[sig] -= 1
        if not _transform_valid_on(a.transform, closure):
            return False
    return all(v == 0 for v in want.values())


def merge(elements: Sequence[TimeInterval], atoms_per: Sequence[List[AtomicObject]],
          alive_per: Optional[Sequence[frozenset]] = None) -> NormalForm:
    """Greedy left-to-right merging of adjacent partition elements whenever
    the triangulations continue each other exactly.

    At an algebraic junction the point element holds only approximate atoms,
    so matching there is symbolic: the flanking intervals must share
    per-corner trajectory functions, their transforms must stay valid across
    the junction, and (when liveness data is given) the set of source atoms
    alive at the junction must coincide with both flanks.
    """
    if alive_per is None:
        alive_per = [frozenset()] * len(elements)
    sig_cache: Dict[int, tuple] = {}
    items = [(el, list(atoms), alive) for el, atoms, alive in zip(elements, atoms_per, alive_per)]
    out: List[Tuple[TimeInterval, List[AtomicObject]]] = []
    i = 0
    while i < len(items):
        cur_el, cur_atoms, cur_alive = items[i]
        i += 1
        while i < len(items):
            nxt_el, nxt_atoms, nxt_alive = items[i]
            merged = _try_merge(cur_el, cur_atoms, nxt_el, nxt_atoms, sig_cache)
            if merged is not None:
                cur_el, cur_atoms = merged
                cur_alive = nxt_alive if not nxt_el.is_point else cur_alive
                i += 1
                continue
            if (not cur_el.is_point) and nxt_el.is_point and not nxt_el.lo.is_exact \
                    and i + 1 < len(items):
                after_el, after_atoms, after_alive = items[i + 1]
                if (
                    not after_el.is_point
                    and cur_alive == nxt_alive == after_alive
                    and _match_interval_with_interval(cur_atoms, after_atoms, nxt_el.lo, after_el, sig_cache)
                ):
                    new_el = TimeInterval(cur_el.lo, after_el.hi, cur_el.closed_lo, after_el.closed_hi)
                    cur_atoms = [dataclasses.replace(a, domain=new_el) for a in cur_atoms]
                    cur_el = new_el
                    cur_alive = after_alive
                    i += 2
                    continue
            break
        out.append((cur_el, cur_atoms))

    all_atoms: List[AtomicObject] = []
    for el, atoms in out:
        all_atoms.extend(atoms)
    all_atoms.sort(key=_atom_sort_key)
    return NormalForm(tuple(all_atoms), tuple(el for el, _ in out))


class _atom_sort_key:
    __slots__ = ("k", "iv")

    def __init__(self, atom: AtomicObject):
        self.iv = atom.domain
        self.k = atom.ref_triangle.sort_key()

    def __lt__(self, other: "_atom_sort_key"):
        a, b = self.iv, other.iv
        c = tv_compare(a.lo, b.lo)
        if c != 0:
            return c < 0
        if a.closed_lo != b.closed_lo:
            return a.closed_lo
        c = tv_compare(a.hi, b.hi)
        if c != 0:
            return c < 0
        if a.closed_hi != b.closed_hi:
            return a.closed_hi < b.closed_hi
        return self.k < other.k


def _try_merge(cur_el: TimeInterval, cur_atoms: List[AtomicObject],
               nxt_el: TimeInterval, nxt_atoms: List[AtomicObject],
               sig_cache: Optional[Dict[int, tuple]] = None):
    if cur_el.is_point and not nxt_el.is_point:
        # {tau} followed by ]tau, b[
        tau_tv = cur_el.lo
        if not cur_atoms and not nxt_atoms:
            new_el = TimeInterval(tau_tv, nxt_el.hi, True, nxt_el.closed_hi)
            return new_el, []
        if not tau_tv.is_exact:
            return None  # approximate point atoms: handled by the caller
        if not _match_point_with_interval(cur_atoms, nxt_atoms, tau_tv.value):
            return None
        new_el = TimeInterval(tau_tv, nxt_el.hi, True, nxt_el.closed_hi)
        return new_el, [dataclasses.replace(a, domain=new_el) for a in nxt_atoms]

    if not cur_el.is_point and nxt_el.is_point:
        # [.., tau[ followed by {tau}
        tau_tv = nxt_el.lo
        if not cur_atoms and not nxt_atoms:
            new_el = TimeInterval(cur_el.lo, tau_tv, cur_el.closed_lo, True)
            return new_el, []
        if not tau_tv.is_exact:
            return None
        if not _match_point_with_interval(nxt_atoms, cur_atoms, tau_tv.value):
            return None
        new_el = TimeInterval(cur_el.lo, tau_tv, cur_el.closed_lo, True)
        return new_el, [dataclasses.replace(a, domain=new_el) for a in cur_atoms]

    if not cur_el.is_point and not nxt_el.is_point:
        # [.., tau] followed by ]tau, b[ (the junction point was absorbed
        # into the left side already)
        if not cur_el.closed_hi:
            return None
        junction = cur_el.hi
        if not cur_atoms and not nxt_atoms:
            new_el = TimeInterval(cur_el.lo, nxt_el.hi, cur_el.closed_lo, nxt_el.closed_hi)
            return new_el, []
        if not _match_interval_with_interval(cur_atoms, nxt_atoms, junction, nxt_el, sig_cache):
            return None
        new_el = TimeInterval(cur_el.lo, nxt_el.hi, cur_el.closed_lo, nxt_el.closed_hi)
        return new_el, [dataclasses.replace(a, domain=new_el) for a in cur_atoms]

    return None  # point next to point cannot arise


# ---------------------------------------------------------------------------
# the composition


def t_st(g: GeometricObject, eps=DEFAULT_EPS) -> NormalForm:
    """Partition, triangulate, merge: the affine-invariant normal form."""
    violations = validate_geometric(g)
    if violations:
        raise InvalidObjectError(violations)
    if not g.atoms:
        return NormalForm((), ())
    chi = partition(g)
    elements, atoms_per, alive_per = triangulate_steps(g, chi, eps)
    if len(chi) <= 1:
        atoms = [a for atoms in atoms_per for a in atoms]
        atoms.sort(key=_atom_sort_key)
        nf = NormalForm(tuple(atoms), tuple(elements))
    else:
        nf = merge(elements, atoms_per, alive_per)
    return _canonicalize_algebraic_times(nf)


def _canonicalize_algebraic_times(nf: NormalForm) -> NormalForm:
    """Rewrite surviving algebraic time endpoints with a representation
    derived from the output's own carriers, so that equal normal forms
    serialize identically regardless of how the input was encoded."""
    if not any(
        not tvv.is_exact
        for iv in nf.partition
        for tvv in (iv.lo, iv.hi)
    ):
        return nf

    out_obj = nf.as_geometric()
    seen_carriers = set()
    carriers: List[MovingCarrier] = []
    for p1, p2, dom in _atom_moving_segments(out_obj):
        c = moving_carrier(MovingPoint(p1.fx, p1.fy, dom), MovingPoint(p2.fx, p2.fy, dom))
        key = (c.a.coeffs, c.b.coeffs, c.c.coeffs)
        if key not in seen_carriers:
            seen_carriers.add(key)
            carriers.append(c)
    n = len(carriers)

    def pair_dets():
        seen = set()
        out = []
        for i in range(n):
            for j in range(i + 1, n):
                d = carrier_parallel_det(carriers[i], carriers[j])
                cands = (d,) if not d.is_zero else (
                    carriers[i].a * carriers[j].c - carriers[j].a * carriers[i].c,
                    carriers[i].b * carriers[j].c - carriers[j].b * carriers[i].c,
                )
                for d2 in cands:
                    if d2.degree >= 1 and d2.coeffs not in seen:
                        seen.add(d2.coeffs)
                        out.append(d2)
        return out

    def triple_dets():
        seen = set()
        out = []
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    c1, c2, c3 = carriers[i], carriers[j], carriers[k]
                    d = (c1.a * (c2.b * c3.c - c3.b * c2.c)
                         - c1.b * (c2.a * c3.c - c3.a * c2.c)
                         + c1.c * (c2.a * c3.b - c3.a * c2.b))
                    if d.degree >= 1 and d.coeffs not in seen:
                        seen.add(d.coeffs)
                        out.append(d)
        return out

    det_stages = [pair_dets(), None]  # triples built only if ever needed

    def canon_key(tvv: TimeValue):
        return (
            len(tvv.poly.coeffs),
            tuple(int(c.numerator) for c in tvv.poly.coeffs),
            tvv.lo,
            tvv.hi,
        )

    rewrite_cache: Dict[tuple, TimeValue] = {}

    def rewrite(tvv: TimeValue) -> TimeValue:
        if tvv.is_exact:
            return tvv
        ck = (tvv.poly.coeffs, tvv.lo, tvv.hi)
        got = rewrite_cache.get(ck)
        if got is not None:
            return got
        best = None
        for stage in range(2):
            if det_stages[stage] is None:
                det_stages[stage] = triple_dets()
            for d in det_stages[stage]:
                if not _is_root(d, tvv):
                    continue
                # canonical isolating interval: re-isolate over the det's own
                # root bound (a function of the det alone)
                sf = squarefree_part(d).primitive_int()
                bound = _root_bound(sf) + 1
                for r in poly_real_roots_cached(sf, -bound, bound):
                    if not r.is_exact and tv_compare(r, tvv) == 0:
                        k = canon_key(r)
                        if best is None or k < best[0]:
                            best = (k, r)
            if best is not None:
                break
        result = best[1] if best is not None else tvv
        rewrite_cache[ck] = result
        return result

    def rewrite_iv(iv: TimeInterval) -> TimeInterval:
        return TimeInterval(rewrite(iv.lo), rewrite(iv.hi), iv.closed_lo, iv.closed_hi)

    atoms = tuple(dataclasses.replace(a, domain=rewrite_iv(a.domain)) for a in nf.atoms)
    part = tuple(rewrite_iv(iv) for iv in nf.partition)
    return NormalForm(atoms, part)


def normal_form_equal(g1: GeometricObject, g2: GeometricObject, eps=DEFAULT_EPS) -> bool:
    """Canonical-list equality of the two normal forms."""
    n1 = t_st(g1, eps)
    n2 = t_st(g2, eps)
    return _nf_key(n1) == _nf_key(n2)


def _nf_key(nf: NormalForm):
    out = []
    for a in nf.atoms:
        out.append(
            (
                a.ref_triangle.corners,
                (a.domain.lo.is_exact, a.domain.lo.value if a.domain.lo.is_exact else (a.domain.lo.poly.coeffs, a.domain.lo.lo, a.domain.lo.hi)),
                (a.domain.hi.is_exact, a.domain.hi.value if a.domain.hi.is_exact else (a.domain.hi.poly.coeffs, a.domain.hi.lo, a.domain.hi.hi)),
                a.domain.closed_lo,
                a.domain.closed_hi,
                tuple((e.num.coeffs, e.den.coeffs) for e in a.transform.entries()),
                a.approximate,
            )
        )
    return tuple(out)
