"""Independent brute-force verifiers used by the test suite.

Deliberately shares only the exact rational arithmetic with the rest of
the package: union areas come from a vertical slab decomposition (not from
the arrangement / fan code under test) and membership is decided by plain
half-plane sign tests.  Everything is exact and deterministically seeded.
"""

from __future__ import annotations

import random
from typing import List, NamedTuple, Sequence, Tuple

from .exact_arith import RAT_ZERO, Rat, rat_sign

Corner = Tuple[Rat, Rat]


def _corners(t) -> Tuple[Corner, Corner, Corner]:
    cs = t.corners if hasattr(t, "corners") else t
    (ax, ay), (bx, by), (cx, cy) = cs
    return ((Rat(ax), Rat(ay)), (Rat(bx), Rat(by)), (Rat(cx), Rat(cy)))


def _orient(p, q, r) -> int:
    return rat_sign((q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]))


def _kind(cs) -> str:
    a, b, c = cs
    if a == b == c:
        return "point"
    if _orient(a, b, c) == 0:
        return "segment"
    return "full"


def _seg_endpoints(cs) -> Tuple[Corner, Corner]:
    return min(cs), max(cs)


def _on_segment(p, a, b) -> bool:
    if _orient(a, b, p) != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def _bbox(cs):
    xs = (cs[0][0], cs[1][0], cs[2][0])
    ys = (cs[0][1], cs[1][1], cs[2][1])
    return min(xs), min(ys), max(xs), max(ys)


def _in_closed(p, cs) -> bool:
    bb = _bbox(cs)
    if p[0] < bb[0] or p[1] < bb[1] or p[0] > bb[2] or p[1] > bb[3]:
        return False
    kind = _kind(cs)
    if kind == "point":
        return p == cs[0]
    if kind == "segment":
        a, b = _seg_endpoints(cs)
        return _on_segment(p, a, b)
    a, b, c = cs
    s1, s2, s3 = _orient(a, b, p), _orient(b, c, p), _orient(c, a, p)
    return (s1 >= 0 and s2 >= 0 and s3 >= 0) or (s1 <= 0 and s2 <= 0 and s3 <= 0)


def _in_open(p, cs) -> bool:
    if _kind(cs) != "full":
        return False
    a, b, c = cs
    s1, s2, s3 = _orient(a, b, p), _orient(b, c, p), _orient(c, a, p)
    return (s1 > 0 and s2 > 0 and s3 > 0) or (s1 < 0 and s2 < 0 and s3 < 0)


# ---------------------------------------------------------------------------
# exact union area by vertical slab decomposition


def union_area(triangles: Sequence) -> Rat:
    """Exact area of the union; degenerate pieces contribute nothing."""
    tris = [_corners(t) for t in triangles]
    tris = [cs for cs in tris if _kind(cs) == "full"]
    if not tris:
        return RAT_ZERO

    edges = []
    xs = set()
    for cs in tris:
        for p in cs:
            xs.add(p[0])
        a, b, c = cs
        for (u, v) in ((a, b), (b, c), (c, a)):
            if u[0] != v[0]:
                edges.append((u, v))

    # x-coordinates of proper edge crossings become slab boundaries
    n = len(edges)
    boxes = [
        (min(p1[0], p2[0]), min(p1[1], p2[1]), max(p1[0], p2[0]), max(p1[1], p2[1]))
        for (p1, p2) in edges
    ]
    for i in range(n):
        (p1, p2) = edges[i]
        d1 = (p2[0] - p1[0], p2[1] - p1[1])
        bi = boxes[i]
        for j in range(i + 1, n):
            bj = boxes[j]
            if bi[2] < bj[0] or bj[2] < bi[0] or bi[3] < bj[1] or bj[3] < bi[1]:
                continue
            (p3, p4) = edges[j]
            d2 = (p4[0] - p3[0], p4[1] - p3[1])
            den = d1[0] * d2[1] - d1[1] * d2[0]
            if den == 0:
                continue
            s = ((p3[0] - p1[0]) * d2[1] - (p3[1] - p1[1]) * d2[0]) / den
            u = ((p3[0] - p1[0]) * d1[1] - (p3[1] - p1[1]) * d1[0]) / den
            if 0 <= s <= 1 and 0 <= u <= 1:
                xs.add(p1[0] + s * d1[0])

    xs = sorted(xs)
    total = RAT_ZERO
    for x1, x2 in zip(xs, xs[1:]):
        if x1 == x2:
            continue
        xm = (x1 + x2) / 2
        spans = []  # (ylo@xm, yhi@xm, ylo fn, yhi fn) as (slope, intercept)
        for cs in tris:
            lo_fn = hi_fn = None
            lo_v = hi_v = None
            a, b, c = cs
            for (u, v) in ((a, b), (b, c), (c, a)):
                if u[0] == v[0]:
                    continue
                if min(u[0], v[0]) <= xm <= max(u[0], v[0]):
                    slope = (v[1] - u[1]) / (v[0] - u[0])
                    icpt = u[1] - slope * u[0]
                    y = slope * xm + icpt
                    if lo_v is None or y < lo_v:
                        lo_v, lo_fn = y, (slope, icpt)
                    if hi_v is None or y > hi_v:
                        hi_v, hi_fn = y, (slope, icpt)
            if lo_v is not None and hi_v is not None and lo_v < hi_v:
                spans.append((lo_v, hi_v, lo_fn, hi_fn))
        if not spans:
            continue
        spans.sort(key=lambda s: (s[0], s[1]))
        merged = []
        cur = spans[0]
        for nxt in spans[1:]:
            if nxt[0] <= cur[1]:
                if nxt[1] > cur[1]:
                    cur = (cur[0], nxt[1], cur[2], nxt[3])
            else:
                merged.append(cur)
                cur = nxt
        merged.append(cur)
        for lo_v, hi_v, lo_fn, hi_fn in merged:
            h1 = (hi_fn[0] - lo_fn[0]) * x1 + (hi_fn[1] - lo_fn[1])
            h2 = (hi_fn[0] - lo_fn[0]) * x2 + (hi_fn[1] - lo_fn[1])
            total += (h1 + h2) * (x2 - x1) / 2
    return total


# ---------------------------------------------------------------------------
# deterministic membership sampling


class MembershipVerdict(NamedTuple):
    point: Corner
    in_input: bool
    in_output: bool
    boundary_input: bool
    boundary_output: bool


def _set_membership(p, tris) -> Tuple[bool, bool]:
    inside = any(_in_closed(p, cs) for cs in tris)
    if not inside:
        return False, False
    interior = any(_in_open(p, cs) for cs in tris)
    return True, not interior


def membership_sample(S_in: Sequence, S_out: Sequence, k: int, seed: int) -> List[MembershipVerdict]:
    """k exact rational sample points from a margin-expanded bounding box of
    both sets, classified against each set (closed membership, with a
    boundary flag meaning 'in the set but not in any open 2D piece')."""
    if k < 1:
        raise ValueError("need k >= 1 sample points")
    tin = [_corners(t) for t in S_in]
    tout = [_corners(t) for t in S_out]
    pts = [p for cs in tin + tout for p in cs]
    if not pts:
        grid = [(Rat(0), Rat(0))]
        xmin = ymin = Rat(0)
        xext = yext = Rat(1)
    else:
        xmin = min(p[0] for p in pts)
        xmax = max(p[0] for p in pts)
        ymin = min(p[1] for p in pts)
        ymax = max(p[1] for p in pts)
        xext = (xmax - xmin) or Rat(1)
        yext = (ymax - ymin) or Rat(1)
        xmin -= xext / 8
        ymin -= yext / 8
        xext += xext / 4
        yext += yext / 4

    rng = random.Random(seed)
    scale = 1 << 20
    out = []
    for _ in range(k):
        p = (
            xmin + xext * Rat(rng.randrange(scale), scale),
            ymin + yext * Rat(rng.randrange(scale), scale),
        )
        ii, bi = _set_membership(p, tin)
        io, bo = _set_membership(p, tout)
        out.append(MembershipVerdict(p, ii, io, bi, bo))
    return out


# ---------------------------------------------------------------------------
# exact pairwise interior disjointness (Definition of a triangulation)


def _clip_poly_halfplane(poly, a, b):
    # keep the side left of a->b (>= 0), exact Sutherland-Hodgman step
    out = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        sp = _orient(a, b, p)
        sq = _orient(a, b, q)
        if sp >= 0:
            out.append(p)
        if sp * sq < 0:
            # edge crosses the clip line
            dx, dy = q[0] - p[0], q[1] - p[1]
            ex, ey = b[0] - a[0], b[1] - a[1]
            den = dx * ey - dy * ex
            s = ((a[0] - p[0]) * ey - (a[1] - p[1]) * ex) / den
            out.append((p[0] + s * dx, p[1] + s * dy))
    return out


def _poly_area2(poly) -> Rat:
    s = RAT_ZERO
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        s += p[0] * q[1] - p[1] * q[0]
    return abs(s)


def _ccw(cs):
    a, b, c = cs
    return (a, b, c) if _orient(a, b, c) > 0 else (a, c, b)


def _seg_param_range_in_tri(a, b, cs):
    """Parameter subrange of segment a..b inside the closed full triangle."""
    lo, hi = Rat(0), Rat(1)
    t1, t2, t3 = _ccw(cs)
    d = (b[0] - a[0], b[1] - a[1])
    for (u, v) in ((t1, t2), (t2, t3), (t3, t1)):
        ex, ey = v[0] - u[0], v[1] - u[1]
        # signed distance of a + s*d from line u->v: f(s) = f0 + s*fd
        f0 = ex * (a[1] - u[1]) - ey * (a[0] - u[0])
        fd = ex * d[1] - ey * d[0]
        if fd == 0:
            if f0 < 0:
                return None
        else:
            bound = -f0 / fd
            if fd > 0:
                lo = max(lo, bound)
            else:
                hi = min(hi, bound)
        if lo > hi:
            return None
    return lo, hi


def interiors_disjoint(t1, t2) -> bool:
    """Exact test that the interiors of two possibly degenerate triangles do
    not meet (the interior of a segment is the open segment; the interior of
    a point is the point itself)."""
    c1, c2 = _corners(t1), _corners(t2)
    b1, b2 = _bbox(c1), _bbox(c2)
    if b1[2] < b2[0] or b2[2] < b1[0] or b1[3] < b2[1] or b2[3] < b1[1]:
        return True  # strictly separated bounding boxes
    k1, k2 = _kind(c1), _kind(c2)
    rank = {"full": 0, "segment": 1, "point": 2}
    if rank[k1] > rank[k2]:
        c1, c2, k1, k2 = c2, c1, k2, k1

    if k1 == "full" and k2 == "full":
        poly = list(_ccw(c1))
        q = _ccw(c2)
        for i in range(3):
            poly = _clip_poly_halfplane(poly, q[i], q[(i + 1) % 3])
            if len(poly) < 3:
                return True
        return _poly_area2(poly) == 0

    if k1 == "full" and k2 == "segment":
        a, b = _seg_endpoints(c2)
        rngp = _seg_param_range_in_tri(a, b, c1)
        if rngp is None or rngp[0] == rngp[1]:
            return True
        lo, hi = rngp
        mid = (
            a[0] + (lo + hi) / 2 * (b[0] - a[0]),
            a[1] + (lo + hi) / 2 * (b[1] - a[1]),
        )
        return not _in_open(mid, c1)

    if k1 == "full" and k2 == "point":
        return not _in_open(c2[0], c1)

    if k1 == "segment" and k2 == "segment":
        a1, b1 = _seg_endpoints(c1)
        a2, b2 = _seg_endpoints(c2)
        d1 = (b1[0] - a1[0], b1[1] - a1[1])
        d2 = (b2[0] - a2[0], b2[1] - a2[1])
        den = d1[0] * d2[1] - d1[1] * d2[0]
        if den != 0:
            s = ((a2[0] - a1[0]) * d2[1] - (a2[1] - a1[1]) * d2[0]) / den
            u = ((a2[0] - a1[0]) * d1[1] - (a2[1] - a1[1]) * d1[0]) / den
            return not (0 < s < 1 and 0 < u < 1)
        if _orient(a1, b1, a2) != 0:
            return True  # parallel, different carriers
        # collinear: positive-length overlap?
        lo = max(min(a1, b1), min(a2, b2))
        hi = min(max(a1, b1), max(a2, b2))
        return not lo < hi

    if k1 == "segment" and k2 == "point":
        a, b = _seg_endpoints(c1)
        p = c2[0]
        return not (_on_segment(p, a, b) and p != a and p != b)

    return c1[0] != c2[0]  # two points
