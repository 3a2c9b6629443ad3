"""Exact 2D primitives and structures: orientation predicate, convex hull,
canonical lines and triangles, a line/segment overlay engine, DCEL
construction for hull-bounded line arrangements, planar subdivisions with
inside/outside face flags, point location, and the boundary analysis that
decides which input segments contribute to the boundary of a triangle union.

All coordinates are exact rationals; there are no tolerance parameters
anywhere in this module.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .exact_arith import RAT_ONE, RAT_ZERO, Rat, rat_sign


class Point(NamedTuple):
    x: Rat
    y: Rat


def pt(x, y) -> Point:
    return Point(Rat(x), Rat(y))


CCW, CW, COLLINEAR = 1, -1, 0


def orientation(p: Point, q: Point, r: Point) -> int:
    """Sign of the determinant of (q-p, r-p): +1 ccw, -1 cw, 0 collinear."""
    return rat_sign((q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x))


def cross(u: Point, v: Point) -> Rat:
    return u.x * v.y - u.y * v.x


def sub(p: Point, q: Point) -> Point:
    return Point(p.x - q.x, p.y - q.y)


def rot90(v: Point) -> Point:
    return Point(-v.y, v.x)


def point_mean(points: Sequence[Point]) -> Point:
    """Arithmetic mean of a vertex walk (the algorithm's center of mass)."""
    if not points:
        raise ValueError("empty walk")
    n = len(points)
    sx = sum((p.x for p in points), RAT_ZERO)
    sy = sum((p.y for p in points), RAT_ZERO)
    return Point(sx / n, sy / n)


face_vertex_mean = point_mean


class Line(NamedTuple):
    """Canonical line a*x + b*y = c with the first nonzero of (a, b) scaled
    to one."""

    a: Rat
    b: Rat
    c: Rat

    @staticmethod
    def make(a, b, c) -> "Line":
        a, b, c = Rat(a), Rat(b), Rat(c)
        if a != 0:
            return Line(RAT_ONE, b / a, c / a)
        if b == 0:
            raise ValueError("degenerate line: a = b = 0")
        return Line(RAT_ZERO, RAT_ONE, c / b)

    @staticmethod
    def through(p: Point, q: Point) -> "Line":
        if p == q:
            raise ValueError("degenerate line through coincident points")
        d = sub(q, p)
        return Line.make(-d.y, d.x, -d.y * p.x + d.x * p.y)

    def side(self, p: Point) -> int:
        return rat_sign(self.a * p.x + self.b * p.y - self.c)

    def direction(self) -> Point:
        return Point(self.b, -self.a)

    def param(self, p: Point) -> Rat:
        d = self.direction()
        return d.x * p.x + d.y * p.y

    def point_at(self, t) -> Point:
        # a point with the given parameter value on the line
        d = self.direction()
        n2 = d.x * d.x + d.y * d.y
        base_scale = self.c / n2
        # base point: closest point to origin is c*(a,b)/|n|^2
        bx, by = self.a * base_scale, self.b * base_scale
        k = (Rat(t) - (d.x * bx + d.y * by)) / n2
        return Point(bx + d.x * k, by + d.y * k)


def line_intersection(l1: Line, l2: Line) -> Optional[Point]:
    det = l1.a * l2.b - l2.a * l1.b
    if det == 0:
        return None
    x = (l1.c * l2.b - l2.c * l1.b) / det
    y = (l1.a * l2.c - l2.a * l1.c) / det
    return Point(x, y)


FULL, SEGMENT, POINT = "full", "segment", "point"


@dataclass(frozen=True)
class Triangle:
    """A possibly degenerate (filled) triangle, stored corner order as given."""

    corners: Tuple[Point, Point, Point]

    @staticmethod
    def make(p, q, r) -> "Triangle":
        return Triangle((Point(Rat(p[0]), Rat(p[1])), Point(Rat(q[0]), Rat(q[1])), Point(Rat(r[0]), Rat(r[1]))))

    @property
    def degeneracy(self) -> str:
        got = self.__dict__.get("_degeneracy")
        if got is None:
            a, b, c = self.corners
            if a == b == c:
                got = POINT
            elif orientation(a, b, c) == COLLINEAR:
                got = SEGMENT
            else:
                got = FULL
            self.__dict__["_degeneracy"] = got
        return got

    @property
    def bbox(self) -> Tuple[Rat, Rat, Rat, Rat]:
        got = self.__dict__.get("_bbox")
        if got is None:
            xs = tuple(c.x for c in self.corners)
            ys = tuple(c.y for c in self.corners)
            got = (min(xs), min(ys), max(xs), max(ys))
            self.__dict__["_bbox"] = got
        return got

    def canonicalize(self) -> "Triangle":
        """Canonical corner order: ccw starting from the lexicographic
        minimum; segments as (min, max, max); points as (p, p, p)."""
        a, b, c = self.corners
        kind = self.degeneracy
        if kind == POINT:
            return Triangle((a, a, a))
        if kind == SEGMENT:
            lo = min(self.corners)
            hi = max(self.corners)
            return Triangle((lo, hi, hi))
        cs = list(self.corners)
        if orientation(*cs) == CW:
            cs.reverse()
        i = cs.index(min(cs))
        cs = cs[i:] + cs[:i]
        return Triangle(tuple(cs))

    def sort_key(self):
        cs = self.canonicalize().corners
        return (cs[0].x, cs[0].y, cs[1].x, cs[1].y, cs[2].x, cs[2].y)

    def edges(self) -> List[Tuple[Point, Point]]:
        """Distinct corner-pair segments (3 for full, 1 for segment, 0 for
        point triangles)."""
        kind = self.degeneracy
        if kind == POINT:
            return []
        if kind == SEGMENT:
            t = self.canonicalize()
            return [(t.corners[0], t.corners[1])]
        a, b, c = self.corners
        return [(a, b), (b, c), (c, a)]

    def contains(self, p: Point) -> bool:
        """Closed membership (degenerate triangles contain their point set)."""
        bb = self.bbox
        if p.x < bb[0] or p.y < bb[1] or p.x > bb[2] or p.y > bb[3]:
            return False
        kind = self.degeneracy
        a, b, c = self.corners
        if kind == POINT:
            return p == a
        if kind == SEGMENT:
            t = self.canonicalize()
            return point_on_segment(p, t.corners[0], t.corners[1])
        px, py = p
        s1 = (b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x)
        s2 = (c.x - b.x) * (py - b.y) - (c.y - b.y) * (px - b.x)
        s3 = (a.x - c.x) * (py - c.y) - (a.y - c.y) * (px - c.x)
        return (s1 >= 0 and s2 >= 0 and s3 >= 0) or (s1 <= 0 and s2 <= 0 and s3 <= 0)

    def contains_interior(self, p: Point) -> bool:
        if self.degeneracy != FULL:
            return False
        bb = self.bbox
        if p.x <= bb[0] or p.y <= bb[1] or p.x >= bb[2] or p.y >= bb[3]:
            return False
        a, b, c = self.corners
        px, py = p
        s1 = (b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x)
        s2 = (c.x - b.x) * (py - b.y) - (c.y - b.y) * (px - b.x)
        s3 = (a.x - c.x) * (py - c.y) - (a.y - c.y) * (px - c.x)
        return (s1 > 0 and s2 > 0 and s3 > 0) or (s1 < 0 and s2 < 0 and s3 < 0)

    def area2(self) -> Rat:
        a, b, c = self.corners
        return abs((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x))


def point_on_segment(p: Point, a: Point, b: Point) -> bool:
    if orientation(a, b, p) != COLLINEAR:
        return False
    return min(a.x, b.x) <= p.x <= max(a.x, b.x) and min(a.y, b.y) <= p.y <= max(a.y, b.y)


def convex_hull(points: Sequence[Point]) -> List[Point]:
    """Convex hull as a ccw vertex cycle starting at the lexicographic
    minimum; collinear points are dropped.  Degenerate hulls come back as
    2-point (segment) or 1-point cycles."""
    ps = sorted(set(points))
    if not ps:
        raise ValueError("empty point set")
    if len(ps) == 1:
        return [ps[0]]

    def chain(seq):
        out: List[Point] = []
        for p in seq:
            while len(out) >= 2 and orientation(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(ps)
    upper = chain(reversed(ps))
    return lower[:-1] + upper[:-1]


# ---------------------------------------------------------------------------
# DCEL / planar subdivision


class _Vertex:
    __slots__ = ("point", "out", "line_ids")

    def __init__(self, point: Point):
        self.point = point
        self.out: int = -1
        self.line_ids: Tuple[int, ...] = ()


class _HalfEdge:
    __slots__ = ("origin", "twin", "nxt", "prv", "face", "line_id")

    def __init__(self, origin: int, line_id: int):
        self.origin = origin
        self.twin = -1
        self.nxt = -1
        self.prv = -1
        self.face = -1
        self.line_id = line_id


class _Face:
    __slots__ = ("outer", "holes", "inside", "is_outer", "walk")

    def __init__(self):
        self.outer: int = -1
        self.holes: Tuple[int, ...] = ()
        self.inside: Optional[bool] = None
        self.is_outer: bool = False
        self.walk: Tuple[int, ...] = ()  # vertex ids along the ccw boundary


class Dcel:
    """Doubly-connected edge list of a plane overlay.

    Half-edge records store the five classic pointers (origin, twin,
    incident face, next, prev).  Face records keep one boundary half-edge
    plus a hole list (always empty here: hull-clipped arrangements are
    connected).  `inside` flags are filled in by build_subdivision.
    """

    def __init__(self):
        self.vertices: List[_Vertex] = []
        self.halfedges: List[_HalfEdge] = []
        self.faces: List[_Face] = []
        self.outer_face: int = -1
        self.lines: List[Line] = []
        self.vertex_index: Dict[Point, int] = {}
        self.edges_by_line: Dict[int, List[Tuple[Rat, Rat, int]]] = {}

    # -- queries ------------------------------------------------------------

    def face_walk_points(self, face_id: int) -> List[Point]:
        return [self.vertices[v].point for v in self.faces[face_id].walk]

    def vertex_faces(self, vid: int) -> List[int]:
        out = []
        h0 = self.vertices[vid].out
        h = h0
        while True:
            out.append(self.halfedges[h].face)
            h = self.halfedges[self.halfedges[h].twin].nxt
            if h == h0:
                break
        return out

    def bounded_faces(self) -> List[int]:
        return [i for i in range(len(self.faces)) if not self.faces[i].is_outer]

    def check_invariants(self) -> None:
        he = self.halfedges
        for i, h in enumerate(he):
            assert he[h.twin].twin == i
            assert he[h.nxt].prv == i
            assert he[h.prv].nxt == i
            assert he[h.twin].origin != h.origin
            assert h.face == he[h.nxt].face
        for i, h in enumerate(he):  # next-walk returns to start
            j = h.nxt
            steps = 0
            while j != i:
                j = he[j].nxt
                steps += 1
                assert steps <= len(he)
        v = len(self.vertices)
        e = len(he) // 2
        f = len(self.faces)
        assert v - e + f == 2, f"Euler failure: V={v} E={e} F={f}"
        for fid in self.bounded_faces():
            walk = [self.vertices[x].point for x in self.faces[fid].walk]
            n = len(walk)
            assert n >= 3
            for k in range(n):
                assert orientation(walk[k], walk[(k + 1) % n], walk[(k + 2) % n]) == CCW, (
                    "bounded arrangement face is not strictly convex"
                )


class _LineGroup:
    __slots__ = ("line", "intervals", "is_input", "input_id")

    def __init__(self, line: Line, is_input: bool, input_id: int):
        self.line = line
        self.intervals: List[Tuple[Rat, Rat]] = []
        self.is_input = is_input
        self.input_id = input_id  # index into the caller's line list, or -1


def _merge_intervals(intervals: List[Tuple[Rat, Rat]]) -> List[Tuple[Rat, Rat]]:
    ivs = sorted(intervals)
    out: List[Tuple[Rat, Rat]] = []
    for lo, hi in ivs:
        if out and lo <= out[-1][1]:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return out


def _covered(intervals: List[Tuple[Rat, Rat]], t: Rat) -> bool:
    for lo, hi in intervals:
        if lo <= t <= hi:
            return True
    return False


def _dir_cmp(u: Point, v: Point) -> int:
    hu = 0 if (u.y > 0 or (u.y == 0 and u.x > 0)) else 1
    hv = 0 if (v.y > 0 or (v.y == 0 and v.x > 0)) else 1
    if hu != hv:
        return -1 if hu < hv else 1
    c = cross(u, v)
    if c > 0:
        return -1
    if c < 0:
        return 1
    return 0


def _build_overlay(groups: List[_LineGroup]) -> Dcel:
    """Plane overlay of the covered parts of a set of carrier lines.

    Each group is one distinct line with a union of covered parameter
    intervals.  The covered set must form a connected figure (hull-clipped
    arrangements always do).
    """
    dcel = Dcel()
    events: List[List[Rat]] = [[] for _ in groups]
    for gi, g in enumerate(groups):
        for lo, hi in g.intervals:
            events[gi].append(lo)
            events[gi].append(hi)

    point_lines: Dict[Point, set] = {}

    def register(p: Point, *line_idxs: int):
        s = point_lines.setdefault(p, set())
        s.update(line_idxs)

    for gi, g in enumerate(groups):
        for lo, hi in g.intervals:
            register(g.line.point_at(lo), gi)
            register(g.line.point_at(hi), gi)

    for i in range(len(groups)):
        gi = groups[i]
        for j in range(i + 1, len(groups)):
            gj = groups[j]
            p = line_intersection(gi.line, gj.line)
            if p is None:
                continue
            ti = gi.line.param(p)
            tj = gj.line.param(p)
            if _covered(gi.intervals, ti) and _covered(gj.intervals, tj):
                events[i].append(ti)
                events[j].append(tj)
                register(p, i, j)

    def vertex_id(p: Point) -> int:
        vid = dcel.vertex_index.get(p)
        if vid is None:
            vid = len(dcel.vertices)
            dcel.vertex_index[p] = vid
            dcel.vertices.append(_Vertex(p))
        return vid

    undirected: List[Tuple[int, int, int]] = []  # (v_from, v_to, group)
    for gi, g in enumerate(groups):
        ts = sorted(set(events[gi]))
        for a, b in zip(ts, ts[1:]):
            if _covered(g.intervals, (a + b) / 2):
                va = vertex_id(g.line.point_at(a))
                vb = vertex_id(g.line.point_at(b))
                undirected.append((va, vb, gi))

    for p, lines in point_lines.items():
        vid = dcel.vertex_index.get(p)
        if vid is not None:
            ids = sorted(
                groups[k].input_id for k in lines if groups[k].is_input and groups[k].input_id >= 0
            )
            dcel.vertices[vid].line_ids = tuple(ids)

    # half-edges
    out_at: List[List[int]] = [[] for _ in dcel.vertices]
    for (va, vb, gi) in undirected:
        h1 = _HalfEdge(va, gi)
        h2 = _HalfEdge(vb, gi)
        i1 = len(dcel.halfedges)
        dcel.halfedges.append(h1)
        dcel.halfedges.append(h2)
        h1.twin, h2.twin = i1 + 1, i1
        out_at[va].append(i1)
        out_at[vb].append(i1 + 1)

    verts = dcel.vertices
    hes = dcel.halfedges

    def he_dir(h: int) -> Point:
        e = hes[h]
        return sub(verts[hes[e.twin].origin].point, verts[e.origin].point)

    for vid, hs in enumerate(out_at):
        if not hs:
            continue
        hs.sort(key=functools.cmp_to_key(lambda a, b: _dir_cmp(he_dir(a), he_dir(b))))
        verts[vid].out = hs[0]
        k = len(hs)
        for idx, h in enumerate(hs):
            # next(incoming twin) = ccw-previous outgoing edge
            prev_ccw = hs[(idx - 1) % k]
            hes[hes[h].twin].nxt = prev_ccw
            hes[prev_ccw].prv = hes[h].twin

    # faces from next-orbits
    seen = [False] * len(hes)
    for start in range(len(hes)):
        if seen[start]:
            continue
        face = _Face()
        fid = len(dcel.faces)
        walk: List[int] = []
        area2 = RAT_ZERO
        h = start
        while True:
            seen[h] = True
            hes[h].face = fid
            o = verts[hes[h].origin].point
            d = verts[hes[hes[h].twin].origin].point
            area2 += o.x * d.y - o.y * d.x
            walk.append(hes[h].origin)
            h = hes[h].nxt
            if h == start:
                break
        face.outer = start
        face.walk = tuple(walk)
        if area2 < 0:
            face.is_outer = True
            dcel.outer_face = fid
        dcel.faces.append(face)

    assert dcel.outer_face >= 0, "no outer face found (disconnected overlay?)"
    n_outer = sum(1 for f in dcel.faces if f.is_outer)
    assert n_outer == 1, "overlay must be connected"

    # per-line edge index for point location
    for gi in range(len(groups)):
        lst = []
        for i in range(0, len(hes), 2):
            if hes[i].line_id == gi:
                a = groups[gi].line.param(verts[hes[i].origin].point)
                b = groups[gi].line.param(verts[hes[i + 1].origin].point)
                lst.append((min(a, b), max(a, b), i))
        lst.sort()
        dcel.edges_by_line[gi] = lst
    dcel.lines = [g.line for g in groups]
    return dcel


def _hull_groups(hull: Sequence[Point]) -> List[Tuple[Line, Tuple[Point, Point]]]:
    segs = []
    n = len(hull)
    for i in range(n):
        a, b = hull[i], hull[(i + 1) % n]
        segs.append((Line.through(a, b), (a, b)))
    return segs


def _clip_line_to_hull(line: Line, hull: Sequence[Point]) -> Optional[Tuple[Rat, Rat]]:
    """Parameter range of the chord of `line` inside the hull, or None."""
    pts_params: List[Rat] = []
    n = len(hull)
    sides = [line.side(p) for p in hull]
    if all(s > 0 for s in sides) or all(s < 0 for s in sides):
        return None
    for i in range(n):
        a, b = hull[i], hull[(i + 1) % n]
        sa, sb = sides[i], sides[(i + 1) % n]
        if sa == 0:
            pts_params.append(line.param(a))
        if sa * sb < 0:
            p = line_intersection(line, Line.through(a, b))
            assert p is not None
            pts_params.append(line.param(p))
    if not pts_params:
        return None
    lo, hi = min(pts_params), max(pts_params)
    if lo == hi:
        return None  # tangent at a single vertex
    return lo, hi


def arrangement_dcel(lines: Sequence[Line], hull: Sequence[Point]) -> Dcel:
    """DCEL of the arrangement of the given (deduplicated) lines clipped to
    the convex hull used as a bounding box."""
    if len(hull) < 3:
        raise ValueError("degenerate hull: handled upstream")
    if len(set(lines)) != len(lines):
        raise ValueError("duplicate carrier lines: deduplicate first")
    groups: List[_LineGroup] = []
    by_line: Dict[Line, _LineGroup] = {}
    for idx, line in enumerate(lines):
        g = _LineGroup(line, True, idx)
        rng = _clip_line_to_hull(line, hull)
        if rng is not None:
            g.intervals = [rng]
        by_line[line] = g
        groups.append(g)
    for line, (a, b) in _hull_groups(hull):
        g = by_line.get(line)
        if g is None:
            g = _LineGroup(line, False, -1)
            by_line[line] = g
            groups.append(g)
        g.intervals.append(tuple(sorted((line.param(a), line.param(b)))))
    for g in groups:
        g.intervals = _merge_intervals(g.intervals)
    groups = [g for g in groups if g.intervals]
    return _build_overlay(groups)


# ---------------------------------------------------------------------------
# membership in the interior of a union of triangles


def _wedge_contains(s: Point, e: Point, m: Point) -> bool:
    # wedge from direction s ccw to direction e, span <= pi
    cs = cross(s, m)
    ce = cross(m, e)
    if cross(s, e) == 0 and (s.x * e.x + s.y * e.y) < 0:  # exactly pi wide
        return cs >= 0
    return cs >= 0 and ce >= 0


def point_in_union_interior(p: Point, triangles: Sequence[Triangle]) -> bool:
    """Exact test for p in the topological interior of the union of the
    (closed, possibly degenerate) triangles.

    Degenerate pieces never contribute 2D coverage.  When p sits on input
    boundaries only, the covered angular wedges around p must close the
    full circle.
    """
    wedges: List[Tuple[Point, Point]] = []
    for t in triangles:
        if t.degeneracy != FULL:
            continue
        a, b, c = t.corners
        if orientation(a, b, c) == CW:
            a, b, c = c, b, a
        s1 = orientation(a, b, p)
        s2 = orientation(b, c, p)
        s3 = orientation(c, a, p)
        if s1 > 0 and s2 > 0 and s3 > 0:
            return True
        if s1 < 0 or s2 < 0 or s3 < 0:
            continue
        zeros = (s1 == 0) + (s2 == 0) + (s3 == 0)
        if zeros == 1:
            # interior of an edge: half-plane wedge towards the triangle
            if s1 == 0:
                u, v = a, b
            elif s2 == 0:
                u, v = b, c
            else:
                u, v = c, a
            d = sub(v, u)
            wedges.append((d, Point(-d.x, -d.y)))
        else:
            # at a corner: wedge between the two adjacent corners
            if p == a:
                u, v = b, c
            elif p == b:
                u, v = c, a
            else:
                u, v = a, b
            wedges.append((sub(u, p), sub(v, p)))
    if not wedges:
        return False
    dirs: List[Point] = []
    for s, e in wedges:
        dirs.append(s)
        dirs.append(e)
    dirs.sort(key=functools.cmp_to_key(_dir_cmp))
    uniq: List[Point] = []
    for d in dirs:
        if not uniq or _dir_cmp(uniq[-1], d) != 0:
            uniq.append(d)
    n = len(uniq)
    for i in range(n):
        u, v = uniq[i], uniq[(i + 1) % n]
        if _dir_cmp(u, v) == 0:  # single direction only: cannot close the circle
            return False
        if cross(u, v) == 0:  # antipodal neighbours: mid at +90 deg from u
            mid = rot90(u)
        else:
            mid = Point(u.x + v.x, u.y + v.y) if cross(u, v) > 0 else rot90(u)
        if not any(_wedge_contains(s, e, mid) for s, e in wedges):
            return False
    return True


# ---------------------------------------------------------------------------
# boundary analysis


class SegmentRecord(NamedTuple):
    a: Point
    b: Point
    tri: int  # input triangle index
    edge: int  # edge index within the triangle (0 for degenerate segments)


class BarePiece(NamedTuple):
    a: Point
    b: Point
    line_id: int
    a_deriv: tuple  # ("corner", tri, corner_idx) | ("xing", line_id, other_line_id)
    b_deriv: tuple


class BarePoint(NamedTuple):
    p: Point
    tri: int


class BoundaryInfo(NamedTuple):
    segments: List[SegmentRecord]           # all input segments
    labelled: List[bool]                    # per segment: contributes boundary
    lines: List[Line]                       # dedup'd carriers of all segments
    seg_line: List[int]                     # per segment: line index
    labelled_lines: List[int]               # line ids carrying >= 1 labelled segment
    line_rep_segment: Dict[int, int]        # line id -> first labelled segment id
    bare_pieces: List[BarePiece]
    bare_points: List[BarePoint]


def _input_segments(triangles: Sequence[Triangle]) -> Tuple[List[SegmentRecord], List[Tuple[Point, int]]]:
    segs: List[SegmentRecord] = []
    points: List[Tuple[Point, int]] = []
    for ti, t in enumerate(triangles):
        kind = t.degeneracy
        if kind == POINT:
            points.append((t.corners[0], ti))
            continue
        for ei, (a, b) in enumerate(t.edges()):
            segs.append(SegmentRecord(a, b, ti, ei))
    return segs, points


def boundary_analysis(triangles: Sequence[Triangle]) -> BoundaryInfo:
    """Decide which input segments contribute to the boundary of the union
    and compute the bare 1D/0D leftovers that no 2D face covers.

    Works entirely in per-carrier-line 1D decompositions: each line is cut
    at segment endpoints and at crossings with other carriers; every fine
    piece is classified by exact side-cover tests against the 2D input
    triangles.
    """
    segs, points = _input_segments(triangles)
    tris2d = [t for t in triangles if t.degeneracy == FULL]

    lines: List[Line] = []
    line_idx: Dict[Line, int] = {}
    seg_line: List[int] = []
    for s in segs:
        line = Line.through(s.a, s.b)
        li = line_idx.get(line)
        if li is None:
            li = len(lines)
            line_idx[line] = li
            lines.append(line)
        seg_line.append(li)

    by_line: Dict[int, List[int]] = {}
    for si, li in enumerate(seg_line):
        by_line.setdefault(li, []).append(si)

    # events per line: segment endpoints + crossings with other carrier
    # lines, each remembering how the point arises (for moving-counterpart
    # recovery later: a corner of some input triangle, or a line crossing)
    class _Ev:
        __slots__ = ("corner", "xings")

        def __init__(self):
            self.corner = None
            self.xings: List[int] = []

    line_events: Dict[int, Dict[Rat, _Ev]] = {li: {} for li in by_line}
    line_cover: Dict[int, List[Tuple[Rat, Rat]]] = {}

    def event(li: int, tpar: Rat) -> _Ev:
        ev = line_events[li].get(tpar)
        if ev is None:
            ev = _Ev()
            line_events[li][tpar] = ev
        return ev

    for li, sids in by_line.items():
        line = lines[li]
        ivs = []
        for si in sids:
            s = segs[si]
            ta, tb = line.param(s.a), line.param(s.b)
            ivs.append((min(ta, tb), max(ta, tb)))
        line_cover[li] = _merge_intervals(ivs)
        for si in sids:
            s = segs[si]
            for p_pt in (s.a, s.b):
                ev = event(li, line.param(p_pt))
                if ev.corner is None:
                    corner = next(k for k in range(3) if triangles[s.tri].corners[k] == p_pt)
                    ev.corner = (s.tri, corner)

    line_ids = sorted(by_line)
    for ii, li in enumerate(line_ids):
        for lj in line_ids[ii + 1:]:
            p = line_intersection(lines[li], lines[lj])
            if p is None:
                continue
            ti = lines[li].param(p)
            tj = lines[lj].param(p)
            if _covered(line_cover[li], ti):
                event(li, ti).xings.append(lj)
            if _covered(line_cover[lj], tj):
                event(lj, tj).xings.append(li)

    labelled = [False] * len(segs)
    bare_runs: Dict[int, List[Tuple[Rat, Rat]]] = {}

    for li in line_ids:
        line = lines[li]
        d = line.direction()
        params = sorted(line_events[li])
        cover = line_cover[li]
        runs: List[Tuple[Rat, Rat]] = []
        for a, b in zip(params, params[1:]):
            mid_t = (a + b) / 2
            if not _covered(cover, mid_t):
                continue
            m = line.point_at(mid_t)
            pos = neg = False
            for t2 in tris2d:
                if t2.contains_interior(m):
                    pos = neg = True
                elif t2.contains(m):
                    side = _cover_side(t2, m, d)
                    if side > 0:
                        pos = True
                    elif side < 0:
                        neg = True
                    else:
                        pos = neg = True
                if pos and neg:
                    break
            if not (pos and neg):
                for si in by_line[li]:
                    s = segs[si]
                    lo = min(line.param(s.a), line.param(s.b))
                    hi = max(line.param(s.a), line.param(s.b))
                    if lo <= mid_t <= hi:
                        labelled[si] = True
            if not pos and not neg:
                runs.append((a, b))
        if runs:
            bare_runs[li] = runs

    labelled_lines = sorted({seg_line[si] for si in range(len(segs)) if labelled[si]})
    labelled_set = set(labelled_lines)
    line_rep: Dict[int, int] = {}
    for si in range(len(segs)):
        if labelled[si] and seg_line[si] not in line_rep:
            line_rep[seg_line[si]] = si

    # merge adjacent bare runs (segment abutments are not intrinsic), then
    # re-split only at labelled-carrier crossings (which are)
    bare_pieces: List[BarePiece] = []
    for li, runs in sorted(bare_runs.items()):
        line = lines[li]
        merged = _merge_intervals(runs)
        ev_map = line_events[li]

        def derivation(tpar) -> tuple:
            ev = ev_map[tpar]
            if ev.corner is not None:
                return ("corner",) + ev.corner
            lab = [x for x in ev.xings if x in labelled_set]
            others = lab or ev.xings
            return ("xing", li, min(others))

        for lo, hi in merged:
            cuts = [lo]
            for tpar in sorted(ev_map):
                if lo < tpar < hi and any(x in labelled_set for x in ev_map[tpar].xings):
                    cuts.append(tpar)
            cuts.append(hi)
            for a, b in zip(cuts, cuts[1:]):
                bare_pieces.append(
                    BarePiece(line.point_at(a), line.point_at(b), li, derivation(a), derivation(b))
                )

    # input point-triangles: emit those covered by nothing else
    bare_points: List[BarePoint] = []
    seen_pts = set()
    for p, ti in points:
        if p in seen_pts:
            continue
        if any(t2.contains(p) for t2 in tris2d):
            continue
        if any(point_on_segment(p, s.a, s.b) for s in segs):
            continue
        seen_pts.add(p)
        bare_points.append(BarePoint(p, ti))

    return BoundaryInfo(
        segments=segs,
        labelled=labelled,
        lines=lines,
        seg_line=seg_line,
        labelled_lines=labelled_lines,
        line_rep_segment=line_rep,
        bare_pieces=bare_pieces,
        bare_points=bare_points,
    )


def _cover_side(t: Triangle, m: Point, d: Point) -> int:
    """Side of direction d (through m) covered by triangle t, for m interior
    to an edge of t collinear with d: +1 left, -1 right.  Returns 0 when no
    collinear edge matches (not expected at fine-piece midpoints); callers
    treat that conservatively as both sides."""
    a, b, c = t.corners
    for (u, v, w) in ((a, b, c), (b, c, a), (c, a, b)):
        if cross(sub(v, u), d) == 0 and point_on_segment(m, u, v):
            return rat_sign(cross(d, sub(w, m)))
    return 0


def boundary_segments(triangles: Sequence[Triangle]):
    """The input segments that contain at least one edge of the topological
    boundary of the union, each with its carrier line; sorted canonically."""
    info = boundary_analysis(triangles)
    out = set()
    for si, s in enumerate(info.segments):
        if info.labelled[si]:
            a, b = sorted((s.a, s.b))
            out.add(((a, b), info.lines[info.seg_line[si]]))
    return sorted(out)


# ---------------------------------------------------------------------------
# planar subdivision of the input (all carriers, clipped to the hull)


def build_subdivision(triangles: Sequence[Triangle]) -> Dcel:
    """The subdivision induced by the triangles: the arrangement of all
    edge-carrier lines clipped to the convex hull of all corners, faces
    flagged inside_input iff contained in the union."""
    corners = [c for t in triangles for c in t.corners]
    hull = convex_hull(corners)
    if len(hull) < 3:
        raise ValueError("degenerate hull: handled upstream")
    segs, _ = _input_segments(triangles)
    lines: List[Line] = []
    seen = set()
    for s in segs:
        line = Line.through(s.a, s.b)
        if line not in seen:
            seen.add(line)
            lines.append(line)
    dcel = arrangement_dcel(lines, hull)
    tris = list(triangles)
    for fid in dcel.bounded_faces():
        mean = point_mean(dcel.face_walk_points(fid))
        dcel.faces[fid].inside = point_in_union_interior(mean, tris)
    dcel.faces[dcel.outer_face].inside = False
    return dcel


PlanarSubdivision = Dcel


class LocateResult(NamedTuple):
    kind: str  # "vertex" | "edge" | "face"
    index: int


def locate_point(dcel: Dcel, p: Point) -> LocateResult:
    """Exact location of p in the subdivision: vertex, edge (half-edge pair
    index) or face handle."""
    vid = dcel.vertex_index.get(p)
    if vid is not None:
        return LocateResult("vertex", vid)
    for li, line in enumerate(dcel.lines):
        if line.side(p) != 0:
            continue
        tp = line.param(p)
        for lo, hi, he in dcel.edges_by_line.get(li, ()):
            if lo < tp < hi:
                return LocateResult("edge", he)
    for fid in dcel.bounded_faces():
        walk = dcel.face_walk_points(fid)
        n = len(walk)
        if all(orientation(walk[i], walk[(i + 1) % n], p) == CCW for i in range(n)):
            return LocateResult("face", fid)
    return LocateResult("face", dcel.outer_face)


def subdivision_interior_contains(dcel: Dcel, p: Point) -> bool:
    """p lies in the interior of the flagged-inside region (edges and
    vertices between inside faces count as inside)."""
    where = locate_point(dcel, p)
    if where.kind == "face":
        return bool(dcel.faces[where.index].inside)
    if where.kind == "edge":
        h = dcel.halfedges[where.index]
        f1 = h.face
        f2 = dcel.halfedges[h.twin].face
        return bool(dcel.faces[f1].inside) and bool(dcel.faces[f2].inside)
    return all(bool(dcel.faces[f].inside) for f in dcel.vertex_faces(where.index))
