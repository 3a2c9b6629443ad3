"""The affine-invariant spatial triangulation of a snapshot.

Boundary-contributing segments are extracted, the arrangement of their
carrier lines is built inside the convex hull of all corners, and every
bounded face whose vertex mean lies in the interior of the input union is
fanned from that mean, one triangle per half-edge of the face walk.
Degenerate leftovers (bare segments and isolated points) are emitted
directly.

Every output triangle carries a derivation of each of its corners
(an input corner, a carrier crossing, or a face vertex-mean), which is what
lets the spatio-temporal pipeline replay the same construction with
time-dependent coordinates.
"""

from __future__ import annotations

from typing import List, NamedTuple, Sequence, Tuple

from .planar_geom import (
    CW,
    FULL,
    Point,
    Triangle,
    arrangement_dcel,
    boundary_analysis,
    convex_hull,
    orientation,
    point_in_union_interior,
    point_mean,
)

# corner derivations:
#   ("corner", tri_index, corner_index)   an input triangle corner
#   ("xing", line_id, line_id)            crossing of two labelled carriers
#   ("mean", (deriv, ...))                vertex mean of a face walk
Derivation = tuple


class SnapshotTriangulation(NamedTuple):
    triangles: List[Triangle]            # canonical corner order, sorted
    provenance: List[Tuple[Derivation, Derivation, Derivation]]
    carrier_lines: dict                  # line_id -> representative segment record

    def __len__(self):
        return len(self.triangles)


def _canonical_full_order(corners: Sequence[Point]) -> List[int]:
    idx = [0, 1, 2]
    if orientation(*corners) == CW:
        idx = [0, 2, 1]
    pts = [corners[i] for i in idx]
    m = pts.index(min(pts))
    return idx[m:] + idx[:m]


def _corner_lookup(triangles: Sequence[Triangle]):
    table = {}
    for ti, t in enumerate(triangles):
        for ci, c in enumerate(t.corners):
            table.setdefault(c, ("corner", ti, ci))
    return table


def triangulate_snapshot(S: Sequence[Triangle]) -> SnapshotTriangulation:
    """Affine-invariant triangulation of a finite set of (possibly
    degenerate, possibly overlapping) triangles; canonically ordered so that
    set equality of outputs is list equality."""
    S = list(S)
    items: List[Tuple[Triangle, Tuple[Derivation, Derivation, Derivation]]] = []
    if not S:
        return SnapshotTriangulation([], [], {})

    info = boundary_analysis(S)
    tris2d = [t for t in S if t.degeneracy == FULL]

    if tris2d:
        corners = [c for t in S for c in t.corners]
        hull = convex_hull(corners)
        lines = [info.lines[li] for li in info.labelled_lines]
        dcel = arrangement_dcel(lines, hull)
        corner_table = _corner_lookup(S)

        def vertex_derivation(vid: int) -> Derivation:
            ids = dcel.vertices[vid].line_ids
            if len(ids) >= 2:
                return ("xing", info.labelled_lines[ids[0]], info.labelled_lines[ids[1]])
            p = dcel.vertices[vid].point
            d = corner_table.get(p)
            if d is None:
                raise AssertionError("untrackable vertex on an inside face")
            return d

        for fid in dcel.bounded_faces():
            walk_pts = dcel.face_walk_points(fid)
            mean = point_mean(walk_pts)
            if not point_in_union_interior(mean, S):
                continue
            walk_derivs = [vertex_derivation(v) for v in dcel.faces[fid].walk]
            mean_deriv = ("mean", tuple(walk_derivs))
            n = len(walk_pts)
            for i in range(n):
                corners3 = (mean, walk_pts[i], walk_pts[(i + 1) % n])
                derivs3 = (mean_deriv, walk_derivs[i], walk_derivs[(i + 1) % n])
                order = _canonical_full_order(corners3)
                items.append(
                    (
                        Triangle(tuple(corners3[k] for k in order)),
                        tuple(derivs3[k] for k in order),
                    )
                )

    for piece in info.bare_pieces:
        a, b = piece.a, piece.b
        da, db = piece.a_deriv, piece.b_deriv
        if b < a:
            a, b, da, db = b, a, db, da
        items.append((Triangle((a, b, b)), (da, db, db)))

    for bp in info.bare_points:
        d = ("corner", bp.tri, next(k for k in range(3) if S[bp.tri].corners[k] == bp.p))
        items.append((Triangle((bp.p, bp.p, bp.p)), (d, d, d)))

    items.sort(key=lambda it: it[0].sort_key())
    return SnapshotTriangulation(
        [t for t, _ in items],
        [d for _, d in items],
        {li: info.segments[si] for li, si in info.line_rep_segment.items()},
    )


def count_bound_check(S: Sequence[Triangle]) -> Tuple[int, int]:
    """Output size against the quadratic bound 9*(3m)^2; asserts the bound
    and returns (size, bound) for reporting."""
    m = len(S)
    if m < 1:
        raise ValueError("need at least one input triangle")
    size = len(triangulate_snapshot(S).triangles)
    bound = 9 * (3 * m) ** 2
    assert size <= bound, f"triangulation size {size} exceeds bound {bound}"
    return size, bound
