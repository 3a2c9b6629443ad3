"""Deterministic SVG frame emission for normal-form objects.

Coordinates are exact rationals until the final formatting step, where they
are rounded to the configured epsilon grid and printed as fixed-precision
decimals via integer arithmetic, so output bytes are identical across
platforms.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

from .exact_arith import Rat, rat, refine
from .planar_geom import FULL, POINT, Triangle
from .st_pipeline import NormalForm

PALETTE = (
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
)

CANVAS_W = 640
CANVAS_H = 480
MARGIN = 20


def decimal_str(x: Rat, digits: int) -> str:
    """Fixed-point decimal of x with the given fractional digits, half-up
    rounding, computed in integer arithmetic."""
    n, d = int(x.numerator), int(x.denominator)
    neg = n < 0
    n = abs(n)
    scale = 10 ** digits
    q = (2 * n * scale + d) // (2 * d)
    whole, frac = divmod(q, scale)
    out = f"{whole}.{frac:0{digits}d}" if digits else str(whole)
    return "-" + out if neg and q else out


def _digits_for(eps: Rat) -> int:
    digits = 0
    grid = rat(1)
    while grid > eps and digits < 12:
        digits += 1
        grid = grid / 10
    return digits


def frame_times(nf: NormalForm, count: int, eps: Rat) -> List[Rat]:
    """count evenly spaced rational times over the time domain (inner-rounded
    when the endpoints are algebraic)."""
    if count < 1:
        raise ValueError("frame count must be >= 1")
    if not nf.partition:
        return []
    lo_tv = nf.partition[0].lo
    hi_tv = nf.partition[-1].hi
    lo = refine(lo_tv, eps)[1]
    hi = refine(hi_tv, eps)[0]
    if hi < lo:
        lo = hi = (lo + hi) / 2
    if count == 1:
        return [(lo + hi) / 2]
    step = (hi - lo) / (count - 1)
    return [lo + step * i for i in range(count)]


def _bounds(frames: Sequence[Sequence[Triangle]]):
    xs: List[Rat] = []
    ys: List[Rat] = []
    for tris in frames:
        for t in tris:
            for c in t.corners:
                xs.append(c.x)
                ys.append(c.y)
    if not xs:
        return rat(0), rat(0), rat(1), rat(1)
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x0 == x1:
        x0, x1 = x0 - 1, x1 + 1
    if y0 == y1:
        y0, y1 = y0 - 1, y1 + 1
    return x0, y0, x1, y1


def render_frames(nf: NormalForm, count: int, eps: Rat, seed: int = 0) -> List[Tuple[str, str]]:
    """(filename, svg text) pairs for count frames; triangles are drawn from
    the normal form, so no two filled shapes overlap."""
    times = frame_times(nf, count, eps)
    frames = [nf.snapshot(tau) for tau in times]
    x0, y0, x1, y1 = _bounds(frames)
    digits = _digits_for(eps)

    inner_w = rat(CANVAS_W - 2 * MARGIN)
    inner_h = rat(CANVAS_H - 2 * MARGIN)
    scale = min(inner_w / (x1 - x0), inner_h / (y1 - y0))

    def sx(x: Rat) -> str:
        return decimal_str(MARGIN + (x - x0) * scale, digits)

    def sy(y: Rat) -> str:
        return decimal_str(MARGIN + (y1 - y) * scale, digits)

    out = []
    for idx, (tau, tris) in enumerate(zip(times, frames)):
        lines = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{CANVAS_W}" height="{CANVAS_H}" '
            f'viewBox="0 0 {CANVAS_W} {CANVAS_H}">',
            f'<!-- t = {tau} -->',
            f'<rect width="{CANVAS_W}" height="{CANVAS_H}" fill="#ffffff"/>',
        ]
        for k, t in enumerate(tris):
            color = PALETTE[(k + seed) % len(PALETTE)]
            kind = t.degeneracy
            if kind == FULL:
                pts = " ".join(f"{sx(c.x)},{sy(c.y)}" for c in t.corners)
                lines.append(
                    f'<polygon points="{pts}" fill="{color}" fill-opacity="0.8" '
                    f'stroke="#333333" stroke-width="1"/>'
                )
            elif kind == POINT:
                c = t.corners[0]
                lines.append(
                    f'<circle cx="{sx(c.x)}" cy="{sy(c.y)}" r="3" fill="{color}"/>'
                )
            else:
                canon = t.canonicalize()
                a, b = canon.corners[0], canon.corners[1]
                lines.append(
                    f'<line x1="{sx(a.x)}" y1="{sy(a.y)}" x2="{sx(b.x)}" y2="{sy(b.y)}" '
                    f'stroke="{color}" stroke-width="2"/>'
                )
        lines.append("</svg>")
        out.append((f"frame_{idx:03d}.svg", "\n".join(lines) + "\n"))
    return out
