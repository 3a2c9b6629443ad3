"""Command-line surface: validate, partition, triangulate, diff, snapshot
and render over JSON-described geometric objects.

Exit codes: 0 success, 1 semantic failure (validation, differing objects),
2 parse failure.  All output is byte-deterministic for a given input and
configuration.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .exact_arith import Rat, rat, rat_to_pair, tv_to_json
from .st_model import (
    GeometricObject,
    geometric_from_json,
    geometric_to_json,
    interval_to_json,
    snapshot_geometric,
    triangle_to_json,
    validate_geometric,
)
from .st_pipeline import DEFAULT_EPS, NormalForm, partition, t_st
from .render import render_frames

EPSILON_ENV = "STNF_EPSILON"


def _parse_rational(text: str) -> Rat:
    try:
        return Rat(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _default_epsilon() -> Rat:
    env = os.environ.get(EPSILON_ENV)
    if env:
        return Rat(env)
    return DEFAULT_EPS


def _load_object(path: str):
    """Parse a geometric object; returns (object, error_message, exit_code)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        return None, f"cannot read {path}: {exc}", 2
    except json.JSONDecodeError as exc:
        return None, f"parse error in {path}: line {exc.lineno} column {exc.colno}: {exc.msg}", 2
    try:
        return geometric_from_json(data), None, 0
    except (KeyError, TypeError, ValueError) as exc:
        return None, f"schema error in {path}: {exc}", 2


def _dump(data) -> str:
    return json.dumps(data, separators=(",", ":")) + "\n"


def normal_form_to_json(nf: NormalForm, gid: str):
    doc = geometric_to_json(nf.as_geometric(gid), include_flags=True)
    doc["partition"] = [interval_to_json(iv) for iv in nf.partition]
    return doc


def cmd_validate(args) -> int:
    g, err, code = _load_object(args.input)
    if err:
        print(err, file=sys.stderr)
        return code
    violations = validate_geometric(g)
    ok = True
    for i, atom in enumerate(g.atoms):
        mine = [v for j, v in violations if j == i]
        if mine:
            ok = False
            for v in mine:
                print(f"atom {i}: {v.render()}")
        else:
            print(f"atom {i}: ok")
    if not g.atoms:
        print("empty object: ok")
    return 0 if ok else 1


def cmd_partition(args) -> int:
    g, err, code = _load_object(args.input)
    if err:
        print(err, file=sys.stderr)
        return code
    violations = validate_geometric(g)
    if violations:
        print(f"invalid object: {len(violations)} violation(s); run validate", file=sys.stderr)
        return 1
    if not g.atoms:
        sys.stdout.write(_dump([]))
        return 0
    chi = partition(g)
    sys.stdout.write(_dump([tv_to_json(tv) for tv in chi.times]))
    return 0


def _triangulate(args):
    g, err, code = _load_object(args.input)
    if err:
        return None, None, err, code
    try:
        nf = t_st(g, args.epsilon)
    except Exception as exc:  # validation failures surface here
        return None, None, f"cannot triangulate: {exc}", 1
    return g, nf, None, 0


def cmd_triangulate(args) -> int:
    g, nf, err, code = _triangulate(args)
    if err:
        print(err, file=sys.stderr)
        return code
    text = _dump(normal_form_to_json(nf, g.id))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_diff(args) -> int:
    out = []
    for path in (args.input, args.input2):
        g, err, code = _load_object(path)
        if err:
            print(err, file=sys.stderr)
            return code
        try:
            nf = t_st(g, args.epsilon)
        except Exception as exc:
            print(f"cannot triangulate {path}: {exc}", file=sys.stderr)
            return 1
        doc = normal_form_to_json(nf, "diff")
        out.append(doc)
    a, b = out
    if a == b:
        print("objects have identical normal forms")
        return 0
    for i in range(max(len(a["atoms"]), len(b["atoms"]))):
        atom_a = a["atoms"][i] if i < len(a["atoms"]) else None
        atom_b = b["atoms"][i] if i < len(b["atoms"]) else None
        if atom_a != atom_b:
            print(f"first differing atom: index {i}")
            print(f"left:  {json.dumps(atom_a, separators=(',', ':')) if atom_a else '(absent)'}")
            print(f"right: {json.dumps(atom_b, separators=(',', ':')) if atom_b else '(absent)'}")
            return 1
    print("atoms agree; partitions differ")
    return 1


def cmd_snapshot(args) -> int:
    g, err, code = _load_object(args.input)
    if err:
        print(err, file=sys.stderr)
        return code
    violations = validate_geometric(g)
    if violations:
        print(f"invalid object: {len(violations)} violation(s); run validate", file=sys.stderr)
        return 1
    snap = snapshot_geometric(g, args.time)
    sys.stdout.write(_dump([triangle_to_json(t) for t in snap]))
    return 0


def cmd_render(args) -> int:
    g, nf, err, code = _triangulate(args)
    if err:
        print(err, file=sys.stderr)
        return code
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    frames = render_frames(nf, args.frames, args.epsilon, args.seed)
    for name, text in frames:
        (outdir / name).write_text(text, encoding="utf-8")
    print(f"wrote {len(frames)} frame(s) to {outdir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stnf",
        description="Affine-invariant time-dependent triangulation of moving-triangle objects.",
    )
    parser.add_argument(
        "--epsilon",
        type=_parse_rational,
        default=None,
        metavar="N/D",
        help="accuracy for approximate output at algebraic times (default 1/2^32; env STNF_EPSILON)",
    )
    parser.add_argument("--seed", type=int, default=0, metavar="K",
                        help="seed for presentation choices (frame colors)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check atomic-object validity")
    p.add_argument("input")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("partition", help="print the event-time list")
    p.add_argument("input")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("triangulate", help="compute the normal form")
    p.add_argument("input")
    p.add_argument("--out", metavar="PATH", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_triangulate)

    p = sub.add_parser("diff", help="compare two objects by normal form")
    p.add_argument("input")
    p.add_argument("input2")
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("snapshot", help="triangle list at a rational time")
    p.add_argument("input")
    p.add_argument("--time", type=_parse_rational, required=True, metavar="N/D")
    p.set_defaults(func=cmd_snapshot)

    p = sub.add_parser("render", help="emit SVG frames of the normal form")
    p.add_argument("input")
    p.add_argument("--frames", type=int, default=9, metavar="K")
    p.add_argument("--out", required=True, metavar="PATH")
    p.set_defaults(func=cmd_render)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.epsilon is None:
        args.epsilon = _default_epsilon()
    if args.epsilon <= 0:
        print("epsilon must be positive", file=sys.stderr)
        return 2
    if getattr(args, "frames", 1) < 1:
        print("frame count must be >= 1", file=sys.stderr)
        return 2
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
