import json

import pytest

from fixtures import rectangle_split, rf, running_pair, tri
from stnf.cli import main
from stnf.exact_arith import rat
from stnf.st_model import (
    AtomicObject,
    GeometricObject,
    TimeDepAffinity,
    TimeInterval,
    geometric_to_json,
)


def write_obj(path, g):
    path.write_text(json.dumps(geometric_to_json(g)), encoding="utf-8")
    return str(path)


@pytest.fixture
def pair_file(tmp_path):
    return write_obj(tmp_path / "pair.json", running_pair())


def test_validate_ok(pair_file, capsys):
    assert main(["validate", pair_file]) == 0
    out = capsys.readouterr().out
    assert "atom 0: ok" in out and "atom 1: ok" in out


def test_validate_singular(tmp_path, capsys):
    f = TimeDepAffinity(rf(-2, 1), rf(0), rf(0), rf(1), rf(0), rf(0))
    g = GeometricObject.make(
        "bad", (AtomicObject(tri((0, 0), (1, 0), (0, 1)), TimeInterval.closed(0, 4), f),)
    )
    path = write_obj(tmp_path / "bad.json", g)
    assert main(["validate", path]) == 1
    assert "singular-at-2" in capsys.readouterr().out


def test_parse_error_exit_2(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    assert main(["validate", str(path)]) == 2
    err = capsys.readouterr().err
    assert "line 1" in err


def test_partition_golden(pair_file, capsys):
    assert main(["partition", pair_file]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out == [[0, 1], [1, 2], [3, 2], [5, 2], [7, 2], [4, 1]]


def test_partition_static(tmp_path, capsys):
    from fixtures import static_object

    path = write_obj(tmp_path / "s.json", static_object([tri((0, 0), (1, 0), (0, 1))]))
    assert main(["partition", path]) == 0
    assert json.loads(capsys.readouterr().out) == [[0, 1], [4, 1]]


def test_triangulate_deterministic_bytes(pair_file, tmp_path):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    assert main(["triangulate", pair_file, "--out", str(out1)]) == 0
    assert main(["triangulate", pair_file, "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    doc = json.loads(out1.read_text())
    assert doc["atoms"] and doc["partition"]
    assert all("approximate" in a for a in doc["atoms"])


def test_triangulate_rectangle_splits_identical_bytes(tmp_path):
    fa = write_obj(tmp_path / "ra.json", rectangle_split("a"))
    fb = write_obj(tmp_path / "rb.json", rectangle_split("b"))
    oa = tmp_path / "na.json"
    ob = tmp_path / "nb.json"
    assert main(["triangulate", fa, "--out", str(oa)]) == 0
    assert main(["triangulate", fb, "--out", str(ob)]) == 0
    assert oa.read_bytes() == ob.read_bytes()


def test_triangulate_file_level_fixpoint(tmp_path):
    fa = write_obj(tmp_path / "r.json", rectangle_split("a"))
    first = tmp_path / "nf1.json"
    second = tmp_path / "nf2.json"
    assert main(["triangulate", fa, "--out", str(first)]) == 0
    assert main(["triangulate", str(first), "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_triangulate_empty_object(tmp_path, capsys):
    path = tmp_path / "empty.json"
    path.write_text(json.dumps({"id": "none", "atoms": []}), encoding="utf-8")
    assert main(["triangulate", str(path)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["atoms"] == [] and doc["partition"] == []


def test_diff_rectangle_splits(tmp_path, capsys):
    fa = write_obj(tmp_path / "ra.json", rectangle_split("a"))
    fb = write_obj(tmp_path / "rb.json", rectangle_split("b"))
    assert main(["diff", fa, fb]) == 0
    assert main(["diff", fa, fa]) == 0
    other = write_obj(tmp_path / "t.json", GeometricObject.make(
        "t", (AtomicObject(tri((0, 0), (1, 0), (0, 1)), TimeInterval.closed(0, 4),
                           TimeDepAffinity.identity()),)))
    capsys.readouterr()
    assert main(["diff", fa, other]) == 1
    assert "first differing atom" in capsys.readouterr().out


def test_snapshot_golden(pair_file, capsys):
    assert main(["snapshot", pair_file, "--time", "1/4"]) == 0
    tris = json.loads(capsys.readouterr().out)
    assert len(tris) == 2

    def deep(t):
        return tuple(tuple(tuple(pair) for pair in corner) for corner in t)

    corners = {deep(t) for t in tris}
    moving = (((-11, 4), (1, 1)), ((-3, 4), (1, 1)), ((-7, 4), (3, 1)))
    assert moving in corners
    assert main(["snapshot", pair_file, "--time", "9"]) == 0
    assert json.loads(capsys.readouterr().out) == []


def test_render_frames(pair_file, tmp_path, capsys):
    outdir = tmp_path / "frames"
    assert main(["render", pair_file, "--frames", "9", "--out", str(outdir)]) == 0
    files = sorted(p.name for p in outdir.iterdir())
    assert files == [f"frame_{i:03d}.svg" for i in range(9)]
    body = (outdir / "frame_000.svg").read_text()
    assert "<svg" in body and "polygon" in body
    # determinism
    outdir2 = tmp_path / "frames2"
    assert main(["render", pair_file, "--frames", "9", "--out", str(outdir2)]) == 0
    for i in range(9):
        a = (outdir / f"frame_{i:03d}.svg").read_bytes()
        b = (outdir2 / f"frame_{i:03d}.svg").read_bytes()
        assert a == b


def test_render_single_frame_static(tmp_path):
    from fixtures import static_object

    path = write_obj(tmp_path / "s.json", static_object([tri((0, 0), (2, 0), (0, 2))]))
    outdir = tmp_path / "f"
    assert main(["render", str(path), "--frames", "1", "--out", str(outdir)]) == 0
    assert (outdir / "frame_000.svg").exists()


def test_render_degenerate_object(tmp_path):
    # a traffic-sign-like object: two triangles and a bare post segment
    post = tri((0, -3), (0, 0), (0, 0))
    sign = [tri((-1, 0), (1, 0), (0, 2)), tri((-1, 2), (1, 2), (0, 4)), post]
    from fixtures import static_object

    path = write_obj(tmp_path / "sign.json", static_object(sign, gid="sign"))
    outdir = tmp_path / "f"
    assert main(["render", str(path), "--frames", "2", "--out", str(outdir)]) == 0
    body = (outdir / "frame_000.svg").read_text()
    assert "<line" in body


def test_epsilon_env_override(pair_file, monkeypatch, capsys):
    monkeypatch.setenv("STNF_EPSILON", "1/1024")
    assert main(["partition", pair_file]) == 0
    monkeypatch.setenv("STNF_EPSILON", "-1")
    assert main(["partition", pair_file]) == 2
