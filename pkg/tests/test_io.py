import io as _io
import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from he4film import io
from he4film.errors import ConfigError
from he4film.fields import FieldState, Grid


def test_checkpoint_round_trip_is_bit_identical(tmp_path):
    g = Grid(64, 12.5)
    rng = np.random.default_rng(1)
    s = FieldState(g, 0.123456789012345, rng.normal(size=64) + 1j * rng.normal(size=64))
    p = io.write_checkpoint(tmp_path / "a.he4f", s)
    assert p.stat().st_size == io.HEADER.size + 16 * 64
    r = io.read_checkpoint(p)
    assert r.grid == g and r.tau == s.tau
    assert np.array_equal(r.psi, s.psi)
    io.write_checkpoint(tmp_path / "b.he4f", r)
    assert (tmp_path / "b.he4f").read_bytes() == p.read_bytes()


def test_checkpoint_rejects_bad_files(tmp_path):
    p = io.write_checkpoint(tmp_path / "a.he4f", FieldState(Grid(8, 1.0), 0.0, np.ones(8)))
    raw = p.read_bytes()
    (tmp_path / "magic").write_bytes(b"XXXX" + raw[4:])
    (tmp_path / "short").write_bytes(raw[:10])
    (tmp_path / "size").write_bytes(raw[:-16])
    for name, msg in (("magic", "magic"), ("short", "too short"), ("size", "expected")):
        with pytest.raises(ConfigError, match=msg):
            io.read_checkpoint(tmp_path / name)


def test_fmt():
    assert io.fmt(None) == ""
    assert io.fmt(True) == "true" and io.fmt(np.bool_(False)) == "false"
    assert io.fmt(np.int64(7)) == "7"
    assert io.fmt(float("nan")) == "nan"
    assert io.fmt(1 / 3, 4) == "0.3333"
    assert io.fmt(1.5e-20) == "1.5e-20"


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_fmt_round_trips_at_17_digits(x):
    assert float(io.fmt(x, 17)) == x


def test_csv_is_deterministic(tmp_path):
    rows = [(0.1, 2, "x"), (1e-30, -3, "")]
    a = io.write_csv(tmp_path / "a.csv", ["a", "b", "c"], rows, 6)
    b = io.write_csv(tmp_path / "b.csv", ["a", "b", "c"], rows, 6)
    assert a.read_bytes() == b.read_bytes() == b"a,b,c\n0.1,2,x\n1e-30,-3,\n"
    buf = _io.StringIO()
    io.write_csv_stream(buf, ["a", "b", "c"], rows, 6)
    assert buf.getvalue() == a.read_text()


def test_profile_snapshot_and_observables(tmp_path):
    g = Grid(4, 2.0)
    s = FieldState(g, 0.5, np.array([1, 1j, 2, 0]))
    text = io.write_profile_csv(tmp_path / "p.csv", s, 4).read_text().splitlines()
    assert text[0] == "xi,re_psi,im_psi,F" and text[3] == "0,2,0,3"
    with io.SnapshotWriter(tmp_path / "s.csv", 4) as w:
        w(s)
        w(s.evolved(s.psi, 1.0))
    lines = (tmp_path / "s.csv").read_text().splitlines()
    assert lines[0] == "tau,xi,F" and len(lines) == 9 and lines[5] == "1,-1,0"


def test_json_is_sorted_and_finite(tmp_path):
    p = io.write_json(tmp_path / "r.json", {"b": np.float64(np.inf), "a": (np.int32(1), np.bool_(True))})
    assert json.loads(p.read_text()) == {"a": [1, True], "b": None}
    assert p.read_text().index('"a"') < p.read_text().index('"b"')


def test_manifest_keys():
    m = io.manifest("solve", ["solve", "--kind", "quartic"], None, {"x": 1}, ["b", "a"])
    assert set(m) == {"command", "argv", "config_path", "parameters", "outputs", "tool",
                      "tool_version", "python", "numpy", "timestamp"}
    assert m["outputs"] == ["a", "b"] and m["config_path"] is None
