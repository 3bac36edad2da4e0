"""File formats: CSV tables, JSON reports, binary checkpoints and run manifests.

Checkpoint layout (little-endian)::

    offset  size     content
    0       4        magic b"HE4F"
    4       4        u32 n_points
    8       8        f64 domain_length
    16      8        f64 tau
    24      16 n     n pairs (f64 Re Psi, f64 Im Psi)

The grid origin is not stored; readers assume the centred origin -L/2.
"""

from __future__ import annotations

import csv
import datetime as _dt
import json
import math
import struct
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError
from .fields import FieldState, Grid

MAGIC = b"HE4F"
HEADER = struct.Struct("<4sIdd")
DEFAULT_PRECISION = 9


def fmt(x, precision: int = DEFAULT_PRECISION) -> str:
    """Locale-independent number formatting with ``precision`` significant digits."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    return f"{x:.{precision}g}"


def write_csv_stream(fh, header, rows, precision: int = DEFAULT_PRECISION):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, str) else fmt(v, precision) for v in row])


def write_csv(path, header, rows, precision: int = DEFAULT_PRECISION):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        write_csv_stream(fh, header, rows, precision)
    return path


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return obj


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def write_json(path, obj):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj))
    return path


def profile_rows(state: FieldState):
    """(xi, Re Psi, Im Psi, |Psi|^2 - 1) rows."""
    return zip(state.grid.xi, state.psi.real, state.psi.imag, state.surface)


def write_profile_csv(path, state: FieldState, precision: int = DEFAULT_PRECISION):
    return write_csv(path, ["xi", "re_psi", "im_psi", "F"], profile_rows(state), precision)


def write_observables_csv(path, series, precision: int = DEFAULT_PRECISION):
    rows = ((o.tau, o.norm, o.max_F, o.min_F) for o in series)
    return write_csv(path, ["tau", "norm", "max_F", "min_F"], rows, precision)


class SnapshotWriter:
    """Long-format (tau, xi, F) CSV, appended snapshot by snapshot."""

    def __init__(self, path, precision: int = DEFAULT_PRECISION):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.precision = precision
        self._fh = self.path.open("w", newline="")
        self._w = csv.writer(self._fh, lineterminator="\n")
        self._w.writerow(["tau", "xi", "F"])

    def __call__(self, state: FieldState, obs=None):
        t = fmt(state.tau, self.precision)
        for x, f in zip(state.grid.xi, state.surface):
            self._w.writerow([t, fmt(x, self.precision), fmt(f, self.precision)])

    def close(self):
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def write_checkpoint(path, state: FieldState):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    g = state.grid
    data = np.empty(2 * g.n_points, dtype="<f8")
    data[0::2] = state.psi.real
    data[1::2] = state.psi.imag
    with path.open("wb") as fh:
        fh.write(HEADER.pack(MAGIC, g.n_points, float(g.domain_length), float(state.tau)))
        fh.write(data.tobytes())
    return path


def read_checkpoint(path, scales=None) -> FieldState:
    raw = Path(path).read_bytes()
    if len(raw) < HEADER.size:
        raise ConfigError(f"{path}: file too short for a checkpoint header")
    magic, n, length, tau = HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise ConfigError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
    expected = HEADER.size + 16 * n
    if len(raw) != expected:
        raise ConfigError(f"{path}: expected {expected} bytes for n={n}, found {len(raw)}")
    data = np.frombuffer(raw, dtype="<f8", offset=HEADER.size)
    psi = data[0::2] + 1j * data[1::2]
    try:
        grid = Grid(n, length)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return FieldState(grid=grid, tau=tau, psi=psi, scales=scales)


def manifest(command: str, argv, config_path, parameters: dict, outputs) -> dict:
    """Run manifest: enough to re-run the command and compare outputs."""
    return {
        "command": command,
        "argv": list(argv),
        "config_path": None if config_path is None else str(config_path),
        "parameters": parameters,
        "outputs": sorted(str(p) for p in outputs),
        "tool": "he4film",
        "tool_version": __version__,
        "python": sys.version.split()[0],
        "numpy": np.__version__,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }
