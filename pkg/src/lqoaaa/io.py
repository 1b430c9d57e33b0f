"""JSON and CSV formats for models, sample sets, interpolants and reports.

Complex numbers are written as ``[re, im]`` pairs. Real models are written
with plain numbers. Python's float ``repr`` is shortest-round-trip, so every
finite double reads back bit-exact.
"""

from __future__ import annotations

import csv
import json
import logging

import numpy as np

from .barycentric import LqoInterpolant
from .errors import DimensionMismatch, GridMismatch, ParseError
from .fitting import FitReport, SampleSet
from .model import LqoModel, TimeSignal, state_responses

logger = logging.getLogger(__name__)

MODEL_KEYS = {"dim", "A", "b", "c", "M"}
SAMPLE_KEYS = {"points", "h1", "h2", "real_symmetric"}
INTERPOLANT_KEYS = {"order", "support", "weights", "h1", "h2"}
REPORT_HEADER = [
    "iter",
    "order",
    "support_re",
    "support_im",
    "max_err_h1",
    "max_err_h2",
    "ls_residual",
    "alt_passes",
]


def encode_complex(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def decode_complex(v, field="value") -> complex:
    if isinstance(v, bool):
        raise ParseError(f"{field}: expected a number or [re, im], got {v!r}")
    if isinstance(v, (int, float)):
        return complex(v)
    if (
        isinstance(v, list)
        and len(v) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)
    ):
        return complex(float(v[0]), float(v[1]))
    raise ParseError(f"{field}: expected a number or [re, im], got {v!r}")


def _encode_array(a, as_complex):
    a = np.asarray(a)
    if a.ndim == 0:
        return encode_complex(a) if as_complex else float(a.real)
    return [_encode_array(x, as_complex) for x in a]


def _decode_vector(v, field, n=None):
    if not isinstance(v, list):
        raise ParseError(f"{field}: expected a list")
    out = np.array([decode_complex(x, field) for x in v], dtype=complex)
    if n is not None and len(out) != n:
        raise DimensionMismatch(field, (n,), (len(out),))
    return out


def _decode_matrix(v, field, n):
    if not isinstance(v, list):
        raise ParseError(f"{field}: expected a list of rows")
    if len(v) != n or any(not isinstance(row, list) or len(row) != n for row in v):
        got = (len(v), *sorted({len(r) for r in v if isinstance(r, list)}))
        raise DimensionMismatch(field, (n, n), got)
    return np.array([[decode_complex(x, field) for x in row] for row in v], dtype=complex)


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as f:
            doc = json.load(f)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: malformed JSON ({e})") from e
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: expected a JSON object at top level")
    return doc


def _require(doc, keys, known, path):
    missing = [k for k in keys if k not in doc]
    if missing:
        raise ParseError(f"{path}: missing key(s) {', '.join(missing)}")
    for k in sorted(set(doc) - known):
        logger.warning("%s: ignoring unknown key %r", path, k)


def _dump_json(doc, path):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")


def model_to_dict(model: LqoModel) -> dict:
    cplx = not model.is_real
    return {
        "dim": model.dim,
        "A": _encode_array(model.A, cplx),
        "b": _encode_array(model.b, cplx),
        "c": _encode_array(model.c, cplx),
        "M": _encode_array(model.M, cplx),
    }


def model_from_dict(doc: dict, path="<model>") -> LqoModel:
    _require(doc, ["dim", "A", "b", "c", "M"], MODEL_KEYS, path)
    n = doc["dim"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError(f"{path}: dim must be a positive integer")
    A = _decode_matrix(doc["A"], "A", n)
    b = _decode_vector(doc["b"], "b", n)
    c = _decode_vector(doc["c"], "c", n)
    M = _decode_matrix(doc["M"], "M", n)
    if not any(np.any(x.imag) for x in (A, b, c, M)):
        A, b, c, M = (x.real.copy() for x in (A, b, c, M))
    model = LqoModel(A, b, c, M)
    if model.asymmetry > 0:
        logger.warning("%s: M is not symmetric (asymmetry %.3g); symmetrized", path, model.asymmetry)
    return model


def write_model(model: LqoModel, path):
    _dump_json(model_to_dict(model), path)


def read_model(path) -> LqoModel:
    """Read a model file. ``M`` is symmetrized; see ``LqoModel.asymmetry``."""
    return model_from_dict(_load_json(path), path)


def write_samples(samples: SampleSet, path):
    doc = {"points": _encode_array(samples.points, True)}
    if samples.h1 is not None:
        doc["h1"] = _encode_array(samples.h1, True)
    doc["h2"] = _encode_array(samples.h2, True)
    doc["real_symmetric"] = bool(samples.real_symmetric)
    _dump_json(doc, path)


def read_samples(path) -> SampleSet:
    """Read a sample file; ``h2`` may be nested rows or a flat row-major list."""
    doc = _load_json(path)
    _require(doc, ["points", "h2"], SAMPLE_KEYS, path)
    points = _decode_vector(doc["points"], "points")
    N = len(points)
    raw = doc["h2"]
    if not isinstance(raw, list):
        raise ParseError(f"{path}: h2 must be a list")
    if raw and isinstance(raw[0], list) and raw[0] and isinstance(raw[0][0], list):
        if len(raw) != N or any(not isinstance(r, list) or len(r) != N for r in raw):
            raise GridMismatch(f"{path}: h2 must be {N}x{N}")
        h2 = np.array([[decode_complex(x, "h2") for x in row] for row in raw], dtype=complex)
    else:
        flat = _decode_vector(raw, "h2")
        if len(flat) != N * N:
            raise GridMismatch(f"{path}: h2 has {len(flat)} entries, expected {N * N}")
        h2 = flat.reshape(N, N)
    h1 = doc.get("h1")
    if h1 is not None:
        h1 = _decode_vector(h1, "h1")
        if len(h1) != N:
            raise GridMismatch(f"{path}: h1 has {len(h1)} entries, expected {N}")
    flag = doc.get("real_symmetric", False)
    if not isinstance(flag, bool):
        raise ParseError(f"{path}: real_symmetric must be true or false")
    return SampleSet(points, h2, h1, flag)


def write_interpolant(interp: LqoInterpolant, path):
    _dump_json(
        {
            "order": interp.order,
            "support": _encode_array(interp.support, True),
            "weights": _encode_array(interp.weights, True),
            "h1": _encode_array(interp.h1_values, True),
            "h2": _encode_array(interp.h2_grid, True),
        },
        path,
    )


def read_interpolant(path) -> LqoInterpolant:
    doc = _load_json(path)
    _require(doc, ["order", "support", "weights", "h1", "h2"], INTERPOLANT_KEYS, path)
    n = doc["order"]
    if not isinstance(n, int) or n < 1:
        raise ParseError(f"{path}: order must be a positive integer")
    return LqoInterpolant(
        _decode_vector(doc["support"], "support", n),
        _decode_vector(doc["weights"], "weights", n),
        _decode_vector(doc["h1"], "h1", n),
        _decode_matrix(doc["h2"], "h2", n),
    )


def sample_model(model: LqoModel, points, real_symmetric=False) -> SampleSet:
    """Sample ``H1`` (omitted when ``c = 0``) and the full ``H2`` grid.

    One state solve per point serves both transfer functions; ``H2`` is
    computed on the upper triangle and mirrored.
    """
    points = np.asarray(points, dtype=complex).ravel()
    X = state_responses(model, points)
    G = X.T @ model.M @ X
    h2 = np.triu(G) + np.triu(G, 1).T
    h1 = model.c @ X if model.has_linear_output else None
    return SampleSet(points, h2, h1, real_symmetric)


def _fmt(x) -> str:
    return format(float(x), ".17g")


def write_report(report: FitReport, path):
    """CSV with one row per iteration, floats to 17 significant digits."""
    if not report.records:
        raise ValueError("cannot write an empty report")
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(REPORT_HEADER)
        for i, r in enumerate(report.records, start=1):
            w.writerow(
                [
                    i,
                    r.order,
                    _fmt(r.point.real),
                    _fmt(r.point.imag),
                    _fmt(r.max_err_h1),
                    _fmt(r.max_err_h2),
                    _fmt(r.ls_residual),
                    r.alt_passes,
                ]
            )


def read_report(path) -> list:
    """Rows of a report file as dicts of ints and floats."""
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.DictReader(f))
    ints = {"iter", "order", "alt_passes"}
    return [{k: (int(v) if k in ints else float(v)) for k, v in row.items()} for row in rows]


def write_signal(signal: TimeSignal, path, column="y"):
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["t", column])
        for t, v in zip(signal.times, signal.values):
            w.writerow([_fmt(t), _fmt(v)])


def read_signal(path) -> TimeSignal:
    """Two-column CSV ``t,value`` on a uniform grid (header optional)."""
    rows = []
    with open(path, newline="", encoding="utf-8") as f:
        for row in csv.reader(f):
            if not row:
                continue
            try:
                rows.append((float(row[0]), float(row[1])))
            except (ValueError, IndexError):
                if rows:
                    raise ParseError(f"{path}: bad row {row!r}")
    if len(rows) < 2:
        raise ParseError(f"{path}: need at least two samples")
    t = np.array([r[0] for r in rows])
    dt = np.diff(t)
    if not np.allclose(dt, dt[0], rtol=1e-9, atol=0) or dt[0] <= 0:
        raise ParseError(f"{path}: time grid must be uniform and increasing")
    return TimeSignal(t[0], float(dt[0]), [r[1] for r in rows])


def read_points(path) -> np.ndarray:
    """Points from a JSON list of ``[re, im]`` or an object with ``points``."""
    try:
        with open(path, encoding="utf-8") as f:
            doc = json.load(f)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: malformed JSON ({e})") from e
    if isinstance(doc, dict):
        if "points" not in doc:
            raise ParseError(f"{path}: no 'points' key")
        doc = doc["points"]
    return _decode_vector(doc, "points")
