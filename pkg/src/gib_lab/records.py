"""Diagnostics rows, CSV/JSON writers and the summary schema."""
import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from . import diagnostics as dg
from . import spectral
from .errors import GibLabError
from .integrator import advance
from .model import State

COLUMNS = (
    "t", "H", "P", "I", "J", "N",
    "dIdt_fd", "dIdt_formula", "dJdt_fd", "dJdt_formula", "dNdt_fd", "dNdt_formula",
    "Qt", "SQt", "PQt",
    "lyap_v2", "lyap_uHu", "lyap_up1", "lyap_uHup",
    "norm_interior", "norm_exterior", "sup_u", "tail_spec",
)

SUMMARY_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["experiment", "config_echo", "criteria", "runtime_seconds", "columns", "status", "failures"],
    "additionalProperties": False,
    "properties": {
        "experiment": {"type": "string"},
        "config_echo": {"type": "object"},
        "criteria": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "value", "threshold", "pass"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "value": {"type": ["number", "null"]},
                    "threshold": {"type": ["number", "null"]},
                    "pass": {"type": "boolean"},
                },
            },
        },
        "runtime_seconds": {"type": "number", "minimum": 0},
        "columns": {"type": "array", "items": {"enum": list(COLUMNS)}},
        "status": {"enum": ["pass", "fail", "aborted"]},
        "failures": {"type": "array", "items": {"type": "string"}},
        "scalars": {"type": "object"},
        "error": {"type": "string"},
    },
}


class RecordObserver:
    """Computes one full ``COLUMNS`` row for a sampled state.

    ``weight`` is the static weight for J, N and the Lyapunov terms;
    ``moving_weight`` drives I and its Q/SQ/PQ split.  Time derivatives are
    checked against centred differences from single RK4 steps of
    ``dt_check`` either side of the sample.
    """

    def __init__(self, params, weight, moving_weight, region=(-5.0, 5.0), a=1.0, b=1.0, dt_check=1e-3):
        self.params = params
        self.p = params.p
        self.weight = weight
        self.moving_weight = moving_weight
        self.region = [tuple(region)]
        self.a, self.b = a, b
        self.dt_check = dt_check

    def __call__(self, state):
        p, w, mw, h = self.p, self.weight, self.moving_weight, self.dt_check
        plus = advance(state, self.params, state.t + h, dt=h)
        minus = advance(state, self.params, state.t - h, dt=h)

        def fd(fn):
            return (fn(plus) - fn(minus)) / (2 * h)

        split = dg.qsqpq_split(state, mw, p)
        lyap = dg.lyapunov_terms(state, w, p)
        ext = dg.exterior_region(state.t, self.a, self.b, state.grid, warn=False)
        return {
            "H": dg.energy(state, p),
            "P": dg.momentum(state),
            "I": dg.virial_I(state, mw, p),
            "J": dg.virial_J(state, w),
            "N": dg.virial_N(state, w),
            "dIdt_fd": fd(lambda s: dg.virial_I(s, mw, p)),
            "dIdt_formula": dg.dIdt_formula(state, mw, p),
            "dJdt_fd": fd(lambda s: dg.virial_J(s, w)),
            "dJdt_formula": dg.dJdt_formula(state, w, p),
            "dNdt_fd": fd(lambda s: dg.virial_N(s, w)),
            "dNdt_formula": dg.dNdt_formula(state, w, p),
            "Qt": split.Qt,
            "SQt": split.SQt,
            "PQt": split.PQt,
            "lyap_v2": lyap.term_v2,
            "lyap_uHu": lyap.term_uHu,
            "lyap_up1": lyap.term_up1,
            "lyap_uHup": lyap.term_uHup,
            "norm_interior": dg.region_norm(state, self.region),
            "norm_exterior": dg.region_norm(state, ext) if ext else 0.0,
        }


def format_float(x):
    return f"{float(x):.17g}"


def write_records(path, rows):
    """Write rows (mappings with every ``COLUMNS`` key) as CSV; returns the row count."""
    path = Path(path)
    n = 0
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(COLUMNS)
            for row in rows:
                writer.writerow([format_float(row[c]) for c in COLUMNS])
                n += 1
    except OSError as exc:
        raise GibLabError(f"cannot write records to {path}: {exc}") from exc
    return n


def read_records(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != COLUMNS:
            raise GibLabError(f"{path}: unexpected CSV header")
        rows = [[float(x) for x in line] for line in reader]
    return {c: np.array([r[i] for r in rows]) for i, c in enumerate(COLUMNS)}


def _clean(value):
    if isinstance(value, (np.floating, np.integer)):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def criterion(name, value, threshold, passed):
    return {"name": name, "value": _clean(value), "threshold": _clean(threshold), "pass": bool(passed)}


def build_summary(experiment, echo, criteria, runtime, scalars=None, error=None, columns=COLUMNS):
    failures = [c["name"] for c in criteria if not c["pass"]]
    if error is not None:
        status = "aborted"
        failures.append("aborted")
    else:
        status = "fail" if failures else "pass"
    out = {
        "experiment": experiment,
        "config_echo": {k: _clean(v) for k, v in echo.items()},
        "criteria": criteria,
        "runtime_seconds": round(float(runtime), 3),
        "columns": list(columns),
        "status": status,
        "failures": failures,
    }
    if scalars:
        out["scalars"] = {k: _clean(v) for k, v in scalars.items()}
    if error is not None:
        out["error"] = str(error)
    return out


def write_summary(path, summary):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(summary, indent=2, sort_keys=False) + "\n")
    except OSError as exc:
        raise GibLabError(f"cannot write summary to {path}: {exc}") from exc


def validate_summary(summary):
    import jsonschema

    jsonschema.validate(summary, SUMMARY_SCHEMA)
    extra = set(summary["columns"]) ^ set(COLUMNS)
    if extra:
        raise jsonschema.ValidationError(f"column manifest mismatch: {sorted(extra)}")


# -- state files (ic = file) -----------------------------------------------

def write_state(path, state):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("x", "u", "v"))
    for row in zip(state.grid.nodes, state.u, state.v):
        w.writerow([format_float(z) for z in row])
    Path(path).write_text(buf.getvalue())


def read_state(path, grid):
    """Load ``x,u,v`` columns; the node set must match ``grid``."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape != (grid.n_points, 3):
        raise GibLabError(f"{path}: expected {grid.n_points} rows of x,u,v, got shape {data.shape}")
    if np.max(np.abs(data[:, 0] - grid.nodes)) > 1e-9 * max(1.0, grid.half_length):
        raise GibLabError(f"{path}: node coordinates do not match the configured grid")
    u, v = data[:, 1], data[:, 2]
    spectral._require_finite(u, "u")
    spectral._require_finite(v, "v")
    return State(grid, u, v, 0.0)
