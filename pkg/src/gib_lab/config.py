"""Flat JSON experiment configuration with strict key checking."""
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .diagnostics import INCREASING_SHAPES, SHAPES, WeightSpec
from .errors import ConfigError
from .model import ModelParams
from .solitons import SolitonSpec

EXPERIMENTS = (
    "soliton-validate",
    "travel",
    "conservation",
    "identity-check",
    "thm1-exterior",
    "thm2-interior",
    "positivity-probe",
    "comparison-probe",
    "norm-equivalence-probe",
)
INITIAL_CONDITIONS = ("soliton", "gaussian", "two-soliton", "file")

DEFAULTS = {
    "p": 2.0,
    "half_length": 50.0,
    "n_points": 1024,
    "dt": 0.01,
    "t_final": None,  # experiment specific, see T_FINAL
    "sample_every": 10,
    "dealias": False,
    "ic": None,  # experiment specific, see IC
    "c": 1.5,
    "x0": 0.0,
    "c2": -1.5,
    "x0_2": 0.0,
    "amplitude": None,  # experiment specific, see AMPLITUDE
    "width": 2.0,
    "center": 0.0,
    "ic_path": None,
    "weight_shape": "tanh",
    "L": 20.0,
    "x_offset": 0.0,
    "moving_shape": "tanh",
    "moving_L": 10.0,
    "sigma": None,  # defaults to -(1 + b)
    "a": 1.0,
    "b": 1.0,
    "region_lo": -5.0,
    "region_hi": 5.0,
    "dt_check": 1e-3,
    "seed": 0,
    "trials": 100,
    "sign_changing_trials": 1000,
    "output_path": None,
}

T_FINAL = {
    "soliton-validate": 0.0,
    "travel": 10.0,
    "conservation": 50.0,
    "identity-check": 10.0,
    "thm1-exterior": 60.0,
    "thm2-interior": 60.0,
}
IC = {"thm1-exterior": "gaussian", "identity-check": "gaussian", "thm2-interior": "gaussian"}
AMPLITUDE = {
    "thm1-exterior": 0.01,
    "thm2-interior": 0.5,
    "identity-check": 0.5,
    "positivity-probe": 1.0,
    "comparison-probe": 1.0,
    "norm-equivalence-probe": 1.0,
}

_STRINGS = {"experiment", "ic", "ic_path", "weight_shape", "moving_shape", "output_path"}
_INTS = {"n_points", "sample_every", "seed", "trials", "sign_changing_trials"}
_BOOLS = {"dealias"}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    model: ModelParams
    soliton: SolitonSpec = None
    weight: WeightSpec = None
    moving_weight: WeightSpec = None
    ic: str = "soliton"
    amplitude: float = 0.01
    width: float = 2.0
    center: float = 0.0
    ic_path: str = None
    second_soliton: SolitonSpec = None
    a: float = 1.0
    b: float = 1.0
    region: tuple = (-5.0, 5.0)
    sample_every: int = 10
    dt_check: float = 1e-3
    seed: int = 0
    trials: int = 100
    sign_changing_trials: int = 1000
    output_path: str = None
    echo: dict = field(default_factory=dict, compare=False)

    @property
    def csv_path(self):
        return Path(self.output_path)

    @property
    def json_path(self):
        return Path(self.output_path).with_suffix(".json")


def _check_type(key, value):
    if key in _STRINGS:
        if value is not None and not isinstance(value, str):
            raise ConfigError(f"{key} must be a string", key=key)
        return value
    if key in _BOOLS:
        if not isinstance(value, bool):
            raise ConfigError(f"{key} must be true or false", key=key)
        return value
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key} must be a number, got {value!r}", key=key)
    if not math.isfinite(value):
        raise ConfigError(f"{key} must be finite", key=key)
    if key in _INTS:
        if int(value) != value:
            raise ConfigError(f"{key} must be an integer", key=key)
        return int(value)
    return float(value)


def resolve(doc):
    """Fill defaults into a flat mapping; returns the resolved flat dict."""
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(doc) - set(DEFAULTS) - {"experiment"})
    if unknown:
        raise ConfigError(f"unknown config key {unknown[0]!r}", key=unknown[0])
    exp = doc.get("experiment")
    if exp not in EXPERIMENTS:
        raise ConfigError(f"experiment must be one of {', '.join(EXPERIMENTS)}; got {exp!r}", key="experiment")
    flat = dict(DEFAULTS)
    flat["t_final"] = T_FINAL.get(exp, 0.0)
    flat["ic"] = IC.get(exp, "soliton")
    flat["amplitude"] = AMPLITUDE.get(exp, 0.01)
    flat["output_path"] = f"{exp}.csv"
    for key, value in doc.items():
        flat[key] = _check_type(key, value)
    for key in ("t_final", "ic", "amplitude", "output_path"):
        if flat[key] is None:
            raise ConfigError(f"{key} may not be null", key=key)
    if flat["sigma"] is None:
        flat["sigma"] = -(1.0 + flat["b"])
    flat["experiment"] = exp
    return flat


def build(flat):
    exp = flat["experiment"]

    def need(cond, key, message):
        if not cond:
            raise ConfigError(message, key=key)

    model = ModelParams(
        p=flat["p"],
        half_length=flat["half_length"],
        n_points=flat["n_points"],
        dt=flat["dt"],
        t_final=flat["t_final"],
        dealias=flat["dealias"],
    )
    need(flat["half_length"] > 0, "half_length", "half_length must be positive")
    need(flat["n_points"] >= 16 and flat["n_points"] % 2 == 0, "n_points", "n_points must be even and >= 16")
    need(flat["ic"] in INITIAL_CONDITIONS, "ic", f"ic must be one of {', '.join(INITIAL_CONDITIONS)}")
    need(flat["ic"] != "file" or flat["ic_path"], "ic_path", "ic = file needs ic_path")
    need(flat["width"] > 0, "width", "width must be positive")
    need(flat["weight_shape"] in INCREASING_SHAPES, "weight_shape",
         f"weight_shape must be one of {', '.join(INCREASING_SHAPES)} (phi' > 0)")
    need(flat["moving_shape"] in SHAPES, "moving_shape", f"moving_shape must be one of {', '.join(SHAPES)}")
    for key in ("L", "moving_L"):
        need(flat[key] > 1, key, f"{key} must exceed 1")
    need(flat["dt_check"] > 0, "dt_check", "dt_check must be positive")
    need(flat["trials"] >= 1, "trials", "trials must be >= 1")
    need(flat["sign_changing_trials"] >= 1, "sign_changing_trials", "sign_changing_trials must be >= 1")
    need(flat["region_lo"] < flat["region_hi"], "region_hi", "region_hi must exceed region_lo")
    need(flat["sample_every"] >= 1, "sample_every", "sample_every must be >= 1")
    need(flat["dt"] * flat["sample_every"] <= 1 + 1e-12, "sample_every", "dt * sample_every must be <= 1")
    if exp == "thm1-exterior":
        need(flat["a"] > 0, "a", "a must be positive")
        need(flat["b"] > 0, "b", "b must be positive")

    soliton = second = None
    if flat["ic"] in ("soliton", "two-soliton") or exp in ("soliton-validate", "travel"):
        need(abs(flat["c"]) > 1, "c", "|c| must exceed 1")
        soliton = SolitonSpec(flat["p"], flat["c"], flat["x0"])
    if flat["ic"] == "two-soliton":
        need(abs(flat["c2"]) > 1, "c2", "|c2| must exceed 1")
        second = SolitonSpec(flat["p"], flat["c2"], flat["x0_2"])
    if exp == "travel":
        need(flat["ic"] == "soliton", "ic", "travel needs ic = soliton")

    return ExperimentConfig(
        experiment=exp,
        model=model,
        soliton=soliton,
        weight=WeightSpec(flat["weight_shape"], flat["L"], flat["x_offset"], 0.0),
        moving_weight=WeightSpec(flat["moving_shape"], flat["moving_L"], flat["x_offset"], flat["sigma"]),
        ic=flat["ic"],
        amplitude=flat["amplitude"],
        width=flat["width"],
        center=flat["center"],
        ic_path=flat["ic_path"],
        second_soliton=second,
        a=flat["a"],
        b=flat["b"],
        region=(flat["region_lo"], flat["region_hi"]),
        sample_every=flat["sample_every"],
        dt_check=flat["dt_check"],
        seed=flat["seed"],
        trials=flat["trials"],
        sign_changing_trials=flat["sign_changing_trials"],
        output_path=flat["output_path"],
        echo=flat,
    )


def from_dict(doc):
    return build(resolve(doc))


def parse_config(text):
    """Parse a JSON document into a validated ``ExperimentConfig``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return from_dict(doc)


def load_config(path):
    return parse_config(Path(path).read_text())
