"""The acceptance suite: a fixed list of experiment configurations."""
import json
import os
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .config import from_dict
from .experiments import run_experiment

SUITE = [
    ("A1_soliton_p2_c1.5", {"experiment": "soliton-validate", "p": 2.0, "c": 1.5}),
    ("A1_soliton_p3_c2", {"experiment": "soliton-validate", "p": 3.0, "c": 2.0}),
    ("A1_soliton_p3.5_c1.2", {"experiment": "soliton-validate", "p": 3.5, "c": 1.2}),
    ("A2_travel", {"experiment": "travel", "p": 2.0, "c": 1.5, "t_final": 10.0, "dt": 0.01}),
    ("A3_conservation_soliton", {"experiment": "conservation", "ic": "soliton", "c": 1.5, "t_final": 50.0}),
    ("A3_conservation_gaussian", {"experiment": "conservation", "ic": "gaussian", "amplitude": 0.5,
                                  "t_final": 50.0}),
    ("A4_identities", {"experiment": "identity-check", "ic": "gaussian", "amplitude": 0.5, "t_final": 10.0,
                       "sample_every": 50}),
    ("A5_norm_equivalence", {"experiment": "norm-equivalence-probe", "seed": 5, "trials": 100}),
    ("A6_comparison", {"experiment": "comparison-probe", "seed": 7, "trials": 100}),
    ("A7_positivity", {"experiment": "positivity-probe", "seed": 11, "trials": 100,
                       "sign_changing_trials": 1000}),
    ("A8_thm1_exterior", {"experiment": "thm1-exterior", "ic": "gaussian", "amplitude": 0.01, "a": 1.0,
                          "b": 1.0, "half_length": 200.0, "n_points": 4096, "t_final": 60.0}),
    ("A9_thm2_soliton", {"experiment": "thm2-interior", "ic": "soliton", "c": 2.0, "half_length": 100.0,
                         "n_points": 2048, "t_final": 30.0}),
    ("A9_thm2_gaussian", {"experiment": "thm2-interior", "ic": "gaussian", "amplitude": 0.5,
                          "half_length": 200.0, "n_points": 4096, "t_final": 60.0}),
]


def thread_count():
    value = os.environ.get("GIB_LAB_THREADS")
    if value is None:
        return 1
    n = int(value)
    if n < 1:
        raise ValueError("GIB_LAB_THREADS must be a positive integer")
    return n


def suite_configs(output_dir):
    out = Path(output_dir)
    return [(name, from_dict({**doc, "output_path": str(out / f"{name}.csv")})) for name, doc in SUITE]


def run_suite(output_dir, threads=None):
    """Run every suite entry; returns ``(exit_code, {name: summary})``."""
    Path(output_dir).mkdir(parents=True, exist_ok=True)
    configs = suite_configs(output_dir)
    threads = thread_count() if threads is None else threads
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(lambda item: run_experiment(item[1]), configs))
    summaries = {name: summary for (name, _), (_, summary) in zip(configs, results)}
    overview = {
        "experiments": [
            {"name": name, "experiment": s["experiment"], "status": s["status"], "failures": s["failures"]}
            for name, s in summaries.items()
        ]
    }
    overview["status"] = "pass" if all(s["status"] == "pass" for s in summaries.values()) else "fail"
    (Path(output_dir) / "suite.json").write_text(json.dumps(overview, indent=2) + "\n")
    return (0 if overview["status"] == "pass" else 1), summaries
