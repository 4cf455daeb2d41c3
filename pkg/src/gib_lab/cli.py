"""``gib-lab`` command line: run, validate and suite."""
import argparse
import json
import logging
import sys

from .config import load_config
from .errors import ConfigError, GibLabError
from .experiments import run_experiment
from .suite import run_suite


def _print_criteria(name, summary):
    for c in summary["criteria"]:
        flag = "PASS" if c["pass"] else "FAIL"
        print(f"[{flag}] {name}: {c['name']} = {c['value']} (threshold {c['threshold']})")
    if "error" in summary:
        print(f"[ABORT] {name}: {summary['error']}")


def cmd_run(args):
    cfg = load_config(args.config)
    code, summary = run_experiment(cfg)
    _print_criteria(cfg.experiment, summary)
    print(f"wrote {cfg.csv_path} and {cfg.json_path}")
    return code


def cmd_validate(args):
    cfg = load_config(args.config)
    print(json.dumps(cfg.echo, indent=2))
    return 0


def cmd_suite(args):
    code, summaries = run_suite(args.output_dir, threads=args.threads)
    for name, summary in summaries.items():
        _print_criteria(name, summary)
    print("suite", "passed" if code == 0 else "FAILED")
    return code


def build_parser():
    ap = argparse.ArgumentParser(prog="gib-lab", description="Improved Boussinesq virial and decay experiments")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", help="run one experiment from a JSON config")
    p.add_argument("config")
    p.set_defaults(func=cmd_run)
    p = sub.add_parser("validate", help="check a config and print it with defaults filled")
    p.add_argument("config")
    p.set_defaults(func=cmd_validate)
    p = sub.add_parser("suite", help="run every acceptance experiment")
    p.add_argument("--output-dir", default="gib_lab_suite")
    p.add_argument("--threads", type=int, default=None, help="overrides GIB_LAB_THREADS")
    p.set_defaults(func=cmd_suite)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        where = f" (key: {exc.key})" if exc.key else ""
        print(f"config error{where}: {exc}", file=sys.stderr)
        return 2
    except (GibLabError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
