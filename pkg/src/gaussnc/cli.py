"""Command-line front end.

Exit codes: 0 success, 1 conservation audit failed, 2 unparsable input or bad
parameters, 3 unphysical state, 4 mode-count mismatch, 5 output not writable.
"""

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .covariance import (
    MomentMatrices,
    make_state,
    purity_check,
    state_from_json,
    state_to_json,
    validate_physical,
)
from .errors import (
    DimensionMismatchError,
    MalformedStateError,
    ParameterRangeError,
    UnphysicalStateError,
)
from .invariants import global_invariant, report
from .passive import apply, haar_random, network_from_json
from .scenarios import DEFAULT_BP_GRID, DEFAULT_T_GRID, SCENARIOS, grid, sweep

EXIT_OK, EXIT_AUDIT_FAILED, EXIT_PARSE, EXIT_UNPHYSICAL, EXIT_DIMENSION, EXIT_WRITE = range(6)


class CLIError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class AuditConfig:
    trials: int
    seed: int
    state_source: str
    tol: float = 1e-9

    def __post_init__(self):
        if self.trials < 1:
            raise ParameterRangeError("trials must be >= 1")
        if not self.tol > 0:
            raise ParameterRangeError("tol must be > 0")


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise MalformedStateError(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise MalformedStateError(f"cannot read {path}: {exc.strerror}") from exc


def load_state(source: str) -> MomentMatrices:
    """A state from a JSON file path, or from an inline constructor such as ``twin_beam(1)``."""
    if os.path.exists(source):
        state = state_from_json(_read_json(source))
    elif "(" in source:
        state = make_state(source)
    else:
        raise MalformedStateError(f"{source!r} is neither a state file nor a constructor spec")
    verdict = validate_physical(state)
    if not verdict.physical:
        raise UnphysicalStateError(
            f"state is unphysical: min_eig={verdict.min_eig:.6e}", min_eig=verdict.min_eig)
    return state


def _clean(obj):
    if isinstance(obj, float):
        return float(f"{obj:.12g}") + 0.0
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _emit(obj, pretty, out=None):
    out = out or sys.stdout
    obj = _clean(obj)
    if not pretty:
        out.write(json.dumps(obj) + "\n")
        return
    width = max(len(k) for k in obj)
    for key, value in obj.items():
        out.write(f"{key:<{width}}  {value}\n")


def cmd_invariants(args):
    state = load_state(args.state)
    if args.network:
        state = apply(network_from_json(_read_json(args.network), state.n), state)
    _emit(report(state).to_dict(), args.pretty)
    return EXIT_OK


def cmd_apply(args):
    state = load_state(args.state)
    state = apply(network_from_json(_read_json(args.network), state.n), state)
    sys.stdout.write(json.dumps(_clean(state_to_json(state))) + "\n")
    return EXIT_OK


def run_audit(config: AuditConfig) -> dict:
    """Apply ``trials`` Haar-random unitaries and record the spread of the global invariant.

    Two-mode states and pure three-mode states must conserve it within
    ``tol`` (relative to ``max(1, |GNI|)``).  Mixed three-mode states are not
    expected to; for those the observed deviation is reported instead.
    """
    state = load_state(config.state_source)
    if state.n not in (2, 3):
        raise DimensionMismatchError(f"audits need a 2- or 3-mode state, got {state.n} modes")
    pure = purity_check(state)
    g0 = global_invariant(state)
    rng = np.random.default_rng(config.seed)
    max_abs = 0.0
    for _ in range(config.trials):
        g = global_invariant(apply(haar_random(state.n, rng), state))
        max_abs = max(max_abs, abs(g - g0))
    max_rel = max_abs / max(1.0, abs(g0))
    expect_invariant = state.n == 2 or pure
    summary = {
        "modes": state.n,
        "pure": pure,
        "trials": config.trials,
        "seed": config.seed,
        "tol": config.tol,
        "check": "conservation" if expect_invariant else "non-invariance",
        "gni_initial": g0,
        "max_abs_deviation": max_abs,
        "max_rel_deviation": max_rel,
    }
    if expect_invariant:
        summary["passed"] = max_rel <= config.tol
    else:
        summary["invariance_violated"] = max_rel > config.tol
    return summary


def cmd_audit(args):
    config = AuditConfig(trials=args.trials, seed=args.seed, state_source=args.state, tol=args.tol)
    summary = run_audit(config)
    _emit(summary, args.pretty)
    return EXIT_AUDIT_FAILED if summary.get("passed") is False else EXIT_OK


def _grid_arg(text):
    try:
        parts = [float(p) for p in text.split(":")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be a:b:step, got {text!r}")
    if len(parts) == 1:
        parts = [parts[0], parts[0], 1.0]
    if len(parts) != 3 or not all(math.isfinite(p) for p in parts):
        raise argparse.ArgumentTypeError(f"grid must be a:b:step, got {text!r}")
    return tuple(parts)


def write_atomic(path, text):
    """Write via a temporary file in the target directory and rename into place."""
    path = Path(path)
    try:
        fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    except OSError as exc:
        raise CLIError(f"cannot write {path}: {exc.strerror}", EXIT_WRITE) from exc
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise CLIError(f"cannot write {path}: {exc.strerror}", EXIT_WRITE) from exc


def cmd_sweep(args):
    try:
        table = sweep(args.scenario, grid(*args.bp_grid), grid(*args.t_grid))
    except ValueError as exc:
        raise CLIError(str(exc), EXIT_PARSE) from exc
    text = table.to_csv(positive_only=args.positive_only)
    if args.out is None:
        sys.stdout.write(text)
    else:
        write_atomic(args.out, text)
        print(f"wrote {len(table)} rows to {args.out}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gaussnc",
        description="Nonclassicality invariants of two- and three-mode Gaussian states.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", help="print the invariant report of a state")
    p.add_argument("--state", required=True,
                   help="state JSON file, or a constructor such as 'twin_beam(1)'")
    p.add_argument("--network", help="network JSON file applied before evaluation")
    p.add_argument("--pretty", action="store_true", help="aligned text instead of JSON")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("apply", help="apply a passive network and print the output state")
    p.add_argument("--state", required=True)
    p.add_argument("--network", required=True)
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("audit", help="randomized conservation audit under Haar unitaries")
    p.add_argument("--state", required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("sweep", help="write a scenario sweep table as CSV")
    p.add_argument("--scenario", required=True, choices=sorted(SCENARIOS))
    p.add_argument("--bp-grid", type=_grid_arg, default=DEFAULT_BP_GRID, metavar="A:B:STEP")
    p.add_argument("--t-grid", type=_grid_arg, default=DEFAULT_T_GRID, metavar="A:B:STEP")
    p.add_argument("--positive-only", action="store_true",
                   help="leave negative values empty, as in the surface plots")
    p.add_argument("--out", help="output CSV path (default: standard output)")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except UnphysicalStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNPHYSICAL
    except DimensionMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except (MalformedStateError, ParameterRangeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
