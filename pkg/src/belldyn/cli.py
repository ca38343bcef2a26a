"""Command-line front end: trajectories, figure pipelines, oracle
certification and non-Markovianity diagnostics, emitting CSV or JSON.

Exit codes: 0 ok, 2 bad input, 3 unsupported analytic path (initial state
not Bell-diagonal), 4 certification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from .correlations import (
    binary_entropy,
    c_vector_of_spectrum,
    closest_classical_bd,
    quantifier_report,
)
from .dynamics import (
    BELL_RESIDUAL_TOL,
    bell_spectrum_of,
    bell_spectrum_to_density,
    evolve_bell_spectrum,
    mixing_fraction,
    validate_spectrum,
)
from .linalg import check_density, von_neumann_entropy
from .nonmarkov import composition_violation, nonmarkovianity_measure
from .oracle import (
    SearchConfig,
    oracle_closest_classical,
    oracle_closest_product,
    oracle_closest_separable_bd,
)

DEFAULT_INITIAL = "0.9,0.1,0,0"
VERIFY_TOL_BITS = 1e-3

#: CLI names for the accumulation conventions of the non-Markovianity
#: quantifier; "rhp" selects increase counting.
CONVENTION_BY_FLAG = {"rhp": "increase_counting", "literal": "literal"}


class InputError(Exception):
    """Invalid configuration or unreadable input (exit code 2)."""


class AnalyticPathError(Exception):
    """Initial state outside the Bell-diagonal fast path (exit code 3)."""


@dataclass(frozen=True)
class RunConfig:
    g: float = 1.0
    omega: float = 0.0
    tau_max: float = math.pi
    steps: int = 2000
    convention: str = "increase_counting"
    output: str = "-"
    format: str = "csv"
    seed: int = 0

    def __post_init__(self):
        if self.g <= 0:
            raise InputError("--g must be positive")
        if self.tau_max <= 0:
            raise InputError("--tau-max must be positive")
        if self.steps < 2:
            raise InputError("--steps must be at least 2")
        if self.format not in ("csv", "json"):
            raise InputError("--format must be csv or json")

    def grid(self) -> np.ndarray:
        # steps counts intervals, so the grid has steps+1 points and the
        # defaults land exactly on tau = pi/4, pi/2, ...
        return np.linspace(0.0, self.tau_max, self.steps + 1)


def _config_from_args(args) -> RunConfig:
    return RunConfig(
        g=args.g,
        omega=args.omega,
        tau_max=args.tau_max,
        steps=args.steps,
        convention=CONVENTION_BY_FLAG[args.convention],
        output=args.output,
        format=args.format,
        seed=args.seed,
    )


# ---------------------------------------------------------------------------
# initial-state parsing

def _initial_from_dict(obj):
    if not isinstance(obj, dict):
        raise InputError("initial-state JSON must be an object")
    if "bell" in obj:
        vals = obj["bell"]
        if not isinstance(vals, (list, tuple)) or len(vals) != 4:
            raise InputError('"bell" must be a list of 4 coefficients')
        return _normalized_spectrum([float(v) for v in vals])
    if "matrix" in obj:
        rows = obj["matrix"]
        try:
            m = np.array(
                [[complex(re, im) for re, im in row] for row in rows], dtype=complex
            )
        except (TypeError, ValueError) as exc:
            raise InputError(f'bad "matrix" entry: {exc}') from exc
        if m.shape != (4, 4):
            raise InputError('"matrix" must be 4x4 with [re, im] entries')
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > 1e-9:
            raise InputError(f"initial matrix trace is {tr!r}, expected 1")
        m = m / np.trace(m)
        try:
            return check_density(m, name="initial state")
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    raise InputError('initial-state JSON needs a "bell" or "matrix" key')


def _normalized_spectrum(vals):
    a = np.asarray(vals, dtype=float)
    total = float(a.sum())
    if abs(total - 1.0) > 1e-9:
        raise InputError(f"initial spectrum sums to {total!r}, expected 1")
    try:
        return validate_spectrum(a / total)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def load_initial(arg: str | None):
    """Parse --initial: a JSON file path, an inline JSON object, or four
    comma-separated Bell coefficients. Returns a spectrum (4,) or a 4x4
    density matrix."""
    text = (arg if arg is not None else DEFAULT_INITIAL).strip()
    if text.startswith("{"):
        try:
            return _initial_from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise InputError(f"bad initial-state JSON: {exc}") from exc
    if os.path.exists(text):
        try:
            with open(text, encoding="utf-8") as fh:
                obj = json.load(fh)
        except OSError as exc:
            raise InputError(f"cannot read initial-state file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise InputError(f"bad initial-state file {text}: {exc}") from exc
        return _initial_from_dict(obj)
    if "," in text:
        try:
            vals = [float(x) for x in text.split(",")]
        except ValueError as exc:
            raise InputError(f"bad inline spectrum {text!r}: {exc}") from exc
        if len(vals) != 4:
            raise InputError("inline spectrum needs 4 comma-separated values")
        return _normalized_spectrum(vals)
    raise InputError(f"initial-state file not found: {text}")


def _spectrum_of_initial(initial) -> np.ndarray:
    if initial.ndim == 1:
        return initial
    lam, residual = bell_spectrum_of(initial)
    if residual >= BELL_RESIDUAL_TOL:
        raise AnalyticPathError(
            f"initial state is not Bell-diagonal (residual {residual:.3e}); "
            "this pipeline is analytic-only"
        )
    lam = np.clip(lam, 0.0, None)
    return validate_spectrum(lam / lam.sum())


# ---------------------------------------------------------------------------
# output

def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _write_table(columns: dict, cfg: RunConfig) -> None:
    names = list(columns)
    if cfg.format == "csv":
        lines = [",".join(names)]
        n = len(columns[names[0]])
        for k in range(n):
            lines.append(",".join(_fmt(columns[name][k]) for name in names))
        _write_text(cfg.output, "\n".join(lines) + "\n")
    else:
        data = {name: [float(_fmt(v)) for v in vals] for name, vals in columns.items()}
        _write_text(cfg.output, json.dumps(data) + "\n")


# ---------------------------------------------------------------------------
# commands

def _trajectory_columns(lam0: np.ndarray, cfg: RunConfig) -> dict:
    grid = cfg.grid()
    cols: dict = {"tau": list(grid)}
    if cfg.g != 1.0:
        cols["t"] = [tau / cfg.g for tau in grid]
    for name in ("f", "lambda_1p", "lambda_1m", "lambda_2p", "lambda_2m",
                 "c1", "c2", "c3", "T", "D", "C", "E"):
        cols[name] = []
    for tau in grid:
        lam = evolve_bell_spectrum(lam0, tau)
        c = c_vector_of_spectrum(lam)
        rep = quantifier_report(bell_spectrum_to_density(lam))
        cols["f"].append(mixing_fraction(tau))
        for i, name in enumerate(("lambda_1p", "lambda_1m", "lambda_2p", "lambda_2m")):
            cols[name].append(float(lam[i]))
        for i, name in enumerate(("c1", "c2", "c3")):
            cols[name].append(float(c[i]))
        cols["T"].append(rep.T)
        cols["D"].append(rep.D)
        cols["C"].append(rep.C)
        cols["E"].append(rep.E)
    return cols


def cmd_evolve(args) -> int:
    cfg = _config_from_args(args)
    lam0 = _spectrum_of_initial(load_initial(args.initial))
    _write_table(_trajectory_columns(lam0, cfg), cfg)
    return 0


def cmd_figure2(args) -> int:
    cfg = _config_from_args(args)
    lam0 = _spectrum_of_initial(load_initial(DEFAULT_INITIAL))
    _write_table(_trajectory_columns(lam0, cfg), cfg)
    return 0


def cmd_figure3(args) -> int:
    cfg = _config_from_args(args)
    lam0 = _spectrum_of_initial(load_initial(DEFAULT_INITIAL))
    cols = _trajectory_columns(lam0, cfg)
    trace = nonmarkovianity_measure(cfg.grid(), cfg.convention)
    cols["E_anc"] = list(trace.e_anc)
    cols["I_E"] = list(trace.i_e)
    _write_table(cols, cfg)
    return 0


def cmd_nonmarkov(args) -> int:
    cfg = _config_from_args(args)
    trace = nonmarkovianity_measure(cfg.grid(), cfg.convention)
    cols = {"tau": list(trace.tau_grid), "E_anc": list(trace.e_anc), "I_E": list(trace.i_e)}
    _write_table(cols, cfg)
    return 0


def cmd_composition(args) -> int:
    cfg = _config_from_args(args)
    if args.tau1 >= args.tau2 or args.tau1 < 0:
        raise InputError("need 0 <= tau1 < tau2")
    lam0 = _spectrum_of_initial(load_initial(args.initial))
    direct = evolve_bell_spectrum(lam0, args.tau2)
    restarted = evolve_bell_spectrum(evolve_bell_spectrum(lam0, args.tau1), args.tau2 - args.tau1)
    dist = composition_violation(lam0, args.tau1, args.tau2)
    report = {
        "tau1": args.tau1,
        "tau2": args.tau2,
        "initial": [float(_fmt(v)) for v in lam0],
        "direct": [float(_fmt(v)) for v in direct],
        "restarted": [float(_fmt(v)) for v in restarted],
        "trace_distance": float(_fmt(dist)),
    }
    _write_text(cfg.output, json.dumps(report) + "\n")
    return 0


def _verify_state(lam: np.ndarray, search: SearchConfig) -> dict:
    rho = bell_spectrum_to_density(lam)
    s_rho = von_neumann_entropy(rho)
    chi = closest_classical_bd(lam)
    lam_max = float(lam.max())
    # 1 - h(lam_max) is positive on both sides of 1/2; it is the
    # entanglement only in the entangled regime lam_max > 1/2.
    e_analytic = 1.0 - binary_entropy(lam_max) if lam_max > 0.5 + 1e-12 else 0.0
    analytic = {
        "classical": von_neumann_entropy(chi) - s_rho,
        "separable": e_analytic,
        "product": 2.0 - s_rho,
    }
    found = {
        "classical": oracle_closest_classical(rho, search).value,
        "separable": oracle_closest_separable_bd(lam, search).value,
        "product": oracle_closest_product(rho, search).value,
    }
    return {
        family: {
            "analytic_bits": analytic[family],
            "oracle_bits": found[family],
            "discrepancy_bits": abs(found[family] - analytic[family]),
        }
        for family in analytic
    }


def cmd_verify(args) -> int:
    cfg = _config_from_args(args)
    search = SearchConfig(seed=cfg.seed)
    if args.initial is not None:
        states = [_spectrum_of_initial(load_initial(args.initial))]
    else:
        if args.n < 1:
            raise InputError("--n must be at least 1")
        rng = np.random.default_rng(cfg.seed)
        states = [validate_spectrum(rng.dirichlet(np.ones(4))) for _ in range(args.n)]

    families = {
        name: {"max_discrepancy_bits": 0.0, "analytic_bits": 0.0,
               "oracle_bits": 0.0, "worst_state": None}
        for name in ("classical", "separable", "product")
    }
    for lam in states:
        per_state = _verify_state(lam, search)
        for name, entry in per_state.items():
            fam = families[name]
            if entry["discrepancy_bits"] >= fam["max_discrepancy_bits"]:
                fam["max_discrepancy_bits"] = entry["discrepancy_bits"]
                fam["analytic_bits"] = entry["analytic_bits"]
                fam["oracle_bits"] = entry["oracle_bits"]
                fam["worst_state"] = [float(v) for v in lam]

    passed = all(f["max_discrepancy_bits"] < VERIFY_TOL_BITS for f in families.values())
    report = {
        "n": len(states),
        "seed": cfg.seed,
        "tolerance_bits": VERIFY_TOL_BITS,
        "families": families,
        "passed": passed,
    }
    _write_text(cfg.output, json.dumps(report) + "\n")
    if not passed:
        for name, fam in families.items():
            if fam["max_discrepancy_bits"] >= VERIFY_TOL_BITS:
                print(
                    f"certification failed for the {name} family: "
                    f"discrepancy {fam['max_discrepancy_bits']:.3e} bits "
                    f"on state {fam['worst_state']}",
                    file=sys.stderr,
                )
        return 4
    return 0


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--g", type=float, default=1.0,
                        help="field-qubit coupling rate (default 1; time is reported "
                             "as the dimensionless tau = g*t, and an absolute-time "
                             "column t is added only when g != 1)")
    common.add_argument("--omega", type=float, default=0.0,
                        help="qubit frequency, recorded for documentation only: the "
                             "dynamics is taken in the rotating frame at resonance "
                             "and does not depend on it")
    common.add_argument("--tau-max", type=float, default=math.pi,
                        help="end of the tau grid (default pi)")
    common.add_argument("--steps", type=int, default=2000,
                        help="number of grid intervals; the grid has steps+1 points "
                             "(default 2000)")
    common.add_argument("--convention", choices=sorted(CONVENTION_BY_FLAG),
                        default="rhp",
                        help="accumulation convention for the non-Markovianity "
                             "quantifier: rhp counts entanglement increases only, "
                             "literal applies the integral-minus-variation formula "
                             "verbatim (default rhp)")
    common.add_argument("--output", default="-",
                        help="output path, '-' for stdout (default)")
    common.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="table format (default csv)")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for random sampling and oracle restarts")

    initial_opt = argparse.ArgumentParser(add_help=False)
    initial_opt.add_argument("--initial", default=None,
                             help="initial state: JSON file or inline JSON with a "
                                  '"bell" spectrum or a 4x4 "matrix" of [re, im] '
                                  "pairs, or four comma-separated Bell coefficients "
                                  f"(default {DEFAULT_INITIAL})")

    parser = argparse.ArgumentParser(
        prog="belldyn",
        description="Correlation dynamics of two qubits under local classical "
                    "random external fields.",
        epilog="exit codes: 0 ok, 2 bad input, 3 initial state not Bell-diagonal, "
               "4 certification failure",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", parents=[common, initial_opt],
                       help="trajectory of the Bell spectrum and all quantifiers")
    p.set_defaults(func=cmd_evolve)
    p = sub.add_parser("figure2", parents=[common],
                       help="frozen/oscillating correlation trajectory for the "
                            "(0.9, 0.1, 0, 0) state")
    p.set_defaults(func=cmd_figure2)
    p = sub.add_parser("figure3", parents=[common],
                       help="same trajectory plus ancilla entanglement and the "
                            "non-Markovianity quantifier")
    p.set_defaults(func=cmd_figure3)
    p = sub.add_parser("verify", parents=[common, initial_opt],
                       help="certify the analytic closest states against the "
                            "brute-force oracles")
    p.add_argument("--n", type=int, default=100,
                   help="number of seeded random Bell-diagonal states (default 100; "
                        "ignored when --initial is given)")
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("nonmarkov", parents=[common],
                       help="ancilla entanglement and accumulated non-Markovianity")
    p.set_defaults(func=cmd_nonmarkov)
    p = sub.add_parser("composition", parents=[common, initial_opt],
                       help="two-step composition-law violation witness")
    p.add_argument("tau1", type=float)
    p.add_argument("tau2", type=float)
    p.set_defaults(func=cmd_composition)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AnalyticPathError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
