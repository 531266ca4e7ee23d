"""Command-line interface: figure sweeps, verification, Monte Carlo runs.

Angles are accepted in degrees on the command line and converted to radians
internally.  CSV output uses the fixed schema ``x,y`` or ``x,y,series`` with
12 significant digits; JSON output is key-sorted so identical invocations
produce identical bytes.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import binary, binary_attacks as ba, imperfections as imp
from . import ternary_attacks as ta
from .montecarlo import EVE_STRATEGIES, PROTOCOLS, RunConfig, run
from .verification import run_suite

DEG = np.pi / 180.0


def _fmt(x: float) -> str:
    return f"{float(x):.12g}"


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def _series_sweep(xs, series: dict) -> list[tuple]:
    rows = []
    for label, fn in series.items():
        for x in xs:
            rows.append((x, fn(x), label))
    return rows


#: target -> (default range in native units, x is an angle in degrees?, builder)
def _sweep_rows(target: str, points: int, lo: float, hi: float) -> tuple[list, bool]:
    xs = np.linspace(lo, hi, points)
    if target == "fig3":
        return [(x, ba.p_correct_two_state(x * DEG)) for x in xs], True
    if target == "fig4":
        return [(x, ba.p_correct_random_pol(x * DEG)) for x in xs], True
    if target == "fig6":
        return _series_sweep(xs, {
            "k=0": lambda g: ba.b_pole(g * DEG, 0)[1],
            "k=+-1": lambda g: ba.b_pole(g * DEG, 1)[1],
        }), True
    if target == "fig7":
        return _series_sweep(xs, {
            "B_pole": lambda g: ba.b_pole(g * DEG, 0)[1],
            "E_ff": lambda g: binary.efficiency(g * DEG, g * DEG),
        }), True
    if target == "fig8":
        return _series_sweep(xs, {
            "gamma_A=60": lambda a: ba.b_discrimination(a * DEG, np.pi / 3),
            "gamma_A=90": lambda a: ba.b_discrimination(a * DEG, np.pi / 2),
            "gamma_A=120": lambda a: ba.b_discrimination(a * DEG, 2 * np.pi / 3),
        }), True
    if target == "fig9":
        return [(r, ta.pattern_probabilities(ta.SymmetricPovm(r)).q1) for r in xs], False
    if target == "fig10":
        return [(r, ta.conditional_success("Q2", ta.SymmetricPovm(r))) for r in xs], False
    if target == "fig11":
        return [(r, ta.conditional_success("Q3", ta.SymmetricPovm(r))) for r in xs], False
    if target == "fig12":
        return [(r, ta.pattern_probabilities(ta.SymmetricPovm(r)).q3) for r in xs], False
    if target == "table_bounds":
        bounds = [
            ("binary_bound", ba.BINARY_BOUND),
            ("helstrom_sqrt2", ba.helstrom(1 / np.sqrt(2))),
            ("single_photon_trine", 2 / 3),
            ("ternary_bound", ta.total_success(ta.SymmetricPovm(0.0))),
            ("ternary_oracle", ta.oracle_map_success()),
            ("strategy_a", ta.strategy_a_success()),
            ("naive_composite", ta.naive_composite_bound().value),
            ("efficiency_binary", binary.efficiency()),
        ]
        return [(float(i), v, name) for i, (name, v) in enumerate(bounds)], False
    raise ValueError(f"unknown sweep target {target!r}")


#: Default sweep ranges: degrees for angle targets, POVM ratio otherwise.
DEFAULT_RANGES = {
    "fig3": (0.0, 180.0), "fig4": (0.0, 90.0),
    "fig6": (-90.0, 90.0), "fig7": (-90.0, 90.0), "fig8": (0.0, 180.0),
    "fig9": (-3.0, 3.0), "fig10": (-3.0, 3.0),
    "fig11": (-3.0, 3.0), "fig12": (-3.0, 3.0),
    "table_bounds": (0.0, 0.0),
}


def cmd_sweep(args: argparse.Namespace) -> int:
    lo, hi = args.range if args.range else DEFAULT_RANGES[args.target]
    if args.target != "table_bounds":
        if args.points < 2:
            print("error: --points must be >= 2", file=sys.stderr)
            return 2
        if hi <= lo:
            print("error: empty sweep range", file=sys.stderr)
            return 2
    try:
        rows, _deg = _sweep_rows(args.target, args.points, lo, hi)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    has_series = rows and len(rows[0]) == 3
    out = Path(args.output)
    try:
        with out.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "y", "series"] if has_series else ["x", "y"])
            for row in rows:
                writer.writerow([_fmt(row[0]), _fmt(row[1]), *row[2:]])
    except OSError as exc:
        print(f"error: cannot write {out}: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {len(rows)} rows to {out}")
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def cmd_verify(args: argparse.Namespace) -> int:
    checks = run_suite(args.suite)
    report = {
        "suite": args.suite,
        "checks": checks,
        "passed": sum(1 for c in checks if c["pass"]),
        "failed": sum(1 for c in checks if not c["pass"]),
    }
    text = json.dumps(report, sort_keys=True, indent=2)
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return 0 if report["failed"] == 0 else 1


# ---------------------------------------------------------------------------
# mc
# ---------------------------------------------------------------------------

def _load_config_file(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def cmd_mc(args: argparse.Namespace) -> int:
    values = _load_config_file(args.config) if args.config else {}
    for key in ("protocol", "trials", "seed", "eve"):
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    values.setdefault("eve", "none")
    imperfection_values = values.pop("imperfections", None)
    try:
        imperfection_params = (imp.ImperfectionParams(**imperfection_values)
                               if imperfection_values else None)
        config = RunConfig(
            protocol=values["protocol"],
            trials=int(values["trials"]),
            seed=int(values["seed"]),
            eve=values["eve"],
            imperfections=imperfection_params,
        )
    except (KeyError, TypeError, ValueError) as exc:
        print(f"error: invalid Monte Carlo config: {exc}", file=sys.stderr)
        return 2
    stats = run(config)
    text = stats.to_json()
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return 0


# ---------------------------------------------------------------------------
# imperfect
# ---------------------------------------------------------------------------

IMPERFECT_SWEEPABLE = ("gamma", "sigma", "dtheta")


def _imperfect_params(case: str, sweep: str, value: float, fixed: dict) -> imp.ImperfectionParams:
    gamma = value if sweep == "gamma" else fixed.get("gamma", 0.0)
    sigma = value if sweep == "sigma" else fixed.get("sigma", 0.0)
    dtheta = value if sweep == "dtheta" else fixed.get("dtheta", 0.0)
    base = np.pi / 4
    kwargs = dict(delta1=0.0, delta2=dtheta, sigma_u=sigma, sigma_l=sigma)
    if case == "both":
        kwargs.update(beta_B=base + gamma, mu_B=base + gamma)
    elif case == "alice_only":
        kwargs.update(beta_A=base + gamma, mu_A=base + gamma)
    elif case == "bob_only":
        kwargs.update(beta_B=base + gamma, mu_B=base + gamma)
    return imp.ImperfectionParams(**kwargs)


def cmd_imperfect(args: argparse.Namespace) -> int:
    values = _load_config_file(args.config) if args.config else {}
    case = args.case or values.get("case", "both")
    sweep = args.sweep or values.get("sweep", "gamma")
    points = args.points or values.get("points", 41)
    lo, hi = args.range if args.range else values.get("range", [0.0, 30.0])
    fixed = {k: values.get(k, 0.0) * DEG for k in ("gamma", "sigma", "dtheta")}
    if case not in imp.CASES or sweep not in IMPERFECT_SWEEPABLE:
        print("error: bad case or sweep parameter", file=sys.stderr)
        return 2
    rows = []
    for x_deg in np.linspace(lo, hi, int(points)):
        params = _imperfect_params(case, sweep, x_deg * DEG, fixed)
        closed = imp.detection_probs(case, params)[1]
        simulated = imp.simulate_imperfect(case, params)[1]
        rows.append((x_deg, closed, "closed_d2"))
        rows.append((x_deg, simulated, "simulated_d2"))
    out = Path(args.output)
    with out.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y", "series"])
        for x, y, label in rows:
            writer.writerow([_fmt(x), _fmt(y), label])
    print(f"wrote {len(rows)} rows to {out}")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qeraser",
        description="Quantum-eraser key distribution: sweeps, verification, Monte Carlo.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="emit a figure-reproduction CSV")
    p_sweep.add_argument("--target", required=True, choices=sorted(DEFAULT_RANGES))
    p_sweep.add_argument("--points", type=int, default=721)
    p_sweep.add_argument("--range", type=float, nargs=2, metavar=("LO", "HI"),
                         help="sweep range (degrees for angle targets, ratio otherwise)")
    p_sweep.add_argument("--output", "-o", required=True)
    p_sweep.set_defaults(func=cmd_sweep)

    p_verify = sub.add_parser("verify", help="run golden-value checks")
    p_verify.add_argument("--suite", default="all",
                          choices=["all", "binary", "ternary", "imperfections"])
    p_verify.add_argument("--output", "-o")
    p_verify.set_defaults(func=cmd_verify)

    def dashed(value: str) -> str:
        return value.replace("-", "_")

    p_mc = sub.add_parser("mc", help="run a Monte Carlo protocol simulation")
    p_mc.add_argument("--protocol", type=dashed, choices=list(PROTOCOLS))
    p_mc.add_argument("--trials", type=int)
    p_mc.add_argument("--seed", type=int)
    p_mc.add_argument("--eve", type=dashed, choices=list(EVE_STRATEGIES))
    p_mc.add_argument("--config", help="JSON config file; flags override its values")
    p_mc.add_argument("--output", "-o")
    p_mc.set_defaults(func=cmd_mc)

    p_imp = sub.add_parser("imperfect", help="closed-form vs simulated detector grid")
    p_imp.add_argument("--case", choices=list(imp.CASES))
    p_imp.add_argument("--sweep", choices=list(IMPERFECT_SWEEPABLE))
    p_imp.add_argument("--points", type=int)
    p_imp.add_argument("--range", type=float, nargs=2, metavar=("LO", "HI"),
                       help="sweep range in degrees")
    p_imp.add_argument("--config", help="JSON config file; flags override its values")
    p_imp.add_argument("--output", "-o", required=True)
    p_imp.set_defaults(func=cmd_imperfect)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
