"""Command-line entry point: ``mrtrend {simulate,estimate,montecarlo,reproduce-table}``.

Exit status 0 on success, 1 on usage or input errors, 2 on numerical or
domain errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from .deriv import DerivRule
from .errors import NumericalError
from .estimate import estimate_path
from .harness import PRESET_IDS, ExperimentConfig, reproduce_table, run_experiment
from .sde import Gamma, SdeParams, SeedSpec, read_path_csv, simulate_path, write_path_csv
from .smooth import SmootherConfig
from .trend import FourierTrend, eval_trend, table1_trend

EXIT_USAGE = 1
EXIT_NUMERICAL = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fraction(text: str) -> float:
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _gamma(text: str) -> Gamma:
    try:
        return Gamma.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _open_out(target):
    return sys.stdout if target in (None, "-") else open(target, "w", newline="")


def _load_trend(path, period):
    if path is None:
        return table1_trend(period)
    return FourierTrend.from_json(Path(path).read_text(), period)


def cmd_simulate(args) -> int:
    period = args.trend_period if args.trend_period is not None else args.n_steps * args.dt
    trend = _load_trend(args.trend, period)
    params = SdeParams(args.alpha, args.sigma, args.gamma)
    x0 = eval_trend(trend, 0.0) if args.x0 is None else args.x0
    path = simulate_path(params, trend, x0, args.n_steps, args.dt,
                         SeedSpec(args.seed, args.path_index))
    fh = _open_out(args.output)
    try:
        write_path_csv(path, fh)
    finally:
        if fh is not sys.stdout:
            fh.close()
    if path.clamp_events:
        print(f"warning: {path.clamp_events} reflected steps", file=sys.stderr)
    return 0


def _smoother_from_args(args) -> SmootherConfig:
    if args.smoother in ("hp", "hodrick_prescott"):
        if args.lam is None:
            return SmootherConfig.default_for(args.gamma)
        return SmootherConfig.hp(args.lam)
    if args.smoother in ("ma", "moving_average"):
        return SmootherConfig("moving_average", window=args.window)
    return SmootherConfig("exponential", period=args.es_period)


def cmd_estimate(args) -> int:
    try:
        with open(args.input, newline="") as fh:
            path = read_path_csv(fh, gamma=args.gamma)
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc.strerror or exc}") from None
    report = estimate_path(path, args.gamma, _smoother_from_args(args), args.deriv,
                           args.l_sum, args.trend_period)
    fh = _open_out(args.output)
    try:
        fh.write(report.to_json() + "\n")
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def cmd_montecarlo(args) -> int:
    try:
        raw = json.loads(Path(args.config).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {args.config}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON in {args.config}: {exc}") from None
    for key in ("n_paths", "base_seed"):
        if getattr(args, key) is not None:
            raw[key] = getattr(args, key)
    try:
        cfg = ExperimentConfig.from_dict(raw)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"invalid config: {exc}") from None
    result = run_experiment(cfg, workers=args.workers, output_dir=args.output_dir)
    s = result.summaries
    print(f"wrote {result.output_dir}")
    print(f"alpha1 {s['alpha1'].mean:.6g}  alpha2 {s['alpha2'].mean:.6g}  "
          f"sigma1 {s['sigma1'].mean:.6g}  sigma2 {s['sigma2'].mean:.6g}  "
          f"({result.runtime_s:.1f}s)")
    return 0


def cmd_reproduce(args) -> int:
    report = reproduce_table(args.preset, n_paths=args.n_paths, workers=args.workers,
                             output_dir=args.output_dir, base_seed=args.seed)
    sys.stdout.write(report.render())
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mrtrend",
                description="Simulate and calibrate mean-reverting paths around a periodic trend.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("simulate", help="simulate one path to CSV (t,x)")
    s.add_argument("--alpha", type=_fraction, default=20.0)
    s.add_argument("--sigma", type=_fraction, default=1.1)
    s.add_argument("--gamma", type=_gamma, default=Gamma.ZERO)
    s.add_argument("--trend", help="JSON array of {k, a, phi}; default: the Table-1 trend")
    s.add_argument("--trend-period", type=_fraction,
                   help="trend period in time units (default: n_steps * dt)")
    s.add_argument("--x0", type=_fraction, help="initial level (default: mu(0))")
    s.add_argument("--n-steps", type=int, default=4000)
    s.add_argument("--dt", type=_fraction, default=1 / 250)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--path-index", type=int, default=0)
    s.add_argument("-o", "--output", help="output CSV (default stdout)")
    s.set_defaults(func=cmd_simulate)

    e = sub.add_parser("estimate", help="two-phase estimation of a path CSV -> JSON report")
    e.add_argument("--input", required=True)
    e.add_argument("--gamma", type=_gamma, required=True)
    e.add_argument("--smoother", choices=["hp", "ma", "es"], default="hp")
    e.add_argument("--lam", type=float, help="HP penalty (default 40000, 400000 for gamma>0)")
    e.add_argument("--window", type=int, default=100, help="moving-average window")
    e.add_argument("--es-period", type=int, default=1000, help="exponential smoothing period")
    e.add_argument("--deriv", choices=[r.value for r in DerivRule], default="three_point")
    e.add_argument("--l-sum", type=int, default=10)
    e.add_argument("--trend-period", type=_fraction,
                   help="period used to label harmonics (default: the sampled window)")
    e.add_argument("-o", "--output", help="output JSON (default stdout)")
    e.set_defaults(func=cmd_estimate)

    m = sub.add_parser("montecarlo", help="run a config-driven Monte Carlo experiment")
    m.add_argument("--config", required=True)
    m.add_argument("--output-dir")
    m.add_argument("--n-paths", type=int)
    m.add_argument("--base-seed", type=int)
    m.add_argument("--workers", type=int, default=1)
    m.set_defaults(func=cmd_montecarlo)

    r = sub.add_parser("reproduce-table", help="run a preset and compare with reference values")
    r.add_argument("preset", choices=PRESET_IDS)
    r.add_argument("--output-dir")
    r.add_argument("--n-paths", type=int)
    r.add_argument("--seed", type=int)
    r.add_argument("--workers", type=int, default=1)
    r.set_defaults(func=cmd_reproduce)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"mrtrend: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"mrtrend: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"mrtrend: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
