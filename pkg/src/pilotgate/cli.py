"""Command-line front end: single-scenario optimization, the two standard
sweeps, and Monte Carlo validation.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

import argparse
import math
import sys

from .channel import PilotPolicy
from .experiments import (
    Scenario,
    ScenarioError,
    load_scenario,
    run_single,
    run_vary_probability,
    run_vary_ratio,
    write_rows,
)
from .roots import NumericalError
from .simulate import SimConfig

__all__ = ["main"]

_DEFAULT_RATIO_GRID = "1.25,1.5,2,3,5,8,12,20"
_DEFAULT_PROB_GRID = "0.05,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,0.95"


def _parse_grid(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ScenarioError(f"bad --grid value: {exc}") from None


def _parse_threshold(text: str) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise ScenarioError(f"bad --threshold value: {exc}") from None
    if math.isnan(value) or value == math.inf:
        raise ScenarioError("--threshold must be finite or -inf")
    return value


def _scenario_from_args(args) -> Scenario:
    scenario = load_scenario(args.scenario)
    k = args.k if args.k is not None else scenario.k
    epsilon = args.epsilon if args.epsilon is not None else scenario.epsilon
    return Scenario(
        channel=scenario.channel,
        k=k,
        epsilon=epsilon,
        sweep=scenario.sweep,
        sweep_grid=scenario.sweep_grid,
    )


def _cmd_optimize(args) -> int:
    scenario = _scenario_from_args(args)
    report = run_single(scenario)
    print(report.as_text())
    if args.out:
        from .experiments import SweepRow

        ratio = scenario.channel.snr_good / scenario.channel.snr_bad
        row = SweepRow(
            sweep_value=ratio,
            n_star=report.n_star,
            t_star=report.t_star,
            tau_star=report.tau_star,
            tau_ref=report.tau_ref,
            reduction=report.reduction,
            reduction_fraction=report.reduction / report.tau_ref,
            n_hat=report.stationary.n_hat,
            t_hat=report.stationary.t_hat,
        )
        write_rows([row], args.out)
    return 0


def _report_rejections(result) -> None:
    for value, reason in result.rejected:
        print(f"skipped grid value {value}: {reason}", file=sys.stderr)


def _cmd_sweep_ratio(args) -> int:
    grid = _parse_grid(args.grid)
    result = run_vary_ratio(grid, k=args.k if args.k is not None else 128,
                            epsilon=args.epsilon if args.epsilon is not None else 1e-2)
    _report_rejections(result)
    if args.out:
        write_rows(result.rows, args.out)
    else:
        write_rows(result.rows, sys.stdout)
    return 0


def _cmd_sweep_prob(args) -> int:
    grid = _parse_grid(args.grid)
    result = run_vary_probability(
        grid,
        k=args.k if args.k is not None else 128,
        epsilon=args.epsilon if args.epsilon is not None else 1e-2,
        snr_good=args.snr_good,
        snr_bad=args.snr_bad,
    )
    _report_rejections(result)
    if args.out:
        write_rows(result.rows, args.out)
    else:
        write_rows(result.rows, sys.stdout)
    return 0


def _cmd_simulate(args) -> int:
    scenario = _scenario_from_args(args)
    policy = None
    if args.n is not None or args.threshold is not None:
        if args.n is None:
            raise ScenarioError("--threshold override also needs --n")
        threshold = _parse_threshold(args.threshold) if args.threshold is not None else None
        if threshold is None:
            raise ScenarioError("--n override also needs --threshold (use -inf for always-transmit)")
        policy = PilotPolicy(n=float(args.n), threshold=threshold)
    cfg = SimConfig(trials=args.trials, seed=args.seed, data_model=args.data_model)
    report = run_single(scenario, policy=policy, sim=cfg)
    print(report.as_text())
    return 0


def _add_common(p: argparse.ArgumentParser, scenario_required: bool) -> None:
    p.add_argument("--scenario", required=scenario_required, help="scenario file path")
    p.add_argument("--k", type=int, default=None, help="message length in bits (default 128)")
    p.add_argument("--epsilon", type=float, default=None,
                   help="series truncation budget (default 1e-2)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pilotgate",
        description="Optimal pilot length and go/no-go threshold for two-state "
                    "block-fading channels",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimize", help="optimize a single scenario and print a report")
    _add_common(p, scenario_required=True)
    p.add_argument("--out", help="also write the result as a one-row CSV")
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("sweep-ratio", help="sweep the SNR ratio at p_good = 0.5, mean SNR 1")
    _add_common(p, scenario_required=False)
    p.add_argument("--grid", default=_DEFAULT_RATIO_GRID, help="comma list of SNR ratios")
    p.add_argument("--out", help="output CSV path (default: stdout)")
    p.set_defaults(func=_cmd_sweep_ratio)

    p = sub.add_parser("sweep-prob", help="sweep p_good at fixed per-state SNRs")
    _add_common(p, scenario_required=False)
    p.add_argument("--grid", default=_DEFAULT_PROB_GRID, help="comma list of p_good values")
    p.add_argument("--snr-good", type=float, default=1.5, help="good-state SNR (default 1.5)")
    p.add_argument("--snr-bad", type=float, default=0.5, help="bad-state SNR (default 0.5)")
    p.add_argument("--out", help="output CSV path (default: stdout)")
    p.set_defaults(func=_cmd_sweep_prob)

    p = sub.add_parser("simulate", help="Monte Carlo check of a scenario's policy")
    _add_common(p, scenario_required=True)
    p.add_argument("--trials", type=int, default=100_000, help="number of packets")
    p.add_argument("--seed", type=int, default=1, help="RNG seed (unsigned 64-bit)")
    p.add_argument("--n", type=int, default=None, help="override: pilot length")
    p.add_argument("--threshold", default=None,
                   help="override: go/no-go threshold (write --threshold=-inf "
                        "for always-transmit)")
    p.add_argument("--data-model", choices=("expected-cost", "sampled-stopping-time"),
                   default="expected-cost", help="data cost model")
    p.set_defaults(func=_cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
