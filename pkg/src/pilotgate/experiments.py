"""Experiment harness: scenario files, parameter sweeps and CSV output.

Two standard sweeps are provided.  ``run_vary_ratio`` holds the states
equally probable and the average SNR at 1 while the good/bad SNR ratio
varies; ``run_vary_probability`` holds the SNRs at 1.5 / 0.5 while the
good-state probability varies.  Each grid point is optimized independently
and emitted as one CSV row with a fixed, bit-stable column layout.
"""

import io
import math
from dataclasses import dataclass

from .channel import ChannelSpec, PilotPolicy, TransmissionCost, expected_usage, reference_usage
from .optimize import StationaryPoint, optimize, solve_real_optimum
from .rcsp import RcspConfig, costs_for_channel, expected_data_usage
from .simulate import SimConfig, SimResult, simulate

__all__ = [
    "ScenarioError",
    "Scenario",
    "SweepRow",
    "SweepResult",
    "SingleReport",
    "parse_scenario",
    "load_scenario",
    "run_vary_ratio",
    "run_vary_probability",
    "run_single",
    "write_rows",
    "read_rows",
]

SCENARIO_HEADER = "pilotgate-scenario v1"
_SWEEP_KINDS = ("none", "snr-ratio", "probability")

CSV_COLUMNS = (
    "sweep_value",
    "n_star",
    "t_star",
    "tau_star",
    "tau_ref",
    "reduction",
    "reduction_fraction",
    "n_hat",
    "t_hat",
)


class ScenarioError(ValueError):
    """A scenario file or experiment configuration is invalid."""


@dataclass(frozen=True)
class Scenario:
    """A channel plus coding parameters, optionally carrying a sweep request."""

    channel: ChannelSpec
    k: int = 128
    epsilon: float = 1e-2
    sweep: str = "none"
    sweep_grid: tuple[float, ...] = ()

    def __post_init__(self):
        RcspConfig(self.k, self.epsilon)  # validates k and epsilon
        if self.sweep not in _SWEEP_KINDS:
            raise ScenarioError(f"sweep must be one of {_SWEEP_KINDS}, got {self.sweep!r}")
        if self.sweep != "none" and not self.sweep_grid:
            raise ScenarioError(f"sweep {self.sweep!r} requires a nonempty grid")
        if self.sweep == "snr-ratio" and any(r < 1.0 for r in self.sweep_grid):
            raise ScenarioError("snr-ratio grid values must be >= 1")
        if self.sweep == "probability" and any(not 0.0 < p < 1.0 for p in self.sweep_grid):
            raise ScenarioError("probability grid values must lie in (0, 1)")


@dataclass(frozen=True)
class SweepRow:
    """One optimized grid point of a sweep."""

    sweep_value: float
    n_star: int
    t_star: float
    tau_star: float
    tau_ref: float
    reduction: float
    reduction_fraction: float
    n_hat: float
    t_hat: float


@dataclass(frozen=True)
class SweepResult:
    """Computed rows plus any grid values rejected with their reason."""

    rows: tuple[SweepRow, ...]
    rejected: tuple[tuple[float, str], ...] = ()


@dataclass(frozen=True)
class SingleReport:
    """Full single-scenario report: costs, optimum and optional simulation check."""

    tau_good: float
    tau_bad: float
    potential: float
    stationary: StationaryPoint
    n_star: int
    t_star: float
    tau_star: float
    tau_ref: float
    reduction: float
    sim: SimResult | None = None
    sim_verdict: str | None = None

    def as_text(self) -> str:
        lines = [
            f"tau_good            {self.tau_good:.6f}",
            f"tau_bad             {self.tau_bad:.6f}",
            f"potential_reduction {self.potential:.6f}",
            f"n_hat               {self.stationary.n_hat:.6f}",
            f"t_hat               {self.stationary.t_hat:.6f}",
            f"n_star              {self.n_star}",
            f"t_star              {_format_value(self.t_star)}",
            f"tau_star            {self.tau_star:.6f}",
            f"tau_ref             {self.tau_ref:.6f}",
            f"reduction           {self.reduction:.6f}",
        ]
        if self.sim is not None:
            lines += [
                f"sim_mean_usage      {self.sim.mean_usage:.6f}",
                f"sim_std_error       {self.sim.std_error:.6f}",
                f"sim_attempts        {self.sim.attempts_per_packet:.6f}",
                f"sim_go_rate_good    {self.sim.go_rate_good:.6f}",
                f"sim_go_rate_bad     {self.sim.go_rate_bad:.6f}",
                f"sim_verdict         {self.sim_verdict}",
            ]
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# scenario files
# ---------------------------------------------------------------------------

_SCENARIO_KEYS = ("p_good", "snr_good", "snr_bad", "k", "epsilon", "sweep", "grid")


def parse_scenario(text: str, source: str = "<string>") -> Scenario:
    """Parse the flat key-value scenario format.

    The first non-blank line must be the versioned header; after that each
    line is ``key = value`` (``#`` starts a comment).  Unknown keys are
    errors: a typo in a physics parameter must not pass silently.
    """
    values: dict[str, str] = {}
    lines = text.splitlines()
    header_seen = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not header_seen:
            if line != SCENARIO_HEADER:
                raise ScenarioError(
                    f"{source}:{lineno}: expected header {SCENARIO_HEADER!r}, got {line!r}"
                )
            header_seen = True
            continue
        if "=" not in line:
            raise ScenarioError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _SCENARIO_KEYS:
            raise ScenarioError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ScenarioError(f"{source}:{lineno}: duplicate key {key!r}")
        values[key] = value
    if not header_seen:
        raise ScenarioError(f"{source}: missing header {SCENARIO_HEADER!r}")
    for required in ("p_good", "snr_good", "snr_bad"):
        if required not in values:
            raise ScenarioError(f"{source}: missing required key {required!r}")

    def as_float(key: str) -> float:
        try:
            return float(values[key])
        except ValueError as exc:
            raise ScenarioError(f"{source}: field {key!r}: {exc}") from None

    try:
        channel = ChannelSpec.from_snrs(
            as_float("p_good"), as_float("snr_good"), as_float("snr_bad")
        )
        grid: tuple[float, ...] = ()
        if values.get("grid", "").strip():
            try:
                grid = tuple(float(v) for v in values["grid"].split(","))
            except ValueError as exc:
                raise ScenarioError(f"{source}: field 'grid': {exc}") from None
        return Scenario(
            channel=channel,
            k=int(as_float("k")) if "k" in values else 128,
            epsilon=as_float("epsilon") if "epsilon" in values else 1e-2,
            sweep=values.get("sweep", "none"),
            sweep_grid=grid,
        )
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError(f"{source}: {exc}") from None


def load_scenario(path) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_scenario(fh.read(), source=str(path))


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------


def _solve_row(sweep_value: float, ch: ChannelSpec, cost: TransmissionCost) -> SweepRow:
    sp = solve_real_optimum(ch, cost)
    pol = optimize(ch, cost)
    ref = reference_usage(ch, cost)
    return SweepRow(
        sweep_value=float(sweep_value),
        n_star=pol.n_star,
        t_star=pol.t_star,
        tau_star=pol.tau_bar_star,
        tau_ref=ref,
        reduction=pol.reduction,
        reduction_fraction=pol.reduction / ref,
        n_hat=sp.n_hat,
        t_hat=sp.t_hat,
    )


def run_vary_ratio(grid, k: int = 128, epsilon: float = 1e-2) -> SweepResult:
    """Optimize along a grid of SNR ratios r = snr_good / snr_bad.

    States are equally probable and the average SNR is pinned to 1, so
    snr_bad = 2 / (1 + r) and snr_good = r * snr_bad.  Ratios <= 1 are
    rejected per row (r = 1 is a static channel).
    """
    rows, rejected = [], []
    for r in grid:
        r = float(r)
        if r <= 1.0:
            rejected.append((r, "snr ratio must exceed 1 (ratio 1 is a static channel)"))
            continue
        snr_bad = 2.0 / (1.0 + r)
        ch = ChannelSpec.from_snrs(0.5, r * snr_bad, snr_bad)
        rows.append(_solve_row(r, ch, costs_for_channel(ch, RcspConfig(k, epsilon))))
    return SweepResult(rows=tuple(rows), rejected=tuple(rejected))


def run_vary_probability(
    grid,
    k: int = 128,
    epsilon: float = 1e-2,
    snr_good: float = 1.5,
    snr_bad: float = 0.5,
) -> SweepResult:
    """Optimize along a grid of good-state probabilities at fixed SNRs.

    The data costs depend only on the SNRs, so they are computed once and
    shared across the grid.  Probabilities outside (0, 1) are rejected per
    row (the channel would be static).
    """
    cost = TransmissionCost(
        tau_good=expected_data_usage(snr_good, k, epsilon),
        tau_bad=expected_data_usage(snr_bad, k, epsilon),
    )
    rows, rejected = [], []
    for p in grid:
        p = float(p)
        if not 0.0 < p < 1.0:
            rejected.append((p, "p_good outside (0, 1) is a static channel"))
            continue
        ch = ChannelSpec.from_snrs(p, snr_good, snr_bad)
        rows.append(_solve_row(p, ch, cost))
    return SweepResult(rows=tuple(rows), rejected=tuple(rejected))


def run_single(
    scenario: Scenario,
    policy: PilotPolicy | None = None,
    sim: SimConfig | None = None,
) -> SingleReport:
    """Optimize one scenario, optionally overriding the policy and/or
    validating the analytic usage against a Monte Carlo run."""
    ch = scenario.channel
    cost = costs_for_channel(ch, RcspConfig(scenario.k, scenario.epsilon))
    sp = solve_real_optimum(ch, cost)
    ref = reference_usage(ch, cost)
    if policy is None:
        pol = optimize(ch, cost)
        n_star, t_star, tau_star = pol.n_star, pol.t_star, pol.tau_bar_star
    else:
        n_star = int(policy.n)
        t_star = policy.threshold
        tau_star = expected_usage(ch, cost, policy)

    sim_result = None
    verdict = None
    if sim is not None:
        used = PilotPolicy(n=float(n_star), threshold=t_star)
        sim_result = simulate(ch, cost, used, sim)
        gap = abs(sim_result.mean_usage - tau_star)
        ok = gap <= 3.0 * sim_result.std_error
        verdict = "within 3 std errors" if ok else "OUTSIDE 3 std errors"

    return SingleReport(
        tau_good=cost.tau_good,
        tau_bad=cost.tau_bad,
        potential=ch.p_bad * cost.tau_diff,
        stationary=sp,
        n_star=n_star,
        t_star=t_star,
        tau_star=tau_star,
        tau_ref=ref,
        reduction=ref - tau_star,
        sim=sim_result,
        sim_verdict=verdict,
    )


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------


def _format_value(v) -> str:
    if isinstance(v, int):
        return str(v)
    v = float(v)
    if v == -math.inf:
        return "-inf"
    if v == math.inf:
        return "inf"
    return f"{v:.17g}"


def write_rows(rows, path_or_file) -> None:
    """Emit sweep rows as CSV with a fixed header and 17-significant-digit
    floats, so re-emitting a parsed file reproduces it byte for byte."""
    if isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__"):
        with open(path_or_file, "w", encoding="utf-8", newline="") as fh:
            write_rows(rows, fh)
        return
    fh: io.TextIOBase = path_or_file
    fh.write(",".join(CSV_COLUMNS) + "\n")
    for row in rows:
        fields = [_format_value(getattr(row, col)) for col in CSV_COLUMNS]
        fh.write(",".join(fields) + "\n")


def read_rows(path_or_file) -> list[SweepRow]:
    """Parse a CSV produced by write_rows back into SweepRow values."""
    if isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__"):
        with open(path_or_file, "r", encoding="utf-8", newline="") as fh:
            return read_rows(fh)
    fh = path_or_file
    header = fh.readline().rstrip("\n")
    if header.split(",") != list(CSV_COLUMNS):
        raise ScenarioError(f"unexpected CSV header {header!r}")
    rows = []
    for lineno, line in enumerate(fh, start=2):
        line = line.rstrip("\n")
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != len(CSV_COLUMNS):
            raise ScenarioError(f"line {lineno}: expected {len(CSV_COLUMNS)} fields")
        try:
            rows.append(
                SweepRow(
                    sweep_value=float(parts[0]),
                    n_star=int(parts[1]),
                    t_star=float(parts[2]),
                    tau_star=float(parts[3]),
                    tau_ref=float(parts[4]),
                    reduction=float(parts[5]),
                    reduction_fraction=float(parts[6]),
                    n_hat=float(parts[7]),
                    t_hat=float(parts[8]),
                )
            )
        except ValueError as exc:
            raise ScenarioError(f"line {lineno}: {exc}") from None
    return rows
