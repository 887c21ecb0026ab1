"""pilotgate: jointly optimal pilot length and go/no-go threshold for packet
delivery over a two-state block-fading channel with feedback.

The analytic core minimizes the expected channel usage tau_bar(n, T) over
the pilot count n and decision threshold T; the result is validated by a
brute-force grid oracle and a Monte Carlo renewal simulator.
"""

from .channel import (
    ChannelSpec,
    PilotPolicy,
    TransmissionCost,
    expected_usage,
    gradient,
    hessian,
    potential_reduction,
    reference_usage,
)
from .experiments import (
    Scenario,
    ScenarioError,
    SingleReport,
    SweepResult,
    SweepRow,
    load_scenario,
    parse_scenario,
    read_rows,
    run_single,
    run_vary_probability,
    run_vary_ratio,
    write_rows,
)
from .levelset import (
    CurveMinimum,
    curve_minimum,
    lower_inverse,
    margin_curve,
    margin_curve_curvature,
    margin_curve_prime,
    upper_inverse,
    weighted_spread,
    weighted_spread_prime,
)
from .optimize import (
    OptimalPolicy,
    StationaryPoint,
    grid_search_oracle,
    optimal_threshold_for_n,
    optimize,
    solve_real_optimum,
)
from .rcsp import (
    RcspConfig,
    chernoff_ratio,
    chernoff_tail,
    costs_for_channel,
    error_prob,
    expected_data_usage,
    truncation_index,
)
from .roots import NumericalError, newton_bisection
from .simulate import SimConfig, SimResult, simulate
from .special import (
    chi_square_cdf,
    chi_square_sf,
    log_q_function,
    log_scaled_mills,
    q_function,
    scaled_mills,
)

__version__ = "0.1.0"

__all__ = [
    "ChannelSpec",
    "CurveMinimum",
    "NumericalError",
    "OptimalPolicy",
    "PilotPolicy",
    "RcspConfig",
    "Scenario",
    "ScenarioError",
    "SimConfig",
    "SimResult",
    "SingleReport",
    "StationaryPoint",
    "SweepResult",
    "SweepRow",
    "TransmissionCost",
    "chernoff_ratio",
    "chernoff_tail",
    "chi_square_cdf",
    "chi_square_sf",
    "costs_for_channel",
    "curve_minimum",
    "error_prob",
    "expected_data_usage",
    "expected_usage",
    "gradient",
    "grid_search_oracle",
    "hessian",
    "load_scenario",
    "log_q_function",
    "log_scaled_mills",
    "lower_inverse",
    "margin_curve",
    "margin_curve_curvature",
    "margin_curve_prime",
    "newton_bisection",
    "optimal_threshold_for_n",
    "optimize",
    "parse_scenario",
    "potential_reduction",
    "q_function",
    "read_rows",
    "reference_usage",
    "run_single",
    "run_vary_probability",
    "run_vary_ratio",
    "scaled_mills",
    "simulate",
    "solve_real_optimum",
    "truncation_index",
    "upper_inverse",
    "weighted_spread",
    "weighted_spread_prime",
    "write_rows",
]
