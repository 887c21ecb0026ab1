"""Sweeps, scenario files, single-scenario reports and CSV round trips."""

import io
import math

import pytest

from pilotgate import (
    PilotPolicy,
    Scenario,
    ScenarioError,
    SimConfig,
    parse_scenario,
    read_rows,
    run_single,
    run_vary_probability,
    run_vary_ratio,
    write_rows,
)
from pilotgate.experiments import SCENARIO_HEADER, load_scenario

GOOD_SCENARIO = """\
pilotgate-scenario v1
# the standard operating point
p_good = 0.5
snr_good = 1.5
snr_bad = 0.5
k = 128
epsilon = 0.01
"""


def test_parse_scenario_roundtrip():
    sc = parse_scenario(GOOD_SCENARIO)
    assert sc.channel.p_good == 0.5
    assert sc.channel.snr_good == pytest.approx(1.5)
    assert sc.k == 128 and sc.epsilon == 0.01
    assert sc.sweep == "none" and sc.sweep_grid == ()


def test_parse_scenario_defaults():
    sc = parse_scenario(f"{SCENARIO_HEADER}\np_good = 0.4\nsnr_good = 2\nsnr_bad = 1\n")
    assert sc.k == 128 and sc.epsilon == 1e-2


def test_parse_scenario_grid():
    text = f"{SCENARIO_HEADER}\np_good=0.5\nsnr_good=1.5\nsnr_bad=0.5\nsweep=snr-ratio\ngrid=1.5, 2, 3\n"
    sc = parse_scenario(text)
    assert sc.sweep == "snr-ratio"
    assert sc.sweep_grid == (1.5, 2.0, 3.0)


def test_parse_scenario_unknown_key_with_line():
    text = f"{SCENARIO_HEADER}\np_good = 0.5\nsnr_goood = 1.5\n"
    with pytest.raises(ScenarioError, match=r":3: unknown key 'snr_goood'"):
        parse_scenario(text)


def test_parse_scenario_bad_header():
    with pytest.raises(ScenarioError, match="expected header"):
        parse_scenario("something-else v1\np_good = 0.5\n")
    with pytest.raises(ScenarioError, match="missing header"):
        parse_scenario("")


def test_parse_scenario_missing_required():
    with pytest.raises(ScenarioError, match="missing required key 'snr_bad'"):
        parse_scenario(f"{SCENARIO_HEADER}\np_good = 0.5\nsnr_good = 1.5\n")


def test_parse_scenario_bad_value():
    with pytest.raises(ScenarioError, match="p_good"):
        parse_scenario(f"{SCENARIO_HEADER}\np_good = zero\nsnr_good = 1.5\nsnr_bad = 0.5\n")


def test_parse_scenario_duplicate_key():
    text = f"{SCENARIO_HEADER}\np_good = 0.5\np_good = 0.6\nsnr_good = 1.5\nsnr_bad = 0.5\n"
    with pytest.raises(ScenarioError, match="duplicate key"):
        parse_scenario(text)


def test_scenario_invariants():
    sc = parse_scenario(GOOD_SCENARIO)
    with pytest.raises(ScenarioError):
        Scenario(channel=sc.channel, sweep="snr-ratio", sweep_grid=())
    with pytest.raises(ScenarioError):
        Scenario(channel=sc.channel, sweep="snr-ratio", sweep_grid=(0.5,))
    with pytest.raises(ScenarioError):
        Scenario(channel=sc.channel, sweep="probability", sweep_grid=(1.5,))
    with pytest.raises(ScenarioError):
        Scenario(channel=sc.channel, sweep="diagonal", sweep_grid=(1.0,))


def test_load_scenario(tmp_path):
    path = tmp_path / "case.scenario"
    path.write_text(GOOD_SCENARIO)
    sc = load_scenario(path)
    assert sc.k == 128


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------


def test_ratio_sweep_rejects_static_rows():
    res = run_vary_ratio([0.5, 1.0, 3.0], k=32)
    assert len(res.rows) == 1 and res.rows[0].sweep_value == 3.0
    assert [v for v, _ in res.rejected] == [0.5, 1.0]
    assert all("static" in reason for _, reason in res.rejected)


def test_ratio_sweep_near_one_is_no_selection():
    res = run_vary_ratio([1.0 + 1e-9], k=128)
    (row,) = res.rows
    assert row.n_star == 0
    assert row.reduction == 0.0


def test_ratio_sweep_strict_improvement_at_three():
    res = run_vary_ratio([3.0], k=128)
    (row,) = res.rows
    assert row.reduction > 0.0
    assert row.tau_star < row.tau_ref


def test_ratio_sweep_reduction_trend():
    res = run_vary_ratio([1.5, 2.0, 3.0, 5.0, 10.0], k=128)
    reductions = [row.reduction for row in res.rows]
    assert all(b >= a for a, b in zip(reductions, reductions[1:]))


def test_ratio_sweep_row_invariants():
    res = run_vary_ratio([1.5, 3.0, 8.0], k=32)
    for row in res.rows:
        assert row.reduction == pytest.approx(row.tau_ref - row.tau_star, rel=1e-12)
        assert row.reduction >= 0.0
        assert row.n_star >= 0


def test_probability_sweep_rejects_endpoints():
    res = run_vary_probability([0.0, 0.5, 1.0], k=32)
    assert len(res.rows) == 1
    assert [v for v, _ in res.rejected] == [0.0, 1.0]


def test_probability_sweep_extremes_lose_to_moderate():
    res = run_vary_probability([0.01, 0.5, 0.99], k=128)
    by_p = {row.sweep_value: row for row in res.rows}
    assert by_p[0.01].reduction < by_p[0.5].reduction
    assert by_p[0.99].reduction < by_p[0.5].reduction
    assert by_p[0.01].n_star <= 1 and by_p[0.01].reduction <= 1.0


def test_probability_sweep_midpoint_equals_ratio_three():
    prob_row = run_vary_probability([0.5], k=128).rows[0]
    ratio_row = run_vary_ratio([3.0], k=128).rows[0]
    # identical physical scenario reached by two sweep paths
    for field in ("n_star", "t_star", "tau_star", "tau_ref", "reduction",
                  "reduction_fraction", "n_hat", "t_hat"):
        assert getattr(prob_row, field) == getattr(ratio_row, field)


def test_single_grid_point_matches_run_single():
    row = run_vary_ratio([3.0], k=128).rows[0]
    sc = parse_scenario(GOOD_SCENARIO)
    report = run_single(sc)
    assert row.n_star == report.n_star
    assert row.t_star == report.t_star
    assert row.tau_star == report.tau_star
    assert row.tau_ref == report.tau_ref
    assert row.n_hat == report.stationary.n_hat


# ---------------------------------------------------------------------------
# single runs
# ---------------------------------------------------------------------------


def test_run_single_policy_override_no_training():
    sc = parse_scenario(GOOD_SCENARIO)
    report = run_single(sc, policy=PilotPolicy(n=0.0, threshold=1.0))
    assert report.tau_star == report.tau_ref
    assert report.reduction == 0.0


def test_run_single_policy_override_always_transmit():
    sc = parse_scenario(GOOD_SCENARIO)
    report = run_single(sc, policy=PilotPolicy(n=3.0, threshold=-math.inf))
    assert report.tau_star == pytest.approx(3.0 + report.tau_ref, rel=1e-12)
    assert "-inf" in report.as_text()


def test_run_single_with_simulation_verdict():
    sc = parse_scenario(GOOD_SCENARIO)
    report = run_single(sc, sim=SimConfig(trials=150_000, seed=21))
    assert report.sim is not None
    assert report.sim_verdict == "within 3 std errors"
    assert "sim_verdict" in report.as_text()


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------


def test_csv_round_trip_bytes(tmp_path):
    res = run_vary_ratio([1.0 + 1e-9, 1.5, 3.0, 20.0], k=32)
    path = tmp_path / "rows.csv"
    write_rows(res.rows, path)
    first = path.read_bytes()
    rows = read_rows(path)
    write_rows(rows, path)
    assert path.read_bytes() == first


def test_csv_always_transmit_literal():
    from pilotgate import SweepRow

    buf = io.StringIO()
    row = SweepRow(2.0, 40, -math.inf, 140.0, 150.0, 10.0, 10.0 / 150.0, 39.5, -1.0)
    write_rows([row], buf)
    text = buf.getvalue()
    assert ",-inf," in text
    buf.seek(0)
    parsed = read_rows(buf)
    assert parsed[0].t_star == -math.inf


def test_csv_header_mismatch_rejected():
    buf = io.StringIO("a,b,c\n1,2,3\n")
    with pytest.raises(ScenarioError, match="header"):
        read_rows(buf)
