#!/usr/bin/env python3
"""Validate the closed-form expected usage with the renewal simulator.

Three policies at the standard operating point: the optimized pair, a
forced always-transmit policy (usage must be n + reference), and the
no-training policy (usage must be the reference).  The last run swaps the
deterministic per-state cost for sampled decoding stopping times.
"""

import math

from pilotgate import (
    ChannelSpec,
    PilotPolicy,
    RcspConfig,
    SimConfig,
    costs_for_channel,
    optimize,
    q_function,
    reference_usage,
    simulate,
)

ch = ChannelSpec.from_snrs(0.5, 1.5, 0.5)
cfg = RcspConfig(k=128)
cost = costs_for_channel(ch, cfg)
ref = reference_usage(ch, cost)
pol = optimize(ch, cost)
trials = 500_000


def check(label, policy, expected, sim_cfg):
    res = simulate(ch, cost if sim_cfg.data_model == "expected-cost" else cfg, policy, sim_cfg)
    sigmas = abs(res.mean_usage - expected) / res.std_error if res.std_error else 0.0
    print(f"{label}")
    print(f"  analytic  {expected:10.4f}")
    print(f"  simulated {res.mean_usage:10.4f} +- {res.std_error:.4f}   ({sigmas:.2f} sigma)")
    print(f"  attempts/packet {res.attempts_per_packet:.4f}, "
          f"go rates {res.go_rate_good:.4f} / {res.go_rate_bad:.4f}")
    return res


print(f"optimal policy: n = {pol.n_star}, T = {pol.t_star:.6f}\n")
res = check(
    "optimized policy, expected-cost model",
    PilotPolicy(float(pol.n_star), pol.t_star),
    pol.tau_bar_star,
    SimConfig(trials=trials, seed=101),
)
rn = math.sqrt(pol.n_star)
print(f"  predicted go rates {q_function(rn * (pol.t_star - ch.x_good)):.4f} "
      f"/ {q_function(rn * (pol.t_star - ch.x_bad)):.4f}\n")

check(
    "forced always-transmit (n = 7, T = -inf)",
    PilotPolicy(7.0, -math.inf),
    7.0 + ref,
    SimConfig(trials=trials, seed=102),
)
print()
check(
    "no training (n = 0)",
    PilotPolicy(0.0, 0.0),
    ref,
    SimConfig(trials=trials, seed=103),
)
print()
check(
    "optimized policy, sampled stopping times",
    PilotPolicy(float(pol.n_star), pol.t_star),
    pol.tau_bar_star,
    SimConfig(trials=trials, seed=104, data_model="sampled-stopping-time"),
)
