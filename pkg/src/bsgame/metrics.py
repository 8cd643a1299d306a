"""Efficiency metrics and the Monte Carlo sweeps behind the experiments.

Per-trial randomness comes from SeedSequence entropy tuples
``(seed, K, trial, role)``: role 0 draws channels, 1 the selection start
profile and 2 the selection update order. Trials are therefore independent
of each other and of the order they run in.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .channel import NetworkParams, draw_channels, params_from_snr
from .core import utilities
from .selection import (
    ENUMERATION_CAP,
    all_utilities,
    enumerate_ne,
    random_profile,
    run_selection_dynamics,
    selection_power,
)
from .sharing import run_sharing_dynamics

__all__ = [
    "EfficiencyReport",
    "SweepResult",
    "efficiency_selection",
    "network_se",
    "sweep_poa_pos",
    "braess_compare",
]


@dataclass(frozen=True)
class EfficiencyReport:
    optimum_sum: float
    worst_ne_sum: float
    best_ne_sum: float
    poa: float
    pos: float
    ne_count: int


def network_se(p, gains, params: NetworkParams) -> float:
    """Network spectral efficiency: the sum of all players' utilities."""
    return float(utilities(p, gains, params).sum())


def efficiency_selection(gains, params: NetworkParams, cap: int = ENUMERATION_CAP) -> EfficiencyReport:
    """PoA and PoS of the selection game over the full-power strategy set."""
    sums = all_utilities(gains, params, cap).sum(axis=1)
    report = enumerate_ne(gains, params, cap)
    if report.count == 0:
        raise RuntimeError("no pure NE found; the potential argument guarantees one")
    ne_sums = sums[report.ne_indices]
    opt, worst, best = float(sums.max()), float(ne_sums.min()), float(ne_sums.max())
    return EfficiencyReport(opt, worst, best, opt / worst, opt / best, report.count)


@dataclass
class SweepResult:
    """Per-axis-point means and standard errors of named metrics.

    ``samples[name]`` holds the raw per-trial values, shape (len(axis), trials).
    """

    axis_name: str
    axis: list
    trials: int
    seed: int
    samples: dict = field(default_factory=dict)

    def mean(self, name: str) -> np.ndarray:
        return self.samples[name].mean(axis=1)

    def stderr(self, name: str) -> np.ndarray:
        x = self.samples[name]
        if x.shape[1] < 2:
            return np.zeros(x.shape[0])
        return x.std(axis=1, ddof=1) / np.sqrt(x.shape[1])

    def rows(self) -> list:
        out = []
        for i, a in enumerate(self.axis):
            row = {self.axis_name: a}
            for name in self.samples:
                row[f"{name}_mean"] = float(self.mean(name)[i])
                row[f"{name}_se"] = float(self.stderr(name)[i])
            row["trials"] = self.trials
            out.append(row)
        return out

    def to_csv(self) -> str:
        rows = self.rows()
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(rows[0]))
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row.values()])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"axis": self.axis_name, "seed": self.seed, "trials": self.trials,
                           "rows": self.rows()}, indent=2)


def _check_trials(trials: int):
    if trials < 1:
        raise ValueError("trials must be >= 1")


def sweep_poa_pos(S: int, K_range, trials: int, snr_db: float, seed: int,
                  w=None) -> SweepResult:
    """PoA and PoS of the selection game for each K, over i.i.d. channel draws.

    Besides ``poa``, ``pos`` and ``ne_count``, the ``multi_gap`` sample is 1
    on trials where PoS < PoA, i.e. where NE of different welfare coexist.
    """
    _check_trials(trials)
    K_range = [int(K) for K in K_range]
    names = ("poa", "pos", "ne_count", "multi_gap")
    samples = {n: np.empty((len(K_range), trials)) for n in names}
    for i, K in enumerate(K_range):
        params = params_from_snr(K, S, w, snr_db)
        for t in range(trials):
            rep = efficiency_selection(draw_channels(params, (seed, K, t, 0)), params)
            samples["poa"][i, t] = rep.poa
            samples["pos"][i, t] = rep.pos
            samples["ne_count"][i, t] = rep.ne_count
            samples["multi_gap"][i, t] = float(rep.pos < rep.poa)
    return SweepResult("K", K_range, trials, seed, samples)


def braess_compare(S: int, K_range, trials: int, snr_db: float, seed: int,
                   w=None) -> SweepResult:
    """Network SE at the selection NE vs the sharing NE on identical channels.

    The selection arm starts from a random profile with random update order;
    the sharing arm runs round-robin from the uniform split (its NE is unique).
    """
    _check_trials(trials)
    K_range = [int(K) for K in K_range]
    names = ("selection", "sharing", "difference")
    samples = {n: np.empty((len(K_range), trials)) for n in names}
    for i, K in enumerate(K_range):
        params = params_from_snr(K, S, w, snr_db)
        for t in range(trials):
            g = draw_channels(params, (seed, K, t, 0))
            start = random_profile(K, S, (seed, K, t, 1))
            a, _ = run_selection_dynamics(g, params, start, "random", seed=(seed, K, t, 2))
            p_share, _ = run_sharing_dynamics(g, params)
            sel = network_se(selection_power(a, params), g, params)
            share = network_se(p_share, g, params)
            samples["selection"][i, t] = sel
            samples["sharing"][i, t] = share
            samples["difference"][i, t] = sel - share
    return SweepResult("K", K_range, trials, seed, samples)
