"""BS-sharing game: water-filling best responses and Gauss-Seidel dynamics."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .channel import NetworkParams, Seed, make_rng
from .core import as_gains, check_power_profile, mai_matrix
from .selection import ConvergenceError

__all__ = [
    "WaterFillingSolution",
    "SharingTrajectory",
    "water_fill",
    "sharing_best_response",
    "player_kkt_residual",
    "kkt_residual",
    "uniform_profile",
    "random_power_profile",
    "run_sharing_dynamics",
]

ACTIVE_TOL = 1e-12


@dataclass(frozen=True)
class WaterFillingSolution:
    powers: np.ndarray
    water_level: float
    active_set: tuple


def water_fill(weights, costs, budget: float) -> WaterFillingSolution:
    """Maximize sum_s w_s log(p_s + c_s) subject to sum p = budget, p >= 0.

    Solution: p_s = max(0, w_s / beta - c_s). Channels are ranked by
    w_s / c_s and the active set is the longest prefix that keeps every
    active power positive, with beta = sum(w_A) / (budget + sum(c_A)).
    Infinite cost marks an unusable channel, which gets zero power.
    """
    w = np.asarray(weights, dtype=float)
    c = np.asarray(costs, dtype=float)
    if w.shape != c.shape or w.ndim != 1:
        raise ValueError("weights and costs must be 1-D and of equal length")
    if not budget > 0:
        raise ValueError("budget must be positive")
    if np.any(w <= 0):
        raise ValueError("weights must be positive")
    usable = np.flatnonzero(np.isfinite(c))
    if usable.size == 0:
        raise ValueError("no usable channel: every cost is infinite (zero gain)")
    if np.any(c[usable] <= 0):
        raise ValueError("costs must be positive")

    order = usable[np.argsort(-(w[usable] / c[usable]), kind="stable")]
    for m in range(order.size, 0, -1):
        active = order[:m]
        beta = w[active].sum() / (budget + c[active].sum())
        last = order[m - 1]
        if w[last] / beta - c[last] > 0:
            break
    powers = np.zeros_like(w)
    powers[active] = w[active] / beta - c[active]
    return WaterFillingSolution(powers, float(beta), tuple(sorted(int(s) for s in active)))


def _costs(zeta_row: np.ndarray, g_row: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.where(g_row > 0, zeta_row / np.where(g_row > 0, g_row, 1.0), np.inf)


def sharing_best_response(p, gains, params: NetworkParams, k: int) -> np.ndarray:
    """Player k's water-filling row against the current interference."""
    g = as_gains(gains)
    zeta = mai_matrix(p, g, params)[k]
    return water_fill(params.w, _costs(zeta, g[k]), params.p_max).powers


def player_kkt_residual(p, gains, params: NetworkParams, k: int) -> float:
    """Worst violation of the optimality conditions of player k's row.

    The multiplier is taken as the marginal utility on the player's
    most-loaded channel.
    """
    p = np.asarray(p, float)
    g = as_gains(gains)
    zeta = mai_matrix(p, g, params)[k]
    row = p[k]
    deriv = params.w * g[k] / ((row * g[k] + zeta) * math.log(2.0))
    active = row > ACTIVE_TOL * params.p_max
    beta = float(deriv[np.argmax(row)]) if active.any() else 0.0
    parts = [
        abs(row.sum() - params.p_max),
        float(np.max(np.maximum(0.0, -row))),
        float(np.max(np.abs(row * (beta - deriv)))),
    ]
    if active.any():
        parts.append(float(np.max(np.abs(deriv[active] - beta))))
    if (~active).any():
        parts.append(float(np.max(np.maximum(0.0, deriv[~active] - beta))))
    return max(parts)


def kkt_residual(p, gains, params: NetworkParams) -> float:
    return max(player_kkt_residual(p, gains, params, k) for k in range(params.num_players))


def uniform_profile(params: NetworkParams) -> np.ndarray:
    return np.full((params.num_players, params.num_stations), params.p_max / params.num_stations)


def random_power_profile(params: NetworkParams, seed: Seed) -> np.ndarray:
    """Rows drawn uniformly on the simplex scaled to p_max."""
    rng = make_rng(seed)
    return params.p_max * rng.dirichlet(np.ones(params.num_stations), size=params.num_players)


@dataclass
class SharingTrajectory:
    """One record per update; update 0 is the start (player -1)."""

    num_players: int
    updates: list = field(default_factory=list)
    players: list = field(default_factory=list)
    potentials: list = field(default_factory=list)
    deltas: list = field(default_factory=list)

    def append(self, update, player, phi, delta):
        self.updates.append(update)
        self.players.append(player)
        self.potentials.append(phi)
        self.deltas.append(delta)

    @property
    def num_updates(self) -> int:
        return len(self.updates) - 1

    @property
    def num_sweeps(self) -> int:
        return -(-self.num_updates // self.num_players)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["update", "sweep", "player", "potential", "change"])
        for u, k, phi, d in zip(self.updates, self.players, self.potentials, self.deltas):
            sweep = 0 if u == 0 else (u - 1) // self.num_players + 1
            writer.writerow([u, sweep, k, repr(phi), repr(d)])
        return buf.getvalue()

    def to_records(self) -> list:
        return [
            {"update": u, "player": k, "potential": phi, "change": d}
            for u, k, phi, d in zip(self.updates, self.players, self.potentials, self.deltas)
        ]


def run_sharing_dynamics(gains, params: NetworkParams, start=None, schedule: str = "round_robin",
                         seed: Seed | None = None, eps: float = 1e-9,
                         max_sweeps: int = 10**4) -> tuple[np.ndarray, SharingTrajectory]:
    """Nonlinear Gauss-Seidel: one player at a time switches to its water-filling row.

    Each sweep updates every player once, in index order (``round_robin``)
    or in a fresh random permutation (``random``).

    Stops once every player has been updated since the last update that
    moved a row by at least ``eps`` (max-norm).
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    if max_sweeps < 1:
        raise ValueError("max_sweeps must be >= 1")
    if schedule not in ("random", "round_robin"):
        raise ValueError(f"unknown schedule {schedule!r}")
    if schedule == "random":
        if seed is None:
            raise ValueError("random schedule needs a seed")
        rng = make_rng(seed)
    K = params.num_players
    g = as_gains(gains)
    p = uniform_profile(params) if start is None else check_power_profile(start, params).copy()
    w, sigma2 = params.w, params.sigma2

    load = sigma2 + (p * g).sum(axis=0)
    traj = SharingTrajectory(K)
    traj.append(0, -1, float(np.log2(load) @ w), 0.0)
    settled: set = set()
    order = np.arange(K)
    for update in range(1, max_sweeps * K + 1):
        pos = (update - 1) % K
        if schedule == "random" and pos == 0:
            order = rng.permutation(K)
        k = int(order[pos])
        zeta = load - p[k] * g[k]
        new = water_fill(w, _costs(zeta, g[k]), params.p_max).powers
        delta = float(np.max(np.abs(new - p[k])))
        p[k] = new
        load = sigma2 + (p * g).sum(axis=0)
        traj.append(update, k, float(np.log2(load) @ w), delta)
        if delta >= eps:
            settled = {k}
        else:
            settled.add(k)
        if len(settled) == K:
            return p, traj
    raise ConvergenceError(f"sharing dynamics did not settle in {max_sweeps} sweeps", traj)
