"""Atomic BS-selection game.

Each player transmits at full power to exactly one BS, so a profile is a
length-K integer vector ``a`` with ``a[k]`` in ``range(S)``. Profiles are
indexed in mixed radix with player 0 least significant:
``index = sum(a[k] * S**k)``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .channel import NetworkParams, Seed, make_rng
from .core import as_gains, utilities

__all__ = [
    "ENUMERATION_CAP",
    "MATRIX_CAP",
    "IMPROVE_TOL",
    "EnumerationCapError",
    "ConvergenceError",
    "NeReport",
    "SelectionTrajectory",
    "profile_index",
    "profile_from_index",
    "selection_power",
    "graph_distance",
    "max_ne_bound",
    "all_potentials",
    "all_utilities",
    "selection_potential",
    "enumerate_ne",
    "adjacency_matrices",
    "best_response_selection",
    "is_selection_ne",
    "random_profile",
    "run_selection_dynamics",
]

ENUMERATION_CAP = 10**7
MATRIX_CAP = 4096
# Utility/potential gains at or below this are treated as ties.
IMPROVE_TOL = 1e-12
_CHUNK = 1 << 18


class EnumerationCapError(ValueError):
    def __init__(self, count: int, cap: int):
        super().__init__(f"S**K = {count} profiles exceeds the enumeration cap of {cap}")
        self.count = count
        self.cap = cap


class ConvergenceError(RuntimeError):
    """Dynamics ran out of steps; carries the partial trajectory."""

    def __init__(self, message: str, trajectory):
        super().__init__(message)
        self.trajectory = trajectory


def _check_cap(K: int, S: int, cap: int) -> int:
    count = S**K
    if count > cap:
        raise EnumerationCapError(count, cap)
    return count


def profile_index(a, S: int) -> int:
    idx = 0
    for k in reversed(range(len(a))):
        idx = idx * S + int(a[k])
    return idx


def profile_from_index(i: int, K: int, S: int) -> np.ndarray:
    if not 0 <= i < S**K:
        raise ValueError(f"index {i} out of range for S**K = {S**K}")
    a = np.empty(K, dtype=np.int64)
    for k in range(K):
        i, a[k] = divmod(i, S)
    return a


def selection_power(a, params: NetworkParams) -> np.ndarray:
    """Expand an assignment to the K x S full-power profile."""
    a = np.asarray(a, dtype=np.int64)
    p = np.zeros((params.num_players, params.num_stations))
    p[np.arange(len(a)), a] = params.p_max
    return p


def graph_distance(i: int, j: int, K: int, S: int) -> int:
    """Number of players whose BS differs between profiles i and j."""
    return int(np.count_nonzero(profile_from_index(i, K, S) != profile_from_index(j, K, S)))


def max_ne_bound(K: int, S: int) -> int:
    """Largest possible number of pure NE under distinct potentials: S**(K-1)."""
    if K < 1 or S < 1:
        raise ValueError("K and S must be positive")
    bound = S ** (K - 1)
    if bound > np.iinfo(np.int64).max:
        raise OverflowError(f"S**(K-1) for K={K}, S={S} does not fit in 64 bits")
    return bound


def _digits(idx: np.ndarray, K: int, S: int) -> np.ndarray:
    out = np.empty((idx.size, K), dtype=np.int64)
    rem = idx.copy()
    for k in range(K):
        rem, out[:, k] = np.divmod(rem, S)
    return out


def _loads(assign: np.ndarray, rx: np.ndarray, sigma2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-profile BS loads (n, S) and each player's own received power (n, K)."""
    K = assign.shape[1]
    own = rx[np.arange(K), assign]
    loads = np.empty((assign.shape[0], sigma2.size))
    for s in range(sigma2.size):
        loads[:, s] = sigma2[s] + np.where(assign == s, own, 0.0).sum(axis=1)
    return loads, own


def _chunks(n: int):
    for start in range(0, n, _CHUNK):
        yield np.arange(start, min(n, start + _CHUNK), dtype=np.int64)


def all_potentials(gains, params: NetworkParams, cap: int = ENUMERATION_CAP) -> np.ndarray:
    """Potential of every profile, ordered by profile index."""
    K, S = params.num_players, params.num_stations
    n = _check_cap(K, S, cap)
    rx = params.p_max * as_gains(gains)
    w, sigma2 = params.w, params.sigma2
    phi = np.empty(n)
    for idx in _chunks(n):
        loads, _ = _loads(_digits(idx, K, S), rx, sigma2)
        phi[idx] = np.log2(loads) @ w
    return phi


def all_utilities(gains, params: NetworkParams, cap: int = ENUMERATION_CAP) -> np.ndarray:
    """Utility matrix of shape (S**K, K)."""
    K, S = params.num_players, params.num_stations
    n = _check_cap(K, S, cap)
    rx = params.p_max * as_gains(gains)
    w, sigma2 = params.w, params.sigma2
    u = np.empty((n, K))
    for idx in _chunks(n):
        assign = _digits(idx, K, S)
        loads, own = _loads(assign, rx, sigma2)
        zeta = np.take_along_axis(loads, assign, axis=1) - own
        u[idx] = w[assign] * np.log2(1.0 + own / zeta)
    return u


def selection_potential(a, gains, params: NetworkParams) -> float:
    a = np.asarray(a, dtype=np.int64)
    rx = params.p_max * as_gains(gains)[np.arange(a.size), a]
    loads = params.sigma2 + np.bincount(a, weights=rx, minlength=params.num_stations)
    return float(np.log2(loads) @ params.w)


def _sink_mask(phi: np.ndarray, K: int, S: int, tol: float) -> np.ndarray:
    """True where no single-player deviation raises the potential by more than tol."""
    sink = np.ones(phi.size, dtype=bool)
    for idx in _chunks(phi.size):
        assign = _digits(idx, K, S)
        here = phi[idx]
        ok = np.ones(idx.size, dtype=bool)
        for k in range(K):
            radix = S**k
            for shift in range(1, S):
                alt = (assign[:, k] + shift) % S
                nbr = idx + (alt - assign[:, k]) * radix
                ok &= ~(phi[nbr] > here + tol)
        sink[idx] = ok
    return sink


@dataclass
class NeReport:
    """Pure NE of a selection game, sorted by potential (descending)."""

    ne_indices: list
    potentials: np.ndarray
    utilities: np.ndarray
    is_unique_potential: bool
    num_players: int
    num_stations: int

    @property
    def count(self) -> int:
        return len(self.ne_indices)

    def assignments(self) -> list:
        return [profile_from_index(i, self.num_players, self.num_stations) for i in self.ne_indices]


def enumerate_ne(gains, params: NetworkParams, cap: int = ENUMERATION_CAP,
                 tol: float = IMPROVE_TOL) -> NeReport:
    """Find every sink of the potential-oriented profile graph by exhaustion."""
    K, S = params.num_players, params.num_stations
    phi = all_potentials(gains, params, cap)
    sink = _sink_mask(phi, K, S, tol)
    ne = np.flatnonzero(sink)
    ne = ne[np.argsort(-phi[ne], kind="stable")]
    # condition: no two profiles share a potential value
    gaps = np.diff(np.sort(phi))
    unique = bool(gaps.size == 0 or gaps.min() > tol)
    us = np.array([utilities(selection_power(profile_from_index(int(i), K, S), params), gains, params)
                   for i in ne]).reshape(len(ne), K)
    return NeReport([int(i) for i in ne], phi[ne], us, unique, K, S)


def adjacency_matrices(gains, params: NetworkParams, cap: int = MATRIX_CAP,
                       tol: float = IMPROVE_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Unoriented profile graph A and its potential-oriented version A_hat.

    A_hat[i, j] = 1 iff i and j differ in one player and phi[j] > phi[i].
    """
    K, S = params.num_players, params.num_stations
    n = _check_cap(K, S, cap)
    phi = all_potentials(gains, params)
    A = np.zeros((n, n), dtype=np.int8)
    idx = np.arange(n, dtype=np.int64)
    assign = _digits(idx, K, S)
    for k in range(K):
        for shift in range(1, S):
            alt = (assign[:, k] + shift) % S
            A[idx, idx + (alt - assign[:, k]) * S**k] = 1
    A_hat = (A.astype(bool) & (phi[None, :] > phi[:, None] + tol)).astype(np.int8)
    return A, A_hat


def _station_utilities(a: np.ndarray, k: int, rx: np.ndarray, params: NetworkParams) -> np.ndarray:
    """Utility player k would get on each BS with the others fixed."""
    loads = params.sigma2 + np.bincount(a, weights=rx[np.arange(a.size), a],
                                        minlength=params.num_stations)
    loads[a[k]] -= rx[k, a[k]]
    return params.w * np.log2(1.0 + rx[k] / loads)


def best_response_selection(gains, params: NetworkParams, profile, k: int,
                            tol: float = IMPROVE_TOL) -> np.ndarray:
    """Move player k to its utility-maximizing BS.

    The current BS is kept unless another one is better by more than ``tol``;
    among better ones the lowest index wins.
    """
    a = np.array(profile, dtype=np.int64)
    u = _station_utilities(a, k, params.p_max * as_gains(gains), params)
    best = int(np.argmax(u))
    if u[best] > u[a[k]] + tol:
        a[k] = best
    return a


def is_selection_ne(gains, params: NetworkParams, profile, tol: float = IMPROVE_TOL) -> bool:
    a = np.asarray(profile, dtype=np.int64)
    rx = params.p_max * as_gains(gains)
    for k in range(a.size):
        u = _station_utilities(a, k, rx, params)
        if u.max() > u[a[k]] + tol:
            return False
    return True


def random_profile(K: int, S: int, seed: Seed | np.random.Generator) -> np.ndarray:
    rng = seed if isinstance(seed, np.random.Generator) else make_rng(seed)
    return rng.integers(0, S, size=K, dtype=np.int64)


@dataclass
class SelectionTrajectory:
    """One record per update; step 0 is the starting profile (player -1)."""

    steps: list = field(default_factory=list)
    players: list = field(default_factory=list)
    indices: list = field(default_factory=list)
    potentials: list = field(default_factory=list)
    changed: list = field(default_factory=list)

    def append(self, step, player, index, phi, changed):
        self.steps.append(step)
        self.players.append(player)
        self.indices.append(index)
        self.potentials.append(phi)
        self.changed.append(changed)

    @property
    def num_changes(self) -> int:
        return sum(self.changed)

    def change_potentials(self) -> list:
        """Potential at the start and after every changing step."""
        return [self.potentials[0]] + [p for p, c in zip(self.potentials[1:], self.changed[1:]) if c]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["step", "player", "profile_index", "potential", "changed"])
        for row in zip(self.steps, self.players, self.indices, self.potentials, self.changed):
            writer.writerow([row[0], row[1], row[2], repr(row[3]), int(row[4])])
        return buf.getvalue()

    def to_records(self) -> list:
        return [
            {"step": s, "player": k, "profile_index": i, "potential": p, "changed": c}
            for s, k, i, p, c in zip(self.steps, self.players, self.indices, self.potentials, self.changed)
        ]


def run_selection_dynamics(gains, params: NetworkParams, start, schedule: str = "random",
                           seed: Seed | None = None, max_steps: int = 10**6,
                           tol: float = IMPROVE_TOL) -> tuple[np.ndarray, SelectionTrajectory]:
    """Sequential best-response dynamics over the selection game.

    One player updates per step, either cycling 0..K-1 (``round_robin``) or
    drawn uniformly at random (``random``, needs ``seed``). The run stops
    once every player has been offered an update since the last change
    without moving, so the final profile is a pure NE.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    if schedule not in ("random", "round_robin"):
        raise ValueError(f"unknown schedule {schedule!r}")
    if schedule == "random":
        if seed is None:
            raise ValueError("random schedule needs a seed")
        rng = make_rng(seed)
    K, S = params.num_players, params.num_stations
    g = as_gains(gains)
    rx = params.p_max * g
    a = np.array(start, dtype=np.int64)
    if a.shape != (K,) or np.any((a < 0) | (a >= S)):
        raise ValueError("start must assign every player a BS in range(S)")
    radix = [S**k for k in range(K)]
    index = profile_index(a, S)
    traj = SelectionTrajectory()
    traj.append(0, -1, index, selection_potential(a, g, params), False)

    settled: set = set()
    for step in range(1, max_steps + 1):
        k = (step - 1) % K if schedule == "round_robin" else int(rng.integers(K))
        u = _station_utilities(a, k, rx, params)
        best = int(np.argmax(u))
        moved = bool(u[best] > u[a[k]] + tol)
        if moved:
            index += (best - int(a[k])) * radix[k]
            a[k] = best
            settled = {k}
        else:
            settled.add(k)
        traj.append(step, k, index, selection_potential(a, g, params), moved)
        if len(settled) == K:
            return a, traj
    raise ConvergenceError(f"selection dynamics did not settle in {max_steps} steps", traj)
