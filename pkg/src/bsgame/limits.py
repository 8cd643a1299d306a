"""Large-population and mixed-strategy views of the selection game."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .channel import NetworkParams, draw_channels
from .core import as_gains
from .selection import (
    ENUMERATION_CAP,
    _check_cap,
    all_potentials,
    all_utilities,
    random_profile,
    run_selection_dynamics,
)

__all__ = [
    "NonAtomicEquilibrium",
    "FractionEstimate",
    "nonatomic_equilibrium_fractions",
    "nonatomic_potential",
    "nonatomic_gradient",
    "empirical_fractions",
    "check_mixed_profile",
    "profile_probabilities",
    "mixed_utility",
    "mixed_potential",
    "no_fully_mixed_ne_2x2",
]


@dataclass(frozen=True)
class NonAtomicEquilibrium:
    fractions: np.ndarray
    value: float
    alpha: float
    alpha_s: np.ndarray


def _alphas(params: NetworkParams) -> tuple[float, np.ndarray]:
    K = params.num_players
    return params.total_bandwidth / K, params.total_bandwidth * params.w / K


def nonatomic_potential(x, params: NetworkParams, omega: float = 1.0) -> float:
    """sum_s w_s log2(N0 alpha_s + x_s p_max omega), alpha_s = B_s / K."""
    if not omega > 0:
        raise ValueError("omega must be positive")
    x = np.asarray(x, float)
    _, alpha_s = _alphas(params)
    return float(params.w @ np.log2(params.noise_density * alpha_s + x * params.p_max * omega))


def nonatomic_gradient(x, params: NetworkParams, omega: float = 1.0) -> np.ndarray:
    x = np.asarray(x, float)
    _, alpha_s = _alphas(params)
    c = params.p_max * omega
    return params.w * c / ((params.noise_density * alpha_s + x * c) * np.log(2.0))


def nonatomic_equilibrium_fractions(params: NetworkParams, omega: float = 1.0) -> NonAtomicEquilibrium:
    """Equilibrium fractions of the non-atomic game: x_s = B_s / B."""
    x = params.w.copy()
    alpha, alpha_s = _alphas(params)
    return NonAtomicEquilibrium(x, nonatomic_potential(x, params, omega), alpha, alpha_s)


@dataclass
class FractionEstimate:
    mean: np.ndarray
    stderr: np.ndarray
    per_trial: np.ndarray


def empirical_fractions(params: NetworkParams, seed: int, trials: int) -> FractionEstimate:
    """Share of players per BS at the NE reached by the selection dynamics.

    Trial t draws channels from stream (seed, 0, t), the start profile from
    (seed, 1, t) and the update order from (seed, 2, t).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    K, S = params.num_players, params.num_stations
    per_trial = np.empty((trials, S))
    for t in range(trials):
        g = draw_channels(params, (seed, 0, t))
        start = random_profile(K, S, (seed, 1, t))
        a, _ = run_selection_dynamics(g, params, start, "random", seed=(seed, 2, t))
        per_trial[t] = np.bincount(a, minlength=S) / K
    se = per_trial.std(axis=0, ddof=1) / np.sqrt(trials) if trials > 1 else np.zeros(S)
    return FractionEstimate(per_trial.mean(axis=0), se, per_trial)


def check_mixed_profile(q, params: NetworkParams) -> np.ndarray:
    q = np.asarray(q, float)
    if q.shape != (params.num_players, params.num_stations):
        raise ValueError(f"mixed profile shape {q.shape} does not match (K, S)")
    if np.any(q < 0) or not np.allclose(q.sum(axis=1), 1.0, rtol=0, atol=1e-12):
        raise ValueError("every row of a mixed profile must lie on the simplex")
    return q


def profile_probabilities(q) -> np.ndarray:
    """Probability of every pure profile, ordered by profile index.

    Player 0 is the least significant digit, so it sits rightmost in the
    Kronecker product.
    """
    q = np.asarray(q, float)
    return reduce(np.kron, q[::-1])


def mixed_utility(q, gains, params: NetworkParams, k: int, cap: int = ENUMERATION_CAP) -> float:
    """Expected utility of player k when everyone randomizes independently."""
    _check_cap(params.num_players, params.num_stations, cap)
    q = check_mixed_profile(q, params)
    return float(profile_probabilities(q) @ all_utilities(gains, params, cap)[:, k])


def mixed_potential(q, gains, params: NetworkParams, cap: int = ENUMERATION_CAP) -> float:
    _check_cap(params.num_players, params.num_stations, cap)
    q = check_mixed_profile(q, params)
    return float(profile_probabilities(q) @ all_potentials(gains, params, cap))


def no_fully_mixed_ne_2x2(gains, params: NetworkParams) -> bool:
    """Sufficient test that a 2-player, 2-BS game has no fully mixed NE.

    True if some player k and BS s satisfy
    g[k, -s] / g[k, s] <= sigma2[-s] / (sigma2[s] + p_max g[-k, s]).
    """
    if params.num_players != 2 or params.num_stations != 2:
        raise ValueError("only defined for K = 2 and S = 2")
    g = as_gains(gains)
    sigma2 = params.sigma2
    for k in range(2):
        for s in range(2):
            lhs_num, lhs_den = g[k, 1 - s], g[k, s]
            rhs = sigma2[1 - s] / (sigma2[s] + params.p_max * g[1 - k, s])
            # cross-multiplied so zero gains need no special case
            if lhs_num <= rhs * lhs_den:
                return True
    return False
