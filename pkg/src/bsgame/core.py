"""SINR, spectral-efficiency utilities and the exact potential.

A power profile is a K x S array ``p`` with ``p[k, s]`` the power player k
sends to BS s. Players and BSs are 0-based throughout the package.
"""

from __future__ import annotations

import numpy as np

from .channel import NetworkParams

__all__ = [
    "as_gains",
    "check_power_profile",
    "received_load",
    "mai",
    "mai_matrix",
    "sinr",
    "utility",
    "utilities",
    "potential",
    "check_exact_potential",
]

POWER_TOL = 1e-12


def as_gains(gains) -> np.ndarray:
    """Accept a ChannelMatrix or any K x S array-like."""
    return np.asarray(getattr(gains, "gains", gains), dtype=float)


def check_power_profile(p, params: NetworkParams) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape != (params.num_players, params.num_stations):
        raise ValueError(f"profile shape {p.shape} does not match (K, S)")
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise ValueError("powers must be finite and nonnegative")
    if np.any(p.sum(axis=1) > params.p_max + POWER_TOL):
        raise ValueError("a player exceeds its power budget")
    return p


def received_load(p, gains, params: NetworkParams) -> np.ndarray:
    """Noise plus total received power at each BS, length S."""
    return params.sigma2 + np.einsum("ks,ks->s", np.asarray(p, float), as_gains(gains))


def mai_matrix(p, gains, params: NetworkParams) -> np.ndarray:
    """zeta[k, s]: noise plus interference seen by k at s, own signal excluded."""
    rx = np.asarray(p, float) * as_gains(gains)
    return (params.sigma2 + rx.sum(axis=0)) - rx


def mai(p, gains, params: NetworkParams, k: int, s: int) -> float:
    p = np.asarray(p, float)
    g = as_gains(gains)
    others = np.arange(p.shape[0]) != k
    return float(params.sigma2[s] + np.dot(p[others, s], g[others, s]))


def sinr(p, gains, params: NetworkParams, k: int, s: int) -> float:
    p = np.asarray(p, float)
    return float(p[k, s] * as_gains(gains)[k, s] / mai(p, gains, params, k, s))


def utilities(p, gains, params: NetworkParams) -> np.ndarray:
    """Spectral efficiency of every player in bits/s/Hz, length K."""
    p = np.asarray(p, float)
    gamma = p * as_gains(gains) / mai_matrix(p, gains, params)
    return np.log2(1.0 + gamma) @ params.w


def utility(p, gains, params: NetworkParams, k: int) -> float:
    p = np.asarray(p, float)
    g = as_gains(gains)
    gamma = np.array([p[k, s] * g[k, s] / mai(p, g, params, k, s) for s in range(p.shape[1])])
    return float(np.dot(params.w, np.log2(1.0 + gamma)))


def potential(p, gains, params: NetworkParams) -> float:
    """Bandwidth-weighted log2 of the total received power plus noise per BS."""
    return float(np.dot(params.w, np.log2(received_load(p, gains, params))))


def check_exact_potential(p, p_dev, gains, params: NetworkParams, k: int) -> float:
    """Return |(u_k(p) - u_k(p_dev)) - (phi(p) - phi(p_dev))|.

    ``p_dev`` may differ from ``p`` only in row ``k``.
    """
    p = np.asarray(p, float)
    p_dev = np.asarray(p_dev, float)
    if p.shape != p_dev.shape:
        raise ValueError("profiles have different shapes")
    differing = np.flatnonzero(np.any(p != p_dev, axis=1))
    if np.any(differing != k):
        raise ValueError(f"profiles differ in rows {differing.tolist()}, not only in row {k}")
    du = utility(p, gains, params, k) - utility(p_dev, gains, params, k)
    dphi = potential(p, gains, params) - potential(p_dev, gains, params)
    return abs(du - dphi)
