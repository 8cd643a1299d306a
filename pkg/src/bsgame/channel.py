"""Network parameters, channel draws and the plain-text config format.

All physical scalars are normalized: total bandwidth B = 1 and noise
density N0 = 1, so the transmit SNR only sets ``p_max``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, Union

import numpy as np

__all__ = [
    "NetworkParams",
    "ChannelMatrix",
    "Seed",
    "params_from_snr",
    "draw_channels",
    "make_rng",
    "load_config",
    "params_from_config",
]

# An int, or a tuple of ints used as SeedSequence entropy, e.g.
# (base_seed, K, trial) for per-trial streams.
Seed = Union[int, Sequence[int]]

_SUM_TOL = 1e-12


@dataclass(frozen=True)
class NetworkParams:
    """Scalar description of a network with K transmitters and S BSs."""

    num_players: int
    num_stations: int
    bandwidth_fractions: tuple
    total_bandwidth: float = 1.0
    noise_density: float = 1.0
    p_max: float = 10.0

    def __post_init__(self):
        if int(self.num_players) < 1 or int(self.num_stations) < 1:
            raise ValueError("need at least one player and one station")
        w = tuple(float(v) for v in self.bandwidth_fractions)
        object.__setattr__(self, "bandwidth_fractions", w)
        if len(w) != self.num_stations:
            raise ValueError(
                f"expected {self.num_stations} bandwidth fractions, got {len(w)}"
            )
        if any(not math.isfinite(v) or v <= 0.0 for v in w):
            raise ValueError(f"bandwidth fractions must be positive: {w}")
        if abs(math.fsum(w) - 1.0) > _SUM_TOL:
            raise ValueError(f"bandwidth fractions must sum to 1, got {math.fsum(w)!r}")
        for name in ("total_bandwidth", "noise_density", "p_max"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise ValueError(f"{name} must be positive and finite, got {v!r}")

    @property
    def K(self) -> int:
        return self.num_players

    @property
    def S(self) -> int:
        return self.num_stations

    @property
    def w(self) -> np.ndarray:
        return np.array(self.bandwidth_fractions)

    @property
    def sigma2(self) -> np.ndarray:
        """Per-BS noise power N0 * B_s."""
        return self.noise_density * self.total_bandwidth * self.w

    @property
    def snr_db(self) -> float:
        return 10.0 * math.log10(self.p_max / (self.noise_density * self.total_bandwidth))

    def with_players(self, num_players: int) -> "NetworkParams":
        return NetworkParams(
            num_players,
            self.num_stations,
            self.bandwidth_fractions,
            self.total_bandwidth,
            self.noise_density,
            self.p_max,
        )


def params_from_snr(K: int, S: int, w: Sequence[float] | None, snr_db: float) -> NetworkParams:
    """Build parameters with B = N0 = 1 and p_max = 10**(snr_db / 10).

    ``w=None`` means equal bandwidth per BS.
    """
    if not math.isfinite(snr_db):
        raise ValueError(f"snr_db must be finite, got {snr_db!r}")
    if w is None:
        w = [1.0 / S] * S
    return NetworkParams(K, S, tuple(w), 1.0, 1.0, 10.0 ** (snr_db / 10.0))


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class ChannelMatrix:
    """K x S power gains, optionally with the complex coefficients behind them."""

    gains: np.ndarray
    coeffs: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        g = np.asarray(self.gains, dtype=float)
        if g.ndim != 2:
            raise ValueError("gains must be a K x S matrix")
        if not np.all(np.isfinite(g)) or np.any(g < 0):
            raise ValueError("gains must be finite and nonnegative")
        object.__setattr__(self, "gains", _readonly(g))
        if self.coeffs is not None:
            h = np.asarray(self.coeffs, dtype=complex)
            if h.shape != g.shape or not np.allclose(np.abs(h) ** 2, g, rtol=1e-12, atol=0):
                raise ValueError("gains must equal |coeffs|**2")
            object.__setattr__(self, "coeffs", _readonly(h))

    @property
    def shape(self):
        return self.gains.shape

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.gains, dtype=dtype)

    def to_csv(self) -> str:
        """One row per player, one column per BS, with a header row."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["player"] + [f"bs{s}" for s in range(self.gains.shape[1])])
        for k, row in enumerate(self.gains):
            writer.writerow([k] + [repr(float(v)) for v in row])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "ChannelMatrix":
        rows = list(csv.reader(io.StringIO(text)))
        return cls(np.array([[float(v) for v in r[1:]] for r in rows[1:]]))


def make_rng(seed: Seed) -> np.random.Generator:
    """PCG64 generator; tuple seeds give independent, reproducible sub-streams."""
    if isinstance(seed, (int, np.integer)):
        entropy = int(seed)
    else:
        entropy = [int(v) for v in seed]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def draw_channels(params: NetworkParams, seed: Seed, complex_coeffs: bool = False) -> ChannelMatrix:
    """Draw i.i.d. Rayleigh-fading power gains (exponential, mean 1).

    With ``complex_coeffs`` the gains are built as |h|^2 from unit-variance
    circularly symmetric Gaussians and ``h`` is kept on the result. The two
    paths consume the stream differently, so they do not give equal gains.
    """
    rng = make_rng(seed)
    shape = (params.num_players, params.num_stations)
    if complex_coeffs:
        h = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)
        return ChannelMatrix(np.abs(h) ** 2, h)
    return ChannelMatrix(rng.standard_exponential(shape))


def _parse_value(raw: str):
    raw = raw.strip()
    if "," in raw:
        return [_parse_value(v) for v in raw.split(",") if v.strip()]
    for conv in (int, float):
        try:
            return conv(raw)
        except ValueError:
            pass
    return raw


def load_config(path: str | Path) -> dict:
    """Read ``key = value`` lines; ``#`` starts a comment, commas make lists.

    Keys are case-sensitive (``K`` and ``S`` are upper case).
    """
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        key, raw = line.split("=", 1)
        out[key.strip()] = _parse_value(raw)
    return out


def params_from_config(cfg: dict) -> NetworkParams:
    S = int(cfg["S"])
    w = cfg.get("w")
    if w is not None and not isinstance(w, list):
        w = [w]
    return params_from_snr(int(cfg.get("K", 1)), S, w, float(cfg.get("snr_db", 10.0)))
