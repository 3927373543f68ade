"""Line-of-sight channel vectors, receive combining and the four SNR expressions.

The vector forms (``combiner_snr``, ``irs_snr``) work on explicit complex
channels; the closed forms (``mmimo_snr``, ``irs_far_field_snr``,
``irs_snr_exact``) depend only on N and the gains and are what the sweeps use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .propagation import ElementGeometry, planar_gain_array

TWO_PI = 2.0 * math.pi

__all__ = [
    "RadioBudget",
    "ChannelVector",
    "ReflectionConfig",
    "Combiner",
    "Factorization",
    "random_phases",
    "build_los_channel",
    "combiner_snr",
    "mrc_combiner",
    "mrc_snr",
    "mmimo_snr",
    "optimal_irs_phases",
    "irs_snr",
    "irs_far_field_snr",
    "irs_snr_factorized",
    "irs_combiner_loss",
    "irs_snr_exact",
]


@dataclass(frozen=True)
class RadioBudget:
    """Transmit power and receiver noise power, both in watts."""

    p_tx: float
    noise: float

    def __post_init__(self):
        for name in ("p_tx", "noise"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be finite and > 0, got {v!r}")

    @property
    def ratio(self) -> float:
        return self.p_tx / self.noise


def _readonly(a):
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ChannelVector:
    """LoS channel ``sqrt(gain) * exp(j * phases)``.

    ``phases`` is stored wrapped to ``[0, 2 pi)`` and read-only.
    """

    gain: float
    phases: np.ndarray

    def __post_init__(self):
        if not 0.0 <= self.gain <= 1.0:
            raise ValueError(f"channel gain must lie in [0, 1], got {self.gain!r}")
        phases = np.asarray(self.phases, dtype=float).reshape(-1)
        if phases.size < 1:
            raise ValueError("a channel needs at least one element")
        if not np.all(np.isfinite(phases)):
            raise ValueError("phases must be finite")
        phases = np.mod(phases, TWO_PI)
        # mod can round a tiny negative angle up to exactly 2*pi
        phases[phases >= TWO_PI] = 0.0
        object.__setattr__(self, "phases", _readonly(phases))

    def __len__(self):
        return self.phases.size

    @property
    def n(self) -> int:
        return self.phases.size

    @property
    def entries(self) -> np.ndarray:
        return math.sqrt(self.gain) * np.exp(1j * self.phases)

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.entries) ** 2))


@dataclass(frozen=True, eq=False)
class ReflectionConfig:
    """IRS amplitude coefficient ``mu`` and per-element phase shifts ``thetas``."""

    mu: float
    thetas: np.ndarray

    def __post_init__(self):
        if not 0.0 < self.mu <= 1.0:
            raise ValueError(f"mu must lie in (0, 1], got {self.mu!r}")
        thetas = np.asarray(self.thetas, dtype=float).reshape(-1)
        object.__setattr__(self, "thetas", _readonly(thetas))

    def matrix_diagonal(self) -> np.ndarray:
        """Diagonal of ``Theta = mu * diag(exp(-j thetas))``."""
        return self.mu * np.exp(-1j * self.thetas)


@dataclass(frozen=True, eq=False)
class Combiner:
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=complex).reshape(-1)
        if not np.any(w != 0):
            raise ValueError("combiner must not be all-zero")
        object.__setattr__(self, "weights", _readonly(w))


@dataclass(frozen=True)
class Factorization:
    reflected_fraction: float
    mmimo_snr: float
    product: float
    energy_bound_exceeded: bool


def random_phases(n: int, seed=None) -> np.ndarray:
    """Uniform phases on ``[0, 2 pi)`` from a seeded generator."""
    rng = np.random.default_rng(seed)
    return rng.uniform(0.0, TWO_PI, size=int(n))


def build_los_channel(gain: float, phases) -> ChannelVector:
    return ChannelVector(gain=float(gain), phases=phases)


def _check_same_length(a, b):
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} != {len(b)}")


def combiner_snr(v: Combiner, h: ChannelVector, budget: RadioBudget) -> float:
    """SNR ``|v^T h|^2 P / (||v||^2 sigma^2)`` for an arbitrary combiner.

    Invariant to scaling ``v`` by any nonzero complex constant.
    """
    if not isinstance(v, Combiner):
        v = Combiner(v)
    _check_same_length(v.weights, h)
    signal = abs(np.dot(v.weights, h.entries)) ** 2
    return float(signal * budget.p_tx / (np.sum(np.abs(v.weights) ** 2) * budget.noise))


def mrc_combiner(h: ChannelVector) -> Combiner:
    e = h.entries
    return Combiner(np.conj(e) / np.linalg.norm(e))


def mmimo_snr(n: int, beta_h: float, budget: RadioBudget) -> float:
    """Closed-form MRC SNR ``N * beta_h * P / sigma^2``."""
    return n * beta_h * budget.ratio


def mrc_snr(h: ChannelVector, budget: RadioBudget) -> float:
    """MRC SNR ``||h||^2 P / sigma^2``; depends only on N and the gain."""
    return mmimo_snr(h.n, h.gain, budget)


def optimal_irs_phases(h: ChannelVector, g: ChannelVector) -> np.ndarray:
    """Phase shifts ``theta_n = phi_n + psi_n`` (mod 2 pi) aligning every cascade term."""
    _check_same_length(h, g)
    theta = np.mod(h.phases + g.phases, TWO_PI)
    theta[theta >= TWO_PI] = 0.0
    return theta


def _cascade(h: ChannelVector, g: ChannelVector, thetas) -> complex:
    """``g^T diag(exp(-j thetas)) h`` without the amplitude coefficient."""
    return complex(np.sum(g.entries * np.exp(-1j * np.asarray(thetas)) * h.entries))


def irs_snr(h: ChannelVector, g: ChannelVector, cfg: ReflectionConfig, budget: RadioBudget) -> float:
    """Received SNR through the IRS for the given reflection configuration.

    The amplitude coefficient enters once as ``mu**2``; the phase-only cascade
    ``g^T diag(exp(-j theta)) h`` carries the rest.
    """
    _check_same_length(h, g)
    if len(cfg.thetas) != len(h):
        raise ValueError(f"length mismatch: {len(cfg.thetas)} thetas for N={len(h)}")
    c = _cascade(h, g, cfg.thetas)
    return cfg.mu**2 * (c.real * c.real + c.imag * c.imag) * budget.ratio


def irs_far_field_snr(n: int, beta_g: float, beta_h: float, mu: float, budget: RadioBudget) -> float:
    """Closed-form optimally phased IRS SNR ``mu^2 N^2 beta_g beta_h P / sigma^2``.

    Evaluated as ``(mu^2 N beta_g) * (N beta_h P / sigma^2)`` so the result never
    exceeds the MRC SNR whenever the reflected fraction is at most one.
    """
    return (mu * mu * n * beta_g) * mmimo_snr(n, beta_h, budget)


def irs_combiner_loss(g: ChannelVector, mu: float) -> float:
    """``||Theta g||^2 = mu^2 beta_g N``, the loss of the IRS viewed as a combiner."""
    return mu * mu * g.gain * g.n


def irs_snr_factorized(h: ChannelVector, g: ChannelVector, mu: float, budget: RadioBudget) -> Factorization:
    """Split the optimal IRS SNR into reflected fraction times the MRC SNR.

    ``energy_bound_exceeded`` is set when the reflected fraction exceeds one,
    i.e. the far-field model is being used past ``N = 1 / beta_g``.
    """
    _check_same_length(h, g)
    fraction = irs_combiner_loss(g, mu)
    snr_m = mrc_snr(h, budget)
    return Factorization(
        reflected_fraction=fraction,
        mmimo_snr=snr_m,
        product=fraction * snr_m,
        energy_bound_exceeded=fraction > 1.0,
    )


def irs_snr_exact(n: int, geom: ElementGeometry, d_g: float, beta_h: float, mu: float,
                  budget: RadioBudget) -> float:
    """IRS SNR with the exact planar gain on the IRS-to-receiver hop."""
    alpha_g = float(planar_gain_array(n, geom.area, float(d_g)))
    return mu * mu * n * alpha_g * beta_h * budget.ratio
