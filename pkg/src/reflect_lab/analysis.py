"""Rates, N sweeps, breakeven search and required-power scaling."""

from __future__ import annotations

import enum
import hashlib
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .exceptions import ReflectLabError, UnreachableTargetError
from .links import RadioBudget, irs_far_field_snr, irs_snr_exact, mmimo_snr
from .propagation import (
    ElementGeometry,
    PropagationPath,
    far_field_gain_array,
    free_space_gain,
    planar_gain_array,
    rule_of_thumb_max,
)

BREAKEVEN_CAP = 10**12


class LinkModel(str, enum.Enum):
    MMIMO = "mmimo"
    IRS_FAR_FIELD = "irs_far_field"
    IRS_EXACT = "irs_exact"

    @classmethod
    def parse(cls, name) -> "LinkModel":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("-", "_")
        try:
            return cls(key)
        except ValueError:
            choices = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown model {name!r}; expected one of {choices}") from None

    @property
    def order(self) -> int:
        return list(type(self)).index(self)


ALL_MODELS = tuple(LinkModel)


def log_grid(n_min: int, n_max: int, points_per_decade: int) -> list[int]:
    """Strictly increasing integer grid, log-spaced, including both endpoints."""
    if n_min < 1:
        raise ValueError(f"n_min must be >= 1, got {n_min}")
    if n_max < n_min:
        raise ValueError(f"n_max ({n_max}) must be >= n_min ({n_min})")
    if points_per_decade < 1:
        raise ValueError(f"points_per_decade must be >= 1, got {points_per_decade}")
    decades = math.log10(n_max) - math.log10(n_min)
    num = max(int(round(decades * points_per_decade)) + 1, 1)
    raw = np.logspace(math.log10(n_min), math.log10(n_max), num)
    grid = np.unique(np.clip(np.rint(raw), n_min, n_max).astype(np.int64))
    return [int(v) for v in grid]


@dataclass(frozen=True)
class Scenario:
    """Full parameterisation of one comparison experiment.

    ``beta_h_override`` and ``beta_g_override`` pin the per-element gains
    directly; when absent the gains follow ``A / (4 pi d**2)``.
    """

    geometry: ElementGeometry
    d_h: float
    d_g: float
    budget: RadioBudget
    mu: float = 1.0
    beta_h_override: float | None = None
    beta_g_override: float | None = None
    n_min: int = 1
    n_max: int = 10**6
    points_per_decade: int = 40
    models: tuple = ALL_MODELS
    seed: int = 0

    def __post_init__(self):
        PropagationPath(self.d_h)
        PropagationPath(self.d_g)
        if not 0.0 < self.mu <= 1.0:
            raise ValueError(f"mu must lie in (0, 1], got {self.mu!r}")
        for name in ("beta_h_override", "beta_g_override"):
            v = getattr(self, name)
            if v is not None and not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v!r}")
        object.__setattr__(self, "models", tuple(LinkModel.parse(m) for m in self.models))
        if not self.models:
            raise ValueError("at least one model is required")
        # validates n_min/n_max/points_per_decade
        log_grid(self.n_min, self.n_max, self.points_per_decade)

    @property
    def n_grid(self) -> list[int]:
        return log_grid(self.n_min, self.n_max, self.points_per_decade)

    @property
    def beta_h(self) -> float:
        if self.beta_h_override is not None:
            return self.beta_h_override
        return free_space_gain(self.geometry, self.d_h)

    @property
    def beta_g(self) -> float:
        if self.beta_g_override is not None:
            return self.beta_g_override
        return free_space_gain(self.geometry, self.d_g)

    @property
    def beta_convention(self) -> dict:
        return {
            "beta_h": "override" if self.beta_h_override is not None else "free_space",
            "beta_g": "override" if self.beta_g_override is not None else "free_space",
        }

    def to_dict(self) -> dict:
        d = asdict(self)
        d["models"] = [m.value for m in self.models]
        return d

    def digest(self) -> str:
        from .config import serialize_config

        return hashlib.sha256(serialize_config(self).encode()).hexdigest()[:16]


@dataclass(frozen=True)
class LinkResult:
    n: int
    model: LinkModel
    snr: float
    rate: float
    far_field_valid: bool
    energy_bound_exceeded: bool
    error: str | None = None


@dataclass
class SweepTable:
    scenario_digest: str
    rows: list
    metadata: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.rows)

    def select(self, model) -> list:
        model = LinkModel.parse(model)
        return [r for r in self.rows if r.model is model]


@dataclass(frozen=True)
class GainRow:
    n: int
    rho_exact: float
    rho_far_field: float
    relative_error: float
    far_field_valid: bool


def rate(snr: float) -> float:
    """Spectral efficiency ``log2(1 + snr)`` in bits per channel use."""
    if snr < 0 or math.isnan(snr):
        raise ValueError(f"snr must be non-negative, got {snr!r}")
    return math.log2(1.0 + snr)


def model_snr(scenario: Scenario, model, n: int, p_tx: float | None = None) -> float:
    """SNR of one link model at N elements; ``p_tx`` overrides the budget power."""
    model = LinkModel.parse(model)
    budget = scenario.budget
    if p_tx is not None:
        budget = RadioBudget(p_tx=p_tx, noise=budget.noise)
    if model is LinkModel.MMIMO:
        return mmimo_snr(n, scenario.beta_h, budget)
    if model is LinkModel.IRS_FAR_FIELD:
        return irs_far_field_snr(n, scenario.beta_g, scenario.beta_h, scenario.mu, budget)
    return irs_snr_exact(n, scenario.geometry, scenario.d_g, scenario.beta_h, scenario.mu, budget)


def _row(scenario: Scenario, model: LinkModel, n: int) -> LinkResult:
    rot_h = rule_of_thumb_max(scenario.geometry, scenario.d_h)
    rot_g = rule_of_thumb_max(scenario.geometry, scenario.d_g)
    try:
        snr = model_snr(scenario, model, n)
        beta_h = scenario.beta_h
        if model is LinkModel.MMIMO:
            valid = n <= rot_h
            exceeded = n * beta_h > 1.0
        elif model is LinkModel.IRS_FAR_FIELD:
            valid = n <= min(rot_h, rot_g)
            exceeded = n * scenario.beta_g > 1.0
        else:
            valid = n <= rot_h
            exceeded = n * beta_h > 1.0
        return LinkResult(n, model, snr, rate(snr), valid, exceeded)
    except ReflectLabError as exc:
        return LinkResult(n, model, math.nan, math.nan, False, False, error=str(exc))


def run_sweep(scenario: Scenario, models=None) -> SweepTable:
    """Evaluate every requested model on the scenario's N grid.

    Far-field IRS rows past ``N = 1 / beta_g`` are kept and flagged with
    ``energy_bound_exceeded``; the consumer decides whether to truncate. The
    mMIMO and exact-IRS rows carry the same flag for ``N * beta_h > 1``.
    A model error on one row is recorded on that row instead of aborting.
    """
    models = scenario.models if models is None else tuple(LinkModel.parse(m) for m in models)
    rows = [_row(scenario, m, n) for m in set(models) for n in scenario.n_grid]
    rows.sort(key=lambda r: (r.model.order, r.n))
    return SweepTable(
        scenario_digest=scenario.digest(),
        rows=rows,
        metadata={"seed": scenario.seed, "version": __version__},
    )


def gain_sweep(scenario: Scenario) -> list:
    """Total gain against N over the scenario grid for the transmitter-to-array hop ``d_h``."""
    geom, d = scenario.geometry, scenario.d_h
    free_space_gain(geom, d)  # domain check
    grid = np.asarray(scenario.n_grid)
    exact = planar_gain_array(grid, geom.area, d)
    approx = far_field_gain_array(grid, geom.area, d)
    rot = rule_of_thumb_max(geom, d)
    return [
        GainRow(int(n), float(e), float(a), float(abs(a - e) / e), bool(n <= rot))
        for n, e, a in zip(grid, exact, approx)
    ]


def breakeven_elements(scenario: Scenario, model, n_ref: int, cap: int = BREAKEVEN_CAP) -> int:
    """Smallest IRS size whose rate reaches that of an ``n_ref``-antenna mMIMO array.

    Doubles N from 1 until the target is bracketed, then bisects on integers.
    Both IRS rates are strictly increasing in N, so the answer is exact:
    ``rate(N_be) >= target`` and ``rate(N_be - 1) < target``.

    Raises
    ------
    UnreachableTargetError
        If even ``cap`` elements fall short of the target.
    """
    model = LinkModel.parse(model)
    if model is LinkModel.MMIMO:
        raise ValueError("breakeven needs an IRS model")
    if n_ref < 1:
        raise ValueError(f"n_ref must be >= 1, got {n_ref}")
    target = rate(model_snr(scenario, LinkModel.MMIMO, n_ref))

    def reaches(n):
        return rate(model_snr(scenario, model, n)) >= target

    hi = 1
    while not reaches(hi):
        if hi >= cap:
            raise UnreachableTargetError(target, rate(model_snr(scenario, model, cap)), cap)
        hi = min(hi * 2, cap)
    lo = hi // 2  # rate(lo) < target, or lo == 0
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if reaches(mid):
            hi = mid
        else:
            lo = mid
    return hi


def required_power(scenario: Scenario, model, n: int, target_snr: float) -> float:
    """Transmit power in watts that gives ``target_snr`` with N elements.

    Scales as ``1/N`` for mMIMO and ``1/N**2`` for the far-field IRS model.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not target_snr > 0:
        raise ValueError(f"target_snr must be > 0, got {target_snr!r}")
    model = LinkModel.parse(model)
    noise = scenario.budget.noise
    mu2 = scenario.mu * scenario.mu
    if model is LinkModel.MMIMO:
        gain = n * scenario.beta_h
    elif model is LinkModel.IRS_FAR_FIELD:
        gain = mu2 * n * n * scenario.beta_g * scenario.beta_h
    else:
        alpha_g = float(planar_gain_array(n, scenario.geometry.area, scenario.d_g))
        gain = mu2 * n * alpha_g * scenario.beta_h
    return target_snr * noise / gain
