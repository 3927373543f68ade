"""Scalar propagation-gain models for a single transmitter and a receive array.

Three total-gain models are provided:

* ``spherical``  -- N antennas tiling a sphere around the transmitter, ``N * beta``,
  capped by energy conservation.
* ``far_field``  -- the same linear law used for a planar array, flagged with
  the rule-of-thumb validity check but never rejected.
* ``planar_exact`` -- closed-form power collected by a broadside square planar
  array of N elements whose centre is the point closest to the transmitter.

All functions are pure. Arrays of N are accepted by the ``*_array`` helpers,
which the estimators and sweeps use.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ModelError, SaturationError

SPEED_OF_LIGHT = 299_792_458.0  # m/s, exact

# Beyond this N the sum N*A + d**2 loses the d**2 term for typical A and d.
MAX_EXACT_N = 10**15

__all__ = [
    "SPEED_OF_LIGHT",
    "GainModel",
    "ElementGeometry",
    "PropagationPath",
    "TotalGain",
    "free_space_gain",
    "spherical_total_gain",
    "spherical_cap",
    "planar_exact_gain",
    "far_field_gain",
    "rule_of_thumb_max",
    "far_field_relative_error",
    "planar_gain_array",
    "far_field_gain_array",
]


class GainModel(str, enum.Enum):
    SPHERICAL = "spherical"
    PLANAR_EXACT = "planar_exact"
    FAR_FIELD = "far_field"


@dataclass(frozen=True)
class ElementGeometry:
    """Wavelength and effective aperture of a single antenna or IRS element.

    Parameters
    ----------
    wavelength : float
        Carrier wavelength in metres.
    area : float
        Effective element area in square metres.
    """

    wavelength: float
    area: float

    def __post_init__(self):
        if not (math.isfinite(self.wavelength) and self.wavelength > 0):
            raise ValueError(f"wavelength must be finite and > 0, got {self.wavelength!r}")
        if not (math.isfinite(self.area) and self.area > 0):
            raise ValueError(f"area must be finite and > 0, got {self.area!r}")

    @classmethod
    def isotropic(cls, wavelength: float) -> "ElementGeometry":
        """Lossless isotropic antenna, ``A = wavelength**2 / (4 pi)``."""
        return cls(wavelength=wavelength, area=wavelength**2 / (4.0 * math.pi))

    @classmethod
    def from_frequency(cls, frequency: float, area: float | None = None) -> "ElementGeometry":
        if not (math.isfinite(frequency) and frequency > 0):
            raise ValueError(f"frequency must be finite and > 0, got {frequency!r}")
        wavelength = SPEED_OF_LIGHT / frequency
        if area is None:
            return cls.isotropic(wavelength)
        return cls(wavelength=wavelength, area=area)

    @property
    def is_isotropic(self) -> bool:
        iso = self.wavelength**2 / (4.0 * math.pi)
        return abs(self.area - iso) <= 1e-12 * iso


@dataclass(frozen=True)
class PropagationPath:
    """Perpendicular distance from the transmitter to the array centre, in metres."""

    distance: float

    def __post_init__(self):
        if not (math.isfinite(self.distance) and self.distance > 0):
            raise ValueError(f"distance must be finite and > 0, got {self.distance!r}")


@dataclass(frozen=True)
class TotalGain:
    """Fraction of the transmit power collected by a whole array."""

    value: float
    model: GainModel
    far_field_valid: bool

    def __float__(self):
        return float(self.value)


def _as_path(path) -> PropagationPath:
    if isinstance(path, PropagationPath):
        return path
    return PropagationPath(float(path))


def _check_n(n) -> int:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError(f"N must be a positive integer, got {n!r}")
    return int(n)


def free_space_gain(geom: ElementGeometry, path) -> float:
    """Free-space channel gain ``A / (4 pi d**2)`` of one element.

    Raises
    ------
    ModelError
        If the aperture exceeds the sphere surface, which would give a gain above one.
    """
    path = _as_path(path)
    sphere = 4.0 * math.pi * path.distance**2
    if geom.area > sphere:
        raise ModelError(
            f"element area {geom.area:.6g} m^2 exceeds sphere area {sphere:.6g} m^2 "
            f"at d={path.distance:.6g} m; gain would exceed 1"
        )
    return geom.area / sphere


def spherical_cap(beta: float) -> int:
    """Largest N with ``N * beta <= 1`` in floating point.

    Starts from ``floor(1 / beta)`` and corrects the last-place rounding of the
    reciprocal, so ``beta = 1e-5`` yields exactly ``100000``.
    """
    if not 0 < beta <= 1:
        raise ValueError(f"beta must lie in (0, 1], got {beta!r}")
    cap = math.floor(1.0 / beta)
    while (cap + 1) * beta <= 1.0:
        cap += 1
    while cap > 0 and cap * beta > 1.0:
        cap -= 1
    return cap


def spherical_total_gain(n: int, beta: float) -> TotalGain:
    """Total gain ``N * beta`` of N non-overlapping antennas on the sphere.

    Raises :class:`SaturationError` carrying ``n_max`` once ``N * beta > 1``.
    """
    n = _check_n(n)
    if not 0 <= beta <= 1:
        raise ValueError(f"beta must lie in [0, 1], got {beta!r}")
    value = n * beta
    if value > 1.0:
        raise SaturationError(n, spherical_cap(beta))
    return TotalGain(value=value, model=GainModel.SPHERICAL, far_field_valid=True)


def planar_gain_array(n, area: float, distance: float) -> np.ndarray:
    """Vectorised exact planar-array gain for an array of element counts.

    Uses ``1/2 - atan(1/x) / pi`` for ``x > 1`` so the result stays strictly
    below one half for every finite N.
    """
    na = np.asarray(n, dtype=float) * area
    x = na / (4.0 * distance * np.sqrt(na + distance * distance))
    with np.errstate(divide="ignore"):
        return np.where(
            x > 1.0,
            0.5 - np.arctan(1.0 / np.where(x > 1.0, x, 1.0)) / np.pi,
            np.arctan(x) / np.pi,
        )


def far_field_gain_array(n, area: float, distance: float) -> np.ndarray:
    return np.asarray(n, dtype=float) * (area / (4.0 * math.pi * distance * distance))


def rule_of_thumb_max(geom: ElementGeometry, path) -> int:
    """Largest N satisfying ``N * A / 10 < d**2``.

    The inequality is strict, so an exact integer bound ``10 d**2 / A`` is
    excluded.
    """
    path = _as_path(path)
    bound = 10.0 * path.distance**2 / geom.area
    n_star = math.ceil(bound) - 1
    return max(n_star, 0)


def planar_exact_gain(n: int, geom: ElementGeometry, path) -> TotalGain:
    n = _check_n(n)
    path = _as_path(path)
    value = float(planar_gain_array(n, geom.area, path.distance))
    return TotalGain(
        value=value,
        model=GainModel.PLANAR_EXACT,
        far_field_valid=n <= rule_of_thumb_max(geom, path),
    )


def far_field_gain(n: int, geom: ElementGeometry, path) -> TotalGain:
    """Linear far-field law ``N * beta``.

    Never raises for large N; ``far_field_valid`` reports the rule-of-thumb check
    so sweeps can deliberately run past it.
    """
    n = _check_n(n)
    path = _as_path(path)
    beta = free_space_gain(geom, path)
    return TotalGain(
        value=n * beta,
        model=GainModel.FAR_FIELD,
        far_field_valid=n <= rule_of_thumb_max(geom, path),
    )


def far_field_relative_error(n: int, geom: ElementGeometry, path) -> float:
    """Relative error ``|N beta - alpha| / alpha`` of the linear law against the exact gain."""
    exact = planar_exact_gain(n, geom, path).value
    approx = far_field_gain(n, geom, path).value
    return abs(approx - exact) / exact
