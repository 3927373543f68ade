"""scikit-learn compatible wrappers around the gain and link models.

The input ``X`` is a single column of element counts N. ``fit`` only
validates hyper-parameters and builds the underlying geometry or scenario,
so the estimators can sit in a :class:`~sklearn.pipeline.Pipeline` or be
cloned and grid-searched like any other transformer.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .analysis import LinkModel, Scenario, model_snr, rate
from .exceptions import SaturationError
from .links import RadioBudget
from .propagation import (
    ElementGeometry,
    GainModel,
    PropagationPath,
    far_field_gain_array,
    free_space_gain,
    planar_gain_array,
    rule_of_thumb_max,
    spherical_cap,
)

__all__ = ["check_element_counts", "TotalGainTransformer", "LinkRateEstimator"]


def check_element_counts(X) -> np.ndarray:
    """Validate ``X`` as positive integer element counts and return them flat.

    Accepts a 1-D sequence or an ``(n_samples, 1)`` array.
    """
    arr = np.asarray(X)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    arr = check_array(arr, dtype=np.float64, ensure_2d=True)
    if arr.shape[1] != 1:
        raise ValueError(f"expected a single column of element counts, got {arr.shape[1]} columns")
    n = arr[:, 0]
    if np.any(n < 1) or np.any(n != np.floor(n)):
        raise ValueError("element counts must be positive integers")
    return n


def _geometry(wavelength, element_area):
    if element_area is None:
        return ElementGeometry.isotropic(float(wavelength))
    return ElementGeometry(float(wavelength), float(element_area))


class TotalGainTransformer(TransformerMixin, BaseEstimator):
    """Map element counts to the total array gain.

    Parameters
    ----------
    model : {"planar_exact", "far_field", "spherical"}, default="planar_exact"
        Gain model. ``spherical`` raises :class:`SaturationError` for any N
        above the energy-conservation cap.
    wavelength : float, default=0.1
        Carrier wavelength in metres.
    element_area : float or None, default=None
        Element aperture in square metres; ``None`` means isotropic.
    distance : float, default=2.5
        Distance from the transmitter to the array centre in metres.

    Attributes
    ----------
    geometry_ : ElementGeometry
    beta_ : float
        Single-element free-space gain.
    n_star_ : int
        Largest N passing the far-field rule of thumb.
    """

    def __init__(self, model="planar_exact", wavelength=0.1, element_area=None, distance=2.5):
        self.model = model
        self.wavelength = wavelength
        self.element_area = element_area
        self.distance = distance

    def fit(self, X=None, y=None):
        self.model_ = GainModel(self.model)
        self.geometry_ = _geometry(self.wavelength, self.element_area)
        self.path_ = PropagationPath(float(self.distance))
        self.beta_ = free_space_gain(self.geometry_, self.path_)
        self.n_star_ = rule_of_thumb_max(self.geometry_, self.path_)
        if X is not None:
            check_element_counts(X)
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, "geometry_")
        n = check_element_counts(X)
        area, d = self.geometry_.area, self.path_.distance
        if self.model_ is GainModel.PLANAR_EXACT:
            out = planar_gain_array(n, area, d)
        elif self.model_ is GainModel.FAR_FIELD:
            out = far_field_gain_array(n, area, d)
        else:
            cap = spherical_cap(self.beta_)
            if np.any(n > cap):
                raise SaturationError(int(n[n > cap][0]), cap)
            out = np.minimum(n * self.beta_, 1.0)
        return np.asarray(out, dtype=float).reshape(-1, 1)

    def far_field_valid(self, X) -> np.ndarray:
        check_is_fitted(self, "geometry_")
        return check_element_counts(X) <= self.n_star_

    def get_feature_names_out(self, input_features=None):
        return np.asarray([f"rho_{GainModel(self.model).value}"], dtype=object)


class LinkRateEstimator(TransformerMixin, BaseEstimator):
    """Predict the rate of one link model from the element count.

    ``predict`` returns rates in bits per channel use; ``transform`` returns
    the two columns ``(snr, rate)``.

    Parameters
    ----------
    model : {"mmimo", "irs_far_field", "irs_exact"}, default="mmimo"
    wavelength, element_area : see :class:`TotalGainTransformer`
    d_h : float, default=25.0
        Transmitter to array (or IRS) distance in metres.
    d_g : float, default=25.0
        IRS to receiver distance in metres.
    p_tx, noise : float
        Transmit and noise power in watts.
    mu : float, default=1.0
        IRS amplitude reflection coefficient.
    beta_h, beta_g : float or None
        Pinned per-element gains; ``None`` derives them from the distances.
    """

    def __init__(self, model="mmimo", wavelength=0.1, element_area=None, d_h=25.0, d_g=25.0,
                 p_tx=0.01, noise=1e-8, mu=1.0, beta_h=None, beta_g=None):
        self.model = model
        self.wavelength = wavelength
        self.element_area = element_area
        self.d_h = d_h
        self.d_g = d_g
        self.p_tx = p_tx
        self.noise = noise
        self.mu = mu
        self.beta_h = beta_h
        self.beta_g = beta_g

    @classmethod
    def from_scenario(cls, scenario: Scenario, model="mmimo"):
        g = scenario.geometry
        return cls(
            model=model, wavelength=g.wavelength, element_area=g.area, d_h=scenario.d_h,
            d_g=scenario.d_g, p_tx=scenario.budget.p_tx, noise=scenario.budget.noise,
            mu=scenario.mu, beta_h=scenario.beta_h_override, beta_g=scenario.beta_g_override,
        )

    def fit(self, X=None, y=None):
        self.model_ = LinkModel.parse(self.model)
        self.scenario_ = Scenario(
            geometry=_geometry(self.wavelength, self.element_area),
            d_h=float(self.d_h),
            d_g=float(self.d_g),
            budget=RadioBudget(float(self.p_tx), float(self.noise)),
            mu=float(self.mu),
            beta_h_override=self.beta_h,
            beta_g_override=self.beta_g,
        )
        # surfaces domain errors at fit time
        self.scenario_.beta_h, self.scenario_.beta_g
        if X is not None:
            check_element_counts(X)
        self.n_features_in_ = 1
        return self

    def _snr(self, X):
        check_is_fitted(self, "scenario_")
        n = check_element_counts(X)
        return np.array([model_snr(self.scenario_, self.model_, int(v)) for v in n])

    def transform(self, X):
        snr = self._snr(X)
        rates = np.array([rate(s) for s in snr])
        return np.column_stack([snr, rates])

    def predict(self, X):
        return self.transform(X)[:, 1]

    def get_feature_names_out(self, input_features=None):
        return np.asarray(["snr", "rate_bpcu"], dtype=object)
