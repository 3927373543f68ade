"""Scenario configuration documents and the bundled presets.

A document is a flat INI-like text with four sections::

    [geometry]  frequency_hz | wavelength_m, element_area_m2 (number or "isotropic")
    [link]      d_h_m, d_g_m, mu, beta_h_override, beta_g_override
    [budget]    p_tx_w, noise_w
    [sweep]     n_min, n_max, points_per_decade, models, seed

A small line parser is used instead of :mod:`configparser` so every
diagnostic can name the offending line.
"""

from __future__ import annotations

import math
from importlib import resources

from .analysis import ALL_MODELS, LinkModel, Scenario
from .exceptions import ConfigError
from .links import RadioBudget
from .propagation import ElementGeometry

SECTIONS = {
    "geometry": ("frequency_hz", "wavelength_m", "element_area_m2"),
    "link": ("d_h_m", "d_g_m", "mu", "beta_h_override", "beta_g_override"),
    "budget": ("p_tx_w", "noise_w"),
    "sweep": ("n_min", "n_max", "points_per_decade", "models", "seed"),
}
REQUIRED = ("d_h_m", "d_g_m", "p_tx_w", "noise_w")
PRESETS = ("example1", "fig2", "fig4-far", "fig4-near")


def _number(key, raw, line, *, positive=True, unit_interval=False):
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {raw!r} as a number", line) from None
    if not math.isfinite(value):
        raise ConfigError(f"{key}: value must be finite, got {raw!r}", line)
    if unit_interval and not 0.0 <= value <= 1.0:
        raise ConfigError(f"{key}: value must lie in [0, 1], got {raw!r}", line)
    if positive and not value > 0:
        raise ConfigError(f"{key}: value must be > 0, got {raw!r}", line)
    return value


def _integer(key, raw, line, minimum):
    try:
        value = int(raw)
    except ValueError:
        # allows "1e6"
        value = _number(key, raw, line, positive=False)
        if value != int(value):
            raise ConfigError(f"{key}: value must be an integer, got {raw!r}", line) from None
    if value < minimum:
        raise ConfigError(f"{key}: value must be >= {minimum}, got {raw!r}", line)
    return int(value)


def _read_entries(text):
    """Return ``{key: (raw_value, line_number)}`` after syntax and key checks."""
    entries = {}
    section = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped[0] in "#;":
            continue
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ConfigError(f"malformed section header {stripped!r}", lineno)
            section = stripped[1:-1].strip().lower()
            if section not in SECTIONS:
                raise ConfigError(f"unknown section [{section}]", lineno)
            continue
        if "=" not in stripped:
            raise ConfigError(f"expected 'key = value', got {stripped!r}", lineno)
        key, _, raw = stripped.partition("=")
        key, raw = key.strip().lower(), raw.strip()
        if section is None:
            raise ConfigError(f"key {key!r} appears before any section", lineno)
        if key not in SECTIONS[section]:
            raise ConfigError(f"unknown key {key!r} in section [{section}]", lineno)
        if key in entries:
            raise ConfigError(f"duplicate key {key!r} (first on line {entries[key][1]})", lineno)
        if not raw:
            raise ConfigError(f"{key}: empty value", lineno)
        entries[key] = (raw, lineno)
    return entries


def parse_config(text: str) -> Scenario:
    """Parse and validate a configuration document into a :class:`Scenario`.

    Defaults: ``mu = 1``, isotropic element aperture, ``seed = 0``,
    N from 1 to 10**6 with 40 points per decade, all three link models.
    """
    entries = _read_entries(text)

    if "frequency_hz" in entries and "wavelength_m" in entries:
        line = max(entries["frequency_hz"][1], entries["wavelength_m"][1])
        raise ConfigError("conflicting keys: give frequency_hz or wavelength_m, not both", line)
    if "frequency_hz" not in entries and "wavelength_m" not in entries:
        raise ConfigError("missing key: one of frequency_hz or wavelength_m is required")
    for key in REQUIRED:
        if key not in entries:
            raise ConfigError(f"missing key: {key}")

    def num(key, **kw):
        raw, line = entries[key]
        return _number(key, raw, line, **kw)

    area = None
    if "element_area_m2" in entries:
        raw, line = entries["element_area_m2"]
        if raw.lower() != "isotropic":
            area = _number("element_area_m2", raw, line)

    if "frequency_hz" in entries:
        geometry = ElementGeometry.from_frequency(num("frequency_hz"), area)
    else:
        wavelength = num("wavelength_m")
        geometry = ElementGeometry.isotropic(wavelength) if area is None else ElementGeometry(wavelength, area)

    kwargs = {}
    if "mu" in entries:
        mu = num("mu")
        if mu > 1.0:
            raise ConfigError(f"mu: value must lie in (0, 1], got {entries['mu'][0]!r}", entries["mu"][1])
        kwargs["mu"] = mu
    for key in ("beta_h_override", "beta_g_override"):
        if key in entries:
            kwargs[key] = num(key, positive=False, unit_interval=True)
    for key, minimum in (("n_min", 1), ("n_max", 1), ("points_per_decade", 1), ("seed", 0)):
        if key in entries:
            raw, line = entries[key]
            kwargs[key] = _integer(key, raw, line, minimum)
    if "models" in entries:
        raw, line = entries["models"]
        try:
            models = tuple(LinkModel.parse(m) for m in raw.split(",") if m.strip())
        except ValueError as exc:
            raise ConfigError(f"models: {exc}", line) from None
        if not models or len(set(models)) != len(models):
            raise ConfigError("models: expected a non-empty list without repeats", line)
        kwargs["models"] = models

    n_min = kwargs.get("n_min", 1)
    n_max = kwargs.get("n_max", 10**6)
    if n_max < n_min:
        line = entries["n_max"][1] if "n_max" in entries else entries["n_min"][1]
        raise ConfigError(f"n_max ({n_max}) must be >= n_min ({n_min})", line)

    d_h, d_g = num("d_h_m"), num("d_g_m")
    budget = RadioBudget(p_tx=num("p_tx_w"), noise=num("noise_w"))
    try:
        return Scenario(geometry=geometry, d_h=d_h, d_g=d_g, budget=budget, **kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def serialize_config(scenario: Scenario) -> str:
    """Render a scenario so that ``parse_config`` reproduces it exactly."""
    geom = scenario.geometry
    iso = geom.area == geom.wavelength**2 / (4.0 * math.pi)
    lines = [
        "[geometry]",
        f"wavelength_m = {geom.wavelength!r}",
        f"element_area_m2 = {'isotropic' if iso else repr(geom.area)}",
        "",
        "[link]",
        f"d_h_m = {scenario.d_h!r}",
        f"d_g_m = {scenario.d_g!r}",
        f"mu = {scenario.mu!r}",
    ]
    if scenario.beta_h_override is not None:
        lines.append(f"beta_h_override = {scenario.beta_h_override!r}")
    if scenario.beta_g_override is not None:
        lines.append(f"beta_g_override = {scenario.beta_g_override!r}")
    lines += [
        "",
        "[budget]",
        f"p_tx_w = {scenario.budget.p_tx!r}",
        f"noise_w = {scenario.budget.noise!r}",
        "",
        "[sweep]",
        f"n_min = {scenario.n_min}",
        f"n_max = {scenario.n_max}",
        f"points_per_decade = {scenario.points_per_decade}",
        f"models = {', '.join(m.value for m in scenario.models)}",
        f"seed = {scenario.seed}",
    ]
    return "\n".join(lines) + "\n"


def preset_text(name: str) -> str:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; expected one of {', '.join(PRESETS)}")
    return resources.files("reflect_lab").joinpath("presets", f"{name}.ini").read_text()


def load_preset(name: str) -> Scenario:
    return parse_config(preset_text(name))


__all__ = ["PRESETS", "SECTIONS", "parse_config", "serialize_config", "preset_text", "load_preset", "ALL_MODELS"]
