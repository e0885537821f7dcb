"""Model presets and sweep settings read from a TOML document."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field, replace
from importlib import resources

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

import numpy as np

from ._errors import ParameterError
from .analysis import default_n_grid
from .horizons import HorizonSpec, scaled_spec
from .series import ArfimaParams, FbmParams, GbmParams, gen_arfima, gen_fbm, gen_gbm, integrate

__all__ = ["Preset", "SweepConfig", "load_presets", "generate_series"]

_MODELS = ("gbm", "fbm", "arfima")


@dataclass(frozen=True)
class Preset:
    label: str
    model: str
    group: str = ""
    hurst: float | None = None
    d: float | None = None
    phi: tuple[float, ...] = ()
    theta: tuple[float, ...] = ()
    mu: float = 0.0
    sigma: float = 0.0

    def __post_init__(self):
        if self.model not in _MODELS:
            raise ParameterError(f"preset {self.label!r}: unknown model {self.model!r}")
        if self.model == "fbm" and (self.hurst is None or not 0.0 < self.hurst < 1.0):
            raise ParameterError(f"preset {self.label!r}: hurst must lie in (0, 1)")
        if self.model == "arfima":
            if self.d is None or not -0.5 < self.d < 0.5:
                raise ParameterError(f"preset {self.label!r}: d must lie in (-0.5, 0.5)")
            if self.hurst is not None and abs(self.hurst - (self.d + 0.5)) > 1e-12:
                raise ParameterError(
                    f"preset {self.label!r}: H={self.hurst} inconsistent with d={self.d}"
                )
        if self.model == "gbm" and self.sigma < 0:
            raise ParameterError(f"preset {self.label!r}: sigma must be non-negative")


@dataclass(frozen=True)
class SweepConfig:
    """Everything needed to regenerate a sweep bit for bit."""

    presets: dict[str, Preset]
    scale: float = 0.125
    n_seeds: int = 20
    base_seed: int = 0
    benchmark_seed: int = 100_000
    benchmark_hurst: float = 0.5
    n_windows: int = 20
    n_min_window: int = 10
    n_max_fraction: float = 0.05
    n_grid: tuple[int, ...] | None = None
    integrate_arfima: bool = True
    include_boundary: bool = False
    ar_convention: str = "minus"
    selection: tuple[str, ...] = field(default=())

    def __getitem__(self, label: str) -> Preset:
        return self.presets[label]

    @property
    def spec(self) -> HorizonSpec:
        return scaled_spec(self.scale)

    @property
    def windows(self) -> list[int]:
        if self.n_grid is not None:
            return list(self.n_grid)
        return default_n_grid(
            self.spec.n_min, self.n_windows, self.n_min_window, self.n_max_fraction
        )

    @property
    def selected(self) -> list[str]:
        """Labels to run, in config order."""
        return list(self.selection) if self.selection else list(self.presets)

    def select(self, labels) -> "SweepConfig":
        labels = tuple(labels)
        unknown = [v for v in labels if v not in self.presets]
        if unknown:
            raise ParameterError(f"unknown preset labels {unknown}")
        return replace(self, selection=labels)

    def group(self, name: str) -> list[str]:
        return [k for k, p in self.presets.items() if p.group == name]

    def member_seeds(self) -> list[int]:
        return [self.base_seed + i for i in range(self.n_seeds)]

    def benchmark_seeds(self) -> list[int]:
        return [self.benchmark_seed + i for i in range(self.n_seeds)]

    def as_dict(self) -> dict:
        return {
            "scale": self.scale,
            "n_seeds": self.n_seeds,
            "base_seed": self.base_seed,
            "benchmark_seed": self.benchmark_seed,
            "benchmark_hurst": self.benchmark_hurst,
            "n_grid": self.windows,
            "integrate_arfima": self.integrate_arfima,
            "include_boundary": self.include_boundary,
            "ar_convention": self.ar_convention,
            "presets": self.selected,
        }


def load_presets(path=None, **overrides) -> SweepConfig:
    """Read a preset document; the packaged defaults when ``path`` is None.

    Keyword ``overrides`` replace ``[sweep]`` settings. Raises
    :class:`ParameterError` on duplicate labels or invalid parameters.
    """
    if path is None:
        text = resources.files("clusterentropy").joinpath("data/presets.toml").read_text()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ParameterError(f"malformed preset file: {exc}") from None

    presets: dict[str, Preset] = {}
    for row in doc.get("preset", []):
        row = dict(row)
        label = row.get("label")
        if not label:
            raise ParameterError("preset without a label")
        if label in presets:
            raise ParameterError(f"duplicate preset label {label!r}")
        row["phi"] = tuple(row.get("phi", ()))
        row["theta"] = tuple(row.get("theta", ()))
        try:
            presets[label] = Preset(**row)
        except TypeError as exc:
            raise ParameterError(f"preset {label!r}: {exc}") from None

    settings = dict(doc.get("sweep", {}))
    settings.update({k: v for k, v in overrides.items() if v is not None})
    if "n_grid" in settings and settings["n_grid"] is not None:
        settings["n_grid"] = tuple(int(v) for v in settings["n_grid"])
    try:
        config = SweepConfig(presets=presets, **settings)
    except TypeError as exc:
        raise ParameterError(f"bad [sweep] settings: {exc}") from None
    if config.ar_convention not in ("minus", "plus"):
        raise ParameterError(f"unknown ar_convention {config.ar_convention!r}")
    if config.n_seeds < 1:
        raise ParameterError("n_seeds must be >= 1")
    config.spec  # validates the scale
    return config


def generate_series(preset: Preset, n_steps: int, seed: int, config: SweepConfig | None = None) -> np.ndarray:
    """Full-length path of one preset, ready for horizon resampling.

    GBM and FBM give the path itself. ARFIMA gives the increments, which are
    summed into a path when ``config.integrate_arfima`` is set.
    """
    if preset.model == "gbm":
        return gen_gbm(GbmParams(preset.mu, preset.sigma, 1.0, n_steps, seed))
    if preset.model == "fbm":
        return gen_fbm(FbmParams(preset.hurst, n_steps, seed))
    conv = config.ar_convention if config is not None else "minus"
    x = gen_arfima(
        ArfimaParams(
            d=preset.d, phi=preset.phi, theta=preset.theta,
            n_steps=n_steps, seed=seed, ar_convention=conv,
        )
    )
    if config is None or config.integrate_arfima:
        x = integrate(x)
    return x
