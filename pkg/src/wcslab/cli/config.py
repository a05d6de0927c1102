"""Experiment configuration: loading, validation and hashing.

A config is a single YAML or JSON mapping::

    experiment: sarason_dilation          # registered id (required)
    generator: {b: 0, P: {kind: constant, c: 1}}   # or "dilation" / "boundary_model"
    generators: [...]                     # several generators, same schema
    space: {family: MixedNorm, p: 2, q: 2, alpha: 1}
    spaces: [...]
    battery: [{kind: binomial_pole, beta: 0.5}, ...]
    weights: [{kind: standard_power, gamma: 1}, ...]
    grids:
      degree: 256
      r_max: 0.95
      t_grid: [0.4, 0.2, 0.1, 0.05, 0.025]
      r_grid: {uniform: 64, per_decade: 16}
      z_grid: {radius: 0.8, radial: 8, angular: 64}
      theta_nodes: 1024
      quad_panels: 12
      tolerances: {eps_limit: 1e-3, band: 0.05, tol_ode: 1e-10}
    expected: {"bounded[(1-z)^-0.5]": holds}   # overrides registry outcomes
    output: out/dir

Keys left out fall back to the experiment's registered defaults.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import yaml

from ..errors import ValidationError
from ..grids import Grids, Tolerances
from ..means import SpaceSpec, Weight
from ..semiflow import Generator, boundary_model, dilation, make_generator
from ..series import ClosedForm
from ..verdict import Verdict

__all__ = ["ConfigParseError", "ExperimentConfig", "ZGrid", "load_config", "parse_config"]

TOP_KEYS = {"experiment", "generator", "generators", "space", "spaces", "battery", "weights", "grids", "expected", "output"}
GRID_KEYS = {"degree", "r_max", "t_grid", "r_grid", "z_grid", "theta_nodes", "quad_panels", "tolerances"}


class ConfigParseError(ValueError):
    """The config file is not a well-formed YAML/JSON mapping."""


@dataclass(frozen=True)
class ZGrid:
    """Polar sample of the disk used by the structural identity checks."""

    radius: float = 0.8
    radial: int = 8
    angular: int = 64

    def __post_init__(self) -> None:
        if not (0.0 < self.radius < 1.0) or self.radial < 1 or self.angular < 1:
            raise ValidationError(f"bad z_grid {self}")

    def points(self):
        import numpy as np

        rr = self.radius * np.arange(1, self.radial + 1) / self.radial
        th = 2 * np.pi * np.arange(self.angular) / self.angular
        return np.concatenate([[0.0], (rr[:, None] * np.exp(1j * th)[None, :]).ravel()])


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    generators: tuple = ()
    spaces: tuple = ()
    battery: tuple = ()
    weights: tuple = ()
    grids: Grids = field(default_factory=Grids)
    z_grid: ZGrid = field(default_factory=ZGrid)
    expected: dict = field(default_factory=dict)
    output: str | None = None
    raw: dict = field(default_factory=dict)

    def with_overrides(self, degree: int | None = None, tol: float | None = None) -> "ExperimentConfig":
        grids = self.grids
        raw = json.loads(json.dumps(self.raw))
        if degree is not None:
            grids = replace(grids, degree=int(degree))
            raw.setdefault("grids", {})["degree"] = int(degree)
        if tol is not None:
            if not tol > 0:
                raise ValidationError("--tol must be positive")
            grids = replace(grids, tolerances=replace(grids.tolerances, tol_ode=float(tol)))
            raw.setdefault("grids", {}).setdefault("tolerances", {})["tol_ode"] = float(tol)
        return replace(self, grids=grids, raw=raw)

    @property
    def config_hash(self) -> str:
        """sha256 of the canonical JSON of the effective config (output path excluded)."""
        body = {k: v for k, v in self.raw.items() if k != "output"}
        text = json.dumps(body, sort_keys=True, separators=(",", ":"), default=str)
        return hashlib.sha256(text.encode()).hexdigest()


def load_config(path: str | Path) -> ExperimentConfig:
    """Read and validate a config file (``.yaml``, ``.yml``, ``.json``)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigParseError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text) if path.suffix == ".json" else yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ConfigParseError(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigParseError(f"{path}: top level must be a mapping")
    return parse_config(data)


def _complex(x) -> complex:
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return complex(float(x[0]), float(x[1]))
    if isinstance(x, str):
        return complex(x.replace(" ", "").replace("i", "j"))
    return complex(x)


def parse_generator(spec) -> Generator:
    if spec == "dilation":
        return dilation()
    if spec == "boundary_model":
        return boundary_model()
    if not isinstance(spec, dict) or "b" not in spec or "P" not in spec:
        raise ValidationError(f"generator needs 'b' and 'P' (or a model name): {spec!r}")
    try:
        b = _complex(spec["b"])
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad Denjoy-Wolff point {spec['b']!r}") from exc
    P = spec["P"]
    P = ClosedForm.from_dict(P) if isinstance(P, dict) else P
    return make_generator(b, P)


def _parse_grids(spec) -> tuple[Grids, ZGrid]:
    if spec is None:
        return Grids(), ZGrid()
    if not isinstance(spec, dict):
        raise ValidationError("grids must be a mapping")
    extra = set(spec) - GRID_KEYS
    if extra:
        raise ValidationError(f"unknown grid fields: {sorted(extra)}")
    kw: dict = {}
    try:
        if "degree" in spec:
            kw["degree"] = int(spec["degree"])
        if "r_max" in spec:
            kw["r_max"] = float(spec["r_max"])
        if "t_grid" in spec:
            kw["t_grid"] = tuple(float(t) for t in spec["t_grid"])
        if "theta_nodes" in spec:
            kw["theta_nodes"] = int(spec["theta_nodes"])
        if "quad_panels" in spec:
            kw["quad_panels"] = int(spec["quad_panels"])
        rg = spec.get("r_grid") or {}
        if "uniform" in rg:
            kw["radial_uniform"] = int(rg["uniform"])
        if "per_decade" in rg:
            kw["per_decade"] = int(rg["per_decade"])
        tol = spec.get("tolerances") or {}
        unknown = set(tol) - set(Tolerances.__dataclass_fields__)
        if unknown:
            raise ValidationError(f"unknown tolerances: {sorted(unknown)}")
        kw["tolerances"] = Tolerances(**{k: float(v) for k, v in tol.items()})
        zg = ZGrid(**(spec.get("z_grid") or {}))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"bad grid parameters: {exc}") from exc
    if "t_grid" in kw and not kw["t_grid"]:
        raise ValidationError("t_grid must be nonempty")
    return Grids(**kw), zg


def _many(data: dict, one: str, many: str, parse) -> tuple:
    if one in data and many in data:
        raise ValidationError(f"give either '{one}' or '{many}', not both")
    if one in data:
        return (parse(data[one]),)
    if many in data:
        items = data[many]
        if not isinstance(items, list) or not items:
            raise ValidationError(f"'{many}' must be a nonempty list")
        return tuple(parse(x) for x in items)
    return ()


def parse_config(data: dict) -> ExperimentConfig:
    """Validate a decoded mapping against the registry and the schema."""
    from .experiments import REGISTRY

    extra = set(data) - TOP_KEYS
    if extra:
        raise ValidationError(f"unknown config keys: {sorted(extra)}")
    exp = data.get("experiment")
    if exp not in REGISTRY:
        raise ValidationError(f"unknown experiment {exp!r}; see `wcslab list`")
    battery = data.get("battery")
    if battery is not None and (not isinstance(battery, list) or not battery):
        raise ValidationError("'battery' must be a nonempty list")
    expected = data.get("expected") or {}
    if not isinstance(expected, dict):
        raise ValidationError("'expected' must map check labels to holds/fails")
    try:
        expected = {str(k): Verdict(str(v).lower()) for k, v in expected.items()}
    except ValueError as exc:
        raise ValidationError(f"bad expected outcome: {exc}") from exc
    grids, zg = _parse_grids(data.get("grids"))
    weights = tuple(Weight.from_dict(w) for w in data.get("weights") or [])
    raw = json.loads(json.dumps(data, default=str))
    return ExperimentConfig(
        experiment=exp,
        generators=_many(data, "generator", "generators", parse_generator),
        spaces=_many(data, "space", "spaces", SpaceSpec.from_dict),
        battery=tuple(ClosedForm.from_dict(f) for f in battery or []),
        weights=weights,
        grids=grids,
        z_grid=zg,
        expected=expected,
        output=data.get("output"),
        raw=raw,
    )
