"""Numerical resolution and decision thresholds shared by every module."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

__all__ = ["DEFAULT_T_GRID", "Grids", "Tolerances"]

DEFAULT_T_GRID = (0.4, 0.2, 0.1, 0.05, 0.025)


@dataclass(frozen=True)
class Tolerances:
    """Decision thresholds.

    Attributes:
        eps_limit: an extrapolated boundary limit at or below this counts as zero.
        band: half-width of the growth-exponent band inside which a profile is
            treated as bounded with a nonzero limit.
        zero_slack: growth exponents up to this are accepted as bounded without
            further evidence.
        c_mono: constant allowed in almost-monotonicity checks.
        tol_ode: absolute and relative local tolerance of the flow integrator.
        g_floor: below this |G(z)| the algebraic derivative formula is not used.
        escape_margin: distance to the unit circle that counts as escape.
    """

    eps_limit: float = 1e-3
    band: float = 0.05
    zero_slack: float = 0.01
    c_mono: float = 4.0
    tol_ode: float = 1e-10
    g_floor: float = 1e-8
    escape_margin: float = 1e-6

    def __post_init__(self) -> None:
        for name in ("eps_limit", "band", "zero_slack", "c_mono", "tol_ode", "g_floor", "escape_margin"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                from .errors import ValidationError

                raise ValidationError(f"tolerance {name} must be a positive finite number, got {value!r}")

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


@dataclass(frozen=True)
class Grids:
    """Discretization parameters.

    Attributes:
        degree: series truncation degree N.
        r_max: top of the sampled radial range.
        radial_uniform: points of the uniform radial part on ``[0, 1 - 10 (1 - r_max)]``.
        per_decade: points of the geometric part covering ``1 - r`` in
            ``[1 - r_max, 10 (1 - r_max)]``.
        theta_nodes: circle quadrature nodes (``max(512, 4N)`` when None).
        t_grid: decreasing flow times for continuity profiles.
        quad_panels: Gauss-Legendre panels for radial integrals.
    """

    degree: int = 256
    r_max: float = 0.95
    radial_uniform: int = 64
    per_decade: int = 16
    theta_nodes: int | None = None
    t_grid: tuple = DEFAULT_T_GRID
    quad_panels: int = 12
    tolerances: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self) -> None:
        from .errors import ValidationError

        if not (isinstance(self.degree, (int, np.integer)) and self.degree >= 1):
            raise ValidationError(f"degree must be a positive integer, got {self.degree!r}")
        if not (0.5 <= self.r_max < 1.0):
            raise ValidationError(f"r_max must lie in [0.5, 1), got {self.r_max}")
        if self.radial_uniform < 4 or self.per_decade < 4 or self.quad_panels < 1:
            raise ValidationError("radial grids need at least 4 points per part")
        t = tuple(float(x) for x in self.t_grid)
        if not t or any(x <= 0 for x in t) or any(a <= b for a, b in zip(t, t[1:])):
            raise ValidationError(f"t_grid must be positive and strictly decreasing, got {self.t_grid!r}")
        object.__setattr__(self, "t_grid", t)

    @property
    def nodes(self) -> int:
        return self.theta_nodes or max(512, 4 * self.degree)

    def radial(self, r_top: float | None = None) -> np.ndarray:
        """Uniform part followed by a geometric last decade ending at ``r_top``."""
        r_top = self.r_max if r_top is None else r_top
        gap = 1.0 - r_top
        knee = 1.0 - 10.0 * gap
        uniform = np.linspace(0.0, knee, self.radial_uniform, endpoint=False)
        decade = 1.0 - np.logspace(math.log10(10.0 * gap), math.log10(gap), self.per_decade + 1)
        return np.concatenate([uniform, decade])

    def refined(self) -> "Grids":
        """Every grid spacing halved (t-grid gains geometric midpoints)."""
        t = self.t_grid
        mids = [math.sqrt(a * b) for a, b in zip(t, t[1:])]
        merged = tuple(sorted(set(t) | set(mids), reverse=True))
        return replace(
            self,
            radial_uniform=2 * self.radial_uniform,
            per_decade=2 * self.per_decade,
            theta_nodes=2 * self.nodes,
            t_grid=merged,
            quad_panels=2 * self.quad_panels,
        )

    def as_dict(self) -> dict:
        return {
            "degree": int(self.degree),
            "r_max": self.r_max,
            "radial_uniform": self.radial_uniform,
            "per_decade": self.per_decade,
            "theta_nodes": self.nodes,
            "t_grid": list(self.t_grid),
            "quad_panels": self.quad_panels,
            "tolerances": self.tolerances.as_dict(),
        }
