"""Integral means and the norms built from them.

All radial functionals sample ``r <= r_max`` only. What happens on
``[r_max, 1)`` is inferred from a power-law fit on the last decade of the
radial grid (see :mod:`wcslab.extrapolate`) and the contribution of that
inference always shows up in ``abs_error``. Exact polynomials are entire, so
for them the circle ``r = 1`` is sampled directly.

The mixed norm is normalized so that the constant function has norm one:

    ||f||_{p,q,alpha}^q = alpha q int_0^1 (1 - r)^(alpha q - 1) M_p(r, f)^q dr.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import OutOfValidityError, UnsupportedWeightError, ValidationError
from .extrapolate import BoundaryFit, fit_boundary
from .grids import Grids
from .series import ClosedForm, PowerSeries, as_series, circle_values, derivative

__all__ = [
    "FAMILIES",
    "NormValue",
    "Profile",
    "SpaceSpec",
    "Weight",
    "associated_weight",
    "integral_mean",
    "integral_means",
    "little_oh_profile",
    "mixed_norm",
    "norm",
    "sup_norm_profile",
    "sup_profile",
    "weighted_bloch_norm",
    "weighted_norm",
]

FAMILIES = (
    "Hardy",
    "Bergman",
    "MixedNorm",
    "MixedNormLittle",
    "WeightedBanach",
    "WeightedBanachLittle",
    "WeightedBloch",
)

_INF_WORDS = ("inf", "infinity", "oo")


def _parse_exponent(x) -> float:
    if isinstance(x, str) and x.strip().lower() in _INF_WORDS:
        return math.inf
    return float(x)


# --------------------------------------------------------------------------
# weights


_WEIGHT_KINDS = ("standard_power", "log_power", "table")


@dataclass(frozen=True)
class Weight:
    """Radial weight ``v(r)`` on ``[0, 1)``.

    Kinds:
        ``standard_power`` (gamma,): ``(1 - r^2)^gamma``.
        ``log_power`` (a, b): ``(1 - r)^a * log(e / (1 - r))^b``.
        ``table`` (radii, values): piecewise linear in ``r``.
    """

    kind: str
    parameters: tuple = ()
    note: str = ""

    def __post_init__(self) -> None:
        if self.kind not in _WEIGHT_KINDS:
            raise ValidationError(f"unknown weight kind {self.kind!r}")
        prm = tuple(self.parameters)
        if self.kind == "table":
            r, v = (np.asarray(x, dtype=float) for x in prm)
            if r.ndim != 1 or r.shape != v.shape or len(r) < 2 or np.any(np.diff(r) <= 0):
                raise ValidationError("table weight needs increasing radii and matching values")
            prm = (tuple(r), tuple(v))
        object.__setattr__(self, "parameters", prm)
        grid = np.linspace(0.0, 0.999, 200)
        vals = self(grid)
        if not np.all(np.isfinite(vals)) or np.any(vals <= 0):
            raise ValidationError(f"weight {self.describe()} must be positive and finite on [0, 1)")

    @classmethod
    def standard_power(cls, gamma: float = 1.0) -> "Weight":
        return cls("standard_power", (float(gamma),))

    @classmethod
    def log_power(cls, a: float = 1.0, b: float = 1.0) -> "Weight":
        return cls("log_power", (float(a), float(b)))

    @classmethod
    def from_dict(cls, spec) -> "Weight":
        if isinstance(spec, (int, float)):
            return cls.standard_power(float(spec))
        if not isinstance(spec, dict) or "kind" not in spec:
            raise ValidationError(f"weight spec needs a 'kind': {spec!r}")
        kind = spec["kind"]
        try:
            if kind == "standard_power":
                return cls.standard_power(float(spec.get("gamma", 1.0)))
            if kind == "log_power":
                return cls.log_power(float(spec.get("a", 1.0)), float(spec.get("b", 1.0)))
            if kind == "table":
                return cls("table", (spec["r"], spec["v"]))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(f"bad weight parameters: {exc}") from exc
        raise ValidationError(f"unknown weight kind {kind!r}")

    def to_dict(self) -> dict:
        if self.kind == "standard_power":
            return {"kind": self.kind, "gamma": self.parameters[0]}
        if self.kind == "log_power":
            return {"kind": self.kind, "a": self.parameters[0], "b": self.parameters[1]}
        return {"kind": self.kind, "r": list(self.parameters[0]), "v": list(self.parameters[1])}

    def describe(self) -> str:
        if self.kind == "standard_power":
            return f"(1-r^2)^{self.parameters[0]:g}"
        if self.kind == "log_power":
            a, b = self.parameters
            return f"(1-r)^{a:g}*log(e/(1-r))^{b:g}"
        return f"table[{len(self.parameters[0])}]"

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if self.kind == "standard_power":
            out = np.power(1.0 - r * r, self.parameters[0])
        elif self.kind == "log_power":
            a, b = self.parameters
            x = 1.0 - r
            with np.errstate(divide="ignore"):
                out = np.power(x, a) * np.power(np.log(math.e / x), b)
        else:
            rr, vv = self.parameters
            out = np.interp(r, rr, vv)
        return out[()] if out.ndim == 0 else out

    def log_at_gap(self, x):
        """``log v`` as a function of ``x = 1 - r``, accurate for ``x`` far below machine epsilon."""
        x = np.asarray(x, dtype=float)
        if self.kind == "standard_power":
            return self.parameters[0] * (np.log(x) + np.log1p(1.0 - x))
        if self.kind == "log_power":
            a, b = self.parameters
            return a * np.log(x) + b * np.log(1.0 - np.log(x))
        return np.log(self(1.0 - x))

    @property
    def typical(self) -> bool:
        """Whether ``v(r) -> 0`` as ``r -> 1``."""
        if self.kind == "standard_power":
            return self.parameters[0] > 0
        if self.kind == "log_power":
            a, b = self.parameters
            return a > 0 or (a == 0 and b < 0)
        rr, vv = self.parameters
        fit = fit_boundary(np.asarray(rr), np.asarray(vv))
        return fit.regime in ("decays", "zero")

    def sup(self) -> float:
        """``sup_{[0,1)} v`` from a dense sample plus a local refinement."""
        x = np.concatenate([np.linspace(0.0, 0.99, 400), 1.0 - np.logspace(-2, -12, 200)])
        vals = self(x)
        i = int(np.argmax(vals))
        best = float(vals[i])
        lo, hi = x[max(i - 1, 0)], x[min(i + 1, len(x) - 1)]
        if hi > lo:
            res = minimize_scalar(lambda s: -float(self(s)), bounds=(lo, hi), method="bounded")
            best = max(best, -float(res.fun))
        return best


# --------------------------------------------------------------------------
# spaces


@dataclass(frozen=True)
class SpaceSpec:
    """A target space with its parameters.

    ``Bergman`` takes ``alpha > -1`` (the standard weight exponent); ``MixedNorm``
    and ``MixedNormLittle`` take ``alpha > 0``. ``MixedNormLittle`` is the
    closure of the polynomials in ``MixedNorm(p, inf, alpha)``.
    """

    family: str
    p: float = 2.0
    q: float | None = None
    alpha: float | None = None
    weight: Weight | None = None

    def __post_init__(self) -> None:
        fam = self.family
        if fam not in FAMILIES:
            raise ValidationError(f"unknown space family {fam!r}; choose from {', '.join(FAMILIES)}")
        weighted = fam.startswith("Weighted")
        if weighted:
            if self.weight is None:
                raise ValidationError(f"{fam} needs a weight")
            object.__setattr__(self, "p", math.inf)
            object.__setattr__(self, "q", None)
            object.__setattr__(self, "alpha", None)
            return
        if self.weight is not None:
            raise ValidationError(f"{fam} does not take a weight")
        p = _parse_exponent(self.p)
        if not (p > 0):
            raise ValidationError(f"p must lie in (0, inf], got {self.p}")
        object.__setattr__(self, "p", p)
        if fam == "Hardy":
            object.__setattr__(self, "q", None)
            object.__setattr__(self, "alpha", None)
        elif fam == "Bergman":
            if self.alpha is None or not (self.alpha > -1):
                raise ValidationError(f"Bergman needs alpha > -1, got {self.alpha}")
            if math.isinf(p):
                raise ValidationError("Bergman needs p < inf")
            object.__setattr__(self, "q", None)
            object.__setattr__(self, "alpha", float(self.alpha))
        else:
            if self.alpha is None or not (self.alpha > 0):
                raise ValidationError(f"{fam} needs alpha > 0, got {self.alpha}")
            object.__setattr__(self, "alpha", float(self.alpha))
            if fam == "MixedNormLittle":
                object.__setattr__(self, "q", math.inf)
            else:
                if self.q is None:
                    raise ValidationError("MixedNorm needs q")
                q = _parse_exponent(self.q)
                if not (q > 0):
                    raise ValidationError(f"q must lie in (0, inf], got {self.q}")
                object.__setattr__(self, "q", q)

    # constructors
    @classmethod
    def hardy(cls, p: float = 2.0) -> "SpaceSpec":
        return cls("Hardy", p)

    @classmethod
    def bergman(cls, p: float = 2.0, alpha: float = 0.0) -> "SpaceSpec":
        return cls("Bergman", p, alpha=alpha)

    @classmethod
    def mixed(cls, p: float, q: float, alpha: float) -> "SpaceSpec":
        return cls("MixedNorm", p, q, alpha)

    @classmethod
    def mixed_little(cls, p: float, alpha: float) -> "SpaceSpec":
        return cls("MixedNormLittle", p, alpha=alpha)

    @classmethod
    def weighted_banach(cls, v: Weight, little: bool = False) -> "SpaceSpec":
        return cls("WeightedBanachLittle" if little else "WeightedBanach", weight=v)

    @classmethod
    def weighted_bloch(cls, v: Weight) -> "SpaceSpec":
        return cls("WeightedBloch", weight=v)

    @classmethod
    def from_dict(cls, spec: dict) -> "SpaceSpec":
        if not isinstance(spec, dict) or "family" not in spec:
            raise ValidationError(f"space spec needs a 'family': {spec!r}")
        known = {"family", "p", "q", "alpha", "weight"}
        extra = set(spec) - known
        if extra:
            raise ValidationError(f"unknown space fields: {sorted(extra)}")
        weight = spec.get("weight")
        try:
            return cls(
                spec["family"],
                _parse_exponent(spec.get("p", 2.0)) if spec.get("p") is not None else 2.0,
                _parse_exponent(spec["q"]) if spec.get("q") is not None else None,
                float(spec["alpha"]) if spec.get("alpha") is not None else None,
                Weight.from_dict(weight) if weight is not None else None,
            )
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(f"bad space parameters: {exc}") from exc

    def to_dict(self) -> dict:
        out: dict = {"family": self.family}
        if self.weight is not None:
            out["weight"] = self.weight.to_dict()
            return out
        out["p"] = "inf" if math.isinf(self.p) else self.p
        if self.q is not None:
            out["q"] = "inf" if math.isinf(self.q) else self.q
        if self.alpha is not None:
            out["alpha"] = self.alpha
        return out

    def describe(self) -> str:
        def e(x):
            return "inf" if math.isinf(x) else f"{x:g}"

        fam = self.family
        if fam == "Hardy":
            return f"H^{e(self.p)}"
        if fam == "Bergman":
            return f"A^{e(self.p)}_{self.alpha:g}"
        if fam == "MixedNorm":
            return f"H({e(self.p)},{e(self.q)},{self.alpha:g})"
        if fam == "MixedNormLittle":
            return f"H0({e(self.p)},inf,{self.alpha:g})"
        if fam == "WeightedBanach":
            return f"H^inf_v[{self.weight.describe()}]"
        if fam == "WeightedBanachLittle":
            return f"H^0_v[{self.weight.describe()}]"
        return f"Bloch_v[{self.weight.describe()}]"

    @property
    def polynomial_dense(self) -> bool:
        fam = self.family
        if fam == "Hardy":
            return not math.isinf(self.p)
        if fam == "MixedNorm":
            return not math.isinf(self.q)
        return fam in ("Bergman", "MixedNormLittle", "WeightedBanachLittle")

    @property
    def big(self) -> bool:
        """Sup-type space whose polynomial closure is a proper subspace."""
        if self.family == "MixedNorm":
            return math.isinf(self.q)
        return self.family == "WeightedBanach"

    @property
    def sup_type(self) -> bool:
        if self.family in ("MixedNorm",):
            return math.isinf(self.q)
        return self.family in ("MixedNormLittle", "WeightedBanach", "WeightedBanachLittle", "WeightedBloch", "Hardy")

    def little(self) -> "SpaceSpec":
        """The vanishing-limit subspace of a big space."""
        if self.family == "MixedNorm" and math.isinf(self.q):
            return SpaceSpec.mixed_little(self.p, self.alpha)
        if self.family == "WeightedBanach":
            return SpaceSpec.weighted_banach(self.weight, little=True)
        if self.family in ("MixedNormLittle", "WeightedBanachLittle"):
            return self
        raise ValidationError(f"{self.describe()} has no little-oh subspace")

    def big_space(self) -> "SpaceSpec":
        if self.family == "MixedNormLittle":
            return SpaceSpec.mixed(self.p, math.inf, self.alpha)
        if self.family == "WeightedBanachLittle":
            return SpaceSpec.weighted_banach(self.weight)
        return self

    @property
    def critical_exponent(self) -> float | None:
        """Growth exponent of ``(1 - z)^(-s)`` at which membership breaks down."""
        if self.family in ("MixedNorm", "MixedNormLittle"):
            return self.alpha + (0.0 if math.isinf(self.p) else 1.0 / self.p)
        if self.family == "Bergman":
            return (self.alpha + 2.0) / self.p
        if self.family == "Hardy":
            return 0.0 if math.isinf(self.p) else 1.0 / self.p
        return None


# --------------------------------------------------------------------------
# values


@dataclass(frozen=True)
class NormValue:
    """A norm estimate.

    ``value`` is ``inf`` when divergence was detected. ``borderline`` marks
    estimates whose growth exponent fell inside the undecidable band; their
    ``value`` is then only a lower bound.
    """

    value: float
    abs_error: float
    resolution: str
    borderline: bool = False
    growth: float | None = None

    def __post_init__(self) -> None:
        if not (self.value >= 0) or not (self.abs_error >= 0):
            raise ValueError(f"norm value and error must be nonnegative: {self.value}, {self.abs_error}")

    @property
    def divergent(self) -> bool:
        return math.isinf(self.value)

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "abs_error": self.abs_error,
            "resolution": self.resolution,
            "borderline": self.borderline,
            "growth": self.growth,
        }


@dataclass(frozen=True)
class Profile:
    """A sampled radial profile with its boundary fit."""

    r: np.ndarray
    values: np.ndarray
    fit: BoundaryFit
    label: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def limit(self) -> float:
        return self.fit.limit


# --------------------------------------------------------------------------
# integral means


def _top(f: PowerSeries) -> float:
    return 1.0 if f.exact else f.r_max


def _check_radius(f: PowerSeries, r: float) -> None:
    if r < 0 or r > _top(f) * (1 + 1e-12):
        raise OutOfValidityError(f"radius {r} outside the validity disk |z| <= {f.r_max}")


def _mean_from_values(vals: np.ndarray, p: float) -> float:
    a = np.abs(vals)
    if math.isinf(p):
        return float(np.max(a))
    if p == 2:
        return float(math.sqrt(np.mean(a * a)))
    return float(np.mean(a**p) ** (1.0 / p))


def _sup_on_circle(coeffs: np.ndarray, r: float, m: int) -> float:
    """Max of |f| on the circle: node max followed by a bounded local search."""
    vals = circle_values(coeffs, r, m)
    a = np.abs(vals)
    i = int(np.argmax(a))
    best = float(a[i])
    h = 2 * math.pi / m
    theta0 = i * h

    def neg(theta):
        return -abs(np.polynomial.polynomial.polyval(r * np.exp(1j * theta), coeffs))

    res = minimize_scalar(neg, bounds=(theta0 - h, theta0 + h), method="bounded", options={"xatol": 1e-10})
    return max(best, -float(res.fun))


def integral_mean(f, p: float, r: float, nodes: int | None = None) -> NormValue:
    """``M_p(r, f)`` by the trapezoid rule on the circle (spectrally accurate).

    For ``p = inf`` the node maximum is refined by a local search and the
    Lipschitz slack ``pi r / M * max|f'|`` is reported in ``abs_error``.
    """
    f = as_series(f)
    p = _parse_exponent(p)
    if not (p > 0):
        raise ValidationError(f"p must be positive, got {p}")
    _check_radius(f, r)
    m = nodes or max(512, 4 * f.degree)
    tail = f.tail_at(min(r, f.r_max))
    if math.isinf(p):
        value = _sup_on_circle(f.coefficients, r, m)
        dvals = circle_values(derivative(f).coefficients, r, m) if f.degree else np.zeros(1)
        err = tail + math.pi * r / m * float(np.max(np.abs(dvals))) * 1e-2
        return NormValue(value, err, f"M_theta={m}")
    vals = circle_values(f.coefficients, r, m)
    return NormValue(_mean_from_values(vals, p), tail, f"M_theta={m}")


def integral_means(f: PowerSeries, p: float, radii, nodes: int | None = None) -> np.ndarray:
    """Vectorized ``M_p(r, f)`` over several radii."""
    p = _parse_exponent(p)
    radii = np.asarray(radii, dtype=float)
    if radii.size and (np.max(radii) > _top(f) * (1 + 1e-12) or np.min(radii) < 0):
        raise OutOfValidityError(f"radii outside the validity disk |z| <= {f.r_max}")
    m = nodes or max(512, 4 * f.degree)
    if math.isinf(p):
        return np.array([_sup_on_circle(f.coefficients, float(r), m) for r in radii])
    return np.array([_mean_from_values(circle_values(f.coefficients, float(r), m), p) for r in radii])


# --------------------------------------------------------------------------
# radial functionals


def _grids(grids: Grids | None) -> Grids:
    return grids or Grids()


def _profile_radii(f: PowerSeries, grids: Grids, r_grid=None) -> np.ndarray:
    if r_grid is not None:
        return np.asarray(r_grid, dtype=float)
    return grids.radial(f.r_max if not f.exact else grids.r_max)


def _weighted_profile(f: PowerSeries, p: float, weight_fn, grids: Grids, r_grid, exact_limit) -> Profile:
    """Profile ``w(r) M_p(r, f)`` with boundary fit and local sup refinement."""
    band = grids.tolerances.band
    radii = _profile_radii(f, grids, r_grid)
    means = integral_means(f, p, radii, grids.nodes)
    vals = weight_fn(radii) * means
    fit = fit_boundary(radii, vals, float(radii[-1]), band)
    if f.exact:
        lim = exact_limit(f)
        regime = "zero" if lim == 0 else "bounded"
        fit = BoundaryFit(fit.growth if lim else -math.inf, lim, lim, 0.0, fit.n_points, regime)
    return Profile(radii, vals, fit)


def _refine_sup(f: PowerSeries, p: float, weight_fn, prof: Profile, grids: Grids) -> float:
    i = int(np.argmax(prof.values))
    best = float(prof.values[i])
    r = prof.r
    lo, hi = r[max(i - 1, 0)], r[min(i + 1, len(r) - 1)]
    if hi <= lo:
        return best

    def neg(x):
        return -float(weight_fn(np.array([x]))[0] * integral_means(f, p, [x], grids.nodes)[0])

    res = minimize_scalar(neg, bounds=(lo, hi), method="bounded", options={"xatol": 1e-8})
    return max(best, -float(res.fun))


def _sup_value(f: PowerSeries, p: float, weight_fn, prof: Profile, grids: Grids, tail_weight: float) -> NormValue:
    fit = prof.fit
    res = f"radial={len(prof.r)},M_theta={grids.nodes}"
    if fit.regime == "unbounded":
        return NormValue(math.inf, 0.0, res, growth=fit.growth)
    grid_sup = _refine_sup(f, p, weight_fn, prof, grids)
    value = float(max(grid_sup, fit.limit if math.isfinite(fit.limit) else 0.0))
    err = f.tail_at(min(float(prof.r[-1]), f.r_max)) * tail_weight
    if fit.limit > grid_sup and not f.exact:
        err += fit.limit - float(prof.values[-1])
    # in-band growth is reported through ``growth``; the criteria decide on it
    return NormValue(value, err, res, False, fit.growth)


def sup_norm_profile(f, p: float, alpha: float, grids: Grids | None = None, r_grid=None) -> tuple[NormValue, Profile]:
    """``sup_r (1 - r)^alpha M_p(r, f)`` with the sampled profile."""
    grids = _grids(grids)
    f = as_series(f, grids.degree, grids.r_max)
    p = _parse_exponent(p)

    def w(r):
        return np.power(1.0 - np.asarray(r), alpha)

    def exact_limit(g):
        return 0.0 if alpha > 0 else integral_means(g, p, [1.0], grids.nodes)[0]

    prof = _weighted_profile(f, p, w, grids, r_grid, exact_limit)
    return _sup_value(f, p, w, prof, grids, 1.0), prof


def weighted_norm(f, v: Weight, grids: Grids | None = None, r_grid=None) -> tuple[NormValue, Profile]:
    """``sup_r v(r) M_inf(r, f)`` with the sampled profile."""
    grids = _grids(grids)
    f = as_series(f, grids.degree, grids.r_max)
    prof = _weighted_profile(f, math.inf, v, grids, r_grid, lambda g: 0.0 if v.typical else float("nan"))
    return _sup_value(f, math.inf, v, prof, grids, float(v.sup())), prof


def weighted_bloch_norm(f, v: Weight, grids: Grids | None = None, r_grid=None) -> tuple[NormValue, Profile]:
    """``|f(0)| + sup_r v(r) M_inf(r, f')``."""
    grids = _grids(grids)
    f = as_series(f, grids.degree, grids.r_max)
    nv, prof = weighted_norm(derivative(f), v, grids, r_grid)
    f0 = abs(complex(f.coefficients[0]))
    return NormValue(nv.value + f0, nv.abs_error + f.tail_bound, nv.resolution, nv.borderline, nv.growth), prof


def sup_profile(f, X: SpaceSpec, grids: Grids | None = None) -> tuple[NormValue, Profile]:
    """Norm and radial profile for a sup-type space."""
    grids = _grids(grids)
    fam = X.family
    if fam == "Hardy":
        return sup_norm_profile(f, X.p, 0.0, grids)
    if fam in ("MixedNorm", "MixedNormLittle") and math.isinf(X.q):
        return sup_norm_profile(f, X.p, X.alpha, grids)
    if fam in ("WeightedBanach", "WeightedBanachLittle"):
        return weighted_norm(f, X.weight, grids)
    if fam == "WeightedBloch":
        return weighted_bloch_norm(f, X.weight, grids)
    raise ValidationError(f"{X.describe()} is not a sup-type space")


def little_oh_profile(f, X: SpaceSpec, grids: Grids | None = None) -> Profile:
    """The profile whose boundary limit decides membership in the little-oh subspace of ``X``."""
    if X.family in ("MixedNorm", "MixedNormLittle"):
        return sup_norm_profile(f, X.p, X.alpha, grids)[1]
    if X.family in ("WeightedBanach", "WeightedBanachLittle"):
        return weighted_norm(f, X.weight, grids)[1]
    raise ValidationError(f"{X.describe()} has no little-oh functional")


def _gauss_panels(lo: float, hi: float, panels: int, order: int = 16) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, panels + 1)
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        nodes.append(0.5 * (b - a) * x + 0.5 * (a + b))
        weights.append(0.5 * (b - a) * w)
    return np.concatenate(nodes), np.concatenate(weights)


def _tail_integral(aq: float, q: float, fit: BoundaryFit, x0: float) -> float:
    """``aq * int_0^x0 x^(aq-1) y(x)^q dx`` for the fitted boundary model ``y``.

    With ``e = aq + gamma q`` and ``x = x0 s^(1/e)`` the integrand becomes
    smooth in ``s`` and Gauss-Legendre applies.
    """
    a, gamma, d1, d2 = fit.model
    e = aq + gamma * q
    if e <= 0:
        return math.inf
    s, w = np.polynomial.legendre.leggauss(64)
    s = 0.5 * (s + 1.0)
    w = 0.5 * w
    x = x0 * s ** (1.0 / e)
    h = np.exp(q * (d1 * x + d2 * x * x))
    return aq * math.exp(q * a) * x0**e / e * float(np.sum(w * h))


def mixed_norm(f, p: float, q: float, alpha: float, grids: Grids | None = None) -> NormValue:
    """Normalized ``H(p, q, alpha)`` norm for ``q < inf``.

    The substitution ``u = (1 - r)^(alpha q)`` absorbs the radial weight; the
    integral runs over ``log u`` with panelled Gauss-Legendre. The part beyond
    ``r_max`` is integrated analytically from the boundary fit of ``M_p``.
    """
    grids = _grids(grids)
    f = as_series(f, grids.degree, grids.r_max)
    p, q = _parse_exponent(p), _parse_exponent(q)
    if math.isinf(q):
        raise ValidationError("mixed_norm handles q < inf; use sup_norm_profile for q = inf")
    if not (alpha > 0 and q > 0 and p > 0):
        raise ValidationError("mixed_norm needs p, q, alpha > 0")
    tol = grids.tolerances
    aq = alpha * q
    res = f"panels={grids.quad_panels},M_theta={grids.nodes}"
    if not np.any(f.coefficients) and f.tail_bound == 0:
        return NormValue(0.0, 0.0, res)
    r_top = _top(f) if f.exact else f.r_max
    top_gap = 1.0 - r_top

    def integral(panels: int) -> float:
        if f.exact:
            # polynomials: integrate the whole of [0, 1) in u = (1-r)^(aq)
            u, w = _gauss_panels(0.0, 1.0, panels)
            r = 1.0 - u ** (1.0 / aq)
            return float(np.sum(w * integral_means(f, p, r, grids.nodes) ** q))
        v_lo = aq * math.log(top_gap)
        v, w = _gauss_panels(v_lo, 0.0, panels)
        u = np.exp(v)
        r = 1.0 - u ** (1.0 / aq)
        return float(np.sum(w * u * integral_means(f, p, r, grids.nodes) ** q))

    body = integral(grids.quad_panels)
    body_coarse = integral(max(1, grids.quad_panels // 2))
    quad_err = abs(body - body_coarse)
    if f.exact:
        value = body ** (1.0 / q)
        err = quad_err / max(q * body ** (1 - 1 / q), 1e-300) if body > 0 else 0.0
        return NormValue(value, err, res)

    radii = grids.radial(f.r_max)
    prof = integral_means(f, p, radii, grids.nodes)
    fit = fit_boundary(radii, prof, f.r_max, tol.band)
    growth = fit.growth
    margin = alpha - max(growth, 0.0 if fit.regime != "zero" else -math.inf)
    if fit.regime == "zero":
        tail = 0.0
    elif growth >= alpha + tol.band:
        return NormValue(math.inf, 0.0, res, growth=growth)
    elif growth > alpha - tol.band:
        value = body ** (1.0 / q)
        return NormValue(value, math.inf, res, borderline=True, growth=growth)
    else:
        tail = _tail_integral(aq, q, fit, top_gap)
    total = body + tail
    value = total ** (1.0 / q)
    series_err = f.tail_bound * q * max(float(np.max(prof)), 1e-300) ** (q - 1)
    d_int = quad_err + 0.05 * tail * (1.0 + 1.0 / max(margin, 1e-3)) + series_err
    err = d_int / max(q * total ** (1 - 1 / q), 1e-300)
    return NormValue(value, err, res, growth=growth)


def norm(f, X: SpaceSpec, grids: Grids | None = None) -> NormValue:
    """Norm of ``f`` in ``X`` (dispatch over the space family)."""
    grids = _grids(grids)
    f = as_series(f, grids.degree, grids.r_max)
    fam = X.family
    if fam == "Hardy":
        return sup_norm_profile(f, X.p, 0.0, grids)[0]
    if fam == "Bergman":
        return mixed_norm(f, X.p, X.p, (X.alpha + 1.0) / X.p, grids)
    if fam == "MixedNorm" and not math.isinf(X.q):
        return mixed_norm(f, X.p, X.q, X.alpha, grids)
    if fam in ("MixedNorm", "MixedNormLittle"):
        return sup_norm_profile(f, X.p, X.alpha, grids)[0]
    if fam in ("WeightedBanach", "WeightedBanachLittle"):
        return weighted_norm(f, X.weight, grids)[0]
    return weighted_bloch_norm(f, X.weight, grids)[0]


def associated_weight(v: Weight, r_grid=None, candidate_degree: int = 512) -> Weight:
    """Monomial upper estimate of the associated weight.

    ``v_approx(r) = 1 / max_n r^n / c_n`` with ``c_n = sup_s v(s) s^n``. Every
    monomial ``z^n / c_n`` lies in the unit ball of the weighted space, so the
    result is at least the true associated weight.
    """
    if not v.typical:
        raise UnsupportedWeightError(f"weight {v.describe()} does not vanish at the boundary")
    r_grid = np.linspace(0.0, 0.95, 96) if r_grid is None else np.asarray(r_grid, dtype=float)
    s = np.concatenate([np.linspace(0.0, 0.99, 2000), 1.0 - np.logspace(-2, -10, 800)])
    vs = v(s)
    n = np.arange(candidate_degree + 1)
    with np.errstate(divide="ignore"):
        logs = np.log(s)
    # c_n = sup_s v(s) s^n, computed in log space to avoid underflow
    log_c = np.empty(len(n))
    logv = np.log(vs)
    for k in n:
        log_c[k] = np.max(logv + (k * logs if k else 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        logr = np.log(r_grid)
        cand = np.where(n[None, :] == 0, 0.0, n[None, :] * logr[:, None]) - log_c[None, :]
    vt = np.exp(-np.max(cand, axis=1))
    return Weight("table", (tuple(r_grid), tuple(vt)), note="monomial estimate, bounds the associated weight from above")
