"""Truncated power series on the unit disk.

A :class:`PowerSeries` holds Taylor coefficients ``a_0..a_N`` together with a
radius ``r_max < 1`` and a bound on the truncation error on ``|z| <= r_max``.
Whenever the coefficient tail is known in closed form the series also carries
a :class:`Majorant` (``|a_k| <= A k**m rho**k`` for ``k > N``), which lets the
error be re-evaluated on smaller disks and pushed through differentiation and
integration without guesswork.

:class:`ClosedForm` is the small zoo of explicit functions the rest of the
package needs (poles, logarithms, disk automorphisms, the normalized test
functions), each with exact coefficients and direct evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.signal import fftconvolve
from scipy.special import gammaln, rgamma

from .errors import (
    CompositionRangeError,
    InvalidClosedFormError,
    OutOfValidityError,
    SymbolZeroError,
    ValidationError,
)

__all__ = [
    "DEFAULT_DEGREE",
    "DEFAULT_RADIUS",
    "ClosedForm",
    "Majorant",
    "PowerSeries",
    "add",
    "antiderivative",
    "as_series",
    "binomial_series",
    "circle_max",
    "circle_values",
    "compose",
    "constant_series",
    "derivative",
    "estimate_majorant",
    "evaluate",
    "expand",
    "fit_from_samples",
    "identity_series",
    "multiply",
    "reciprocal",
    "subtract",
    "winding_number",
]

DEFAULT_DEGREE = 256
DEFAULT_RADIUS = 0.95

# Relative slack when testing |z| <= r_max, so grid points built as r_max*e^{it}
# are not rejected by rounding.
_RADIUS_SLACK = 1e-12
_FFT_THRESHOLD = 1024


def _nodes(m: int) -> int:
    return max(512, 4 * m)


def _convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if min(len(a), len(b)) > _FFT_THRESHOLD:
        return fftconvolve(a, b)
    return np.convolve(a, b)


@dataclass(frozen=True)
class Majorant:
    """Coefficient envelope ``|a_k| <= scale * k**power * ratio**k`` for k > N.

    ``rigorous`` is False when the envelope was fitted to computed
    coefficients rather than derived from a closed form.
    """

    scale: float
    power: float
    ratio: float
    rigorous: bool = True

    def tail(self, degree: int, r: float) -> float:
        """Bound on ``sum_{k>degree} scale k^power (ratio r)^k``."""
        x = self.ratio * r
        if self.scale == 0.0 or x == 0.0:
            return 0.0
        if x >= 1.0:
            return math.inf
        k0 = degree + 1
        lx = math.log(x)
        p = self.power
        # Beyond k1 consecutive terms shrink by at least sqrt(x).
        k1 = k0 if p <= 0 else max(k0, int(math.ceil(2.0 * p / -lx)) + 1)
        total = 0.0
        if k1 > k0:
            k = np.arange(k0, k1, dtype=float)
            total = float(np.sum(np.exp(math.log(self.scale) + p * np.log(k) + k * lx)))
        first = math.exp(math.log(self.scale) + p * math.log(k1) + k1 * lx)
        q = x if p <= 0 else math.exp(p / k1 + lx)
        return total + first / (1.0 - q)

    def scaled(self, factor: float) -> "Majorant":
        return Majorant(self.scale * abs(factor), self.power, self.ratio, self.rigorous)


def estimate_majorant(coeffs: np.ndarray) -> Majorant | None:
    """Fit an envelope to the last quarter of the coefficients.

    Two one-parameter-shape models are tried (power law with ratio 1, and pure
    geometric decay); the one with the smaller fit residual wins and its scale
    is raised until it dominates every coefficient of the block.
    """
    n = len(coeffs) - 1
    if n < 8:
        return None
    lo = max(1, n - max(8, n // 4))
    k = np.arange(lo, n + 1, dtype=float)
    mags = np.abs(coeffs[lo:])
    env = np.maximum.accumulate(mags[::-1])[::-1]
    if not np.any(env > 0):
        return Majorant(0.0, 0.0, 0.0, rigorous=False)
    floor = env.max() * 1e-300 + 1e-300
    y = np.log(np.maximum(env, floor))
    best = None
    for model in ("power", "geometric"):
        col = np.log(k) if model == "power" else k
        A = np.column_stack([np.ones_like(k), col])
        sol, *_ = np.linalg.lstsq(A, y, rcond=None)
        resid = float(np.max(np.abs(A @ sol - y)))
        if model == "power":
            power, ratio = float(sol[1]), 1.0
        else:
            power, ratio = 0.0, float(min(math.exp(sol[1]), 1.0))
        if best is None or resid < best[0]:
            best = (resid, power, ratio)
    _, power, ratio = best
    if ratio == 0.0:
        return Majorant(0.0, 0.0, 0.0, rigorous=False)
    shape = power * np.log(k) + k * math.log(ratio)
    scale = float(np.exp(np.max(np.log(np.maximum(mags, floor)) - shape)))
    return Majorant(scale, power, ratio, rigorous=False)


@dataclass(frozen=True, eq=False)
class PowerSeries:
    """Degree-N Taylor polynomial of an analytic function with an error budget.

    ``tail_bound`` bounds ``|f(z) - sum_k a_k z^k|`` for ``|z| <= r_max``.
    """

    coefficients: np.ndarray
    r_max: float
    tail_bound: float = 0.0
    majorant: Majorant | None = None
    label: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        c = np.array(self.coefficients, dtype=complex).ravel()
        if c.size == 0:
            raise ValidationError("a power series needs at least one coefficient")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)
        if not (0.0 < self.r_max < 1.0):
            raise ValidationError(f"r_max must lie in (0, 1), got {self.r_max}")
        tb = float(self.tail_bound)
        if not math.isfinite(tb) or tb < 0:
            raise ValidationError(f"tail_bound must be finite and nonnegative, got {tb}")
        object.__setattr__(self, "tail_bound", tb)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def exact(self) -> bool:
        """True for a genuine polynomial with no truncation error."""
        return self.tail_bound == 0.0 and self.majorant is None

    @property
    def effective_degree(self) -> int:
        nz = np.flatnonzero(self.coefficients)
        return int(nz[-1]) if nz.size else 0

    def tail_at(self, r: float) -> float:
        """Truncation error bound on the disk of radius ``r <= r_max``."""
        if self.tail_bound == 0.0:
            return 0.0
        if self.majorant is None or r >= self.r_max:
            return self.tail_bound
        at_max = self.majorant.tail(self.degree, self.r_max)
        floor = max(self.tail_bound - at_max, 0.0)
        return min(self.tail_bound, self.majorant.tail(self.degree, r) + floor)

    def with_radius(self, r_max: float) -> "PowerSeries":
        """Same coefficients, validity shrunk to ``r_max``."""
        if r_max > self.r_max * (1 + _RADIUS_SLACK):
            raise OutOfValidityError(f"cannot enlarge validity radius {self.r_max} -> {r_max}")
        return PowerSeries(self.coefficients, r_max, self.tail_at(r_max), self.majorant, self.label)

    def truncate(self, degree: int) -> "PowerSeries":
        """Drop coefficients above ``degree``, folding them into the error bound."""
        if degree >= self.degree:
            return self
        c = self.coefficients
        dropped = float(np.sum(np.abs(c[degree + 1 :]) * self.r_max ** np.arange(degree + 1, len(c))))
        maj = self.majorant or estimate_majorant(c)
        return PowerSeries(c[: degree + 1], self.r_max, self.tail_bound + dropped, maj, self.label)

    def __call__(self, z):
        return evaluate(self, z)

    def rounding_bound(self, z):
        """A priori floating-point error bound of Horner evaluation at ``z``.

        ``tail_bound`` covers truncation only; this is the standard forward
        bound ``gamma_{2N+2} * sum |a_k| |z|^k`` for the arithmetic itself.
        """
        az = np.abs(np.asarray(z, dtype=complex))
        u = np.finfo(float).eps / 2
        n = 2 * self.degree + 2
        gamma = n * u / (1 - n * u)
        out = gamma * np.polynomial.polynomial.polyval(az, np.abs(self.coefficients))
        return float(out) if out.ndim == 0 else out

    def __add__(self, other):
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return subtract(self, other)

    def __rsub__(self, other):
        return subtract(_coerce_like(other, self), self)

    def __neg__(self):
        return self.scale(-1.0)

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            return multiply(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, factor: complex) -> "PowerSeries":
        factor = complex(factor)
        maj = self.majorant.scaled(abs(factor)) if self.majorant is not None else None
        return PowerSeries(self.coefficients * factor, self.r_max, self.tail_bound * abs(factor), maj, self.label)

    def __repr__(self) -> str:
        head = ", ".join(f"{a:.4g}" for a in self.coefficients[:4])
        more = ", ..." if self.degree > 3 else ""
        return f"PowerSeries(N={self.degree}, r_max={self.r_max}, tail={self.tail_bound:.2e}, [{head}{more}])"


def _coerce_like(value, like: PowerSeries) -> PowerSeries:
    if isinstance(value, PowerSeries):
        return value
    if isinstance(value, ClosedForm):
        return expand(value, max(like.degree, DEFAULT_DEGREE), like.r_max)
    return constant_series(complex(value), like.degree, like.r_max)


def constant_series(c: complex, degree: int = 0, r_max: float = DEFAULT_RADIUS) -> PowerSeries:
    coeffs = np.zeros(degree + 1, dtype=complex)
    coeffs[0] = c
    return PowerSeries(coeffs, r_max)


def identity_series(degree: int = 1, r_max: float = DEFAULT_RADIUS) -> PowerSeries:
    coeffs = np.zeros(max(degree, 1) + 1, dtype=complex)
    coeffs[1] = 1.0
    return PowerSeries(coeffs, r_max)


# --------------------------------------------------------------------------
# closed forms


def _binomial_coefficients(exponent: float, degree: int) -> np.ndarray:
    """Coefficients of (1 - z)^exponent, k = 0..degree."""
    k = np.arange(degree, dtype=float)
    steps = (k - exponent) / (k + 1.0)
    out = np.empty(degree + 1)
    out[0] = 1.0
    if degree:
        out[1:] = np.cumprod(steps)
    return out


def _binomial_majorant(exponent: float, degree: int) -> Majorant | None:
    """Envelope C k^(-exponent-1) of the (1-z)^exponent coefficients beyond degree."""
    if exponent >= 0 and float(exponent).is_integer():
        return None
    k0 = degree + 1
    ck0 = _binomial_coefficients(exponent, k0)[-1]
    power = -exponent - 1.0
    limit = abs(float(rgamma(-exponent)))
    # c_k k^(1+exponent) tends monotonically to 1/Gamma(-exponent).
    scale = max(abs(ck0) * k0 ** (-power), limit)
    return Majorant(scale, power, 1.0)


def binomial_series(
    exponent: float,
    degree: int = DEFAULT_DEGREE,
    r_max: float = DEFAULT_RADIUS,
    scale: complex = 1.0,
    point: complex = 1.0,
) -> PowerSeries:
    """Series of ``scale * (1 - z/point)^exponent`` for ``|point| >= 1``."""
    point = complex(point)
    if abs(point) < 1 - 1e-12:
        raise InvalidClosedFormError("the branch point must lie outside the open unit disk")
    coeffs = _binomial_coefficients(exponent, degree) * complex(scale) * point ** (-np.arange(degree + 1.0))
    maj = _binomial_majorant(exponent, degree)
    if maj is None:
        # polynomial (1 - z/point)^n with n a nonnegative integer
        n = int(exponent)
        if n > degree:
            full = _binomial_coefficients(exponent, n) * complex(scale) * point ** (-np.arange(n + 1.0))
            return PowerSeries(full, r_max).truncate(degree)
        return PowerSeries(coeffs, r_max)
    maj = Majorant(maj.scale * abs(scale), maj.power, 1.0 / abs(point))
    return PowerSeries(coeffs, r_max, maj.tail(degree, r_max), maj)


_KINDS = ("binomial_pole", "logarithm", "moebius", "polynomial", "test_function", "constant")


def _as_complex(x) -> complex:
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return complex(float(x[0]), float(x[1]))
    if isinstance(x, str):
        return complex(x.replace(" ", "").replace("i", "j"))
    return complex(x)


@dataclass(frozen=True)
class ClosedForm:
    """An explicit analytic function on the disk.

    Kinds and parameters:

    ``constant``       (c,)
    ``polynomial``     (a_0, a_1, ...)
    ``binomial_pole``  (beta, scale, point): scale * (1 - z/point)^(-beta), beta > 0
    ``logarithm``      (scale, point): -scale * log(1 - z/point)
    ``moebius``        (a, lam): lam (z - a) / (1 - conj(a) z), |a| < 1, |lam| <= 1
    ``test_function``  (z0, alpha, p): (1-|z0|^2)^s / (1 - conj(z0) w)^(2s), s = alpha + 1/p
    """

    kind: str
    parameters: tuple = ()

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise InvalidClosedFormError(f"unknown closed form kind {self.kind!r}")
        object.__setattr__(self, "parameters", tuple(self.parameters))
        k, prm = self.kind, self.parameters
        if k == "constant" and len(prm) != 1:
            raise InvalidClosedFormError("constant takes exactly one parameter")
        if k == "polynomial" and len(prm) == 0:
            raise InvalidClosedFormError("polynomial needs at least one coefficient")
        if k == "binomial_pole":
            if len(prm) != 3:
                raise InvalidClosedFormError("binomial_pole takes (beta, scale, point)")
            beta, _, point = prm
            if not (math.isfinite(beta) and beta > 0):
                raise InvalidClosedFormError(f"binomial_pole exponent must be > 0, got {beta}")
            if abs(point) < 1 - 1e-12:
                raise InvalidClosedFormError("binomial_pole branch point must satisfy |point| >= 1")
        if k == "logarithm":
            if len(prm) != 2 or abs(prm[1]) < 1 - 1e-12:
                raise InvalidClosedFormError("logarithm takes (scale, point) with |point| >= 1")
        if k == "moebius":
            a, lam = prm
            if abs(a) >= 1 or abs(lam) > 1 + 1e-12:
                raise InvalidClosedFormError("moebius needs |a| < 1 and |lam| <= 1 to be a self-map")
        if k == "test_function":
            z0, alpha, p = prm
            if abs(z0) >= 1:
                raise InvalidClosedFormError("test_function base point must lie in the disk")
            if not (p > 0):
                raise InvalidClosedFormError("test_function needs p > 0")
            if not (alpha + (0.0 if math.isinf(p) else 1.0 / p) > 0):
                raise InvalidClosedFormError("test_function needs alpha + 1/p > 0")

    # constructors ---------------------------------------------------------

    @classmethod
    def constant(cls, c: complex = 1.0) -> "ClosedForm":
        return cls("constant", (complex(c),))

    @classmethod
    def polynomial(cls, coefficients: Iterable[complex]) -> "ClosedForm":
        return cls("polynomial", tuple(complex(a) for a in coefficients))

    @classmethod
    def binomial_pole(cls, beta: float, scale: complex = 1.0, point: complex = 1.0) -> "ClosedForm":
        return cls("binomial_pole", (float(beta), complex(scale), complex(point)))

    @classmethod
    def logarithm(cls, scale: complex = 1.0, point: complex = 1.0) -> "ClosedForm":
        return cls("logarithm", (complex(scale), complex(point)))

    @classmethod
    def moebius(cls, a: complex, lam: complex = 1.0) -> "ClosedForm":
        return cls("moebius", (complex(a), complex(lam)))

    @classmethod
    def test_function(cls, z0: complex, alpha: float, p: float) -> "ClosedForm":
        return cls("test_function", (complex(z0), float(alpha), float(p)))

    @classmethod
    def from_dict(cls, spec: dict) -> "ClosedForm":
        """Build from a config mapping such as ``{"kind": "binomial_pole", "beta": 1.5}``."""
        if not isinstance(spec, dict) or "kind" not in spec:
            raise InvalidClosedFormError(f"closed form spec needs a 'kind': {spec!r}")
        kind = spec["kind"]
        try:
            if kind == "constant":
                return cls.constant(_as_complex(spec.get("c", spec.get("value", 1.0))))
            if kind == "polynomial":
                return cls.polynomial([_as_complex(a) for a in spec["coefficients"]])
            if kind == "binomial_pole":
                return cls.binomial_pole(
                    float(spec["beta"]), _as_complex(spec.get("scale", 1.0)), _as_complex(spec.get("point", 1.0))
                )
            if kind == "logarithm":
                return cls.logarithm(_as_complex(spec.get("scale", 1.0)), _as_complex(spec.get("point", 1.0)))
            if kind == "moebius":
                return cls.moebius(_as_complex(spec["a"]), _as_complex(spec.get("lam", 1.0)))
            if kind == "test_function":
                p = spec.get("p", 2.0)
                p = math.inf if p in ("inf", "infinity", math.inf) else float(p)
                return cls.test_function(_as_complex(spec["z0"]), float(spec["alpha"]), p)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidClosedFormError):
                raise
            raise InvalidClosedFormError(f"bad parameters for {kind!r}: {exc}") from exc
        raise InvalidClosedFormError(f"unknown closed form kind {kind!r}")

    def to_dict(self) -> dict:
        def c(x):
            x = complex(x)
            return x.real if x.imag == 0 else [x.real, x.imag]

        k, prm = self.kind, self.parameters
        if k == "constant":
            return {"kind": k, "c": c(prm[0])}
        if k == "polynomial":
            return {"kind": k, "coefficients": [c(a) for a in prm]}
        if k == "binomial_pole":
            return {"kind": k, "beta": prm[0], "scale": c(prm[1]), "point": c(prm[2])}
        if k == "logarithm":
            return {"kind": k, "scale": c(prm[0]), "point": c(prm[1])}
        if k == "moebius":
            return {"kind": k, "a": c(prm[0]), "lam": c(prm[1])}
        z0, alpha, p = prm
        return {"kind": k, "z0": c(z0), "alpha": alpha, "p": "inf" if math.isinf(p) else p}

    def describe(self) -> str:
        k, prm = self.kind, self.parameters
        if k == "constant":
            return f"{_fmt(prm[0])}"
        if k == "polynomial":
            return "poly(" + ",".join(_fmt(a) for a in prm) + ")"
        if k == "binomial_pole":
            beta, scale, point = prm
            pre = "" if scale == 1 else f"{_fmt(scale)}*"
            return f"{pre}{_base(point)}^-{beta:g}"
        if k == "logarithm":
            scale, point = prm
            pre = "" if scale == 1 else f"{_fmt(scale)}*"
            return f"-{pre}log{_base(point)}"
        if k == "moebius":
            return f"moebius(a={_fmt(prm[0])},lam={_fmt(prm[1])})"
        z0, alpha, p = prm
        return f"f_z(z0={_fmt(z0)},alpha={alpha:g},p={p:g})"

    # analytic data --------------------------------------------------------

    @property
    def singular_radius(self) -> float:
        """Radius of convergence of the Taylor series at 0."""
        k, prm = self.kind, self.parameters
        if k in ("constant", "polynomial"):
            return math.inf
        if k == "binomial_pole":
            return abs(prm[2])
        if k == "logarithm":
            return abs(prm[1])
        if k == "moebius":
            return math.inf if prm[0] == 0 else 1.0 / abs(prm[0])
        z0 = prm[0]
        return math.inf if z0 == 0 else 1.0 / abs(z0)

    def _test_exponent(self) -> float:
        _, alpha, p = self.parameters
        return alpha + (0.0 if math.isinf(p) else 1.0 / p)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        k, prm = self.kind, self.parameters
        if k == "constant":
            out = np.full(z.shape, prm[0], dtype=complex)
        elif k == "polynomial":
            out = np.polynomial.polynomial.polyval(z, np.array(prm, dtype=complex))
        elif k == "binomial_pole":
            beta, scale, point = prm
            out = scale * np.power(1.0 - z / point, -beta)
        elif k == "logarithm":
            scale, point = prm
            out = -scale * np.log(1.0 - z / point)
        elif k == "moebius":
            a, lam = prm
            out = lam * (z - a) / (1.0 - np.conj(a) * z)
        else:
            z0 = prm[0]
            s = self._test_exponent()
            out = (1.0 - abs(z0) ** 2) ** s * np.power(1.0 - np.conj(z0) * z, -2.0 * s)
        return out[()] if out.ndim == 0 else out

    def derivative_at(self, z):
        z = np.asarray(z, dtype=complex)
        k, prm = self.kind, self.parameters
        if k == "constant":
            out = np.zeros(z.shape, dtype=complex)
        elif k == "polynomial":
            c = np.array(prm, dtype=complex)
            out = np.polynomial.polynomial.polyval(z, np.polynomial.polynomial.polyder(c)) if len(c) > 1 else 0 * z
        elif k == "binomial_pole":
            beta, scale, point = prm
            out = scale * beta / point * np.power(1.0 - z / point, -beta - 1.0)
        elif k == "logarithm":
            scale, point = prm
            out = scale / (point - z)
        elif k == "moebius":
            a, lam = prm
            out = lam * (1.0 - abs(a) ** 2) / (1.0 - np.conj(a) * z) ** 2
        else:
            z0 = prm[0]
            s = self._test_exponent()
            out = (1.0 - abs(z0) ** 2) ** s * 2.0 * s * np.conj(z0) * np.power(1.0 - np.conj(z0) * z, -2.0 * s - 1.0)
        return out[()] if np.ndim(out) == 0 else out


def _base(point: complex) -> str:
    if point == 1:
        return "(1-z)"
    if point == -1:
        return "(1+z)"
    return f"(1-z/{_fmt(point)})"


def _fmt(x: complex) -> str:
    x = complex(x)
    if x.imag == 0:
        return f"{x.real:g}"
    return f"({x.real:g}{x.imag:+g}i)"


def expand(cf: ClosedForm, N: int = DEFAULT_DEGREE, r_max: float = DEFAULT_RADIUS) -> PowerSeries:
    """Degree-N Taylor polynomial of a closed form with a rigorous tail bound on |z| <= r_max."""
    if not isinstance(N, (int, np.integer)) or N < 0:
        raise ValidationError(f"degree must be a nonnegative integer, got {N!r}")
    if not (0.0 < r_max < 1.0):
        raise ValidationError(f"r_max must lie in (0, 1), got {r_max}")
    N = int(N)
    k, prm = cf.kind, cf.parameters
    label = cf.describe()
    if r_max >= cf.singular_radius:
        raise OutOfValidityError(f"{label} is singular inside |z| <= {r_max}")

    if k == "constant":
        out = constant_series(prm[0], N, r_max)
    elif k == "polynomial":
        c = np.array(prm, dtype=complex)
        if len(c) - 1 <= N:
            coeffs = np.zeros(N + 1, dtype=complex)
            coeffs[: len(c)] = c
            out = PowerSeries(coeffs, r_max)
        else:
            out = PowerSeries(c, r_max).truncate(N)
    elif k == "binomial_pole":
        beta, scale, point = prm
        out = binomial_series(-beta, N, r_max, scale, point)
    elif k == "logarithm":
        scale, point = prm
        kk = np.arange(1, N + 1, dtype=float)
        coeffs = np.zeros(N + 1, dtype=complex)
        coeffs[1:] = scale / kk * point ** (-kk)
        maj = Majorant(abs(scale), -1.0, 1.0 / abs(point))
        out = PowerSeries(coeffs, r_max, maj.tail(N, r_max), maj)
    elif k == "moebius":
        a, lam = prm
        coeffs = np.zeros(N + 1, dtype=complex)
        coeffs[0] = -lam * a
        if N >= 1:
            kk = np.arange(1, N + 1)
            coeffs[1:] = lam * (1 - abs(a) ** 2) * np.conj(a) ** (kk - 1)
        if a == 0:
            out = PowerSeries(coeffs, r_max) if N >= 1 else PowerSeries(coeffs, r_max, r_max * abs(lam))
        else:
            maj = Majorant(abs(lam) * (1 - abs(a) ** 2) / abs(a), 0.0, abs(a))
            out = PowerSeries(coeffs, r_max, maj.tail(N, r_max), maj)
    else:
        z0, _, _ = prm
        s = cf._test_exponent()
        norm = (1.0 - abs(z0) ** 2) ** s
        if z0 == 0:
            out = constant_series(norm, N, r_max)
        else:
            out = binomial_series(-2.0 * s, N, r_max, norm, 1.0 / np.conj(z0))
    return PowerSeries(out.coefficients, out.r_max, out.tail_bound, out.majorant, label)


def as_series(f, N: int = DEFAULT_DEGREE, r_max: float = DEFAULT_RADIUS) -> PowerSeries:
    """Pass a PowerSeries through; expand a ClosedForm; wrap a scalar as a constant."""
    if isinstance(f, PowerSeries):
        return f
    if isinstance(f, ClosedForm):
        return expand(f, N, r_max)
    if isinstance(f, (int, float, complex, np.number)):
        return constant_series(complex(f), N, r_max)
    raise ValidationError(f"cannot interpret {f!r} as an analytic function")


# --------------------------------------------------------------------------
# evaluation and sampling


def evaluate(f: PowerSeries, z):
    """Horner evaluation; raises OutOfValidityError outside ``|z| <= r_max``."""
    z = np.asarray(z, dtype=complex)
    if z.size and np.max(np.abs(z)) > f.r_max * (1 + _RADIUS_SLACK):
        raise OutOfValidityError(f"|z| = {np.max(np.abs(z)):.6g} exceeds validity radius {f.r_max}")
    out = np.polynomial.polynomial.polyval(z, f.coefficients)
    return complex(out) if out.ndim == 0 else out


def circle_values(coeffs: np.ndarray, r: float, m: int) -> np.ndarray:
    """Values of the polynomial at ``r * exp(2 pi i j / m)``, j = 0..m-1."""
    c = np.asarray(coeffs, dtype=complex) * r ** np.arange(len(coeffs))
    if len(c) > m:
        folded = np.zeros(m, dtype=complex)
        np.add.at(folded, np.arange(len(c)) % m, c)
        c = folded
    return np.fft.ifft(c, n=m) * m


def circle_max(coeffs: np.ndarray, r: float, m: int | None = None) -> float:
    m = m or _nodes(len(coeffs))
    return float(np.max(np.abs(circle_values(coeffs, r, m))))


def winding_number(coeffs: np.ndarray, r: float, m: int | None = None) -> int:
    """Number of zeros of the polynomial inside the circle of radius r."""
    m = m or _nodes(len(coeffs))
    vals = circle_values(coeffs, r, m)
    if np.min(np.abs(vals)) == 0:
        raise SymbolZeroError("function vanishes on the sampling circle")
    darg = np.angle(np.roll(vals, -1) / vals)
    return int(round(float(np.sum(darg)) / (2 * math.pi)))


def fit_from_samples(
    values: np.ndarray,
    radius: float,
    N: int,
    r_max: float | None = None,
    label: str = "",
) -> PowerSeries:
    """Recover Taylor coefficients from equispaced samples on ``|z| = radius``.

    ``values[j]`` is the function at ``radius * exp(2 pi i j / M)``. The
    discarded modes and the aliasing residual are folded into the tail bound.
    """
    values = np.asarray(values, dtype=complex)
    m = len(values)
    if m < N + 1:
        raise ValidationError(f"need at least N+1 = {N + 1} samples, got {m}")
    r_max = radius if r_max is None else r_max
    if r_max > radius * (1 + _RADIUS_SLACK):
        raise ValidationError("fitted series cannot be trusted beyond the sampling circle")
    modes = np.fft.fft(values) / m
    kk = np.arange(N + 1)
    coeffs = modes[: N + 1] / radius**kk
    half = m // 2
    dropped = float(np.sum(np.abs(modes[N + 1 : half])))
    aliased = float(np.sum(np.abs(modes[half:])))
    scale = float(np.max(np.abs(values))) if m else 0.0
    tail = dropped + aliased + 1e-15 * scale * math.sqrt(m)
    maj = estimate_majorant(coeffs)
    return PowerSeries(coeffs, r_max, tail, maj, label)


# --------------------------------------------------------------------------
# algebra


def _floor_and_majorant(coeffs: np.ndarray, r_max: float, bound: float, *majorants) -> tuple[float, Majorant | None]:
    if bound == 0.0:
        return 0.0, None
    known = [m for m in majorants if m is not None]
    if len(known) == len(majorants) and known:
        maj = Majorant(
            sum(m.scale for m in known),
            max(m.power for m in known),
            max(m.ratio for m in known),
            all(m.rigorous for m in known),
        )
    else:
        maj = estimate_majorant(coeffs)
    return bound, maj


def _pad(c: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros(n + 1, dtype=complex)
    m = min(len(c), n + 1)
    out[:m] = c[:m]
    return out


def add(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    g = _coerce_like(g, f)
    f = _coerce_like(f, g)
    n = max(f.degree, g.degree)
    r = min(f.r_max, g.r_max)
    coeffs = _pad(f.coefficients, n) + _pad(g.coefficients, n)
    bound = f.tail_at(r) + g.tail_at(r)
    mf = f.majorant if f.tail_bound else None
    mg = g.majorant if g.tail_bound else None
    parts = [m for m, s in ((mf, f), (mg, g)) if s.tail_bound]
    maj = _floor_and_majorant(coeffs, r, bound, *parts)[1] if bound else None
    return PowerSeries(coeffs, r, bound, maj)


def subtract(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    return add(f, _coerce_like(g, f).scale(-1.0))


def _abs_sum(c: np.ndarray, r: float, start: int = 0) -> float:
    if len(c) <= start:
        return 0.0
    k = np.arange(start, len(c))
    return float(np.sum(np.abs(c[start:]) * r**k))


def multiply(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    """Cauchy product.

    Exact polynomials multiply exactly; otherwise the product is truncated at
    the larger input degree and the dropped terms join the error bound.
    """
    g = _coerce_like(g, f)
    f = _coerce_like(f, g)
    r = min(f.r_max, g.r_max)
    full = _convolve(f.coefficients, g.coefficients)
    if f.exact and g.exact:
        n = max(f.degree, g.degree, f.effective_degree + g.effective_degree)
        return PowerSeries(_pad(full, n), r)
    n = max(f.degree, g.degree)
    coeffs = _pad(full, n)
    tf, tg = f.tail_at(r), g.tail_at(r)
    sup_f = _abs_sum(f.coefficients, r)
    sup_g = _abs_sum(g.coefficients, r)
    bound = tf * (sup_g + tg) + sup_f * tg + _abs_sum(full, r, n + 1)
    return PowerSeries(coeffs, r, bound, estimate_majorant(coeffs))


def derivative(f: PowerSeries) -> PowerSeries:
    """Termwise derivative.

    With a known coefficient envelope the new tail follows exactly from it;
    the remaining part of the error is inflated by the Cauchy factor
    ``1 / (1 - r_max)``.
    """
    n = f.degree
    if n == 0:
        if f.exact:
            return PowerSeries([0.0], f.r_max)
        coeffs = np.zeros(1, dtype=complex)
    else:
        coeffs = f.coefficients[1:] * np.arange(1, n + 1)
    if f.exact:
        return PowerSeries(coeffs if n else [0.0], f.r_max)
    maj = f.majorant
    floor = f.tail_bound
    new_maj = None
    if maj is not None:
        floor = max(f.tail_bound - maj.tail(n, f.r_max), 0.0)
        if maj.ratio == 0 or maj.scale == 0:
            new_maj = Majorant(0.0, 0.0, 0.0, maj.rigorous)
        else:
            grow = (1.0 + 1.0 / max(n, 1)) ** max(maj.power + 1.0, 0.0)
            new_maj = Majorant(maj.scale * maj.ratio * grow, maj.power + 1.0, maj.ratio, maj.rigorous)
    nd = len(coeffs) - 1
    tail = floor / (1.0 - f.r_max)
    if new_maj is not None:
        tail += new_maj.tail(nd, f.r_max)
    return PowerSeries(coeffs, f.r_max, tail, new_maj)


def antiderivative(f: PowerSeries) -> PowerSeries:
    """Primitive vanishing at 0 (degree N+1)."""
    n = f.degree
    coeffs = np.zeros(n + 2, dtype=complex)
    coeffs[1:] = f.coefficients / np.arange(1, n + 2)
    if f.exact:
        return PowerSeries(coeffs, f.r_max)
    maj = f.majorant
    floor = f.tail_bound
    new_maj = None
    if maj is not None:
        floor = max(f.tail_bound - maj.tail(n, f.r_max), 0.0)
        if maj.ratio == 0 or maj.scale == 0:
            new_maj = Majorant(0.0, 0.0, 0.0, maj.rigorous)
        else:
            shrink = 1.0 if maj.power >= 0 else ((n + 1.0) / (n + 2.0)) ** maj.power
            new_maj = Majorant(maj.scale * shrink / maj.ratio, maj.power - 1.0, maj.ratio, maj.rigorous)
    tail = floor * f.r_max
    if new_maj is not None:
        tail += new_maj.tail(n + 1, f.r_max)
    return PowerSeries(coeffs, f.r_max, tail, new_maj)


def compose(f: PowerSeries, g: PowerSeries, r_max: float | None = None) -> PowerSeries:
    """Series of ``f(g(z))`` on ``|z| <= r_max`` (default: ``g.r_max``).

    Horner's scheme in the truncated series ring. ``g`` must map the closed
    disk of radius ``r_max`` into the validity disk of ``f``.
    """
    r = g.r_max if r_max is None else r_max
    if r > g.r_max * (1 + _RADIUS_SLACK):
        raise OutOfValidityError(f"inner series only valid up to {g.r_max}")
    m = _nodes(max(f.degree, g.degree))
    g_sup = circle_max(g.coefficients, r, m) + g.tail_at(r)
    if g_sup > f.r_max * (1 + _RADIUS_SLACK):
        raise CompositionRangeError(
            f"inner function reaches |w| = {g_sup:.6g} on |z| = {r:.6g}; outer series valid only to {f.r_max}"
        )
    exact = f.exact and g.exact
    n = max(f.degree, g.degree)
    if exact:
        full_deg = f.effective_degree * max(g.effective_degree, 1)
        if full_deg <= 4 * n:
            n = max(n, full_deg)
    a = f.coefficients[: f.effective_degree + 1] if exact else f.coefficients
    gc = _pad(g.coefficients, n)
    acc = np.zeros(n + 1, dtype=complex)
    acc[0] = a[-1]
    for ak in a[-2::-1]:
        acc = _pad(_convolve(acc, gc), n)
        acc[0] += ak
    # residual of the degree-n truncation, sampled on the circle
    z = r * np.exp(2j * np.pi * np.arange(m) / m)
    direct = np.polynomial.polynomial.polyval(np.polynomial.polynomial.polyval(z, g.coefficients), a)
    trunc = float(np.max(np.abs(direct - circle_values(acc, r, m))))
    if exact and trunc <= 1e-12 * max(1.0, float(np.max(np.abs(direct)))):
        return PowerSeries(acc, r)
    lip = circle_max(derivative(f).coefficients, min(g_sup, f.r_max), m) if f.degree else 0.0
    bound = f.tail_at(g_sup) + lip * g.tail_at(r) + trunc
    return PowerSeries(acc, r, bound, estimate_majorant(acc))


def reciprocal(f: PowerSeries, r_max: float | None = None, degree: int | None = None) -> PowerSeries:
    """Series of ``1/f``; ``f`` must not vanish on ``|z| <= r_max``.

    The result has ``max(f.degree, degree)`` coefficients, so the inverse of
    a low-degree polynomial is not cut off at that polynomial's degree.
    """
    r = f.r_max if r_max is None else r_max
    c = f.coefficients
    if degree is not None and degree > f.degree:
        c = np.concatenate([c, np.zeros(degree - f.degree, dtype=complex)])
    if abs(c[0]) == 0:
        raise SymbolZeroError("cannot invert a series vanishing at the origin")
    m = _nodes(len(c) - 1)
    vals = circle_values(c, r, m)
    if np.min(np.abs(vals)) <= f.tail_at(r) or winding_number(c, r, m) != 0:
        raise SymbolZeroError(f"function has a zero in |z| <= {r}")
    n = len(c) - 1
    b = np.zeros(n + 1, dtype=complex)
    b[0] = 1.0 / c[0]
    for k in range(1, n + 1):
        b[k] = -np.dot(c[1 : k + 1], b[k - 1 :: -1]) / c[0]
    if f.exact and f.effective_degree == 0:
        return PowerSeries(b, r)
    min_f = float(np.min(np.abs(vals))) - f.tail_at(r)
    resid = float(np.max(np.abs(1.0 - vals * circle_values(b, r, m))))
    bound = (resid + f.tail_at(r) * float(np.max(np.abs(circle_values(b, r, m))))) / min_f
    bound = max(bound, 1e-16)
    return PowerSeries(b, r, bound, estimate_majorant(b))
