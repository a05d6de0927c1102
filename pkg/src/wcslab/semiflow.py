"""Semigroups of analytic self-maps of the disk from generator data.

A generator is given by its Denjoy-Wolff point ``b`` (``|b| <= 1``) and a
function ``P`` with nonnegative real part:

    G(z) = (conj(b) z - 1)(z - b) P(z).

The flow ``dw/dt = G(w)`` is integrated with an embedded Dormand-Prince 5(4)
pair that carries the variational equation ``dw'/dt = G'(w) w'`` along, so
``phi_t'`` is available everywhere, including near the zeros of ``G`` where
the algebraic identity ``phi_t' = G(phi_t) / G`` degenerates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    FlowEscapeError,
    InvalidGeneratorError,
    KoenigsSingularityError,
    OutOfValidityError,
    SymbolZeroError,
    TrivialGeneratorError,
    ValidationError,
)
from .grids import Grids, Tolerances
from .series import (
    ClosedForm,
    PowerSeries,
    antiderivative,
    as_series,
    binomial_series,
    compose,
    derivative,
    estimate_majorant,
    expand,
    fit_from_samples,
    multiply,
    reciprocal,
    winding_number,
)

__all__ = [
    "FlowSample",
    "Generator",
    "KoenigsFunction",
    "boundary_model",
    "dilation",
    "divided_difference_dphi",
    "flow",
    "koenigs",
    "koenigs_residual",
    "make_generator",
    "rotate",
    "semigroup_residual",
]


def rotate(P, b: complex):
    """``z -> P(b z)`` for a unimodular ``b``, keeping the representation type."""
    b = complex(b)
    if isinstance(P, PowerSeries):
        k = np.arange(P.degree + 1)
        return PowerSeries(P.coefficients * b**k, P.r_max, P.tail_bound, P.majorant)
    kind, prm = P.kind, P.parameters
    if kind == "constant":
        return P
    if kind == "polynomial":
        return ClosedForm.polynomial([a * b**k for k, a in enumerate(prm)])
    if kind == "binomial_pole":
        beta, scale, point = prm
        return ClosedForm.binomial_pole(beta, scale, point / b)
    if kind == "logarithm":
        scale, point = prm
        return ClosedForm.logarithm(scale, point / b)
    if kind == "moebius":
        a, lam = prm
        return ClosedForm.moebius(a * b.conjugate(), lam * b)
    z0, alpha, p = prm
    return ClosedForm.test_function(z0 * b.conjugate(), alpha, p)


def _is_zero(P) -> bool:
    if isinstance(P, PowerSeries):
        return not np.any(P.coefficients) and P.tail_bound == 0
    if P.kind == "constant":
        return P.parameters[0] == 0
    if P.kind == "polynomial":
        return all(a == 0 for a in P.parameters)
    return False


@dataclass(frozen=True, eq=False)
class Generator:
    """Infinitesimal generator ``G(z) = (conj(b) z - 1)(z - b) P(z)``."""

    b: complex
    P: ClosedForm | PowerSeries
    label: str = ""

    def __post_init__(self) -> None:
        b = complex(self.b)
        if abs(b) > 1 + 1e-12:
            raise InvalidGeneratorError(f"Denjoy-Wolff point must satisfy |b| <= 1, got {b}")
        if abs(abs(b) - 1) < 1e-12:
            b = b / abs(b)
        object.__setattr__(self, "b", b)
        if not isinstance(self.P, (ClosedForm, PowerSeries)):
            raise InvalidGeneratorError("P must be a ClosedForm or a PowerSeries")
        if not self.trivial:
            self._herglotz_check()

    def _herglotz_check(self) -> None:
        top = self.P.r_max if isinstance(self.P, PowerSeries) else 0.999
        r = np.linspace(0.0, top, 40)[:, None]
        theta = np.linspace(0.0, 2 * np.pi, 128, endpoint=False)[None, :]
        vals = self.P_at(r * np.exp(1j * theta))
        worst = float(np.min(vals.real))
        if not math.isfinite(worst) or worst < -1e-9:
            raise InvalidGeneratorError(f"Re P reaches {worst:.3e} < 0; P is not a Herglotz function")

    @property
    def trivial(self) -> bool:
        return _is_zero(self.P)

    @property
    def interior(self) -> bool:
        return abs(self.b) < 1

    @property
    def mode(self) -> str:
        return "interior" if self.interior else "boundary"

    @property
    def rotation(self) -> complex:
        """Unimodular factor moving a boundary Denjoy-Wolff point to 1 (1 for interior points)."""
        return self.b if not self.interior else 1.0 + 0j

    def P_at(self, z):
        return self.P(z)

    def dP_at(self, z):
        if isinstance(self.P, PowerSeries):
            return derivative(self.P)(z)
        return self.P.derivative_at(z)

    def G(self, z):
        z = np.asarray(z, dtype=complex)
        b = self.b
        return (np.conj(b) * z - 1.0) * (z - b) * self.P_at(z)

    def dG(self, z):
        z = np.asarray(z, dtype=complex)
        b = self.b
        quad = (np.conj(b) * z - 1.0) * (z - b)
        dquad = np.conj(b) * (z - b) + (np.conj(b) * z - 1.0)
        return dquad * self.P_at(z) + quad * self.dP_at(z)

    def __call__(self, z):
        return self.G(z)

    @property
    def eigenvalue(self) -> complex | None:
        """``G'(b)`` for interior Denjoy-Wolff points."""
        if not self.interior:
            return None
        b = self.b
        return complex((abs(b) ** 2 - 1.0) * self.P_at(b))

    def G_series(self, N: int = 256, r_max: float = 0.95) -> PowerSeries:
        b = self.b
        quad = PowerSeries([b, -(1.0 + abs(b) ** 2), np.conj(b)], r_max)
        return multiply(quad, as_series(self.P, N, r_max))

    def describe(self) -> str:
        if self.label:
            return self.label
        p = self.P.describe() if isinstance(self.P, ClosedForm) else repr(self.P)
        return f"b={self.b:g},P={p}"

    def to_dict(self) -> dict:
        b = self.b
        out = {"b": b.real if b.imag == 0 else [b.real, b.imag]}
        if isinstance(self.P, ClosedForm):
            out["P"] = self.P.to_dict()
        return out


def make_generator(b: complex, P) -> Generator:
    """Validate ``(b, P)`` and build the generator."""
    if isinstance(P, (int, float, complex)):
        P = ClosedForm.constant(P)
    return Generator(complex(b), P)


def dilation() -> Generator:
    """``G(z) = -z``: ``phi_t(z) = exp(-t) z``."""
    return Generator(0.0, ClosedForm.constant(1.0), "dilation")


def boundary_model() -> Generator:
    """``G(z) = 1 - z``: ``phi_t(z) = 1 + exp(-t)(z - 1)``."""
    return Generator(1.0, ClosedForm.binomial_pole(1.0), "G=1-z")


# --------------------------------------------------------------------------
# flow


@dataclass(frozen=True, eq=False)
class FlowSample:
    """``phi_t`` and ``phi_t'`` on a grid, with the integrator's error estimate."""

    t: float
    z: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    ode_error: float
    method: tuple = field(default=())
    steps: int = 0


# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4


def _integrate(gen: Generator, t: float, z: np.ndarray, tol: Tolerances, max_step: float = 0.1):
    """Integrate ``(w, w')`` from 0 to t; common adaptive step over the grid."""
    y = np.concatenate([z, np.ones_like(z)])
    n = len(z)

    def rhs(state):
        w = state[:n]
        return np.concatenate([gen.G(w), gen.dG(w) * state[n:]])

    s = 0.0
    h = min(max_step, t, 0.01)
    err_total = 0.0
    steps = 0
    k1 = rhs(y)
    while s < t:
        h = min(h, t - s)
        ks = [k1]
        for i in range(1, 7):
            yi = y + h * sum(a * k for a, k in zip(_A[i], ks))
            if np.max(np.abs(yi[:n])) >= 1.0 - tol.escape_margin:
                raise FlowEscapeError(f"trajectory left the disk near t = {s + _C[i] * h:.6g}")
            ks.append(rhs(yi))
        y_new = y + h * sum(b * k for b, k in zip(_B5, ks))
        err_vec = h * sum(e * k for e, k in zip(_E, ks))
        scale = tol.tol_ode * (1.0 + np.maximum(np.abs(y), np.abs(y_new)))
        ratio = float(np.max(np.abs(err_vec) / scale))
        if ratio <= 1.0:
            s += h
            y = y_new
            k1 = ks[6]
            err_total += float(np.max(np.abs(err_vec[:n])))
            steps += 1
            if np.max(np.abs(y[:n])) >= 1.0 - tol.escape_margin:
                raise FlowEscapeError(f"trajectory reached |w| >= 1 - {tol.escape_margin} at t = {s:.6g}")
        if ratio > 1.0 and h < 1e-14 * max(1.0, t):
            raise FlowEscapeError("step size underflow while integrating the flow")
        factor = 5.0 if ratio == 0 else min(5.0, max(0.2, 0.9 * ratio ** (-0.2)))
        h = min(max_step, h * factor)
    return y[:n], y[n:], err_total, steps


def flow(gen: Generator, t: float, z_grid, tol: Tolerances | None = None) -> FlowSample:
    """``phi_t`` and ``phi_t'`` on ``z_grid``.

    ``phi_t'`` comes from ``G(phi_t) / G`` where ``|G(z)| > g_floor`` and
    from the variational equation elsewhere; the per-point choice is
    recorded in ``method``.
    """
    tol = tol or Tolerances()
    z = np.atleast_1d(np.asarray(z_grid, dtype=complex)).ravel()
    if t < 0:
        raise ValidationError("flows run forward in time only (t >= 0)")
    if z.size and np.max(np.abs(z)) >= 1.0:
        raise ValidationError("flow grid must lie inside the open unit disk")
    if t == 0 or gen.trivial:
        return FlowSample(float(t), z, z.copy(), np.ones_like(z), 0.0, tuple(["identity"] * len(z)))
    phi, var, err, steps = _integrate(gen, float(t), z, tol)
    Gz = gen.G(z)
    use_alg = np.abs(Gz) > tol.g_floor
    dphi = var.copy()
    if np.any(use_alg):
        dphi[use_alg] = gen.G(phi[use_alg]) / Gz[use_alg]
    method = tuple("algebraic" if u else "variational" for u in use_alg)
    return FlowSample(float(t), z, phi, dphi, err, method, steps)


def divided_difference_dphi(gen: Generator, t: float, z_grid, h: float = 1e-5, tol: Tolerances | None = None):
    """Centered divided difference ``(phi_t(z + h) - phi_t(z - h)) / 2h`` (cross-check only)."""
    z = np.atleast_1d(np.asarray(z_grid, dtype=complex)).ravel()
    up = flow(gen, t, z + h, tol).phi
    dn = flow(gen, t, z - h, tol).phi
    return (up - dn) / (2 * h)


def semigroup_residual(gen: Generator, t: float, s: float, z_grid, tol: Tolerances | None = None) -> float:
    """``max |phi_{t+s}(z) - phi_t(phi_s(z))|`` over the grid."""
    inner = flow(gen, s, z_grid, tol)
    outer = flow(gen, t, inner.phi, tol)
    direct = flow(gen, t + s, z_grid, tol)
    return float(np.max(np.abs(direct.phi - outer.phi))) if direct.phi.size else 0.0


# --------------------------------------------------------------------------
# Koenigs function


@dataclass(frozen=True, eq=False)
class KoenigsFunction:
    """Koenigs function ``h`` as a series at 0.

    interior: ``h(phi_t) = exp(G'(b) t) h``, ``h(b) = 0``, ``h'(b) = 1``.
    boundary: ``h(phi_t) = h + t``, ``h(0) = 0``.
    """

    h: PowerSeries
    mode: str
    eigenvalue: complex | None = None
    rotation: complex = 1.0 + 0j
    conjugation: complex | None = None


def _finalize(coeffs: np.ndarray, r_max: float, exact: bool, label: str) -> PowerSeries:
    if exact:
        return PowerSeries(coeffs, r_max, label=label)
    maj = estimate_majorant(coeffs)
    tail = maj.tail(len(coeffs) - 1, r_max) if maj is not None else 0.0
    return PowerSeries(coeffs, r_max, tail + 1e-15, maj, label)


def _interior_recurrence(g: np.ndarray, N: int) -> np.ndarray:
    """Coefficients of h with h'G = G'(0) h, h(0) = 0, h'(0) = 1, for G(0) = 0."""
    lam = g[1]
    if lam == 0:
        raise KoenigsSingularityError("G'(b) = 0: no Koenigs linearization")
    h = np.zeros(N + 1, dtype=complex)
    if N >= 1:
        h[1] = 1.0
    for n in range(2, N + 1):
        j = np.arange(1, n)
        h[n] = -np.sum(j * h[1:n] * g[n - j + 1]) / (lam * (n - 1))
    return h


def koenigs(gen: Generator, N: int = 256, grids: Grids | None = None) -> KoenigsFunction:
    """Koenigs function of the semigroup generated by ``gen``."""
    if gen.trivial:
        raise TrivialGeneratorError("the trivial semigroup has no Koenigs function")
    grids = grids or Grids(degree=max(N, 1))
    r_max = grids.r_max
    if gen.interior:
        b = gen.b
        lam = gen.eigenvalue
        if b == 0:
            Gs = gen.G_series(N, r_max)
            if winding_number(Gs.coefficients, r_max) != 1:
                raise KoenigsSingularityError("G has zeros in the working disk other than b")
            g = np.zeros(N + 2, dtype=complex)
            g[: Gs.degree + 1] = Gs.coefficients
            h = _interior_recurrence(g, N)
            exact = Gs.exact and not np.any(h[max(2, 3 * N // 4) :])
            return KoenigsFunction(_finalize(h, r_max, exact, "koenigs"), "interior", lam)
        # move b to 0 with the involution tau(z) = (b - z) / (1 - conj(b) z)
        m = max(512, 4 * N)
        w = r_max * np.exp(2j * np.pi * np.arange(m) / m)
        tw = (b - w) / (1 - np.conj(b) * w)
        dtau_at_tw = (abs(b) ** 2 - 1.0) / (1 - np.conj(b) * tw) ** 2
        Gt = fit_from_samples(dtau_at_tw * gen.G(tw), r_max, N)
        if winding_number(Gt.coefficients, r_max) != 1:
            raise KoenigsSingularityError("G has zeros in the working disk other than b")
        g = np.zeros(N + 2, dtype=complex)
        g[: Gt.degree + 1] = Gt.coefficients
        g[0] = 0.0
        ht = _finalize(_interior_recurrence(g, N), r_max, False, "koenigs~")
        rho = r_max * 0.999
        r_h = (rho - abs(b)) / (1 - abs(b) * rho)
        tau = expand(ClosedForm.moebius(b, -1.0), N, r_h)
        h = compose(ht, tau).scale(-(1.0 - abs(b) ** 2))
        return KoenigsFunction(h, "interior", lam, conjugation=b)
    # boundary: rotate b to 1, then h~' = 1 / ((1 - z)^2 P(b z))
    b = gen.b
    Pt = rotate(gen.P, b)
    if isinstance(Pt, ClosedForm) and Pt.kind == "binomial_pole" and abs(Pt.parameters[2] - 1) < 1e-14:
        beta, scale, _ = Pt.parameters
        dh = binomial_series(beta - 2.0, N, r_max, 1.0 / scale)
    else:
        try:
            inv = reciprocal(as_series(Pt, N, r_max), degree=N)
        except SymbolZeroError as exc:
            raise KoenigsSingularityError(f"P vanishes in the working disk: {exc}") from exc
        dh = multiply(binomial_series(-2.0, N, r_max), inv)
    ht = antiderivative(dh)
    k = np.arange(ht.degree + 1)
    coeffs = ht.coefficients * np.conj(b) ** k
    h = PowerSeries(coeffs, r_max, ht.tail_bound, ht.majorant, "koenigs")
    return KoenigsFunction(h, "boundary", None, rotation=b)


def koenigs_residual(gen: Generator, K: KoenigsFunction, t: float, z_grid, tol: Tolerances | None = None) -> float:
    """Defect of the linearization identity on the grid."""
    fs = flow(gen, t, z_grid, tol)
    h = K.h
    if fs.phi.size and np.max(np.abs(fs.phi)) > h.r_max * (1 + 1e-12):
        raise OutOfValidityError("flow leaves the validity disk of the Koenigs series")
    hz = h(fs.z)
    hphi = h(fs.phi)
    if K.mode == "interior":
        res = hphi - np.exp(K.eigenvalue * t) * hz
    else:
        res = hphi - hz - t
    return float(np.max(np.abs(res))) if res.size else 0.0
