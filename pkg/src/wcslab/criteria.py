"""Numerical decision procedures.

Every function returns a :class:`~wcslab.verdict.CriterionVerdict`: a
three-valued outcome plus the profiles, fits and thresholds behind it. Limits
at the boundary are never read off the last sample; they come from the
boundary fit on the last geometric decade of the radial grid.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import (
    InvalidWitnessError,
    TrivialGeneratorError,
    UnsupportedWeightError,
    ValidationError,
)
from .grids import Grids, Tolerances
from .means import SpaceSpec, Weight, little_oh_profile, norm, sup_norm_profile
from .operators import apply_w_g, continuity_profile, maximal_subspace_member, w_gamma_symbol
from .semiflow import Generator, flow
from .series import ClosedForm, PowerSeries, as_series, circle_values, fit_from_samples
from .verdict import CriterionVerdict, Verdict

__all__ = [
    "boundary_dw_strictness",
    "in_H0_inf_inf_1",
    "in_H_inf_inf_1",
    "in_little_oh",
    "interior_dw_dichotomy",
    "no_nontrivial_on_big_space",
    "strong_continuity_sufficient",
    "w_g_classification",
    "weight_normality",
]

PROBE_RADII = (0.5, 0.6, 0.7, 0.8, 0.9, 0.95)


def _tols(tol: Tolerances) -> dict:
    return {"eps_limit": tol.eps_limit, "band": tol.band, "zero_slack": tol.zero_slack}


def _profile_evidence(prof) -> dict:
    return {"r": prof.r, "profile": prof.values, "fit": prof.fit.as_dict()}


def _is_zero(f: PowerSeries) -> bool:
    return f.exact and not np.any(f.coefficients)


def in_H_inf_inf_1(g, grids: Grids | None = None) -> CriterionVerdict:
    """Boundedness of ``(1 - r) M_inf(r, g)``.

    holds when the fitted growth exponent is at most ``zero_slack``, fails above
    ``band``, inconclusive in between.
    """
    grids = grids or Grids()
    tol = grids.tolerances
    cid = "g_in_H(inf,inf,1)"
    gs = as_series(g, grids.degree, grids.r_max)
    nv, prof = sup_norm_profile(gs, math.inf, 1.0, grids)
    ev = {"norm": nv.as_dict(), **_profile_evidence(prof)}
    if gs.exact:
        return CriterionVerdict(Verdict.HOLDS, cid, {"reason": "polynomial", **ev}, _tols(tol))
    growth = prof.fit.growth
    if growth <= tol.zero_slack:
        return CriterionVerdict(Verdict.HOLDS, cid, ev, _tols(tol))
    if growth > tol.band:
        return CriterionVerdict(Verdict.FAILS, cid, ev, _tols(tol))
    return CriterionVerdict(Verdict.INCONCLUSIVE, cid, ev, _tols(tol), borderline={"growth": growth})


def _limit_decision(fit, tol: Tolerances) -> tuple[Verdict, dict | None]:
    """Decide ``limit = 0`` from a boundary fit."""
    if fit.regime in ("zero", "decays"):
        return Verdict.HOLDS, None
    if fit.regime == "unbounded":
        return Verdict.FAILS, None
    if fit.limit <= tol.eps_limit:
        return Verdict.HOLDS, None
    if fit.limit >= 10 * tol.eps_limit:
        return Verdict.FAILS, None
    return Verdict.INCONCLUSIVE, {"extrapolated_limit": fit.limit, "growth": fit.growth}


def in_H0_inf_inf_1(g, grids: Grids | None = None) -> CriterionVerdict:
    """Vanishing of ``(1 - r) M_inf(r, g)`` at the boundary."""
    grids = grids or Grids()
    tol = grids.tolerances
    cid = "g_in_H0(inf,inf,1)"
    gs = as_series(g, grids.degree, grids.r_max)
    _, prof = sup_norm_profile(gs, math.inf, 1.0, grids)
    if gs.exact:
        ev = {"reason": "polynomial", "extrapolated_limit": 0.0, **_profile_evidence(prof)}
        return CriterionVerdict(Verdict.HOLDS, cid, ev, _tols(tol))
    ev = {"extrapolated_limit": prof.fit.limit, **_profile_evidence(prof)}
    verdict, border = _limit_decision(prof.fit, tol)
    return CriterionVerdict(verdict, cid, ev, _tols(tol), borderline=border)


def in_little_oh(f, X: SpaceSpec, grids: Grids | None = None) -> CriterionVerdict:
    """Membership of ``f`` (already known to lie in ``X``) in the little-oh subspace of ``X``."""
    grids = grids or Grids()
    tol = grids.tolerances
    cid = f"f_in_{X.little().describe()}"
    fs = as_series(f, grids.degree, grids.r_max)
    prof = little_oh_profile(fs, X, grids)
    if fs.exact:
        ev = {"reason": "polynomial", "extrapolated_limit": 0.0, **_profile_evidence(prof)}
        return CriterionVerdict(Verdict.HOLDS, cid, ev, _tols(tol))
    verdict, border = _limit_decision(prof.fit, tol)
    ev = {"extrapolated_limit": prof.fit.limit, **_profile_evidence(prof)}
    return CriterionVerdict(verdict, cid, ev, _tols(tol), borderline=border)


def _probe_grids(grids: Grids) -> Grids:
    """Resolution able to see a test function peaked at |z| = 0.95."""
    from dataclasses import replace

    scale = grids.nodes / max(512, 4 * grids.degree)
    return replace(grids, degree=2048, r_max=0.995, theta_nodes=int(8192 * scale))


def w_g_classification(g, X: SpaceSpec | None = None, grids: Grids | None = None) -> dict:
    """Boundedness and compactness of ``W_g`` on ``X = H(p, inf, alpha)``.

    The verdicts come from the symbol criteria. A direct probe evaluates
    ``||W_g f_z||_X`` on normalized test functions ``f_z`` with ``z = rho e^{i theta*}``,
    ``theta*`` the direction where ``|g|`` peaks, and fits ``norm ~ (1 - rho)^kappa``.
    A probe that clearly vanishes while the criterion says "not compact", or
    clearly stays away from zero while it says "compact", downgrades the
    compactness verdict to inconclusive.
    """
    grids = grids or Grids()
    X = X or SpaceSpec.mixed(2.0, math.inf, 1.0)
    if not (X.family == "MixedNorm" and math.isinf(X.q)):
        raise ValidationError("the W_g probe runs on H(p, inf, alpha)")
    tol = grids.tolerances
    bounded = in_H_inf_inf_1(g, grids)
    compact = in_H0_inf_inf_1(g, grids)
    hi = _probe_grids(grids)
    gs = as_series(g, hi.degree, hi.r_max)
    vals = circle_values(gs.coefficients, hi.r_max, hi.nodes)
    theta = 2 * math.pi * int(np.argmax(np.abs(vals))) / hi.nodes
    norms = []
    for rho in PROBE_RADII:
        fz = ClosedForm.test_function(rho * np.exp(1j * theta), X.alpha, X.p)
        norms.append(norm(apply_w_g(gs, fz, hi), X, hi).value)
    norms = np.array(norms)
    x = np.log(1.0 - np.array(PROBE_RADII))
    finite = np.isfinite(norms) & (norms > 0)
    kappa = float(np.polyfit(x[finite], np.log(norms[finite]), 1)[0]) if finite.sum() >= 2 else math.nan
    ratio = float(norms[0] / norms[-1]) if norms[-1] > 0 else math.inf
    probe = {
        "radii": list(PROBE_RADII),
        "theta": theta,
        "norms": norms,
        "decay_exponent": kappa,
        "ratio_first_last": ratio,
        "space": X.describe(),
    }
    vanishing = kappa >= 2 * tol.band
    floored = kappa <= tol.band
    if (compact.holds and floored) or (compact.fails and vanishing):
        compact = CriterionVerdict(
            Verdict.INCONCLUSIVE,
            compact.criterion_id,
            {**compact.evidence, "probe": probe},
            compact.tolerances,
            "probe disagrees with the symbol criterion",
            borderline={"decay_exponent": kappa},
        )
    else:
        compact = CriterionVerdict(
            compact.verdict, compact.criterion_id, {**compact.evidence, "probe": probe}, compact.tolerances,
            compact.note, compact.borderline,
        )
    return {
        "bounded": bounded,
        "compact": compact,
        "probe": probe,
        "note": "weak compactness equivalence taken as given, not checked independently",
    }


# --------------------------------------------------------------------------
# strong continuity


def _test_parameters(X: SpaceSpec) -> tuple[float, float]:
    if X.family in ("MixedNorm", "MixedNormLittle"):
        return X.alpha, X.p
    if X.family == "Bergman":
        return (X.alpha + 1.0) / X.p, X.p
    if X.family == "Hardy":
        return 0.0, X.p
    return 1.0, math.inf


def continuity_battery(X: SpaceSpec) -> list[ClosedForm]:
    """Ten functions: five polynomials and five normalized test functions."""
    alpha, p = _test_parameters(X)
    polys = [
        ClosedForm.constant(1.0),
        ClosedForm.polynomial([0, 1]),
        ClosedForm.polynomial([0, 0, 1]),
        ClosedForm.polynomial([0, 0, 0, 0, 0, 1]),
        ClosedForm.polynomial([1, 1, 1]),
    ]
    points = (0.3, -0.4, 0.5j, 0.2 + 0.2j, 0.5)
    return polys + [ClosedForm.test_function(z0, alpha, p) for z0 in points]


def _flow_series(gen: Generator, t: float, grids: Grids):
    m = grids.nodes
    z = grids.r_max * np.exp(2j * np.pi * np.arange(m) / m)
    fs = flow(gen, t, z, grids.tolerances)
    phi = fit_from_samples(fs.phi, grids.r_max, grids.degree)
    dphi = fit_from_samples(fs.dphi, grids.r_max, grids.degree)
    return phi, dphi


def _vanishes(ts, ns, tol: Tolerances) -> tuple[bool, float]:
    tt = np.array(ts[-3:])
    yy = np.array(ns[-3:])
    A = np.column_stack([np.ones_like(tt), tt])
    sol, *_ = np.linalg.lstsq(A, yy, rcond=None)
    limit = max(float(sol[0]), 0.0)
    decreasing = all(a >= b for a, b in zip(ns, ns[1:]))
    return decreasing and limit <= max(tol.eps_limit, 0.1 * min(ns)), limit


def strong_continuity_sufficient(gen: Generator, X: SpaceSpec, grids: Grids | None = None) -> CriterionVerdict:
    """The four sufficient conditions for strong continuity on a polynomial-dense space."""
    grids = grids or Grids()
    tol = grids.tolerances
    cid = "strong_continuity_sufficient_conditions"
    tols = {**_tols(tol), "t_grid": list(grids.t_grid)}
    if not X.polynomial_dense:
        return CriterionVerdict(
            Verdict.INCONCLUSIVE,
            cid,
            {"polynomial_dense": False, "space": X.describe()},
            tols,
            "polynomials are not dense in this space; see the big-space and dichotomy criteria",
            borderline={"polynomial_dense": False},
        )
    if gen.trivial:
        return CriterionVerdict(Verdict.HOLDS, cid, {"reason": "trivial semigroup: T_t is the identity"}, tols)
    evidence: dict = {"space": X.describe(), "condition_1_polynomial_dense": True, "condition_2_lattice": True}
    # condition (3): sup over t <= 1 of ||T_t f|| / ||f|| on the battery
    from .operators import apply_weighted_composition

    t3 = sorted({1.0, 0.5, *grids.t_grid}, reverse=True)
    worst = 0.0
    for f in continuity_battery(X):
        base = norm(f, X, grids).value
        for t in t3:
            ratio = norm(apply_weighted_composition(gen, t, f, grids), X, grids).value / base
            worst = max(worst, ratio)
    evidence["condition_3_uniform_bound"] = worst
    cond3 = math.isfinite(worst)
    # condition (4)
    ts = list(grids.t_grid)
    n_phi, n_dphi = [], []
    ident = PowerSeries([0.0, 1.0], grids.r_max)
    one = PowerSeries([1.0], grids.r_max)
    for t in ts:
        phi, dphi = _flow_series(gen, t, grids)
        n_phi.append(norm(phi - ident, X, grids).value)
        n_dphi.append(norm(dphi - one, X, grids).value)
    ok_phi, lim_phi = _vanishes(ts, n_phi, tol)
    ok_dphi, lim_dphi = _vanishes(ts, n_dphi, tol)
    evidence["condition_4"] = {
        "t_grid": ts,
        "phi_minus_id": n_phi,
        "dphi_minus_1": n_dphi,
        "limit_phi": lim_phi,
        "limit_dphi": lim_dphi,
    }
    verdict = Verdict.HOLDS if (cond3 and ok_phi and ok_dphi) else Verdict.FAILS
    return CriterionVerdict(verdict, cid, evidence, tols, "sufficient conditions only")


# --------------------------------------------------------------------------
# dichotomies


def interior_dw_dichotomy(gen: Generator, grids: Grids | None = None) -> CriterionVerdict:
    """Whether the maximal subspace on the big space equals its little-oh subspace
    (interior Denjoy-Wolff point): decided by ``1/P in H0(inf, inf, 1)``."""
    grids = grids or Grids()
    if gen.trivial:
        raise TrivialGeneratorError("P is identically zero")
    if not gen.interior:
        raise ValidationError("interior_dw_dichotomy needs an interior Denjoy-Wolff point")
    inv = w_gamma_symbol(gen, grids)
    v = in_H0_inf_inf_1(inv, grids)
    note = "maximal subspace equals the little-oh space" if v.holds else (
        "maximal subspace strictly larger than the little-oh space" if v.fails else "undecided"
    )
    return CriterionVerdict(
        v.verdict, "interior_dw:1/P_in_H0(inf,inf,1)", {"inverse_P": v.evidence}, v.tolerances, note, v.borderline
    )


def default_witness(gen: Generator, X: SpaceSpec) -> ClosedForm:
    """``(1 - conj(b) z)^(-c)`` with ``c`` the critical exponent of ``X``."""
    if X.family in ("MixedNorm", "MixedNormLittle"):
        c = X.alpha + (0.0 if math.isinf(X.p) else 1.0 / X.p)
    elif X.family in ("WeightedBanach", "WeightedBanachLittle"):
        w = X.weight
        if w.kind == "standard_power":
            c = w.parameters[0]
        elif w.kind == "log_power":
            c = w.parameters[0]
        else:
            raise InvalidWitnessError("no default witness for tabulated weights")
    else:
        raise InvalidWitnessError(f"no default witness for {X.describe()}")
    return ClosedForm.binomial_pole(c, 1.0, gen.b)


def boundary_dw_strictness(
    gen: Generator, X: SpaceSpec, witness: ClosedForm | None = None, grids: Grids | None = None
) -> CriterionVerdict:
    """Strict inclusion of the little-oh space in the maximal subspace (boundary point).

    The witness must (i) lie in ``X``, (ii) stay outside the little-oh
    subspace and (iii) lie in the dense core of the maximal subspace.
    """
    grids = grids or Grids()
    tol = grids.tolerances
    cid = "boundary_dw:little_oh_strictly_inside_maximal_subspace"
    if gen.interior:
        raise ValidationError("boundary_dw_strictness needs a boundary Denjoy-Wolff point")
    if not X.big:
        raise ValidationError(f"{X.describe()} is not a big sup-type space")
    w = witness if witness is not None else default_witness(gen, X)
    nv = norm(w, X, grids)
    if nv.divergent:
        raise InvalidWitnessError(f"witness {getattr(w, 'describe', lambda: w)()} is not in {X.describe()}")
    little = in_little_oh(w, X, grids)
    core = maximal_subspace_member(gen, w, X, grids)
    sub = {
        "in_X": Verdict.HOLDS,
        "not_in_little_oh": {Verdict.HOLDS: Verdict.FAILS, Verdict.FAILS: Verdict.HOLDS}.get(
            little.verdict, Verdict.INCONCLUSIVE
        ),
        "in_core": core.verdict,
    }
    evidence = {
        "witness": w.describe() if isinstance(w, ClosedForm) else repr(w),
        "witness_norm": nv.as_dict(),
        "little_oh": little.evidence,
        "core": core.evidence,
        "sub_checks": {k: v.value for k, v in sub.items()},
    }
    values = list(sub.values())
    if all(v is Verdict.HOLDS for v in values):
        return CriterionVerdict(Verdict.HOLDS, cid, evidence, _tols(tol))
    if any(v is Verdict.FAILS for v in values):
        return CriterionVerdict(Verdict.FAILS, cid, evidence, _tols(tol))
    return CriterionVerdict(
        Verdict.INCONCLUSIVE, cid, evidence, _tols(tol), borderline={k: v.value for k, v in sub.items()}
    )


def no_nontrivial_on_big_space(gen: Generator, X: SpaceSpec, grids: Grids | None = None) -> CriterionVerdict:
    """No strong continuity on a big space.

    Strong continuity on ``X`` would force ``|G(z)| <= C (1 - |z|)`` with
    ``C`` arbitrarily small near the boundary; the profile
    ``M_inf(r, G) / (1 - r)`` is checked to be unbounded. A witness with its
    singularity where ``|G|`` peaks then shows ``||T_t f - f||`` keeping a
    positive floor.
    """
    grids = grids or Grids()
    tol = grids.tolerances
    cid = "no_strongly_continuous_semigroup_on_big_space"
    if not X.big:
        raise ValidationError(f"{X.describe()} is not a big sup-type space")
    if gen.trivial:
        return CriterionVerdict(
            Verdict.INCONCLUSIVE,
            cid,
            {"reason": "trivial generator: precondition not met"},
            _tols(tol),
            "not applicable",
            borderline={"trivial": True},
        )
    radii = grids.radial()
    Gs = gen.G_series(grids.degree, grids.r_max)
    from .means import integral_means
    from .extrapolate import fit_boundary

    mg = integral_means(Gs, math.inf, radii, grids.nodes)
    prof = mg / (1.0 - radii)
    fit = fit_boundary(radii, prof, grids.r_max, tol.band)
    vals = circle_values(Gs.coefficients, grids.r_max, grids.nodes)
    theta = 2 * math.pi * int(np.argmax(np.abs(vals))) / grids.nodes
    point = complex(np.exp(1j * theta))
    if abs(point - round(point.real)) < 1e-12:
        point = complex(round(point.real))
    base_witness = default_witness(Generator(1.0, ClosedForm.constant(1.0)), X)
    witness = ClosedForm.binomial_pole(base_witness.parameters[0], 1.0, point)
    cp = continuity_profile(gen, witness, X, grids.t_grid, grids)
    floor = float(min(cp.norms))
    evidence = {
        "G_over_1_minus_r": {"r": radii, "profile": prof, "fit": fit.as_dict()},
        "witness": witness.describe(),
        "continuity_profile": cp.as_dict(),
        "floor": floor,
    }
    unbounded = fit.regime == "unbounded"
    has_floor = floor > tol.eps_limit
    if unbounded and has_floor:
        return CriterionVerdict(Verdict.HOLDS, cid, evidence, _tols(tol), "strong continuity impossible on X")
    if not unbounded and fit.regime in ("zero", "decays"):
        return CriterionVerdict(Verdict.FAILS, cid, evidence, _tols(tol), "necessary condition not violated")
    return CriterionVerdict(
        Verdict.INCONCLUSIVE, cid, evidence, _tols(tol), borderline={"G_growth": fit.growth, "floor": floor}
    )


# --------------------------------------------------------------------------
# weights

EXPONENT_GRID = tuple(round(0.01 * k, 2) for k in range(1, 1001))


def _weight_gaps(v: Weight) -> np.ndarray:
    """Gaps ``1 - r`` from 1 down to 1e-300 (1e-12 for tabulated weights)."""
    deepest = -12 if v.kind == "table" else -300
    return np.concatenate([[1.0], np.logspace(-0.05, deepest, 40 * abs(deepest))])


def weight_normality(v: Weight, c_mono: float | None = None) -> CriterionVerdict:
    """Search for power witnesses of properties (U) and (L).

    (U): ``v(r) / (1 - r)^a`` almost increasing for some ``a > 0`` (smallest found is reported).
    (L): ``v(r) / (1 - r)^b`` almost decreasing for some ``b > 0`` (largest found is reported).
    """
    tol = Tolerances()
    C = tol.c_mono if c_mono is None else c_mono
    cid = "weight_normal_U_and_L"
    if not v.typical:
        raise UnsupportedWeightError(f"weight {v.describe()} is not typical (does not vanish at the boundary)")
    x = _weight_gaps(v)
    logv = v.log_at_gap(x)
    lx = np.log(x)
    last = x <= 10.0 * x[-1]
    u_pass, l_pass = [], []
    for e in EXPONENT_GRID:
        h = logv - e * lx
        # sign of dh/dlog(1-r) on the last decade, so that a finite grid cannot
        # certify a monotonicity that reverses further out
        slope = float(np.polyfit(lx[last], h[last], 1)[0])
        # almost increasing: h_i <= log C + min_{j >= i} h_j
        suffix_min = np.minimum.accumulate(h[::-1])[::-1]
        if slope <= 1e-9 and np.max(h - suffix_min) <= math.log(C) + 1e-12:
            u_pass.append(e)
        # almost decreasing: h_j <= log C + min_{i <= j} h_i
        prefix_min = np.minimum.accumulate(h)
        if slope >= -1e-9 and np.max(h - prefix_min) <= math.log(C) + 1e-12:
            l_pass.append(e)
    alpha = min(u_pass) if u_pass else None
    beta = max(l_pass) if l_pass else None
    evidence = {
        "weight": v.describe(),
        "U_exponent": alpha,
        "L_exponent": beta,
        "exponent_grid": [EXPONENT_GRID[0], EXPONENT_GRID[-1], len(EXPONENT_GRID)],
        "r_min_gap": float(x[-1]),
    }
    tols = {"c_mono": C}
    if alpha is not None and beta is not None:
        return CriterionVerdict(Verdict.HOLDS, cid, evidence, tols, "normal weight")
    return CriterionVerdict(
        Verdict.INCONCLUSIVE,
        cid,
        evidence,
        tols,
        "not shown normal; quasi-normality is not decidable by a finite test",
        borderline={"U": alpha, "L": beta},
    )
