"""Registry of experiments and their runners.

Each experiment checks one statement at desk scale. A runner returns a list
of :class:`Check` (a labelled verdict with its registered expected outcome)
and a mapping of CSV tables. Column layouts are fixed per experiment and
listed in ``Experiment.columns``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

from ..criteria import (
    boundary_dw_strictness,
    in_H_inf_inf_1,
    interior_dw_dichotomy,
    no_nontrivial_on_big_space,
    strong_continuity_sufficient,
    w_g_classification,
    weight_normality,
)
from ..means import SpaceSpec, Weight, sup_norm_profile
from ..operators import continuity_profile, maximal_subspace_member
from ..semiflow import boundary_model, dilation, koenigs, koenigs_residual, make_generator, semigroup_residual
from ..series import ClosedForm
from ..verdict import CriterionVerdict, Verdict

__all__ = ["Check", "Experiment", "Outcome", "REGISTRY", "Table"]


@dataclass(frozen=True)
class Table:
    columns: tuple
    rows: list
    plot: tuple | None = None  # (x column, y column, group column or None)


@dataclass(frozen=True)
class Check:
    label: str
    verdict: CriterionVerdict
    expected: Verdict | None

    @property
    def mismatch(self) -> bool:
        return self.expected is not None and self.verdict.definite and self.verdict.verdict is not self.expected


@dataclass
class Outcome:
    checks: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Experiment:
    id: str
    anchor: str
    summary: str
    expected: dict
    columns: dict
    runner: Callable

    def expected_text(self) -> str:
        return ", ".join(f"{k}={v.value}" for k, v in self.expected.items())


H = Verdict.HOLDS
F = Verdict.FAILS


def _expect(cfg, exp: Experiment, label: str) -> Verdict | None:
    if label in cfg.expected:
        return cfg.expected[label]
    return exp.expected.get(label)


def _label(obj) -> str:
    return obj.describe() if hasattr(obj, "describe") else str(obj)


# --------------------------------------------------------------------------
# sarason_dilation


def _dilation_failure_floor(s: float, p: float, alpha: float) -> float:
    """High-resolution boundary limit of ``(1-r)^alpha M_p(r, (1-z)^-s)``.

    For the dilation, ``T_t f`` stays bounded near the boundary, so this limit
    is the floor of ``||T_t f - f||`` on ``H(p, inf, alpha)``.
    """
    from ..grids import Grids

    hi = Grids(degree=2048, r_max=0.995)
    _, prof = sup_norm_profile(ClosedForm.binomial_pole(s), p, alpha, hi)
    return float(prof.fit.limit)


def run_sarason_dilation(cfg, exp) -> Outcome:
    grids = cfg.grids
    gen = cfg.generators[0] if cfg.generators else dilation()
    X = cfg.spaces[0] if cfg.spaces else SpaceSpec.mixed(2.0, 2.0, 1.0)
    battery = cfg.battery or (
        ClosedForm.constant(1.0),
        ClosedForm.polynomial([0, 1]),
        ClosedForm.binomial_pole(0.5),
        ClosedForm.logarithm(),
    )
    out = Outcome()
    prof_rows, summary = [], []
    tol = grids.tolerances
    for f in battery:
        cp = continuity_profile(gen, f, X, grids.t_grid, grids)
        thresh = max(tol.eps_limit, 1e-2 * cp.f_norm)
        ok = cp.strictly_decreasing and cp.extrapolated_limit <= thresh
        label = f"vanishes[{_label(f)}]"
        v = CriterionVerdict(
            H if ok else F,
            "continuity_profile_vanishes",
            {"profile": cp.as_dict(), "threshold": thresh},
            {"eps_limit": tol.eps_limit, "relative": 1e-2},
        )
        out.checks.append(Check(label, v, _expect(cfg, exp, label)))
        for t, n, e in zip(cp.t_grid, cp.norms, cp.errors):
            prof_rows.append((_label(f), t, n, e))
        summary.append((_label(f), cp.f_norm, cp.extrapolated_limit, cp.slope, cp.strictly_decreasing))
    # failure branch on the big space
    if X.family in ("MixedNorm", "MixedNormLittle") and X.alpha is not None:
        big = SpaceSpec.mixed(X.p, math.inf, X.alpha)
        s = X.alpha + (0.0 if math.isinf(X.p) else 1.0 / X.p)
        f = ClosedForm.binomial_pole(s)
        cp = continuity_profile(gen, f, big, grids.t_grid, grids)
        floor = _dilation_failure_floor(s, X.p, X.alpha)
        m = float(min(cp.norms))
        label = "failure_branch_floor"
        v = CriterionVerdict(
            H if m >= 0.1 * floor else F,
            "continuity_profile_keeps_floor",
            {"space": big.describe(), "function": f.describe(), "profile": cp.as_dict(), "floor_oracle": floor, "min_norm": m},
            {"floor_fraction": 0.1},
        )
        out.checks.append(Check(label, v, _expect(cfg, exp, label)))
        out.tables["failure_branch.csv"] = Table(
            ("t", "norm_lower_bound", "floor_oracle"), [(t, n, floor) for t, n in zip(cp.t_grid, cp.norms)], ("t", "norm_lower_bound", None)
        )
    out.tables["continuity_profiles.csv"] = Table(("function", "t", "norm", "abs_error"), prof_rows, ("t", "norm", "function"))
    out.tables["summary.csv"] = Table(
        ("function", "f_norm", "extrapolated_limit", "slope", "strictly_decreasing"), summary
    )
    return out


# --------------------------------------------------------------------------


def run_separable(cfg, exp) -> Outcome:
    gens = cfg.generators or (dilation(), boundary_model())
    X = cfg.spaces[0] if cfg.spaces else SpaceSpec.mixed(2.0, 2.0, 1.0)
    out = Outcome()
    rows, summary = [], []
    for gen in gens:
        v = strong_continuity_sufficient(gen, X, cfg.grids)
        label = f"sufficient[{gen.describe()}]"
        out.checks.append(Check(label, v, _expect(cfg, exp, label)))
        c4 = v.evidence.get("condition_4")
        if c4:
            for t, a, b in zip(c4["t_grid"], c4["phi_minus_id"], c4["dphi_minus_1"]):
                rows.append((gen.describe(), t, a, b))
        summary.append((gen.describe(), X.describe(), v.evidence.get("condition_3_uniform_bound", math.nan), v.verdict.value))
    out.tables["condition4.csv"] = Table(("generator", "t", "phi_minus_id", "dphi_minus_1"), rows, ("t", "dphi_minus_1", "generator"))
    out.tables["summary.csv"] = Table(("generator", "space", "uniform_bound", "verdict"), summary)
    return out


def run_core(cfg, exp) -> Outcome:
    gen = cfg.generators[0] if cfg.generators else boundary_model()
    X = cfg.spaces[0] if cfg.spaces else SpaceSpec.mixed(2.0, math.inf, 1.0)
    battery = cfg.battery or (
        ClosedForm.binomial_pole(1.5),
        ClosedForm.polynomial([1, 1]),
        ClosedForm.binomial_pole(1.5, 1.0, -1.0),
    )
    out = Outcome()
    rows = []
    for f in battery:
        v = maximal_subspace_member(gen, f, X, cfg.grids)
        label = f"core[{_label(f)}]"
        out.checks.append(Check(label, v, _expect(cfg, exp, label)))
        ev = v.evidence
        rows.append(
            (
                _label(f),
                ev["f_norm"]["value"],
                ev.get("dGf_norm", {}).get("value", math.nan),
                ev.get("continuity_profile", {}).get("extrapolated_limit", math.nan),
                v.verdict.value,
            )
        )
    out.tables["core.csv"] = Table(("function", "f_norm", "dGf_norm", "continuity_limit", "verdict"), rows)
    return out


DEFAULT_SYMBOLS = tuple(ClosedForm.binomial_pole(s) for s in (0.25, 0.5, 0.75, 1.0, 1.25)) + (ClosedForm.logarithm(),)


def _symbol_rows(g, grids):
    from ..series import as_series

    gs = as_series(g, grids.degree, grids.r_max)
    if gs.exact:
        return [], None
    _, prof = sup_norm_profile(gs, math.inf, 1.0, grids)
    return [(_label(g), r, y) for r, y in zip(prof.r, prof.values)], prof.fit


def run_wg_bounded(cfg, exp) -> Outcome:
    out = Outcome()
    rows, summary = [], []
    for g in cfg.battery or DEFAULT_SYMBOLS:
        v = in_H_inf_inf_1(g, cfg.grids)
        label = f"bounded[{_label(g)}]"
        out.checks.append(Check(label, v, _expect(cfg, exp, label)))
        prof_rows, fit = _symbol_rows(g, cfg.grids)
        rows += prof_rows
        summary.append((_label(g), fit.growth if fit else 0.0, fit.limit if fit else 0.0, v.verdict.value))
    out.tables["symbol_profiles.csv"] = Table(("symbol", "r", "one_minus_r_times_Minf"), rows, ("r", "one_minus_r_times_Minf", "symbol"))
    out.tables["summary.csv"] = Table(("symbol", "growth", "extrapolated_limit", "verdict"), summary)
    return out


def run_wg_compact(cfg, exp) -> Outcome:
    out = Outcome()
    X = cfg.spaces[0] if cfg.spaces else SpaceSpec.mixed(2.0, math.inf, 1.0)
    rows, probe_rows, summary = [], [], []
    for g in cfg.battery or DEFAULT_SYMBOLS:
        res = w_g_classification(g, X, cfg.grids)
        v = res["compact"]
        label = f"compact[{_label(g)}]"
        out.checks.append(Check(label, v, _expect(cfg, exp, label)))
        prof_rows, fit = _symbol_rows(g, cfg.grids)
        rows += prof_rows
        pr = res["probe"]
        for rho, n in zip(pr["radii"], pr["norms"]):
            probe_rows.append((_label(g), rho, n))
        summary.append(
            (_label(g), fit.limit if fit else 0.0, pr["decay_exponent"], pr["ratio_first_last"], res["bounded"].verdict.value, v.verdict.value)
        )
    out.tables["symbol_profiles.csv"] = Table(("symbol", "r", "one_minus_r_times_Minf"), rows, ("r", "one_minus_r_times_Minf", "symbol"))
    out.tables["probe.csv"] = Table(("symbol", "rho", "norm_Wg_fz"), probe_rows, ("rho", "norm_Wg_fz", "symbol"))
    out.tables["summary.csv"] = Table(
        ("symbol", "extrapolated_limit", "probe_decay_exponent", "probe_ratio", "bounded", "compact"), summary
    )
    return out


BIG_SPACES = (SpaceSpec.mixed(2.0, math.inf, 1.0), SpaceSpec.weighted_banach(Weight.standard_power(1.0)))


def run_no_nontrivial(cfg, exp) -> Outcome:
    out = Outcome()
    rows, summary = [], []
    for gen in cfg.generators or (dilation(), boundary_model()):
        for X in cfg.spaces or BIG_SPACES:
            v = no_nontrivial_on_big_space(gen, X, cfg.grids)
            label = f"no_nontrivial[{gen.describe()};{X.describe()}]"
            out.checks.append(Check(label, v, _expect(cfg, exp, label)))
            cp = v.evidence.get("continuity_profile", {})
            for t, n in zip(cp.get("t_grid", []), cp.get("norms", [])):
                rows.append((gen.describe(), X.describe(), t, n))
            growth = v.evidence.get("G_over_1_minus_r", {}).get("fit", {}).get("growth", math.nan)
            summary.append((gen.describe(), X.describe(), growth, v.evidence.get("floor", math.nan), v.verdict.value))
    out.tables["continuity.csv"] = Table(("generator", "space", "t", "norm_lower_bound"), rows)
    out.tables["summary.csv"] = Table(("generator", "space", "G_growth", "floor", "verdict"), summary)
    return out


def run_interior(cfg, exp) -> Outcome:
    out = Outcome()
    gens = cfg.generators or tuple(
        make_generator(0.0, P) for P in (ClosedForm.constant(1.0), ClosedForm.binomial_pole(1.0), ClosedForm.polynomial([1, -1]))
    )
    rows, summary = [], []
    for gen in gens:
        v = interior_dw_dichotomy(gen, cfg.grids)
        P = _label(gen.P)
        label = f"interior[P={P}]"
        out.checks.append(Check(label, v, _expect(cfg, exp, label)))
        ev = v.evidence["inverse_P"]
        for r, y in zip(ev.get("r", []), ev.get("profile", [])):
            rows.append((P, r, y))
        summary.append((P, gen.b, ev.get("extrapolated_limit", math.nan), v.verdict.value))
    out.tables["inverse_P_profiles.csv"] = Table(("P", "r", "one_minus_r_times_Minf_inv_P"), rows, ("r", "one_minus_r_times_Minf_inv_P", "P"))
    out.tables["summary.csv"] = Table(("P", "b", "extrapolated_limit", "verdict"), summary)
    return out


def run_boundary(cfg, exp) -> Outcome:
    out = Outcome()
    gens = cfg.generators or (boundary_model(),)
    witness = cfg.battery[0] if cfg.battery else None
    summary = []
    for gen in gens:
        for X in cfg.spaces or BIG_SPACES:
            v = boundary_dw_strictness(gen, X, witness, cfg.grids)
            label = f"strict[{gen.describe()};{X.describe()}]"
            out.checks.append(Check(label, v, _expect(cfg, exp, label)))
            ev = v.evidence
            sub = ev["sub_checks"]
            summary.append(
                (
                    gen.describe(),
                    X.describe(),
                    ev["witness"],
                    ev["witness_norm"]["value"],
                    ev["little_oh"].get("extrapolated_limit", math.nan),
                    sub["not_in_little_oh"],
                    sub["in_core"],
                    v.verdict.value,
                )
            )
    out.tables["summary.csv"] = Table(
        ("generator", "space", "witness", "witness_norm", "little_oh_limit", "not_in_little_oh", "in_core", "verdict"), summary
    )
    return out


def run_weights(cfg, exp) -> Outcome:
    out = Outcome()
    weights = cfg.weights or (Weight.standard_power(1.0), Weight.standard_power(2.0), Weight.log_power(1.0, 1.0))
    summary = []
    for w in weights:
        v = weight_normality(w, cfg.grids.tolerances.c_mono)
        label = f"normal[{w.describe()}]"
        out.checks.append(Check(label, v, _expect(cfg, exp, label)))
        ev = v.evidence
        summary.append((w.describe(), ev["U_exponent"], ev["L_exponent"], v.verdict.value))
    out.tables["summary.csv"] = Table(("weight", "U_exponent", "L_exponent", "verdict"), summary)
    return out


SEMIGROUP_TOL = 1e-8
KOENIGS_TOL = 1e-6


def run_structural(cfg, exp) -> Outcome:
    out = Outcome()
    z = cfg.z_grid.points()
    tol = cfg.grids.tolerances
    rows = []
    times = (0.1, 0.3, 0.7)
    for gen in cfg.generators or (dilation(), boundary_model()):
        worst = 0.0
        for t in times:
            for s in times:
                res = semigroup_residual(gen, t, s, z, tol)
                worst = max(worst, res)
                rows.append((gen.describe(), "semigroup", t, s, res))
        label = f"semigroup_law[{gen.describe()}]"
        v = CriterionVerdict(
            H if worst <= SEMIGROUP_TOL else F, "semigroup_law_residual", {"max_residual": worst}, {"residual": SEMIGROUP_TOL}
        )
        out.checks.append(Check(label, v, _expect(cfg, exp, label)))
        if gen.trivial:
            continue
        K = koenigs(gen, cfg.grids.degree, cfg.grids)
        worst = 0.0
        for t in (0.1, 0.5, 1.0):
            res = koenigs_residual(gen, K, t, z, tol)
            worst = max(worst, res)
            rows.append((gen.describe(), "koenigs", t, 0.0, res))
        label = f"koenigs[{gen.describe()}]"
        v = CriterionVerdict(
            H if worst <= KOENIGS_TOL else F,
            "koenigs_identity_residual",
            {"max_residual": worst, "mode": K.mode},
            {"residual": KOENIGS_TOL},
        )
        out.checks.append(Check(label, v, _expect(cfg, exp, label)))
    out.tables["residuals.csv"] = Table(("generator", "identity", "t", "s", "residual"), rows)
    return out


def _exp(id, anchor, summary, expected, columns, runner) -> Experiment:
    return Experiment(id, anchor, summary, expected, columns, runner)


_SYM = ("(1-z)^-0.25", "(1-z)^-0.5", "(1-z)^-0.75", "(1-z)^-1", "(1-z)^-1.25", "-log(1-z)")

REGISTRY: dict[str, Experiment] = {
    e.id: e
    for e in [
        _exp(
            "sarason_dilation",
            r"\|T_tf-f\|_{H(p,q,\alpha)}\to0\ (q<\infty),\quad \liminf_{t\to0}\|T_tf-f\|_{H(p,\infty,\alpha)}>0",
            "Dilation semigroup: continuity profiles on H(2,2,1) vanish; on H(2,inf,1) the critical pole keeps a floor.",
            {
                "vanishes[1]": H,
                "vanishes[poly(0,1)]": H,
                "vanishes[(1-z)^-0.5]": H,
                "vanishes[-log(1-z)]": H,
                "failure_branch_floor": H,
            },
            {
                "continuity_profiles.csv": "function,t,norm,abs_error",
                "summary.csv": "function,f_norm,extrapolated_limit,slope,strictly_decreasing",
                "failure_branch.csv": "t,norm_lower_bound,floor_oracle",
            },
            run_sarason_dilation,
        ),
        _exp(
            "separable_strong_continuity",
            r"\sup_{0<t\le1}\|T_t\|<\infty,\ \|\varphi_t-\mathrm{id}\|_X\to0,\ \|\varphi_t'-1\|_X\to0\ \Rightarrow\ \|T_tf-f\|_X\to0",
            "Sufficient conditions for strong continuity on a polynomial-dense space.",
            {"sufficient[dilation]": H, "sufficient[G=1-z]": H},
            {
                "condition4.csv": "generator,t,phi_minus_id,dphi_minus_1",
                "summary.csv": "generator,space,uniform_bound,verdict",
            },
            run_separable,
        ),
        _exp(
            "maximal_subspace_core",
            r"\{f\in X:\ (Gf)'\in X\}\subset[\varphi_t',X]",
            "Dense-core membership for the boundary model on H(2,inf,1).",
            {"core[(1-z)^-1.5]": H, "core[poly(1,1)]": H, "core[(1+z)^-1.5]": F},
            {"core.csv": "function,f_norm,dGf_norm,continuity_limit,verdict"},
            run_core,
        ),
        _exp(
            "wg_bounded",
            r"W_gf=g\int_0^zf\ \text{bounded on}\ H(p,\infty,\alpha)\iff\sup_{z}(1-|z|)|g(z)|<\infty",
            "Boundedness of W_g from the symbol profile (1-r) M_inf(r, g).",
            {f"bounded[{s}]": (F if s == "(1-z)^-1.25" else H) for s in _SYM},
            {
                "symbol_profiles.csv": "symbol,r,one_minus_r_times_Minf",
                "summary.csv": "symbol,growth,extrapolated_limit,verdict",
            },
            run_wg_bounded,
        ),
        _exp(
            "wg_compact",
            r"W_g\ \text{compact on}\ H(p,\infty,\alpha)\iff(1-|z|)|g(z)|\to0",
            "Compactness of W_g with a direct probe on normalized test functions.",
            {f"compact[{s}]": (F if s in ("(1-z)^-1", "(1-z)^-1.25") else H) for s in _SYM},
            {
                "symbol_profiles.csv": "symbol,r,one_minus_r_times_Minf",
                "probe.csv": "symbol,rho,norm_Wg_fz",
                "summary.csv": "symbol,extrapolated_limit,probe_decay_exponent,probe_ratio,bounded,compact",
            },
            run_wg_compact,
        ),
        _exp(
            "no_nontrivial_big",
            r"G\not\equiv0\ \Rightarrow\ [\varphi_t',X]\neq X\ \text{for}\ X\in\{H(p,\infty,\alpha),H_v^\infty\}",
            "No nontrivial strongly continuous weighted composition semigroup on a big space.",
            {
                f"no_nontrivial[{g};{x}]": H
                for g in ("dilation", "G=1-z")
                for x in ("H(2,inf,1)", "H^inf_v[(1-r^2)^1]")
            },
            {
                "continuity.csv": "generator,space,t,norm_lower_bound",
                "summary.csv": "generator,space,G_growth,floor,verdict",
            },
            run_no_nontrivial,
        ),
        _exp(
            "interior_dichotomy",
            r"b\in\mathbb{D}:\ [\varphi_t',X]=X_0\iff\frac{1}{P}\in H_0(\infty,\infty,1)",
            "Interior Denjoy-Wolff point: maximal subspace versus little-oh space.",
            {"interior[P=1]": H, "interior[P=(1-z)^-1]": H, "interior[P=poly(1,-1)]": F},
            {
                "inverse_P_profiles.csv": "P,r,one_minus_r_times_Minf_inv_P",
                "summary.csv": "P,b,extrapolated_limit,verdict",
            },
            run_interior,
        ),
        _exp(
            "boundary_strict",
            r"b\in\partial\mathbb{D}:\ X_0\subsetneq[\varphi_t',X]",
            "Boundary Denjoy-Wolff point: a witness in the maximal subspace outside the little-oh space.",
            {"strict[G=1-z;H(2,inf,1)]": H, "strict[G=1-z;H^inf_v[(1-r^2)^1]]": H},
            {
                "summary.csv": "generator,space,witness,witness_norm,little_oh_limit,not_in_little_oh,in_core,verdict",
            },
            run_boundary,
        ),
        _exp(
            "weight_normality",
            r"\frac{v(r)}{(1-r)^{a}}\ \text{almost increasing},\quad \frac{v(r)}{(1-r)^{b}}\ \text{almost decreasing}",
            "Power witnesses for the (U) and (L) growth properties of radial weights.",
            {"normal[(1-r^2)^1]": H, "normal[(1-r^2)^2]": H, "normal[(1-r)^1*log(e/(1-r))^1]": H},
            {"summary.csv": "weight,U_exponent,L_exponent,verdict"},
            run_weights,
        ),
        _exp(
            "structural_identities",
            r"\varphi_{t+s}=\varphi_t\circ\varphi_s,\quad h\circ\varphi_t=e^{G'(b)t}h\ (b\in\mathbb{D}),\quad h\circ\varphi_t=h+t\ (b\in\partial\mathbb{D})",
            "Semigroup law and Koenigs linearization residuals for the model semigroups.",
            {
                "semigroup_law[dilation]": H,
                "semigroup_law[G=1-z]": H,
                "koenigs[dilation]": H,
                "koenigs[G=1-z]": H,
            },
            {"residuals.csv": "generator,identity,t,s,residual"},
            run_structural,
        ),
    ]
}


def run_experiment(cfg) -> Outcome:
    exp = REGISTRY[cfg.experiment]
    return exp.runner(cfg, exp)


def refined_config(cfg):
    """The same config with every grid spacing halved."""
    return replace(cfg, grids=cfg.grids.refined())

