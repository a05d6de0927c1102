from __future__ import annotations

import math

import numpy as np
import pytest

from wcslab.criteria import (
    boundary_dw_strictness,
    continuity_battery,
    default_witness,
    in_H0_inf_inf_1,
    in_H_inf_inf_1,
    in_little_oh,
    interior_dw_dichotomy,
    no_nontrivial_on_big_space,
    strong_continuity_sufficient,
    w_g_classification,
    weight_normality,
)
from wcslab.errors import InvalidWitnessError, TrivialGeneratorError, UnsupportedWeightError, ValidationError
from wcslab.grids import Grids
from wcslab.means import SpaceSpec, Weight, norm
from wcslab.semiflow import boundary_model, dilation, make_generator
from wcslab.series import ClosedForm, PowerSeries, as_series, multiply
from wcslab.verdict import CriterionVerdict, Verdict

H = Verdict.HOLDS
F = Verdict.FAILS
I = Verdict.INCONCLUSIVE
BIG = SpaceSpec.mixed(2, math.inf, 1)


# ---------------------------------------------------------------- symbol criteria


@pytest.mark.parametrize(
    "g, bounded, little",
    [
        (ClosedForm.binomial_pole(1.0), H, F),
        (ClosedForm.binomial_pole(1.5), F, F),
        (ClosedForm.constant(2.0), H, H),
        (ClosedForm.logarithm(), H, H),
        (PowerSeries([0.0], 0.95), H, H),
    ],
)
def test_symbol_criteria(g, bounded, little):
    assert in_H_inf_inf_1(g).verdict is bounded
    assert in_H0_inf_inf_1(g).verdict is little


@pytest.mark.parametrize("s", [0.25, 0.5, 0.75, 1.0])
def test_classifier_soundness_battery(s):
    g = ClosedForm.binomial_pole(s)
    assert in_H_inf_inf_1(g).verdict is H
    assert in_H0_inf_inf_1(g).verdict is (H if s < 1 else F)


def test_limit_evidence_for_geometric_symbol():
    v = in_H0_inf_inf_1(ClosedForm.binomial_pole(1.0))
    assert v.evidence["extrapolated_limit"] == pytest.approx(1.0, rel=1e-2)


def test_inconclusive_carries_borderline():
    # (1 - r) M_inf ~ (1 - r)^(-0.03): inside the exponent band
    v = in_H_inf_inf_1(ClosedForm.binomial_pole(1.03))
    assert v.verdict is I and "growth" in v.borderline
    with pytest.raises(ValueError):
        CriterionVerdict(Verdict.INCONCLUSIVE, "x", {"a": 1}, {})
    with pytest.raises(ValueError):
        CriterionVerdict(Verdict.HOLDS, "x", {}, {})


def test_in_little_oh_weighted_space():
    X = SpaceSpec.weighted_banach(Weight.standard_power(1.0))
    assert in_little_oh(ClosedForm.binomial_pole(0.5), X).verdict is H
    assert in_little_oh(ClosedForm.binomial_pole(1.0), X).verdict is F
    assert in_little_oh(PowerSeries([1, 2], 0.95), X).verdict is H


# ---------------------------------------------------------------- W_g


def test_w_g_classification_examples():
    out = w_g_classification(ClosedForm.logarithm())
    assert out["bounded"].verdict is H and out["compact"].verdict is H
    assert out["probe"]["norms"][-1] < out["probe"]["norms"][0]
    out = w_g_classification(ClosedForm.binomial_pole(1.0))
    assert out["bounded"].verdict is H and out["compact"].verdict is F
    assert min(out["probe"]["norms"]) >= 0.1
    out = w_g_classification(ClosedForm.constant(1.0))
    assert out["bounded"].verdict is H and out["compact"].verdict is H


def test_w_g_probe_needs_sup_type_mixed_space():
    with pytest.raises(ValidationError):
        w_g_classification(ClosedForm.constant(1.0), SpaceSpec.hardy(2))


def _multiplier_ratios(g, radii):
    """||g f||_{2,inf,2} / ||f||_{2,inf,1} over normalized test functions peaked at rho."""
    from wcslab.criteria import _probe_grids

    G = _probe_grids(Grids())
    gs = as_series(g, G.degree, G.r_max)
    out = []
    for rho in radii:
        f = as_series(ClosedForm.test_function(rho, 1.0, 2.0), G.degree, G.r_max)
        out.append(norm(multiply(gs, f), SpaceSpec.mixed(2, math.inf, 2), G).value / norm(f, BIG, G).value)
    return np.array(out)


def test_multiplier_ratio_bounded_and_unbounded():
    radii = np.array([0.5, 0.8, 0.9, 0.95, 0.98])
    bounded = [_multiplier_ratios(g, radii) for g in (ClosedForm.binomial_pole(1.0), ClosedForm.logarithm())]
    C = max(float(np.max(b)) for b in bounded)
    assert C <= 1.01
    bad = _multiplier_ratios(ClosedForm.binomial_pole(1.5), radii)
    assert np.all(np.diff(bad) > 0)
    # growth like (1 - rho)^(-1/2): a power law, so the ratio passes any fixed bound
    slope = np.polyfit(np.log(1 - radii[1:]), np.log(bad[1:]), 1)[0]
    assert -0.6 <= slope <= -0.4
    assert bad[-1] >= 5 * C


# ---------------------------------------------------------------- strong continuity


def test_continuity_battery_shape():
    b = continuity_battery(SpaceSpec.mixed(2, 2, 1))
    assert len(b) == 10
    assert sum(f.kind == "test_function" for f in b) == 5


def test_strong_continuity_examples():
    v = strong_continuity_sufficient(dilation(), SpaceSpec.mixed(2, 2, 1))
    assert v.verdict is H
    v = strong_continuity_sufficient(boundary_model(), SpaceSpec.hardy(2))
    assert v.verdict is H
    v = strong_continuity_sufficient(dilation(), BIG)
    assert v.verdict is I and v.borderline == {"polynomial_dense": False}


def test_strong_continuity_trivial_generator():
    v = strong_continuity_sufficient(make_generator(0, ClosedForm.constant(0.0)), SpaceSpec.hardy(2))
    assert v.verdict is H


# ---------------------------------------------------------------- dichotomies


@pytest.mark.parametrize(
    "P, expected",
    [
        (ClosedForm.constant(1.0), H),
        (ClosedForm.binomial_pole(1.0), H),
        (ClosedForm.polynomial([1.0, -1.0]), F),
    ],
)
def test_interior_dichotomy(P, expected):
    assert interior_dw_dichotomy(make_generator(0, P)).verdict is expected


def test_interior_dichotomy_preconditions():
    with pytest.raises(TrivialGeneratorError):
        interior_dw_dichotomy(make_generator(0, ClosedForm.constant(0.0)))
    with pytest.raises(ValidationError):
        interior_dw_dichotomy(boundary_model())


def test_default_witness():
    assert default_witness(boundary_model(), BIG) == ClosedForm.binomial_pole(1.5, 1.0, 1.0)
    w = default_witness(boundary_model(), SpaceSpec.weighted_banach(Weight.standard_power(1.0)))
    assert w.parameters[0] == pytest.approx(1.0)
    with pytest.raises(InvalidWitnessError):
        default_witness(boundary_model(), SpaceSpec.weighted_banach(Weight("table", ((0, 0.5, 0.9), (1, 0.5, 0.1)))))


def test_boundary_strictness_examples():
    v = boundary_dw_strictness(boundary_model(), BIG)
    assert v.verdict is H
    assert set(v.evidence["sub_checks"]) == {"in_X", "not_in_little_oh", "in_core"}
    v = boundary_dw_strictness(boundary_model(), SpaceSpec.weighted_banach(Weight.standard_power(1.0)))
    assert v.verdict is H
    v = boundary_dw_strictness(boundary_model(), BIG, ClosedForm.constant(1.0))
    assert v.verdict is F


def test_boundary_strictness_errors():
    with pytest.raises(InvalidWitnessError):
        boundary_dw_strictness(boundary_model(), BIG, ClosedForm.binomial_pole(2.0))
    with pytest.raises(ValidationError):
        boundary_dw_strictness(dilation(), BIG)
    with pytest.raises(ValidationError):
        boundary_dw_strictness(boundary_model(), SpaceSpec.hardy(2))


def test_no_nontrivial_examples():
    v = no_nontrivial_on_big_space(dilation(), BIG)
    assert v.verdict is H
    v = no_nontrivial_on_big_space(boundary_model(), SpaceSpec.weighted_banach(Weight.standard_power(1.0)))
    assert v.verdict is H
    v = no_nontrivial_on_big_space(make_generator(0, ClosedForm.constant(0.0)), BIG)
    assert v.verdict is I


def test_no_nontrivial_needs_big_space():
    with pytest.raises(ValidationError):
        no_nontrivial_on_big_space(dilation(), SpaceSpec.mixed(2, 2, 1))


def test_dichotomy_consistency_with_profiles():
    from wcslab.operators import continuity_profile

    gen = dilation()
    assert interior_dw_dichotomy(gen).verdict is H
    little = continuity_profile(gen, ClosedForm.binomial_pole(0.5), BIG)
    witness = continuity_profile(gen, ClosedForm.binomial_pole(1.5), BIG)
    assert little.extrapolated_limit <= 0.05 * little.f_norm
    assert min(witness.norms) >= 10 * little.extrapolated_limit


# ---------------------------------------------------------------- weights


def test_weight_normality_standard_powers():
    for gamma in (1.0, 2.0):
        v = weight_normality(Weight.standard_power(gamma))
        assert v.verdict is H
        assert v.evidence["U_exponent"] == pytest.approx(gamma)
        assert v.evidence["L_exponent"] == pytest.approx(gamma)


def test_weight_normality_log_weight():
    v = weight_normality(Weight.log_power(1.0, 1.0))
    assert v.verdict is H
    assert v.evidence["U_exponent"] == pytest.approx(1.0)
    assert 0.8 < v.evidence["L_exponent"] < 1.0


def test_weight_normality_untypical():
    with pytest.raises(UnsupportedWeightError):
        weight_normality(Weight.standard_power(0.0))


def test_verdict_serialization():
    v = in_H0_inf_inf_1(ClosedForm.logarithm())
    d = v.as_dict()
    assert d["verdict"] == "holds" and d["criterion_id"] == v.criterion_id
    import json

    json.dumps(d, allow_nan=False)
