from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wcslab.errors import (
    CompositionRangeError,
    InvalidClosedFormError,
    OutOfValidityError,
    SymbolZeroError,
    ValidationError,
)
from wcslab.series import (
    ClosedForm,
    PowerSeries,
    antiderivative,
    as_series,
    binomial_series,
    circle_values,
    compose,
    constant_series,
    derivative,
    estimate_majorant,
    evaluate,
    expand,
    fit_from_samples,
    identity_series,
    multiply,
    reciprocal,
    winding_number,
)

EPS = np.finfo(float).eps


def coeff_lists(max_degree=24):
    c = st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False)
    return st.lists(c, min_size=1, max_size=max_degree + 1)


def close_within(f: PowerSeries, exact, z) -> bool:
    slack = f.rounding_bound(z) + 8 * EPS * np.abs(exact)
    return bool(np.all(np.abs(f(z) - exact) <= f.tail_bound + slack))


# ---------------------------------------------------------------- expand


def test_expand_constant():
    f = expand(ClosedForm.constant(1.0), 4, 0.9)
    np.testing.assert_array_equal(f.coefficients, [1, 0, 0, 0, 0])
    assert f.tail_bound == 0.0


def test_expand_geometric_series_tail():
    f = expand(ClosedForm.binomial_pole(1.0), 3, 0.5)
    np.testing.assert_array_equal(f.coefficients, [1, 1, 1, 1])
    assert f.tail_bound <= 0.5**4 / (1 - 0.5)


def test_expand_logarithm():
    f = expand(ClosedForm.logarithm(), 3, 0.5)
    np.testing.assert_allclose(f.coefficients, [0, 1, 1 / 2, 1 / 3], rtol=0, atol=1e-15)


@pytest.mark.parametrize(
    "cf",
    [
        ClosedForm.binomial_pole(0.5),
        ClosedForm.binomial_pole(2.5, 1 - 1j, 1j),
        ClosedForm.logarithm(2.0, -1.0),
        ClosedForm.moebius(0.3 + 0.4j, 1j),
        ClosedForm.test_function(0.6j, 1.0, 2.0),
        ClosedForm.polynomial([1, 2, 3]),
    ],
)
def test_expand_matches_closed_form(cf):
    f = expand(cf, 128, 0.9)
    z = 0.9 * np.exp(2j * np.pi * np.arange(64) / 64)
    assert close_within(f, cf(z), z)
    assert close_within(f, cf(0.5 * z), 0.5 * z)


@pytest.mark.parametrize(
    "kind, params",
    [
        ("binomial_pole", (0.0, 1.0, 1.0)),
        ("binomial_pole", (-1.0, 1.0, 1.0)),
        ("binomial_pole", (1.0, 1.0, 0.5)),
        ("moebius", (1.2, 1.0)),
        ("moebius", (0.2, 2.0)),
        ("test_function", (1.0, 1.0, 2.0)),
    ],
)
def test_invalid_closed_forms(kind, params):
    with pytest.raises(InvalidClosedFormError):
        ClosedForm(kind, params)


def test_expand_rejects_bad_arguments():
    with pytest.raises(ValidationError):
        expand(ClosedForm.constant(1.0), -1, 0.5)
    with pytest.raises(ValidationError):
        expand(ClosedForm.constant(1.0), 3, 1.0)


def test_closed_form_dict_round_trip():
    for cf in (
        ClosedForm.binomial_pole(1.5, 2 - 1j, -1.0),
        ClosedForm.logarithm(),
        ClosedForm.polynomial([1, 1j]),
        ClosedForm.test_function(0.5, 1.0, math.inf),
        ClosedForm.moebius(0.1, -1.0),
    ):
        assert ClosedForm.from_dict(cf.to_dict()) == cf


def test_closed_form_unknown_kind():
    with pytest.raises(InvalidClosedFormError):
        ClosedForm.from_dict({"kind": "bessel"})


def test_closed_form_derivative_at():
    cf = ClosedForm.binomial_pole(1.5)
    h = 1e-6
    z = 0.3 + 0.2j
    fd = (cf(z + h) - cf(z - h)) / (2 * h)
    assert abs(cf.derivative_at(z) - fd) < 1e-6


# ---------------------------------------------------------------- evaluate


def test_evaluate_examples():
    f = expand(ClosedForm.binomial_pole(1.0), 64, 0.9)
    assert evaluate(f, 0) == 1
    assert abs(evaluate(f, 0.5) - 2) <= f.tail_bound + f.rounding_bound(0.5)
    g = PowerSeries([0, 0, 1], 0.9)
    assert evaluate(g, 0.5j) == pytest.approx(-0.25)


def test_evaluate_outside_validity():
    f = expand(ClosedForm.binomial_pole(1.0), 16, 0.5)
    with pytest.raises(OutOfValidityError):
        evaluate(f, 0.6)


def test_power_series_invariants():
    with pytest.raises(ValidationError):
        PowerSeries([1.0], 1.0)
    with pytest.raises(ValidationError):
        PowerSeries([1.0], 0.5, tail_bound=-1.0)
    with pytest.raises(ValidationError):
        PowerSeries([], 0.5)
    f = PowerSeries([1, 2], 0.5)
    with pytest.raises(ValueError):
        f.coefficients[0] = 3


# ---------------------------------------------------------------- calculus


def test_derivative_examples():
    d = derivative(PowerSeries([0, 0, 0, 1], 0.9))
    np.testing.assert_array_equal(d.coefficients, [0, 0, 3])
    d = derivative(expand(ClosedForm.logarithm(), 10, 0.9))
    np.testing.assert_allclose(d.coefficients, expand(ClosedForm.binomial_pole(1.0), 9, 0.9).coefficients, atol=1e-15)
    z = derivative(constant_series(1.0, 0, 0.9))
    assert not np.any(z.coefficients)


def test_derivative_tail_covers_error():
    f = expand(ClosedForm.binomial_pole(0.5), 128, 0.9)
    d = derivative(f)
    z = 0.9 * np.exp(2j * np.pi * np.arange(32) / 32)
    exact = ClosedForm.binomial_pole(0.5).derivative_at(z)
    assert close_within(d, exact, z)


def test_antiderivative_examples():
    a = antiderivative(constant_series(1.0, 0, 0.9))
    np.testing.assert_array_equal(a.coefficients, [0, 1])
    f = expand(ClosedForm.binomial_pole(1.0), 20, 0.9)
    a = antiderivative(f)
    assert a.degree == 21
    np.testing.assert_allclose(a.coefficients, expand(ClosedForm.logarithm(), 21, 0.9).coefficients, atol=1e-15)
    z = antiderivative(constant_series(0.0, 3, 0.9))
    assert not np.any(z.coefficients)


def test_antiderivative_tail_covers_error():
    f = expand(ClosedForm.binomial_pole(1.0), 64, 0.9)
    a = antiderivative(f)
    z = 0.9 * np.exp(2j * np.pi * np.arange(32) / 32)
    assert close_within(a, ClosedForm.logarithm()(z), z)


@given(coeff_lists())
def test_derivative_of_antiderivative_is_identity(c):
    f = PowerSeries(c, 0.8)
    back = derivative(antiderivative(f))
    np.testing.assert_allclose(back.coefficients[: len(c)], c, rtol=1e-13, atol=1e-13)


# ---------------------------------------------------------------- algebra


def test_multiply_examples():
    p = multiply(PowerSeries([1, 1], 0.9), PowerSeries([1, -1], 0.9))
    np.testing.assert_array_equal(p.coefficients, [1, 0, -1])
    assert p.exact
    g = expand(ClosedForm.binomial_pole(1.0), 64, 0.9)
    q = multiply(g, PowerSeries([1, -1], 0.9))
    z = np.linspace(-0.9, 0.9, 13)
    assert np.all(np.abs(q(z) - 1) <= q.tail_bound + q.rounding_bound(z))
    zero = multiply(g, constant_series(0.0, 0, 0.9))
    assert not np.any(zero.coefficients)


@given(coeff_lists(12), coeff_lists(12))
def test_multiply_commutes(a, b):
    f, g = PowerSeries(a, 0.8), PowerSeries(b, 0.8)
    np.testing.assert_allclose(multiply(f, g).coefficients, multiply(g, f).coefficients, atol=1e-12)


@given(coeff_lists(12), coeff_lists(12))
def test_add_subtract_round_trip(a, b):
    f, g = PowerSeries(a, 0.8), PowerSeries(b, 0.8)
    back = (f + g) - g
    n = len(a)
    np.testing.assert_allclose(back.coefficients[:n], a, atol=1e-12)
    assert not np.any(np.abs(back.coefficients[n:]) > 1e-12)


@given(coeff_lists(10), st.complex_numbers(max_magnitude=0.7, allow_nan=False, allow_infinity=False))
def test_multiply_evaluates_as_product(a, z):
    f = PowerSeries(a, 0.8)
    g = expand(ClosedForm.binomial_pole(0.5), 64, 0.8)
    prod = multiply(f, g)
    exact = f(z) * ClosedForm.binomial_pole(0.5)(z)
    slack = prod.tail_bound + prod.rounding_bound(z) + abs(f(z)) * (g.tail_bound + g.rounding_bound(z)) + 1e-12
    assert abs(prod(z) - exact) <= slack


def test_compose_examples():
    t = 0.3
    c = compose(PowerSeries([0, 0, 1], 0.9), PowerSeries([0, math.exp(-t)], 0.9))
    np.testing.assert_allclose(c.coefficients[:3], [0, 0, math.exp(-2 * t)], atol=1e-15)
    f = expand(ClosedForm.binomial_pole(1.0), 64, 0.9)
    c = compose(f, PowerSeries([0, 0.5], 0.9))
    k = np.arange(c.degree + 1)
    np.testing.assert_allclose(c.coefficients, 0.5**k, atol=1e-15)
    ident = compose(f, identity_series(1, 0.9))
    np.testing.assert_allclose(ident.coefficients[: f.degree + 1], f.coefficients, atol=1e-15)


def test_compose_range_error():
    f = expand(ClosedForm.binomial_pole(1.0), 16, 0.5)
    with pytest.raises(CompositionRangeError):
        compose(f, PowerSeries([0, 0.9], 0.9))


@given(coeff_lists(5), st.floats(-0.4, 0.4), st.floats(-0.4, 0.4))
def test_compose_associative(a, s, t):
    f = PowerSeries(a, 0.9)
    g = PowerSeries([0, s, 0.1], 0.9)
    h = PowerSeries([0.05, t], 0.9)
    left = compose(compose(f, g), h)
    right = compose(f, compose(g, h))
    z = np.linspace(-0.5, 0.5, 7)
    scale = np.sum(np.abs(a)) + 1
    assert np.max(np.abs(left(z) - right(z))) <= 1e-12 * scale


def test_reciprocal():
    f = PowerSeries([1, -1], 0.9)
    r = reciprocal(f)
    z = np.linspace(-0.9, 0.9, 11)
    assert np.all(np.abs(r(z) - 1 / (1 - z)) <= r.tail_bound + r.rounding_bound(z) + 1e-12)
    with pytest.raises(SymbolZeroError):
        reciprocal(PowerSeries([0.5, -1], 0.9))


# ---------------------------------------------------------------- helpers


@given(coeff_lists(30))
def test_circle_values_match_horner(c):
    r = 0.7
    vals = circle_values(np.array(c, dtype=complex), r, 64)
    z = r * np.exp(2j * np.pi * np.arange(64) / 64)
    np.testing.assert_allclose(vals, np.polynomial.polynomial.polyval(z, c), atol=1e-12 * (1 + np.sum(np.abs(c))))


def test_fit_from_samples_round_trip():
    cf = ClosedForm.binomial_pole(1.5)
    r = 0.9
    m = 1024
    z = r * np.exp(2j * np.pi * np.arange(m) / m)
    f = fit_from_samples(cf(z), r, 200)
    w = 0.8 * np.exp(1j * np.linspace(0, 6, 17))
    assert np.max(np.abs(f(w) - cf(w))) <= f.tail_bound + 1e-12


def test_winding_number():
    assert winding_number(np.array([0, 1.0]), 0.5) == 1
    assert winding_number(np.array([1.0, 0.2]), 0.5) == 0
    assert winding_number(np.array([0, 0, 1.0]), 0.5) == 2


def test_estimate_majorant_dominates_tail():
    k = np.arange(200)
    c = (k + 1.0) * 0.9**k
    maj = estimate_majorant(c)
    assert maj is not None
    kk = np.arange(150, 200)
    assert np.all(np.abs(c[kk]) <= maj.scale * kk**maj.power * maj.ratio**kk * (1 + 1e-9))


def test_binomial_series_polynomial_case():
    f = binomial_series(2.0, 5, 0.9)
    np.testing.assert_allclose(f.coefficients[:3], [1, -2, 1])
    assert f.exact


def test_as_series_passthrough_and_validation():
    f = PowerSeries([1, 2], 0.9)
    assert as_series(f) is f
    with pytest.raises(ValidationError):
        as_series("not a function")


def test_identity_exact():
    assert cmath.isclose(identity_series(3, 0.9)(0.25), 0.25)


def test_reciprocal_of_polynomial_is_not_truncated():
    P = PowerSeries([2.0, 0.5], 0.95)
    inv = reciprocal(P, degree=64)
    z = np.array([0.7, -0.9j])
    np.testing.assert_allclose(inv(z), 1 / (2 + 0.5 * z), atol=max(inv.tail_bound, 1e-14))
    assert inv.degree == 64


def test_multiply_accepts_closed_form():
    f = PowerSeries([0.0, 1.0], 0.95)
    out = multiply(f, ClosedForm.binomial_pole(1.0))
    np.testing.assert_allclose(out.coefficients[:6], [0, 1, 1, 1, 1, 1], atol=1e-14)
