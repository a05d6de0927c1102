from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wcslab.errors import (
    FlowEscapeError,
    InvalidGeneratorError,
    KoenigsSingularityError,
    TrivialGeneratorError,
    ValidationError,
)
from wcslab.grids import Tolerances
from wcslab.semiflow import (
    boundary_model,
    dilation,
    divided_difference_dphi,
    flow,
    koenigs,
    koenigs_residual,
    make_generator,
    semigroup_residual,
)
from wcslab.series import ClosedForm, PowerSeries


def polar_grid(radius: float, radial: int = 6, angular: int = 24) -> np.ndarray:
    rr = radius * np.arange(1, radial + 1) / radial
    th = 2 * np.pi * np.arange(angular) / angular
    return np.concatenate([[0.0], (rr[:, None] * np.exp(1j * th)[None, :]).ravel()])


GRID = polar_grid(0.9)
SMALL = polar_grid(0.8)


# ---------------------------------------------------------------- generators


def test_make_generator_dilation():
    gen = make_generator(0, ClosedForm.constant(1.0))
    np.testing.assert_allclose(gen.G(GRID), -GRID, atol=1e-15)
    assert gen.mode == "interior" and gen.eigenvalue == -1


def test_make_generator_boundary_model():
    gen = make_generator(1, ClosedForm.binomial_pole(1.0))
    np.testing.assert_allclose(gen.G(GRID), 1 - GRID, rtol=1e-14, atol=1e-15)
    assert gen.mode == "boundary" and gen.eigenvalue is None


def test_trivial_generator():
    gen = make_generator(0.3, ClosedForm.constant(0.0))
    assert gen.trivial
    np.testing.assert_array_equal(gen.G(GRID), 0)


def test_generator_vanishes_at_interior_point():
    b = 0.3 - 0.2j
    gen = make_generator(b, ClosedForm.binomial_pole(1.0))
    assert abs(gen.G(np.array([b]))[0]) < 1e-15


def test_herglotz_violation():
    with pytest.raises(InvalidGeneratorError):
        make_generator(0, ClosedForm.constant(-1.0))
    with pytest.raises(InvalidGeneratorError):
        make_generator(0, PowerSeries([0.1, 1.0], 0.95))
    with pytest.raises(InvalidGeneratorError):
        make_generator(1.5, ClosedForm.constant(1.0))


def test_generator_describe():
    assert dilation().describe() == "dilation"
    assert boundary_model().describe() == "G=1-z"
    assert "b" in make_generator(0.5, ClosedForm.constant(1.0)).to_dict()


def test_dG_matches_divided_difference():
    gen = make_generator(0.2j, ClosedForm.binomial_pole(0.5, 1.0, 1.0))
    z = polar_grid(0.7, 3, 8)
    h = 1e-6
    fd = (gen.G(z + h) - gen.G(z - h)) / (2 * h)
    np.testing.assert_allclose(gen.dG(z), fd, atol=1e-7)


# ---------------------------------------------------------------- flow


@pytest.mark.parametrize("t", [0.1, 0.5, 1.0, 3.0])
def test_flow_dilation_closed_form(t):
    fs = flow(dilation(), t, GRID)
    np.testing.assert_allclose(fs.phi, np.exp(-t) * GRID, atol=1e-9)
    np.testing.assert_allclose(fs.dphi, np.exp(-t), atol=1e-9)


@pytest.mark.parametrize("t", [0.1, 0.5, 1.0, 3.0])
def test_flow_boundary_closed_form(t):
    fs = flow(boundary_model(), t, GRID)
    np.testing.assert_allclose(fs.phi, 1 + np.exp(-t) * (GRID - 1), atol=1e-9)
    np.testing.assert_allclose(fs.dphi, np.exp(-t), atol=1e-9)


def test_flow_at_zero_is_identity():
    fs = flow(boundary_model(), 0.0, GRID)
    np.testing.assert_array_equal(fs.phi, GRID)
    np.testing.assert_array_equal(fs.dphi, 1.0)


def test_flow_validation():
    with pytest.raises(ValidationError):
        flow(dilation(), -0.1, GRID)
    with pytest.raises(ValidationError):
        flow(dilation(), 0.1, np.array([1.0 + 0j]))


def test_flow_escape_signalled():
    # integrating a non-self-map generator pushes trajectories out of the disk
    with pytest.raises(FlowEscapeError):
        flow(unchecked_generator(0, ClosedForm.constant(-1.0)), 20.0, np.array([0.5 + 0j]))


def test_flow_self_map_and_univalence():
    gen = make_generator(0.4, ClosedForm.binomial_pole(0.5))
    for t in (0.1, 1.0):
        fs = flow(gen, t, GRID)
        assert np.max(np.abs(fs.phi)) < 1
        d = np.abs(fs.phi[:, None] - fs.phi[None, :])
        assert np.min(d[~np.eye(len(GRID), dtype=bool)]) > 1e-12


def test_continuity_axiom_monotone():
    for gen in (dilation(), boundary_model()):
        dev = [np.max(np.abs(flow(gen, t, GRID).phi - GRID)) for t in (0.4, 0.2, 0.1, 0.05, 0.01)]
        assert all(a > b for a, b in zip(dev, dev[1:]))


def test_dphi_algebraic_vs_divided_difference():
    gen = make_generator(0.3j, ClosedForm.binomial_pole(0.5))
    z = polar_grid(0.7, 3, 8)
    fs = flow(gen, 0.6, z)
    dd = divided_difference_dphi(gen, 0.6, z)
    np.testing.assert_allclose(fs.dphi, dd, atol=max(1e-6, 10 * fs.ode_error))


def test_dphi_near_zero_of_G_uses_fallback():
    fs = flow(dilation(), 0.5, np.array([0.0 + 0j, 0.5 + 0j]))
    assert fs.dphi[0] == pytest.approx(np.exp(-0.5), abs=1e-9)


# ---------------------------------------------------------------- semigroup law


@given(st.floats(0.0, 2.0), st.floats(0.0, 2.0))
def test_semigroup_law_dilation(t, s):
    assert semigroup_residual(dilation(), t, s, GRID) <= 1e-8


def test_semigroup_law_boundary():
    assert semigroup_residual(boundary_model(), 0.3, 0.3, GRID) <= 1e-8


def test_semigroup_law_at_zero():
    tol = Tolerances()
    assert semigroup_residual(boundary_model(), 0.0, 0.4, GRID) <= tol.tol_ode


def test_semigroup_law_general_generator():
    gen = make_generator(0.5 + 0.5j, ClosedForm.binomial_pole(0.5))
    assert semigroup_residual(gen, 0.4, 0.7, SMALL) <= 1e-8


# ---------------------------------------------------------------- Koenigs


def test_koenigs_dilation():
    K = koenigs(dilation(), 32)
    assert K.mode == "interior" and K.eigenvalue == -1
    np.testing.assert_allclose(K.h.coefficients[:3], [0, 1, 0], atol=1e-15)
    assert koenigs_residual(dilation(), K, 0.5, GRID) <= 1e-8


def test_koenigs_boundary_model():
    K = koenigs(boundary_model(), 256)
    z = SMALL
    np.testing.assert_allclose(K.h(z), -np.log(1 - z), atol=1e-10)
    assert abs(K.h(np.array([0j]))[0]) <= 1e-12
    assert koenigs_residual(boundary_model(), K, 0.7, SMALL) <= 1e-6


@pytest.mark.parametrize("b", [0.3, -0.2 + 0.4j])
def test_koenigs_interior_off_center(b):
    gen = make_generator(b, ClosedForm.constant(1.0))
    K = koenigs(gen, 128)
    h = K.h
    assert abs(h(np.array([b]))[0]) <= 1e-8
    eps = 1e-5
    dh = (h(np.array([b + eps]))[0] - h(np.array([b - eps]))[0]) / (2 * eps)
    assert abs(dh - 1) <= 1e-8
    assert koenigs_residual(gen, K, 0.5, polar_grid(0.5)) <= 1e-6


def test_koenigs_rotated_boundary_point():
    b = np.exp(0.7j)
    gen = make_generator(b, ClosedForm.binomial_pole(1.0, 1.0, b))
    K = koenigs(gen, 256)
    assert K.mode == "boundary"
    assert koenigs_residual(gen, K, 0.5, SMALL) <= 1e-6


@pytest.mark.parametrize("t", [0.1, 0.5, 1.0])
def test_flow_koenigs_commutation(t):
    for gen, N in ((dilation(), 32), (boundary_model(), 256)):
        K = koenigs(gen, N)
        fs = flow(gen, t, SMALL)
        assert koenigs_residual(gen, K, t, SMALL) <= 10 * (fs.ode_error + K.h.tail_bound) + 1e-12


def test_koenigs_residual_at_zero():
    K = koenigs(boundary_model(), 256)
    assert koenigs_residual(boundary_model(), K, 0.0, SMALL) <= K.h.tail_bound + 1e-15


def test_koenigs_trivial_raises():
    with pytest.raises(TrivialGeneratorError):
        koenigs(make_generator(0, ClosedForm.constant(0.0)))


def unchecked_generator(b, P):
    """Generator built without the Herglotz check, for exercising error paths."""
    from wcslab.semiflow import Generator

    gen = object.__new__(Generator)
    object.__setattr__(gen, "b", complex(b))
    object.__setattr__(gen, "P", P)
    object.__setattr__(gen, "label", "unchecked")
    return gen


def test_koenigs_extra_zero_raises():
    # G(z) = -z (1 - 2z) has a second zero at z = 1/2 inside the working disk
    with pytest.raises(KoenigsSingularityError):
        koenigs(unchecked_generator(0, PowerSeries([1.0, -2.0], 0.95)), 64)
