import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import gamma_ref, taylor_ode
from piv_susy.errors import GammaPole, InsufficientOrder, ZeroDenominator
from piv_susy.seed_solutions import (
    SeedSpec,
    ValueJet,
    apply_annihilation,
    apply_creation,
    build_seed_chain,
    kummer_form_jet,
    ladder_coefficients,
    nu_to_lambda,
    oscillator_jet,
    riccati_check,
    schrodinger_jet,
    schrodinger_residual,
    seed_creation_jet,
    seed_u_jet,
)

X = np.linspace(-5.0, 5.0, 201)


def test_seed_values_at_origin():
    jet = seed_u_jet(np.array([0.0]), 2.3, 0.4, -1.2, 2)
    np.testing.assert_allclose(jet[0], 1.0, rtol=1e-15)
    np.testing.assert_allclose(jet[1], 0.4 - 1.2j, rtol=1e-15)


def test_seed_matches_ode_oracle():
    rng = np.random.default_rng(20240601)
    xs = np.linspace(0.0, 5.0, 101)
    worst = 0.0
    for _ in range(24):
        eps, lam, kappa = rng.uniform(-2.5, 8.0), rng.uniform(-2, 2), rng.uniform(-2, 2)
        ref = taylor_ode(eps, 1.0, complex(lam, kappa), xs)
        got = seed_u_jet(xs, eps, lam, kappa, 1)[0]
        worst = max(worst, float(np.max(np.abs(got - ref))))
    assert worst < 1e-8


def test_growing_seed_closed_form():
    # eps = -1/2, lam = kappa = 0: u = exp(x^2/2)
    u = seed_u_jet(X, -0.5, 0.0, 0.0, 3)
    np.testing.assert_allclose(u[0], np.exp(X * X / 2), rtol=1e-13)
    np.testing.assert_allclose(u[1], X * np.exp(X * X / 2), rtol=1e-13, atol=1e-13)
    down = apply_annihilation(u)
    assert down.epsilon == -1.5
    np.testing.assert_allclose(down[0], math.sqrt(2) * X * np.exp(X * X / 2), rtol=1e-13, atol=1e-13)


def test_ground_state_annihilated_and_excited():
    psi0 = oscillator_jet(X, 0, 3)
    assert np.max(np.abs(apply_annihilation(psi0)[0])) < 1e-15
    up = apply_creation(psi0)
    np.testing.assert_allclose(up[0], oscillator_jet(X, 1, 3)[0], atol=1e-15)


@pytest.mark.parametrize("n", [0, 1, 4, 9])
def test_oscillator_states_normalized(n):
    x = np.linspace(-12, 12, 4001)
    psi = oscillator_jet(x, n, 2)
    np.testing.assert_allclose(np.trapezoid(np.abs(psi[0]) ** 2, x), 1.0, rtol=1e-10)
    assert np.max(schrodinger_residual(psi)) < 1e-10


@pytest.mark.parametrize("eps, lam, kappa", [(-0.5, 0.3, 0.0), (2.5, 1.0, 1.0), (7.0, 1.0, 1.0), (-1.5, 0.2, 0.5)])
def test_residual_after_repeated_annihilation(eps, lam, kappa):
    jet = seed_u_jet(X, eps, lam, kappa, 3)
    for j in range(4):
        scale = np.maximum(np.abs(jet[0]), np.abs(jet[2]) / (1 + X * X))
        assert np.max(schrodinger_residual(jet) / scale) < 1e-10
        assert jet.epsilon == eps - j
        jet = apply_annihilation(jet)


def test_ladder_coefficients_match_direct_action():
    eps, p, q = 1.3, 1.0, 0.4 + 0.9j
    u = kummer_form_jet(X, eps, p, q, 3)
    for direction, op in ((-1, apply_annihilation), (+1, apply_creation)):
        e2, p2, q2 = ladder_coefficients(eps, p, q, direction)
        assert e2 == eps + direction
        via = kummer_form_jet(X, e2, p2, q2, 3)
        direct = op(u)
        scale = np.maximum(np.abs(direct[0]), 1.0)
        assert np.max(np.abs(via[0] - direct[0]) / scale) < 1e-10


def test_chain_energies_and_creation():
    spec = SeedSpec(3.5, lam=1.0, kappa=0.5, k=3)
    chain = build_seed_chain(spec, X, 4)
    assert [j.epsilon for j in chain] == spec.energies == [3.5, 2.5, 1.5]
    np.testing.assert_allclose(chain[1][0], apply_annihilation(chain[0])[0], rtol=1e-10)
    up = seed_creation_jet(spec, X, 3)
    assert up.epsilon == 4.5
    np.testing.assert_allclose(up[0], apply_creation(chain[0])[0], rtol=1e-9, atol=1e-12)
    with pytest.raises(InsufficientOrder):
        build_seed_chain(spec, X, 3)


def test_nu_parametrization():
    eps, nu = -0.5, 0.7
    expected = 2 * nu * (gamma_ref((3 - 2 * eps) / 4) / gamma_ref((1 - 2 * eps) / 4)).real
    np.testing.assert_allclose(nu_to_lambda(nu, eps), expected, rtol=1e-14)
    spec = SeedSpec.from_nu(eps, nu)
    assert spec.kappa == 0 and spec.nu == nu
    np.testing.assert_allclose(spec.lam, expected, rtol=1e-14)
    with pytest.raises(GammaPole):
        nu_to_lambda(0.3, 0.5)
    with pytest.raises(ValueError):
        SeedSpec(1.0, lam=1.0, nu=0.3)


def test_spec_validation_and_regime():
    with pytest.raises(ValueError):
        SeedSpec(1.0, k=0)
    with pytest.raises(ValueError):
        SeedSpec(1.0, k=1.5)
    assert SeedSpec(0.2).real_regime and not SeedSpec(0.5).real_regime
    assert SeedSpec(1.0, 2.0, 3.0).constant == 2 + 3j
    assert SeedSpec(1.0, k=2).with_order(1).k == 1


def test_riccati_check_and_negative_control():
    jet = seed_u_jet(X, 2.5, 1.0, 1.0, 2)
    assert riccati_check(jet) < 1e-9
    bad = ValueJet(x=jet.x, values=jet.values * np.array([1.0, 1.0, 1.001])[:, None], epsilon=jet.epsilon)
    assert riccati_check(bad) > 1e-3
    zero = schrodinger_jet(np.array([0.0]), 0.5, 0.0, 1.0, 2)
    with pytest.raises(ZeroDenominator):
        riccati_check(zero)
    with pytest.raises(InsufficientOrder):
        riccati_check(seed_u_jet(X, 2.5, 1.0, 1.0, 1))


def test_ladder_requires_energy():
    jet = ValueJet(x=X, values=np.ones((3, X.size), dtype=complex))
    with pytest.raises(ValueError):
        apply_creation(jet)


@settings(max_examples=40, deadline=None)
@given(
    eps=st.floats(-2.5, 8.0),
    lam=st.floats(-2.0, 2.0),
    kappa=st.floats(-2.0, 2.0),
)
def test_seed_solves_schrodinger(eps, lam, kappa):
    x = np.linspace(-4.0, 4.0, 41)
    jet = seed_u_jet(x, eps, lam, kappa, 2)
    # second derivative from the first-order jet by a 5-point difference
    h = 1e-3
    d1 = [seed_u_jet(x + s * h, eps, lam, kappa, 1)[1] for s in (-2, -1, 1, 2)]
    fd = (d1[0] - 8 * d1[1] + 8 * d1[2] - d1[3]) / (12 * h)
    scale = np.maximum(np.abs(jet[2]), np.abs(jet[0]) * (1 + x * x))
    assert np.max(np.abs(fd - jet[2]) / scale) < 1e-6
