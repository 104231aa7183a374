import numpy as np

from piv_susy import taylor


def series_of(f_derivs):
    return taylor.from_derivatives(np.array(f_derivs, dtype=complex))


def test_exp_times_exp():
    x = np.linspace(-1, 1, 5)
    e = taylor.from_derivatives(np.array([np.exp(x)] * 6))
    prod = taylor.mul(e, e)
    expected = taylor.from_derivatives(np.array([2.0**m * np.exp(2 * x) for m in range(6)]))
    np.testing.assert_allclose(prod, expected, rtol=1e-14)


def test_division_inverts_multiplication():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(7, 4)) + 1j * rng.normal(size=(7, 4))
    b = rng.normal(size=(7, 4)) + 3.0
    np.testing.assert_allclose(taylor.div(taylor.mul(a, b), b), a, rtol=1e-12, atol=1e-12)


def test_derivative_and_log_derivative():
    x = np.array([0.3, 1.7])
    t = taylor.variable(x, 4)
    cube = taylor.mul(t, taylor.mul(t, t))
    np.testing.assert_allclose(taylor.deriv(cube)[0], 3 * x**2)
    np.testing.assert_allclose(taylor.log_deriv(cube)[0], 3 / x)
    np.testing.assert_allclose(taylor.to_derivatives(cube)[3], 6.0)


def test_truncation_to_shorter_operand():
    a = taylor.constant(2.0, 5)
    b = taylor.constant(3.0, 2)
    assert taylor.add(a, b).shape[0] == 3
    assert taylor.sub(a, b)[0] == -1
    assert taylor.mul(a, b).shape[0] == 3
    assert taylor.truncate(a, 1).shape[0] == 2
    assert taylor.value(a) == 2
