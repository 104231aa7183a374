import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import gamma_ref, hyp1f1_ref
from piv_susy.errors import NonFiniteValue, PoleAtB, PoleAtNonPositiveInteger, RangeExceeded
from piv_susy.special_fns import KummerParams, gamma_fn, hyp1f1, kummer_1f1, kummer_1f1_jet, rgamma


@pytest.mark.parametrize("z, expected", [(1, 1.0), (0.5, math.sqrt(math.pi)), (5, 24.0), (0.25, 3.6256099082219083)])
def test_gamma_classical_values(z, expected):
    np.testing.assert_allclose(gamma_fn(z), expected, rtol=1e-14)


@pytest.mark.parametrize("z", [0, -1, -7, -3 + 1e-14])
def test_gamma_poles(z):
    with pytest.raises(PoleAtNonPositiveInteger):
        gamma_fn(z)
    assert rgamma(z) == 0


def test_gamma_overflow():
    with pytest.raises(NonFiniteValue):
        gamma_fn(500.0)


@pytest.mark.parametrize("z", [0.1, 0.77, 3.3, 12.5, 29.9, -0.5, -2.25, -4.7, 1 + 2j, 2.5 - 3j, -1.5 + 0.5j])
def test_gamma_against_mpmath(z):
    np.testing.assert_allclose(gamma_fn(z), gamma_ref(z), rtol=5e-14)


def test_rgamma_is_reciprocal():
    for z in (0.3, 2.7, -1.4, 1 + 1j):
        np.testing.assert_allclose(rgamma(z) * gamma_fn(z), 1.0, rtol=1e-14)


def test_kummer_params_reject_b_poles():
    with pytest.raises(PoleAtB):
        KummerParams(0.5, 0.0, 1.0)
    with pytest.raises(PoleAtB):
        KummerParams(0.5, -2.0, 1.0)
    with pytest.raises(PoleAtB):
        hyp1f1(0.5, -1.0, 1.0)


def test_trivial_identities():
    assert hyp1f1(0.37, 1.5, 0.0) == 1.0
    np.testing.assert_allclose(hyp1f1(1.0, 2.0, 1.0), math.e - 1.0, rtol=1e-15)
    x = np.linspace(0.0, 9.0, 37)
    np.testing.assert_allclose(hyp1f1(0.5, 0.5, x * x), np.exp(x * x), rtol=1e-13)


def test_compensated_series_example():
    # direct 400-term summation in 50 digits
    a, b, z = 0.25, 0.5, 1 + 0.5j
    with mpmath.workdps(50):
        term, total = mpmath.mpc(1), mpmath.mpc(1)
        for n in range(400):
            term *= (a + n) / ((b + n) * (n + 1)) * z
            total += term
        ref = complex(total)
    np.testing.assert_allclose(hyp1f1(a, b, z), ref, rtol=1e-15)


@pytest.mark.parametrize("b", [0.5, 1.5, 2.5])
@pytest.mark.parametrize("a", [-3.75, -2.0, -0.6, 0.0, 0.25, 1.1, 3.3, 5.5])
def test_real_axis_against_mpmath(a, b):
    z = np.concatenate([np.linspace(0.0, 25.0, 11), np.linspace(26.0, 100.0, 9)])
    got = hyp1f1(a, b, z)
    ref = np.array([hyp1f1_ref(a, b, zz) for zz in z])
    np.testing.assert_allclose(got, ref, rtol=1e-12, atol=1e-300)


@pytest.mark.parametrize("a, b", [(0.25, 0.5), (1.75, 1.5), (-1.3, 0.5)])
def test_negative_axis_against_mpmath(a, b):
    z = -np.linspace(0.0, 60.0, 13)
    ref = np.array([hyp1f1_ref(a, b, zz) for zz in z])
    scale = np.maximum(np.abs(ref), 1e-300)
    assert np.max(np.abs(hyp1f1(a, b, z) - ref) / scale) < 1e-11


def test_complex_plane_off_the_imaginary_axis():
    rng = np.random.default_rng(3)
    r = rng.uniform(0.0, 40.0, 40)
    phi = rng.uniform(-1.2, 1.2, 40)  # |arg z| < 1.2 and the mirrored sector
    z = np.concatenate([r * np.exp(1j * phi), -r * np.exp(1j * phi)])
    got = hyp1f1(0.3 + 0.2j, 1.5, z)
    ref = np.array([hyp1f1_ref(0.3 + 0.2j, 1.5, zz) for zz in z])
    assert np.max(np.abs(got - ref) / np.abs(ref)) < 1e-10


def test_extended_mode_matches_mpmath():
    z = np.array([0.5, 30.0, 12j, -40 + 5j])
    got = hyp1f1(0.3, 1.5, z, extended=True)
    ref = np.array([hyp1f1_ref(0.3, 1.5, zz) for zz in z])
    np.testing.assert_allclose(got, ref, rtol=1e-15)


def test_methods_agree_in_overlap():
    z = np.linspace(30.0, 60.0, 7)
    s = hyp1f1(0.45, 1.5, z, method="series")
    a = hyp1f1(0.45, 1.5, z, method="asymptotic")
    np.testing.assert_allclose(s, a, rtol=1e-12)


def test_range_and_method_errors():
    with pytest.raises(RangeExceeded):
        hyp1f1(0.5, 1.5, 101.0)
    with pytest.raises(ValueError):
        hyp1f1(0.5, 1.5, 1.0, method="magic")


def test_scalar_and_shape():
    assert isinstance(hyp1f1(0.5, 1.5, 2.0), complex)
    z = np.linspace(0, 4, 12).reshape(3, 4)
    assert hyp1f1(0.5, 1.5, z).shape == (3, 4)


def test_vector_result_independent_of_batching():
    z = np.linspace(-30.0, 90.0, 241)
    whole = hyp1f1(-0.7, 0.5, z)
    pieces = np.concatenate([hyp1f1(-0.7, 0.5, c) for c in np.array_split(z, 7)])
    single = np.array([hyp1f1(-0.7, 0.5, zz) for zz in z])
    assert np.array_equal(whole, pieces)
    assert np.array_equal(whole, single)


def test_jet():
    p = KummerParams(0.3, 1.5, 2.0)
    assert kummer_1f1_jet(p, 0)[0] == kummer_1f1(p)
    j0 = kummer_1f1_jet(KummerParams(0.3, 1.5, 0.0), 1)
    np.testing.assert_allclose(j0[1], 0.3 / 1.5, rtol=1e-15)
    h = 1e-4
    jet = kummer_1f1_jet(p, 2)
    fd1 = (hyp1f1(0.3, 1.5, 2.0 + h) - hyp1f1(0.3, 1.5, 2.0 - h)) / (2 * h)
    fd2 = (hyp1f1(0.3, 1.5, 2.0 + h) - 2 * jet[0] + hyp1f1(0.3, 1.5, 2.0 - h)) / h**2
    np.testing.assert_allclose(jet[1], fd1, rtol=1e-7)
    np.testing.assert_allclose(jet[2], fd2, rtol=1e-5)
    with pytest.raises(ValueError):
        kummer_1f1_jet(p, 5)


@settings(max_examples=60, deadline=None)
@given(
    a=st.floats(-4.0, 4.0),
    b=st.sampled_from([0.5, 1.5, 2.5]),
    z=st.floats(0.0, 60.0),
)
def test_kummer_transformation(a, b, z):
    lhs = hyp1f1(a, b, z)
    rhs = np.exp(z) * hyp1f1(b - a, b, -z)
    assert abs(lhs - rhs) <= 1e-11 * max(abs(lhs), np.exp(z) * abs(hyp1f1(b - a, b, -z)), 1e-300)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(-3072, 3072), z=st.floats(0.0, 50.0))
def test_contiguous_relation(n, z):
    # (b - a) M(a - 1) + (2a - b + z) M(a) - a M(a + 1) = 0; dyadic a keeps a +- 1 exact
    a, b = n / 1024, 1.5
    terms = [(b - a) * hyp1f1(a - 1, b, z), (2 * a - b + z) * hyp1f1(a, b, z), -a * hyp1f1(a + 1, b, z)]
    assert abs(sum(terms)) <= 1e-11 * max(abs(t) for t in terms) + 1e-300
