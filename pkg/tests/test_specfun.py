import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import optimize, special

from sharpmart import specfun as sf


# ---- Kummer series

def test_kummer_trivial_cases():
    assert sf.kummer_m(0.7, 1.3, 0.0) == 1.0
    assert sf.kummer_m(0.0, 0.5, 3.7) == 1.0


def test_kummer_terminating_is_exact():
    # M(-1, 1/2, z) = 1 - 2z, M(-2, 1/2, z) = 1 - 4z + 4z^2/3
    assert sf.kummer_m(-1, 0.5, 0.5) == 0.0
    for z in (0.1, 1.7, 12.0):
        assert sf.kummer_m(-2, 0.5, z) == pytest.approx(1 - 4 * z + 4 * z * z / 3, abs=1e-15 * (1 + z * z))


@given(st.floats(-3, 3), st.floats(0.3, 3), st.floats(-20, 20))
def test_kummer_matches_mpmath(a, b, z):
    ref = float(mpmath.hyp1f1(a, b, z))
    assert sf.kummer_m(a, b, z) == pytest.approx(ref, rel=1e-10, abs=1e-12)


def test_kummer_rejects_pole_and_huge_argument():
    with pytest.raises(ValueError):
        sf.kummer_m(1.0, -2.0, 1.0)
    with pytest.raises(ValueError):
        sf.kummer_m(1.0, 1.0, 500.0)


def test_kummer_truncation_reports_tolerance():
    with pytest.raises(sf.TruncationError) as ei:
        sf.kummer_m(0.5, 1.5, 150.0, sf.SeriesEval(max_terms=20))
    assert ei.value.achieved_tol > 1e-15


# ---- M_p and nu_p

def test_confluent_mp_polynomial_case():
    assert sf.confluent_mp(1.3, 0.0) == 1.0
    assert sf.confluent_mp(2, 1.0) == pytest.approx(0.0, abs=1e-15)
    assert sf.confluent_mp(2, 0.5) == pytest.approx(0.75, abs=1e-15)


def test_nu_p_values_against_independent_root():
    assert sf.nu_p(2) == pytest.approx(1.0, abs=1e-10)
    ref = optimize.brentq(lambda x: special.hyp1f1(-0.5, 0.5, x * x / 2), 1, 2, xtol=1e-14)
    v1 = sf.nu_p(1.0)
    assert 1 < v1 < 2 and v1 == pytest.approx(ref, abs=1e-10)
    # the first zero moves toward 0 as p grows
    assert sf.nu_p(0.5) > v1 > sf.nu_p(1.5) > sf.nu_p(2)


def test_nu_p_is_first_zero():
    p = 1.3
    v = sf.nu_p(p)
    assert abs(sf.confluent_mp(p, v)) < 1e-10
    xs = np.linspace(0, v * (1 - 1e-6), 500)
    assert np.all(sf.confluent_mp(p, xs) > 0)


def test_nu_p_bad_bracket():
    with pytest.raises(sf.BracketError):
        sf.nu_p(1.0, sf.RootBracket(0.1, 0.5))


# ---- h_p and mu_p

@pytest.mark.parametrize("x,val", [(0, -1), (1, 0), (2, 3)])
def test_h2_is_x2_minus_1(x, val):
    assert sf.parabolic_h(2, x) == pytest.approx(val, abs=1e-13)


@pytest.mark.parametrize("p", [2.5, 3.0, 3.7, 5.0])
def test_h_at_zero(p):
    ref = math.cos(p * math.pi / 2) * 2 ** (p / 2) * math.gamma((p + 1) / 2) / math.sqrt(math.pi)
    assert sf.parabolic_h(p, 0.0) == pytest.approx(ref, rel=1e-12, abs=1e-14)


@given(st.floats(2.0, 6.0), st.floats(-3.0, 6.0))
def test_h_matches_parabolic_cylinder_oracle(p, x):
    ref = float(mpmath.pcfd(p, x) * mpmath.exp(x * x / 4))
    assert sf.parabolic_h(p, x) == pytest.approx(ref, rel=1e-8, abs=1e-9)


@given(st.floats(2.0, 6.0), st.floats(0.0, 8.0))
def test_h_derivative_identity(p, x):
    # h_p' = p h_{p-1}, checked against a central difference of h_p
    e = 1e-5
    fd = (sf.parabolic_h(p, x + e) - sf.parabolic_h(p, x - e)) / (2 * e)
    assert sf.parabolic_h_prime(p, x) == pytest.approx(fd, rel=1e-6, abs=1e-6)


def test_h_integer_is_hermite():
    x = np.linspace(-2, 6, 17)
    for n in (3, 4, 5):
        ref = special.eval_hermitenorm(n, x)
        assert np.allclose(sf.parabolic_h(n, x), ref, rtol=1e-12, atol=1e-10)


def test_mu_p_values():
    assert sf.mu_p(2) == pytest.approx(1.0, abs=1e-10)
    m3 = sf.mu_p(3)
    assert math.sqrt(2) < m3 < 2 * math.sqrt(3) and m3 ** 2 >= 3 - 1
    assert m3 == pytest.approx(math.sqrt(3), abs=1e-10)  # largest zero of He_3
    assert sf.mu_p(4) == pytest.approx(math.sqrt(3 + math.sqrt(6)), abs=1e-10)
    assert sf.mu_p(2) == pytest.approx(sf.nu_p(2), abs=1e-10)


def test_mu_p_is_last_zero():
    p = 3.4
    m = sf.mu_p(p)
    assert abs(sf.parabolic_h(p, m)) < 1e-9
    xs = np.linspace(m * (1 + 1e-6), 2 * math.sqrt(p) + 1, 300)
    assert np.all(sf.parabolic_h(p, xs) > 0)


# ---- I0

def test_bessel_i0():
    assert sf.bessel_i0(0.0) == 1.0
    ref = sum(1 / math.factorial(j) ** 2 for j in range(30))
    assert sf.bessel_i0(2.0) == pytest.approx(ref, rel=1e-14)
    assert sf.bessel_i0(1.0) < sf.bessel_i0(2.0)


@given(st.floats(0, 60))
def test_bessel_i0_matches_scipy(z):
    assert sf.bessel_i0(z) == pytest.approx(special.i0(z), rel=1e-12)


# ---- gamma and H

@pytest.mark.parametrize("p", [1.1, 1.3, 1.5, 1.9])
def test_gamma_at_zero(p):
    assert sf.gamma_fn(p, 0.0) == pytest.approx(p ** (-1 / (p - 1)) * math.gamma(p / (p - 1)), rel=1e-12)


def test_gamma_three_halves():
    assert sf.gamma_fn(1.5, 0.0) == pytest.approx(8 / 9, rel=1e-13)


@pytest.mark.parametrize("p,t", [(1.5, 0.3), (1.2, 2.0), (1.8, 5.0), (1.05, 1.0)])
def test_gamma_against_mpmath_definition(p, t):
    # substituting u = p s^{p-1} turns the integral into an upper incomplete gamma
    mpmath.mp.dps = 30
    q = 1 / mpmath.mpf(p - 1)
    x = p * mpmath.mpf(t) ** (p - 1)
    ref = float(mpmath.exp(x) * mpmath.mpf(p) ** (-q) * q * mpmath.gammainc(q, x))
    assert sf.gamma_fn(p, t) == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize("p", [1.2, 1.5, 1.8])
@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
def test_gamma_ode_residual(p, t):
    e = 1e-5
    d = (sf.gamma_fn(p, t + e) - sf.gamma_fn(p, t - e)) / (2 * e)
    assert abs(1 + d - p * (p - 1) * t ** (p - 2) * sf.gamma_fn(p, t)) < 1e-6


def test_gamma_vec_agrees_with_scalar():
    t = np.array([0.0, 0.01, 0.5, 3.0, 40.0])
    for p in (1.2, 1.5):
        ref = [sf.gamma_fn(p, s) for s in t]
        assert np.allclose(sf.gamma_fn_vec(p, t), ref, rtol=1e-11)


@pytest.mark.parametrize("p", [1.2, 1.5, 1.8])
def test_gamma_concave_nondecreasing(p):
    t = np.linspace(0, 10, 1000)
    g = sf.gamma_fn_vec(p, t)
    assert np.diff(g).min() >= -1e-10
    assert np.diff(g, 2).max() <= 1e-8


def test_gamma_derivative_vanishes_at_infinity():
    # gamma' ~ (2-p) t^{1-p} / (p(p-1)) for large t
    for t in (1e2, 1e4, 1e6):
        e = 1e-3 * t
        d = (sf.gamma_fn(1.5, t + e) - sf.gamma_fn(1.5, t - e)) / (2 * e)
        assert d == pytest.approx(t ** -0.5 * 0.5 / 0.75, rel=5e-2)


def test_gamma_domain():
    with pytest.raises(ValueError):
        sf.gamma_fn(2.0, 1.0)


@pytest.mark.parametrize("p", [1.2, 1.5, 1.8])
def test_h_inverse_examples(p):
    g0 = sf.gamma_fn(p, 0.0)
    assert sf.h_inverse(p, g0) == 0.0
    for t in (0.1, 1.0, 5.0):
        assert sf.h_inverse(p, t + sf.gamma_fn(p, t)) == pytest.approx(t, abs=1e-8)
    with pytest.raises(ValueError):
        sf.h_inverse(p, 0.5 * g0)


def test_h_inverse_against_bisection_oracle():
    p = 1.5
    s = 1 + sf.gamma_fn(p, 1.0)
    ref = optimize.bisect(lambda t: t + sf.gamma_fn(p, t) - s, 0, 5, xtol=1e-14)
    assert sf.h_inverse(p, s) == pytest.approx(ref, abs=1e-10) == pytest.approx(1.0, abs=1e-10)


@given(st.floats(1.05, 1.95), st.floats(0.0, 10.0))
def test_h_inverse_roundtrip(p, t):
    s = t + sf.gamma_fn(p, t)
    assert sf.h_inverse(p, s) == pytest.approx(t, abs=1e-8)
    assert float(sf.h_inverse_vec(p, np.array([s]))[0]) == pytest.approx(t, abs=1e-8)


def test_h_inverse_monotone():
    p = 1.3
    s = sf.gamma_fn(p, 0) + np.linspace(0, 20, 400)
    assert np.all(np.diff(sf.h_inverse_vec(p, s)) >= 0)


# ---- phi

def test_phi_cylinder():
    assert sf.phi_cylinder(3, 0.0) == 1.0
    assert sf.phi_cylinder(3, 1e-8) == pytest.approx(1.0, abs=1e-7)
    num = float(mpmath.quad(lambda s: mpmath.besseli(0, s), [0, 1]))
    assert sf.phi_cylinder(3, 1.0) == pytest.approx(num / (math.e - 1), rel=1e-10)


def test_phi_cylinder_range():
    t = np.linspace(0, 20, 401)
    v = np.array([sf.phi_cylinder(3, s) for s in t])
    assert np.all(v > 0) and np.all(v <= 1)


def test_phi_cylinder_radial_form():
    n, t = 5, 0.7
    r = math.exp(-t / (n - 2))
    assert sf.phi_cylinder_r(n, r) == pytest.approx(sf.phi_cylinder(n, t), rel=1e-12)
