import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sharpmart import burkholder as B
from sharpmart import constants as C
from sharpmart import specfun as sf

pos = st.floats(0.0, 20.0)


def pp(a, b):
    return B.PairPoint([a], [b])


# ---- points

def test_point_validation():
    with pytest.raises(ValueError):
        B.PairPoint([1.0, 2.0], [1.0])
    with pytest.raises(ValueError):
        B.DavisPoint([1.0], -0.1)
    assert B.PairPoint([3.0, 4.0], [0.0, 1.0]).norms == (5.0, 1.0)


# ---- u_r family

def test_u_r_examples():
    assert B.u_r(1, pp(0, 0)) == 0
    assert B.u_r(1, pp(0.3, 0.4)) == pytest.approx(0.07, abs=1e-15)
    assert B.u_r(1, pp(0.8, 0.5)) == pytest.approx(-0.6, abs=1e-15)
    with pytest.raises(ValueError):
        B.u_r(0, pp(1, 1))


def test_u_r_vector_arguments_reduce_to_norms():
    pt = B.PairPoint([0.3, 0.4], [0.0, 0.2])
    assert B.u_r(2.0, pt) == pytest.approx(B.u_r(2.0, pp(0.5, 0.2)), abs=1e-15)


def test_u_infty_examples():
    assert B.u_infty(pp(0.3, 0.5)) == 0
    assert B.u_infty(pp(1, 1)) == pytest.approx(-1.0)


def test_u_one_is_u_r_at_one():
    rng = np.random.default_rng(1)
    for a, b in rng.uniform(0, 3, (1000, 2)):
        assert B.u_one(pp(a, b)) == B.u_r(1.0, pp(a, b))


@given(st.floats(0.01, 10), pos, pos)
def test_u_r_upper_bound(r, a, b):
    assert B.u_r(r, pp(a, b)) <= 1 - 2 * a / r + 1e-12 * (1 + a / r) ** 2


def test_u_r_upper_bound_bulk():
    rng = np.random.default_rng(2)
    r = rng.uniform(0.05, 5, 100_000)
    a, b = rng.uniform(0, 10, (2, 100_000))
    assert np.all(B.u_r_ab(1.0, a / r, b / r) <= 1 - 2 * a / r + 1e-12 * (1 + a / r) ** 2)


@given(st.floats(0.01, 10), pos, pos)
def test_u_r_scaling(r, a, b):
    assert B.u_r(r, pp(a, b)) == pytest.approx(B.u_one(pp(a / r, b / r)), abs=1e-12, rel=1e-12)


# ---- Burkholder functions

def test_burkholder_lt2_examples():
    assert B.burkholder_U_lt2(1.5, pp(0, 1)) == pytest.approx(math.sqrt(1.5), rel=1e-14)
    assert -(0.5 ** -1.5) <= B.burkholder_U_lt2(1.5, pp(1, 0))
    with pytest.raises(ValueError):
        B.burkholder_U_lt2(2.5, pp(0, 1))


def test_burkholder_lt2_integral_identity():
    rng = np.random.default_rng(3)
    for p in (1.2, 1.5, 1.8):
        for a, b in rng.uniform(0, 3, (20, 2)):
            assert B.burkholder_U_lt2_integral(p, pp(a, b)) == pytest.approx(B.burkholder_U_lt2(p, pp(a, b)), abs=1e-6)


def test_burkholder_ge2_examples():
    p = 3
    assert B.burkholder_U_ge2(p, pp(1, 2)) == pytest.approx(0.0, abs=1e-13)
    assert B.burkholder_U_ge2(p, pp(1, 2 - 1e-12)) == pytest.approx(0.0, abs=1e-9)
    assert B.burkholder_U_ge2(p, pp(0, 1)) == pytest.approx(4 / 3, rel=1e-14)
    assert B.burkholder_U_ge2(p, pp(1, 0)) == pytest.approx(-8, rel=1e-14)
    with pytest.raises(ValueError):
        B.burkholder_U_ge2(1.5, pp(0, 1))


def test_burkholder_ge2_at_two_is_quadratic():
    rng = np.random.default_rng(4)
    a, b = rng.uniform(0, 3, (2, 1000))
    assert np.allclose(B.burk_ge2_ab(2.0, a, b), b * b - a * a, atol=1e-12)


# ---- log_U

def test_log_U_examples():
    assert B.log_U(2, pp(0, 0)) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        B.log_U(1.0, pp(0, 0))


@pytest.mark.parametrize("a,K", [(0, 2), (1, 2), (2, 3)])
def test_log_U_equality_on_extremal_line(a, K):
    b = (a + 1) / (K - 1)
    assert B.log_U(K, pp(a, b)) == pytest.approx(b - K * C.young_psi(a), abs=1e-12)


@pytest.mark.parametrize("K", [1.5, 2.0, 5.0])
def test_log_U_interface_continuity(K):
    s = 1 / (K - 1)
    th = np.linspace(0, math.pi / 2, 100)
    # rays through the first quadrant of (|x|, |y|), hitting |x| + |y| = s
    a = s * np.cos(th) ** 2
    b = s - a
    e = 1e-13
    lo = B.log_U_ab(K, a * (1 - e), b * (1 - e))
    hi = B.log_U_ab(K, a * (1 + e) + 1e-14, b * (1 + e) + 1e-14)
    assert np.max(np.abs(lo - hi)) < 1e-10


# ---- weak-type functions

def test_weak_lt2_examples():
    p = 1.5
    g0 = sf.gamma_fn(p, 0.0)
    assert B.weak_U_lt2(p, pp(0, 0)) == pytest.approx(g0 / 2, rel=1e-14)
    for x in (0.5, 1.0, 2.0):
        g = sf.gamma_fn(p, x)
        assert B.weak_U_lt2(p, pp(x, g)) == pytest.approx(g - x ** p, abs=1e-8)


def test_weak_lt2_continuity():
    p = 1.5
    g0 = sf.gamma_fn(p, 0.0)
    for w in np.linspace(0, 1, 25):
        a, b = w * g0, (1 - w) * g0
        lo = B.weak_U_lt2(p, pp(a * (1 - 1e-12), b * (1 - 1e-12)))
        hi = B.weak_U_lt2(p, pp(a * (1 + 1e-12) + 1e-13, b * (1 + 1e-12) + 1e-13))
        assert abs(lo - hi) < 1e-8


def test_weak_gt2_examples():
    p = 3
    assert B.weak_U_gt2(p, pp(0, 0)) == 0
    ref = p * p / 4 * (1 - 2 * (p - 2) / p + (p - 1) ** 2 * (p - 2) / p ** 3)
    assert B.weak_U_gt2(p, pp(0, 1)) == pytest.approx(ref, rel=1e-14)
    assert ref == pytest.approx(13 / 12)
    with pytest.raises(ValueError):
        B.weak_U_gt2(2.0, pp(0, 0))


def test_weak_gt2_continuity():
    p = 3.0
    s = 1 - 1 / p
    w = np.linspace(0, 1, 100)
    a, b = w * s, (1 - w) * s
    lo = B.weak_gt2_ab(p, a * (1 - 1e-14), b * (1 - 1e-14))
    hi = B.weak_gt2_ab(p, a * (1 + 1e-14) + 1e-15, b * (1 + 1e-14) + 1e-15)
    assert np.max(np.abs(lo - hi)) < 1e-10


# ---- Davis functions

def test_davis_at_two_is_x2_minus_t():
    rng = np.random.default_rng(5)
    a, t = rng.uniform(0, 4, (2, 1000))
    assert np.allclose(B.davis_ab(2.0, a, t), a * a - t, atol=1e-12)


@pytest.mark.parametrize("p", [0.5, 1.0, 1.5])
def test_davis_origin_value(p):
    nu = sf.nu_p(p)
    ref = p * nu ** (p - 1) / sf.confluent_mp_prime(p, nu)
    v = B.davis_U(p, B.DavisPoint([0.0], 1.0))
    assert v == pytest.approx(ref, rel=1e-12)
    assert v < 0


@pytest.mark.parametrize("p", [1.0, 1.5, 3.0])
def test_davis_majorization(p):
    rng = np.random.default_rng(6)
    a, t = rng.uniform(0, 10, (2, 100_000))
    D = C.davis_dp(p)
    assert np.all(a ** p - D ** p * t ** (p / 2) <= B.davis_ab(p, a, t) + 1e-9 * (1 + a ** p))


# ---- scans

@pytest.mark.parametrize("name,params,lemma", [
    ("log_U", dict(K=2), "maj1"),
    ("log_U", dict(K=5), "maj1"),
    ("weak_U_lt2", dict(p=1.5), "maj2"),
    ("weak_U_gt2", dict(p=3), "maj3"),
    ("burkholder_U_lt2", dict(p=1.5), "burkholder"),
    ("burkholder_U_ge2", dict(p=3), "burkholder"),
    ("davis_U", dict(p=1.5), "davis"),
    ("davis_U", dict(p=3), "davis"),
])
def test_scan_majorization_passes(name, params, lemma):
    rep = B.scan_majorization(B.make_handle(name, **params), lemma, n_points=100_000, R=10)
    assert rep.passed, rep
    assert rep.n_points == 100_000


def test_scan_majorization_negative_control():
    rep = B.scan_majorization(B.make_handle("log_U", K=2), "maj2", lemma_params=dict(p=1.5))
    assert not rep.passed


def test_scan_majorization_rejects_mismatch():
    with pytest.raises(ValueError):
        B.scan_majorization(B.make_handle("log_U", K=2), "maj2")
    with pytest.raises(ValueError):
        B.scan_majorization(B.make_handle("log_U", K=2), "bogus")


def test_scan_is_reproducible():
    h = B.make_handle("weak_U_lt2", p=1.5)
    r1 = B.scan_majorization(h, "maj2", n_points=5000, seed=7)
    r2 = B.scan_majorization(h, "maj2", n_points=5000, seed=7)
    assert r1.worst_violation == r2.worst_violation


@pytest.mark.parametrize("name,params", [
    ("log_U", dict(K=2)),
    ("weak_U_lt2", dict(p=1.5)),
    ("weak_U_gt2", dict(p=3)),
    ("burkholder_U_ge2", dict(p=3)),
    ("davis_U", dict(p=1.5)),
    ("davis_U", dict(p=3)),
])
def test_smoothness_scans_pass(name, params):
    rep = B.scan_c1_and_concavity(B.make_handle(name, **params))
    assert rep.passed, [(r.label, r.worst_violation) for r in rep.reports]


def test_smoothness_scan_detects_kink():
    # a continuous but non-C^1 perturbation of the outer branch
    bad = B.make_handle("log_U", K=2)
    old = bad.interfaces[0]
    bad.interfaces[0] = B.Interface(old.g, old.first, lambda a, b: old.second(a, b) + 0.01 * (a + b - 1), old.sample)
    rep = B.scan_c1_and_concavity(bad)
    assert not rep.c1.passed
