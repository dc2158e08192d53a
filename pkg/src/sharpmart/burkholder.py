"""Burkholder-type special functions and finite-difference checks of their properties.

Every function here is bi-radial, so the vector arguments are reduced to
a = |x| and b = |y| (or a = |x| and t for the Davis functions) before any
formula is touched.  The ``*_ab`` variants are vectorised over arrays of
norms and are what the scans use.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import integrate
from scipy.stats import qmc

from . import specfun
from .constants import young_psi

__all__ = [
    "PairPoint",
    "DavisPoint",
    "GridScanReport",
    "SmoothnessReport",
    "SpecialFnHandle",
    "u_r",
    "u_one",
    "u_infty",
    "burkholder_U_lt2",
    "burkholder_U_lt2_integral",
    "burkholder_U_ge2",
    "burkholder_c",
    "log_U",
    "weak_U_lt2",
    "weak_U_gt2",
    "davis_U",
    "make_handle",
    "scan_majorization",
    "scan_c1_and_concavity",
    "LEMMAS",
]

SCAN_TOL = 1e-9
JUMP_TOL = 1e-4
FORM_TOL = 1e-6
H1 = 1e-5  # first-derivative step
H2 = 1e-4  # second-derivative step


@dataclass(frozen=True)
class PairPoint:
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.atleast_1d(np.asarray(self.x, dtype=float))
        y = np.atleast_1d(np.asarray(self.y, dtype=float))
        if x.shape != y.shape:
            raise ValueError("x and y must have the same dimension")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def norms(self) -> tuple[float, float]:
        return float(np.linalg.norm(self.x)), float(np.linalg.norm(self.y))


@dataclass(frozen=True)
class DavisPoint:
    x: np.ndarray
    t: float

    def __post_init__(self):
        object.__setattr__(self, "x", np.atleast_1d(np.asarray(self.x, dtype=float)))
        if self.t < 0:
            raise ValueError("t must be >= 0")

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.x))


@dataclass
class GridScanReport:
    n_points: int
    worst_violation: float
    worst_point: PairPoint | DavisPoint | None
    tolerance: float
    n_skipped: int = 0
    label: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.worst_violation <= self.tolerance)


@dataclass
class SmoothnessReport:
    function: str
    params: dict
    c1: GridScanReport
    continuity: GridScanReport
    concavity: GridScanReport | None = None
    radial: GridScanReport | None = None

    @property
    def reports(self) -> list[GridScanReport]:
        return [r for r in (self.c1, self.continuity, self.concavity, self.radial) if r is not None]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)


def _pair_norms(pt) -> tuple[float, float]:
    if isinstance(pt, PairPoint):
        return pt.norms
    x, y = pt
    return float(np.linalg.norm(np.atleast_1d(x))), float(np.linalg.norm(np.atleast_1d(y)))


def _as_float(v):
    return float(v) if np.ndim(v) == 0 else v


# ----------------------------------------------------------------- u_r family


def u_r_ab(r: float, a, b):
    if not r > 0:
        raise ValueError("r must be > 0")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    inner = (b * b - a * a) / (r * r)
    outer = 1 - 2 * a / r
    return _as_float(np.where(a + b <= r, inner, outer))


def u_r(r: float, pt) -> float:
    return u_r_ab(r, *_pair_norms(pt))


def u_one(pt) -> float:
    return u_r(1.0, pt)


def u_infty_ab(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return _as_float(np.where(a + b <= 1, 0.0, (b - 1) ** 2 - a * a))


def u_infty(pt) -> float:
    return u_infty_ab(*_pair_norms(pt))


# ------------------------------------------------------- Burkholder functions


def _check_lt2(p):
    if not 1 < p < 2:
        raise ValueError("need 1 < p < 2")


def burk_lt2_ab(p: float, a, b):
    _check_lt2(p)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return _as_float(p ** (2 - p) * (b - a / (p - 1)) * (a + b) ** (p - 1))


def burkholder_U_lt2(p: float, pt) -> float:
    return burk_lt2_ab(p, *_pair_norms(pt))


def burkholder_U_lt2_integral(p: float, pt) -> float:
    """The same function as a mixture of u_r:
    p^{3-p}(2-p)/2 * int_0^inf r^{p-1} u_r dr, integrated numerically.

    The integral itself equals 2/(p(2-p)) (b - a/(p-1)) (a+b)^{p-1}, so an
    extra factor (p-1) in the weight would rescale the closed form by p-1.
    """
    _check_lt2(p)
    a, b = _pair_norms(pt)
    s = a + b
    pieces = []
    if s > 0:
        # r < s: outer branch 1 - 2a/r ; r > s: inner branch (b^2-a^2)/r^2
        pieces.append(integrate.quad(lambda r: r ** (p - 1) - 2 * a * r ** (p - 2), 0, s, epsabs=0, epsrel=1e-12)[0])
        pieces.append(integrate.quad(lambda r: (b * b - a * a) * r ** (p - 3), s, math.inf, epsabs=0, epsrel=1e-12)[0])
    return p ** (3 - p) * (2 - p) / 2 * math.fsum(pieces)


def burk_ge2_ab(p: float, a, b):
    if p < 2:
        raise ValueError("need p >= 2")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    r1 = p * (1 - 1 / p) ** (p - 1) * (b - (p - 1) * a) * (a + b) ** (p - 1)
    r2 = b ** p - (p - 1) ** p * a ** p
    return _as_float(np.where(b >= (p - 1) * a, r1, r2))


def burkholder_U_ge2(p: float, pt) -> float:
    return burk_ge2_ab(p, *_pair_norms(pt))


def burkholder_c(p: float, a, b):
    """The weight c(x, y) in the quadratic-form inequality."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return _as_float(np.where(b > (p - 1) * a, p * (p - 1) * (a + b) ** (p - 2), p * (p - 1) ** p * a ** (p - 2)))


# ------------------------------------------------------------ LlogL function


def _check_K(K):
    if not K > 1:
        raise ValueError("need K > 1")


def log_U_ab(K: float, a, b):
    _check_K(K)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    inner = (K - 1) / 2 * (b * b - a * a) + 1 / (2 * (K - 1))
    arg = (K - 1) / K * (a + b + 1)
    outer = K * b + (K - 1) * (a + 1) - K - K * (a + 1) * np.log(np.maximum(arg, 1e-300))
    return _as_float(np.where(a + b <= 1 / (K - 1), inner, outer))


def log_U(K: float, pt) -> float:
    return log_U_ab(K, *_pair_norms(pt))


# ----------------------------------------------------- weak-type, 1 < p < 2


@lru_cache(maxsize=None)
def _gamma0(p: float) -> float:
    return specfun.gamma_fn(p, 0.0)


def weak_lt2_ab(p: float, a, b):
    _check_lt2(p)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    g0 = _gamma0(p)
    s = a + b
    out = (b * b - a * a) / (2 * g0) + g0 / 2
    far = s > g0
    if np.any(far):
        H = np.atleast_1d(specfun.h_inverse_vec(p, np.atleast_1d(s)[far] if s.ndim else s))
        af = a[far] if a.ndim else a
        bf = b[far] if b.ndim else b
        vals = bf - H ** p - p * H ** (p - 1) * (af - H)
        if out.ndim:
            out = out.copy()
            out[far] = vals
        else:
            out = vals[0]
    return _as_float(out)


def weak_U_lt2(p: float, pt) -> float:
    return weak_lt2_ab(p, *_pair_norms(pt))


# ----------------------------------------------------------- weak-type, p > 2


def weak_gt2_ab(p: float, a, b):
    if not p > 2:
        raise ValueError("need p > 2")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    inner = 0.5 * (p / (p - 1)) ** (p - 1) * (b - (p - 1) * a) * (a + b) ** (p - 1)
    outer = p * p / 4 * (b * b - a * a - 2 * (p - 2) * b / p + (p - 1) ** 2 * (p - 2) / p ** 3)
    return _as_float(np.where(a + b <= 1 - 1 / p, inner, outer))


def weak_U_gt2(p: float, pt) -> float:
    return weak_gt2_ab(p, *_pair_norms(pt))


# ----------------------------------------------------------- Davis functions


@lru_cache(maxsize=None)
def _davis_data(p: float) -> tuple[float, float]:
    """(D_p, derivative of M_p or h_p at D_p)."""
    if p <= 2:
        nu = specfun.nu_p(p)
        return nu, specfun.confluent_mp_prime(p, nu)
    mu = specfun.mu_p(p)
    return mu, specfun.parabolic_h_prime(p, mu)


def _davis_inner(p: float, a, t):
    """Branch containing x = 0 (|x| < D sqrt t)."""
    D, dd = _davis_data(p)
    a = np.asarray(a, dtype=float)
    t = np.asarray(t, dtype=float)
    if p > 2:
        return a ** p - D ** p * t ** (p / 2)
    st = np.sqrt(t)
    u = np.divide(a, st, out=np.zeros_like(a * st), where=st > 0)
    return p * D ** (p - 1) * t ** (p / 2) * specfun.confluent_mp(p, u) / dd


def _davis_outer(p: float, a, t):
    D, dd = _davis_data(p)
    a = np.asarray(a, dtype=float)
    t = np.asarray(t, dtype=float)
    if p <= 2:
        return a ** p - D ** p * t ** (p / 2)
    a, t = np.broadcast_arrays(a, t)
    st = np.sqrt(t)
    with np.errstate(divide="ignore"):
        u = np.where(st > 0, a / np.where(st > 0, st, 1.0), np.inf)
    out = np.empty(a.shape)
    small = u <= 4.0
    if np.any(small):
        out[small] = t[small] ** (p / 2) * specfun._h_any(p, u[small])
    if np.any(~small):
        out[~small] = a[~small] ** p * specfun._h_any(p, u[~small], scaled=True)
    return p * D ** (p - 1) * out / dd


def davis_ab(p: float, a, t):
    if not p > 0:
        raise ValueError("need p > 0")
    a = np.asarray(a, dtype=float)
    t = np.asarray(t, dtype=float)
    a, t = np.broadcast_arrays(a, t)
    D, _ = _davis_data(p)
    inner = a < D * np.sqrt(t)
    out = np.empty(a.shape)
    if np.any(inner):
        out[inner] = _davis_inner(p, a[inner], t[inner])
    if np.any(~inner):
        out[~inner] = _davis_outer(p, a[~inner], t[~inner])
    return _as_float(out)


def davis_U(p: float, pt) -> float:
    if isinstance(pt, DavisPoint):
        return davis_ab(p, pt.norm, pt.t)
    x, t = pt
    return davis_ab(p, float(np.linalg.norm(np.atleast_1d(x))), t)


# ------------------------------------------------------------------ handles


@dataclass
class Interface:
    """Region boundary {g = 0}; ``first`` is the branch valid where g <= 0."""

    g: Callable
    first: Callable
    second: Callable
    sample: Callable  # n -> (a, b) points on the interface


@dataclass
class SpecialFnHandle:
    name: str
    params: dict
    kind: str  # "pair" or "davis"
    f: Callable
    interfaces: list = field(default_factory=list)

    def __call__(self, a, b):
        return self.f(a, b)


def _sum_interface(level: float, lo_fn, hi_fn):
    def sample(n):
        s = np.linspace(0.0, 1.0, n)
        return s * level, (1 - s) * level

    return Interface(lambda a, b: a + b - level, lo_fn, hi_fn, sample)


def make_handle(name: str, **params) -> SpecialFnHandle:
    """Bundle an evaluator with its parameters and region interfaces."""
    if name == "log_U":
        K = params["K"]
        _check_K(K)
        c = 1 / (K - 1)
        inner = lambda a, b: (K - 1) / 2 * (b * b - a * a) + c / 2
        outer = lambda a, b: K * b + (K - 1) * (a + 1) - K - K * (a + 1) * np.log((K - 1) / K * (a + b + 1))
        return SpecialFnHandle(name, params, "pair", lambda a, b: log_U_ab(K, a, b), [_sum_interface(c, inner, outer)])
    if name == "weak_U_lt2":
        p = params["p"]
        g0 = _gamma0(p)
        inner = lambda a, b: (b * b - a * a) / (2 * g0) + g0 / 2

        def outer(a, b):
            H = specfun.h_inverse_vec(p, np.maximum(a + b, g0))
            return b - H ** p - p * H ** (p - 1) * (a - H)

        return SpecialFnHandle(name, params, "pair", lambda a, b: weak_lt2_ab(p, a, b), [_sum_interface(g0, inner, outer)])
    if name == "weak_U_gt2":
        p = params["p"]
        inner = lambda a, b: 0.5 * (p / (p - 1)) ** (p - 1) * (b - (p - 1) * a) * (a + b) ** (p - 1)
        outer = lambda a, b: p * p / 4 * (b * b - a * a - 2 * (p - 2) * b / p + (p - 1) ** 2 * (p - 2) / p ** 3)
        return SpecialFnHandle(name, params, "pair", lambda a, b: weak_gt2_ab(p, a, b), [_sum_interface(1 - 1 / p, inner, outer)])
    if name == "burkholder_U_ge2":
        p = params["p"]
        r1 = lambda a, b: p * (1 - 1 / p) ** (p - 1) * (b - (p - 1) * a) * (a + b) ** (p - 1)
        r2 = lambda a, b: b ** p - (p - 1) ** p * a ** p

        def sample(n):
            a = np.linspace(0.05, 2.0, n)
            return a, (p - 1) * a

        iface = Interface(lambda a, b: (p - 1) * a - b, r1, r2, sample)
        return SpecialFnHandle(name, params, "pair", lambda a, b: burk_ge2_ab(p, a, b), [iface])
    if name == "burkholder_U_lt2":
        p = params["p"]
        return SpecialFnHandle(name, params, "pair", lambda a, b: burk_lt2_ab(p, a, b), [])
    if name == "davis_U":
        p = params["p"]
        D, _ = _davis_data(p)

        def sample(n):
            t = np.linspace(0.05, 4.0, n)
            return D * np.sqrt(t), t

        iface = Interface(
            lambda a, t: a - D * np.sqrt(t),
            lambda a, t: _davis_inner(p, a, t),
            lambda a, t: _davis_outer(p, a, t),
            sample,
        )
        return SpecialFnHandle(name, params, "davis", lambda a, t: davis_ab(p, a, t), [iface])
    if name == "u_infty":
        return SpecialFnHandle(name, params, "pair", u_infty_ab, [])
    raise ValueError(f"unknown special function {name!r}")


# ------------------------------------------------------------- majorization

LEMMAS = ("maj1", "maj2", "maj3", "burkholder", "davis")
_LEMMA_OWNER = {
    "maj1": ("log_U",),
    "maj2": ("weak_U_lt2",),
    "maj3": ("weak_U_gt2",),
    "burkholder": ("burkholder_U_lt2", "burkholder_U_ge2"),
    "davis": ("davis_U",),
}


def majorant(lemma: str, params: dict, owner: str | None = None) -> Callable:
    """Lower bound that the special function must dominate."""
    if lemma == "maj1":
        K = params["K"]
        return lambda a, b: np.maximum(b, 1 / (2 * (K - 1))) - K * young_psi(a)
    if lemma == "maj2":
        p = params["p"]
        g0 = _gamma0(p)
        return lambda a, b: np.maximum(b, g0 / 2) - a ** p
    if lemma == "maj3":
        p = params["p"]
        return lambda a, b: p * np.maximum(b - 1 + 1 / p, 0.0) - p ** (p - 1) / 2 * a ** p
    if lemma == "burkholder":
        p = params["p"]
        k = (p - 1) ** (-p) if p < 2 else (p - 1) ** p
        return lambda a, b: b ** p - k * a ** p
    if lemma == "davis":
        p = params["p"]
        D, _ = _davis_data(p)
        return lambda a, t: a ** p - D ** p * t ** (p / 2)
    raise ValueError(f"unknown lemma {lemma!r}")


def _lowdisc(n: int, seed: int, R: float) -> np.ndarray:
    pts = qmc.Halton(d=2, scramble=True, seed=seed).random(n)
    return R * pts


def scan_majorization(
    fn: SpecialFnHandle,
    lemma: str,
    n_points: int = 100_000,
    seed: int = 0,
    R: float = 10.0,
    lemma_params: dict | None = None,
    tolerance: float = SCAN_TOL,
) -> GridScanReport:
    """Worst value of (majorant - U) over a scrambled Halton set in [0, R]^2.

    The two coordinates are (|x|, |y|), or (|x|, t) for the Davis function.
    Passing ``lemma_params`` allows a deliberately mismatched lemma (a
    negative control); otherwise a mismatch is an error.
    """
    if lemma not in LEMMAS:
        raise ValueError(f"unknown lemma {lemma!r}")
    if lemma_params is None:
        if fn.name not in _LEMMA_OWNER[lemma]:
            raise ValueError(f"lemma {lemma} does not belong to {fn.name}")
        lemma_params = fn.params
    pts = _lowdisc(n_points, seed, R)
    a, b = pts[:, 0], pts[:, 1]
    viol = majorant(lemma, lemma_params)(a, b) - fn(a, b)
    i = int(np.argmax(viol))
    if fn.kind == "davis":
        wp = DavisPoint([a[i]], b[i])
    else:
        wp = PairPoint([a[i]], [b[i]])
    return GridScanReport(n_points, float(viol[i]), wp, tolerance, label=f"{fn.name}:{lemma}")


# ------------------------------------------------------- smoothness / (c)/(d)


def _one_sided_grad(f, a, b, sa, sb, h=H1):
    """Gradient of f at (a, b) from 3-point one-sided stencils.

    sa, sb in {+1, -1} say on which side of the point the branch lives.
    """
    f0 = f(a, b)
    da = sa * (-3 * f0 + 4 * f(a + sa * h, b) - f(a + 2 * sa * h, b)) / (2 * h)
    db = sb * (-3 * f0 + 4 * f(a, b + sb * h) - f(a, b + 2 * sb * h)) / (2 * h)
    return np.stack([da, db], axis=-1)


def _interface_scan(fn: SpecialFnHandle, n: int):
    worst_jump, worst_gap = -np.inf, -np.inf
    jpt = gpt = None
    count = 0
    for iface in fn.interfaces:
        a, b = iface.sample(n)
        count += a.size
        # sign of the interface normal decides the side of each branch
        ga = np.sign(iface.g(a + H1, b) - iface.g(a - H1, b))
        gb = np.sign(iface.g(a, b + H1) - iface.g(a, b - H1))
        ga = np.where(ga == 0, 1.0, ga)
        gb = np.where(gb == 0, 1.0, gb)
        g1 = _one_sided_grad(iface.first, a, b, -ga, -gb)
        g2 = _one_sided_grad(iface.second, a, b, ga, gb)
        jump = np.linalg.norm(g1 - g2, axis=-1)
        # value gap relative to the local scale of U; the interface location
        # itself is only known to root precision for the Davis functions
        v1 = iface.first(a, b)
        scale = np.maximum.reduce([np.ones_like(a), np.abs(v1), np.linalg.norm(g1, axis=-1) * np.hypot(a, b)])
        gap = np.abs(v1 - iface.second(a, b)) / scale
        i = int(np.argmax(jump))
        if jump[i] > worst_jump:
            worst_jump, jpt = float(jump[i]), (a[i], b[i])
        k = int(np.argmax(gap))
        if gap[k] > worst_gap:
            worst_gap, gpt = float(gap[k]), (a[k], b[k])
    return count, worst_jump, jpt, worst_gap, gpt


def _point(fn, ab):
    if ab is None:
        return None
    if fn.kind == "davis":
        return DavisPoint([ab[0]], ab[1])
    return PairPoint([ab[0]], [ab[1]])


def _rand_pairs(rng, n, n_dim=2, lo=0.5, hi=1.5):
    """Random (x, y) in R^n with |x| + |y| in [lo, hi]."""
    x = rng.standard_normal((n, n_dim))
    y = rng.standard_normal((n, n_dim))
    s = rng.uniform(lo, hi, n) / (np.linalg.norm(x, axis=1) + np.linalg.norm(y, axis=1))
    return x * s[:, None], y * s[:, None]


def _quad_form_scan(p: float, n: int, rng, eps: float = H2):
    """(c) for burkholder_U_ge2 in ambient dimension 2."""
    x, y = _rand_pairs(rng, n)
    h = rng.standard_normal((n, 2))
    k = rng.standard_normal((n, 2))
    # keep |k| <= |h|
    swap = np.linalg.norm(k, axis=1) > np.linalg.norm(h, axis=1)
    h[swap], k[swap] = k[swap].copy(), h[swap].copy()
    a = np.linalg.norm(x, axis=1)
    b = np.linalg.norm(y, axis=1)
    step = eps * np.sqrt(np.sum(h * h, 1) + np.sum(k * k, 1))
    near = (np.abs(b - (p - 1) * a) < 10 * step * p) | (a < 10 * step) | (b < 10 * step)
    U = lambda xx, yy: burk_ge2_ab(p, np.linalg.norm(xx, axis=1), np.linalg.norm(yy, axis=1))
    q = (U(x + eps * h, y + eps * k) - 2 * U(x, y) + U(x - eps * h, y - eps * k)) / eps ** 2
    rhs = burkholder_c(p, a, b) * (np.sum(k * k, 1) - np.sum(h * h, 1))
    viol = np.where(near, -np.inf, q - rhs)
    i = int(np.argmax(viol))
    return GridScanReport(n, float(viol[i]), PairPoint(x[i], y[i]), FORM_TOL, int(near.sum()), "quadratic_form")


def _radial_scan(fn: SpecialFnHandle, n: int, rng):
    """(d): U is nondecreasing in |y|, i.e. U_y = alpha y with alpha >= 0."""
    a = rng.uniform(0, 3, n)
    b = rng.uniform(0, 3, n)
    near = np.zeros(n, dtype=bool)
    for iface in fn.interfaces:
        near |= np.abs(iface.g(a, b)) < 10 * H1 * 10
    near |= b < 2 * H1
    db = (fn(a, b + H1) - fn(a, b - H1)) / (2 * H1)
    viol = np.where(near, -np.inf, -db)
    i = int(np.argmax(viol))
    return GridScanReport(n, float(viol[i]), PairPoint([a[i]], [b[i]]), FORM_TOL, int(near.sum()), "radial")


def _davis_pde_scan(p: float, n: int, rng):
    """1/2 <h U_xx h> + U_t |h|^2 <= 0 for x in R^2, off |x| = D sqrt t.

    By the scaling U(lam x, lam^2 t) = lam^p U(x, t) it suffices to look at
    t near 1; the violation is divided by max(1, |x|^p + t^{p/2}) to keep the
    finite-difference roundoff on a fixed scale.
    """
    D, _ = _davis_data(p)
    t = rng.uniform(0.5, 1.5, n)
    r = rng.uniform(0, 2 * D, n) * np.sqrt(t)
    ang = rng.uniform(0, 2 * np.pi, n)
    x = np.stack([r * np.cos(ang), r * np.sin(ang)], axis=1)
    h = rng.standard_normal((n, 2))
    h /= np.linalg.norm(h, axis=1)[:, None]
    near = np.abs(r - D * np.sqrt(t)) < 10 * H2 * 2
    U = lambda xx, tt: davis_ab(p, np.linalg.norm(xx, axis=1), tt)
    e = H2
    uxx = (U(x + e * h, t) - 2 * U(x, t) + U(x - e * h, t)) / e ** 2
    ut = (U(x, t + H1) - U(x, t - H1)) / (2 * H1)
    expr = 0.5 * uxx + ut
    scale = np.maximum(1.0, r ** p + t ** (p / 2))
    viol = np.where(near, -np.inf, expr / scale)
    i = int(np.argmax(viol))
    return GridScanReport(n, float(viol[i]), DavisPoint(x[i], t[i]), FORM_TOL, int(near.sum()), "davis_pde")


def scan_c1_and_concavity(fn: SpecialFnHandle, n_interface: int = 400, n_points: int = 20_000, seed: int = 0) -> SmoothnessReport:
    """Finite-difference checks of the lemma-level smoothness properties.

    (a) C^1 gluing: each branch's gradient at an interface point comes from a
        one-sided stencil that stays inside that branch's region; the jump is
        the norm of the difference.  Values must also agree (continuity).
    (c) quadratic-form inequality for burkholder_U_ge2, or the heat-type
        inequality for davis_U.
    (d) radial monotonicity in |y| for the Burkholder functions.
    """
    rng = np.random.default_rng(seed)
    count, wj, jpt, wg, gpt = _interface_scan(fn, n_interface) if fn.interfaces else (0, 0.0, None, 0.0, None)
    c1 = GridScanReport(count, wj, _point(fn, jpt), JUMP_TOL, label="c1_jump")
    cont = GridScanReport(count, wg, _point(fn, gpt), 1e-10, label="continuity")
    rep = SmoothnessReport(fn.name, dict(fn.params), c1, cont)
    if fn.name == "burkholder_U_ge2":
        rep.concavity = _quad_form_scan(fn.params["p"], n_points, rng)
    if fn.name == "davis_U":
        rep.concavity = _davis_pde_scan(fn.params["p"], n_points, rng)
    if fn.name in ("burkholder_U_ge2", "burkholder_U_lt2"):
        rep.radial = _radial_scan(fn, n_points, rng)
    return rep
