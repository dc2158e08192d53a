"""Classical special functions behind the Davis and weak-type constants.

Kummer's M, the parabolic-cylinder combination h_p = e^{x^2/4} D_p, the
modified Bessel I_0, the function gamma(t) of the weak-type problem and
its companion inverse H.  Everything here is a pure function.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.hermite_e import hermegauss
from scipy import integrate, optimize, special

__all__ = [
    "SeriesEval",
    "RootBracket",
    "TruncationError",
    "BracketError",
    "kummer_m",
    "confluent_mp",
    "confluent_mp_prime",
    "nu_p",
    "parabolic_h",
    "parabolic_h_prime",
    "mu_p",
    "bessel_i0",
    "gamma_fn",
    "gamma_fn_vec",
    "gamma_prime",
    "h_inverse",
    "h_inverse_vec",
    "phi_cylinder",
    "phi_cylinder_r",
]

Z_MAX = 200.0
# above this |x| the series for h_p loses ~e^{x^2/2} to cancellation
_H_SERIES_CUT = 4.0
_GH_NODES = 96
ROOT_TOL = 1e-12


class TruncationError(ArithmeticError):
    """Series did not reach its tolerance within the term budget."""

    def __init__(self, msg: str, achieved_tol: float):
        super().__init__(msg)
        self.achieved_tol = achieved_tol


class BracketError(ArithmeticError):
    pass


@dataclass(frozen=True)
class SeriesEval:
    """Truncation policy for power series.

    ``abs_tol`` is measured against ``max(1, |partial sum|)`` so that large
    values are not held to an unreachable absolute standard.
    """

    max_terms: int = 500
    abs_tol: float = 1e-15
    achieved_tol: float = float("nan")

    def __post_init__(self):
        if self.max_terms < 1:
            raise ValueError("max_terms must be positive")
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be > 0")


@dataclass(frozen=True)
class RootBracket:
    lo: float
    hi: float
    tol: float = ROOT_TOL

    def __post_init__(self):
        if not self.hi > self.lo:
            raise ValueError(f"empty bracket [{self.lo}, {self.hi}]")
        if not self.tol > 0:
            raise ValueError("tol must be > 0")


_DEFAULT_SERIES = SeriesEval()


def _is_nonpos_int(v: float) -> bool:
    return v <= 0 and float(v).is_integer()


def _kummer_array(a: float, b: float, z, cfg: SeriesEval):
    """Vectorised Kummer series; returns (values, achieved_tol)."""
    z = np.asarray(z, dtype=float)
    if _is_nonpos_int(b):
        raise ValueError(f"b={b} is a non-positive integer")
    if np.any(np.abs(z) > Z_MAX):
        raise ValueError(f"|z| > {Z_MAX}: outside the series range")
    term = np.ones_like(z)
    total = np.ones_like(z)
    terminating = _is_nonpos_int(a)
    for n in range(cfg.max_terms):
        term = term * ((a + n) / (b + n)) * z / (n + 1)
        total = total + term
        if terminating and a + n == 0:
            return total, 0.0
        # once n > |a| + |z| the terms shrink geometrically
        if n + 1 > abs(a) + np.max(np.abs(z), initial=0.0):
            err = np.max(np.abs(term) / np.maximum(1.0, np.abs(total)), initial=0.0)
            if err <= cfg.abs_tol:
                return total, float(err)
    err = float(np.max(np.abs(term) / np.maximum(1.0, np.abs(total)), initial=0.0))
    raise TruncationError(f"Kummer series M({a},{b},.) not converged", err)


def kummer_m(a: float, b: float, z: float, cfg: SeriesEval | None = None) -> float:
    """Kummer's confluent hypergeometric function M(a, b, z) by direct summation.

    Terminates exactly when ``a`` is a non-positive integer.  Raises
    :class:`TruncationError` if the tail is still above ``cfg.abs_tol``
    after ``cfg.max_terms`` terms.  For z < 0 (and non-terminating
    series) Kummer's transformation M(a, b, z) = e^z M(b-a, b, -z) avoids
    the alternating-sign cancellation.
    """
    z = float(z)
    cfg = cfg or _DEFAULT_SERIES
    if z < 0 and not (a <= 0 and float(a).is_integer()):
        val, _ = _kummer_array(b - a, b, -z, cfg)
        return float(math.exp(z) * val)
    val, _ = _kummer_array(a, b, z, cfg)
    return float(val)


def confluent_mp(p: float, x):
    """M_p(x) = M(-p/2, 1/2, x^2/2)."""
    if not 0 < p <= 2:
        raise ValueError("confluent_mp needs 0 < p <= 2")
    x = np.asarray(x, dtype=float)
    val, _ = _kummer_array(-p / 2, 0.5, 0.5 * x * x, _DEFAULT_SERIES)
    return float(val) if val.ndim == 0 else val


def confluent_mp_prime(p: float, x):
    # d/dx M(a, 1/2, x^2/2) = x * (a / b) * M(a+1, b+1, x^2/2)
    if not 0 < p <= 2:
        raise ValueError("confluent_mp_prime needs 0 < p <= 2")
    x = np.asarray(x, dtype=float)
    val, _ = _kummer_array(1 - p / 2, 1.5, 0.5 * x * x, _DEFAULT_SERIES)
    out = -p * x * val
    return float(out) if out.ndim == 0 else out


def _bisect(f, lo: float, hi: float, tol: float) -> float:
    flo = f(lo)
    if flo == 0:
        return lo
    fhi = f(hi)
    if fhi == 0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise BracketError(f"no sign change on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if np.sign(fm) == np.sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def nu_p(p: float, bracket: RootBracket | None = None) -> float:
    """Smallest positive zero of M_p.

    Without a bracket the zero is located by scanning outward from 0 in
    steps of 0.1 up to 10*sqrt(p), then refined by bisection.
    """
    f = lambda x: confluent_mp(p, x)
    if bracket is None:
        step, limit = 0.1, 10 * math.sqrt(p)
        lo = 0.0
        while lo < limit:
            hi = lo + step
            if f(hi) <= 0:
                bracket = RootBracket(lo, hi)
                break
            lo = hi
        else:
            raise BracketError(f"M_p has no sign change on (0, {limit}] for p={p}")
    return _bisect(f, bracket.lo, bracket.hi, bracket.tol)


def _half_pi_trig(p: float) -> tuple[float, float]:
    """cos(p*pi/2), sin(p*pi/2); exact zeros and signs for integer p."""
    if float(p).is_integer():
        return [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)][int(p) % 4]
    return math.cos(p * math.pi / 2), math.sin(p * math.pi / 2)


def _h_series(p: float, x: np.ndarray) -> np.ndarray:
    c, s = _half_pi_trig(p)
    z = 0.5 * x * x
    out = np.zeros_like(x)
    if c != 0.0:
        c1 = 2 ** (p / 2) / math.sqrt(math.pi) * math.gamma((p + 1) / 2)
        out = out + c * c1 * _kummer_array(-p / 2, 0.5, z, _DEFAULT_SERIES)[0]
    if s != 0.0:
        c2 = 2 ** ((p + 1) / 2) / math.sqrt(math.pi) * math.gamma((p + 2) / 2)
        out = out + s * c2 * x * _kummer_array(0.5 - p / 2, 1.5, z, _DEFAULT_SERIES)[0]
    return out


_GH = None


def _gh_rule():
    global _GH
    if _GH is None:
        g, w = hermegauss(_GH_NODES)
        _GH = (g, w / w.sum())
    return _GH


def _h_scaled_expectation(p: float, x: np.ndarray) -> np.ndarray:
    """h_p(x) / x^p for x > 0 as E Re(1 + iG/x)^p, G standard normal.

    h_p(x) = E[(x + iG)^p] solves h'' - x h' + p h = 0 with growth x^p, so it
    is the same solution as the series; this form has no cancellation.
    """
    g, w = _gh_rule()
    vals = np.real((1.0 + 1j * g[None, :] / x[:, None]) ** p)
    return vals @ w


def _h_any(p: float, x, scaled: bool = False):
    x = np.asarray(x, dtype=float)
    flat = np.atleast_1d(x).ravel()
    out = np.empty_like(flat)
    small = np.abs(flat) <= _H_SERIES_CUT
    big = ~small
    if np.any(small):
        vals = _h_series(p, flat[small])
        if scaled:
            vals = vals / np.abs(flat[small]) ** p
        out[small] = vals
    if np.any(big & (flat < 0)):
        raise ValueError("h_p is only evaluated for x > -4")
    if np.any(big):
        xb = flat[big]
        sc = _h_scaled_expectation(p, xb)
        out[big] = sc if scaled else sc * xb ** p
    out = out.reshape(np.shape(x))
    return float(out) if out.ndim == 0 else out


def parabolic_h(p: float, x):
    """h_p(x) = e^{x^2/4} D_p(x) for p >= 2.

    Near the origin this is cos(p pi/2) e^{x^2/4}Y_1 + sin(p pi/2) e^{x^2/4}Y_2
    with the Gaussian factors cancelled in closed form (two Kummer series).
    For x > 4 the Gaussian-expectation representation is used instead.
    """
    if p < 2:
        raise ValueError("parabolic_h needs p >= 2")
    return _h_any(p, x)


def parabolic_h_prime(p: float, x):
    """h_p'(x) = p h_{p-1}(x)."""
    if p < 2:
        raise ValueError("parabolic_h_prime needs p >= 2")
    return p * _h_any(p - 1, x)


def mu_p(p: float, bracket: RootBracket | None = None) -> float:
    """Largest positive zero of h_p.

    The default scan walks inward from 2*sqrt(p) + 1, which lies to the right
    of every zero (the Davis constant is at most 2*sqrt(p)), in steps of 0.1.
    """
    if p < 2:
        raise ValueError("mu_p needs p >= 2")
    f = lambda x: parabolic_h(p, x)
    if bracket is None:
        hi = 2 * math.sqrt(p) + 1.0
        if f(hi) <= 0:
            raise BracketError(f"h_p not positive at right endpoint {hi}")
        while hi > 0:
            lo = max(hi - 0.1, 0.0)
            if f(lo) <= 0:
                bracket = RootBracket(lo, hi)
                break
            hi = lo
        else:
            raise BracketError(f"h_p has no positive zero for p={p}")
    return _bisect(f, bracket.lo, bracket.hi, bracket.tol)


def bessel_i0(z: float, cfg: SeriesEval | None = None) -> float:
    """I_0(z) = sum_j (z/2)^{2j} / (j!)^2."""
    if z < 0:
        raise ValueError("bessel_i0 needs z >= 0")
    cfg = cfg or _DEFAULT_SERIES
    q = 0.25 * z * z
    term = total = 1.0
    for j in range(1, cfg.max_terms):
        term *= q / (j * j)
        total += term
        if j > z and term <= cfg.abs_tol * total:
            return total
    raise TruncationError("I_0 series not converged", term / total)


def _check_p_weak(p: float):
    if not 1 < p < 2:
        raise ValueError("gamma/H need 1 < p < 2")


def gamma_fn(p: float, t: float) -> float:
    """gamma(t) = exp(p t^{p-1}) * int_t^inf exp(-p s^{p-1}) ds.

    With r = p s^{p-1} and r0 = p t^{p-1} the integral becomes
    alpha p^{-alpha} int_0^inf (r0 + v)^{alpha-1} e^{-v} dv, alpha = 1/(p-1),
    which is integrated adaptively.  No exponential is ever large.
    """
    _check_p_weak(p)
    if t < 0:
        raise ValueError("gamma_fn needs t >= 0")
    alpha = 1.0 / (p - 1)
    r0 = p * t ** (p - 1)
    val, err = integrate.quad(
        lambda v: (r0 + v) ** (alpha - 1) * math.exp(-v),
        0.0,
        math.inf,
        epsabs=0.0,
        epsrel=1e-13,
        limit=200,
    )
    if not np.isfinite(val):
        raise ArithmeticError("gamma quadrature failed")
    return alpha * p ** (-alpha) * val


def gamma_fn_vec(p: float, t):
    """Vectorised gamma(t) through the regularised upper incomplete gamma.

    gamma(t) = p^{-alpha} Gamma(alpha+1) e^{r0} Q(alpha, r0).  Used for bulk
    evaluation; falls back to :func:`gamma_fn` where e^{r0} would overflow.
    """
    _check_p_weak(p)
    t = np.asarray(t, dtype=float)
    alpha = 1.0 / (p - 1)
    r0 = p * np.power(np.maximum(t, 0.0), p - 1)
    safe = r0 < 600
    out = np.empty_like(r0)
    out[safe] = (
        p ** (-alpha)
        * math.gamma(alpha + 1)
        * np.exp(r0[safe])
        * special.gammaincc(alpha, r0[safe])
    )
    if np.any(~safe):
        out[~safe] = [gamma_fn(p, float(s)) for s in t[~safe]]
    return float(out) if out.ndim == 0 else out


def gamma_prime(p: float, t):
    """gamma'(t) from the ODE 1 + gamma' = p(p-1) t^{p-2} gamma (t > 0)."""
    t = np.asarray(t, dtype=float)
    return p * (p - 1) * t ** (p - 2) * gamma_fn_vec(p, t) - 1.0


def _t_of_r(p: float, r):
    return (np.asarray(r, dtype=float) / p) ** (1.0 / (p - 1))


def h_inverse(p: float, s: float, tol: float = 1e-15) -> float:
    """H(s): the inverse of t -> t + gamma(t) on [gamma(0), inf).

    The root is sought in r = p t^{p-1}; near t = 0 gamma grows like
    t^{p-1}, so t itself is a badly conditioned search variable.
    """
    g0 = gamma_fn(p, 0.0)
    if s < g0 - 1e-12:
        raise ValueError(f"h_inverse needs s >= gamma(0) = {g0}")
    if s <= g0:
        return 0.0

    def f(r):
        t = float(_t_of_r(p, r))
        return t + gamma_fn(p, t) - s

    # gamma >= 0, so the root has t <= s
    r = optimize.brentq(f, 0.0, p * s ** (p - 1), xtol=tol, rtol=4 * np.finfo(float).eps)
    return float(_t_of_r(p, r))


def h_inverse_vec(p: float, s, iters: int = 64):
    """Vectorised H by bisection in r = p t^{p-1}; s <= gamma(0) maps to 0."""
    _check_p_weak(p)
    s = np.asarray(s, dtype=float)
    lo = np.zeros_like(s)
    hi = p * np.maximum(s, 0.0) ** (p - 1)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        t = _t_of_r(p, mid)
        above = t + gamma_fn_vec(p, t) > s
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
    out = _t_of_r(p, 0.5 * (lo + hi))
    return float(out) if out.ndim == 0 else out


def _i0_integral(t: float) -> float:
    # int_0^t I_0 = sum_j t (t/2)^{2j} / ((2j+1) (j!)^2), termwise
    q = 0.25 * t * t
    term = t
    total = t
    j = 0
    while True:
        j += 1
        term *= q / (j * j)
        add = term / (2 * j + 1)
        total += add
        if j > t and add <= 1e-17 * total:
            return total


def phi_cylinder(n: int, t: float) -> float:
    """phi at r^2 = e^{-2t/(n-2)}, i.e. int_0^t I_0 / (e^t - 1).

    In this parametrisation the value does not depend on n.
    """
    if n < 3:
        raise ValueError("phi_cylinder needs n >= 3")
    if t < 0:
        raise ValueError("phi_cylinder needs t >= 0")
    if t == 0:
        return 1.0
    if t > 700:
        raise ValueError("t too large for double precision")
    return _i0_integral(t) / math.expm1(t)


def phi_cylinder_r(n: int, r: float) -> float:
    """phi as a function of the radius r in (0, 1]."""
    if not 0 < r <= 1:
        raise ValueError("phi_cylinder_r needs 0 < r <= 1")
    return phi_cylinder(n, -(n - 2) * math.log(r * r) / 2)
