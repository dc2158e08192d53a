"""Named constants of the sharp inequalities and the Young pair Phi/Psi."""
from __future__ import annotations

import math
from dataclasses import astuple, dataclass, fields

import numpy as np
from scipy import integrate

from . import specfun

__all__ = [
    "ConstantReport",
    "p_star",
    "pichorides",
    "dirichlet_beta",
    "riemann_zeta",
    "odd_zeta",
    "davis_weak_d1",
    "davis_weak_d1_ratio_form",
    "c_p",
    "c_p_branches",
    "c_p_displayed",
    "k_p",
    "k_p_branches",
    "l_k",
    "l_k_halves",
    "davis_dp",
    "a_p_bound",
    "young_phi",
    "young_psi",
    "constant_table",
]

METHODS = ("closed_form", "series", "quadrature", "root")


@dataclass(frozen=True)
class ConstantReport:
    name: str
    p_or_k: float
    value: float
    method: str
    est_error: float = 0.0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if not (math.isfinite(self.value) and math.isfinite(self.est_error)):
            raise ValueError(f"{self.name}: non-finite value or error")
        if self.est_error < 0:
            raise ValueError("est_error must be >= 0")

    @staticmethod
    def columns() -> list[str]:
        return [f.name for f in fields(ConstantReport)]

    def as_row(self) -> tuple:
        return astuple(self)


def _need_p_gt1(p: float):
    if not p > 1:
        raise ValueError(f"p must be > 1, got {p}")


def p_star(p: float) -> float:
    _need_p_gt1(p)
    return max(p, p / (p - 1))


def pichorides(p: float) -> float:
    """cot(pi / (2 p*)), the L^p norm of the conjugate function."""
    return 1.0 / math.tan(math.pi / (2 * p_star(p)))


def _euler_alternating(term, n: int = 64) -> float:
    """Sum_{k>=0} (-1)^k term(k) by repeated averaging of partial sums."""
    s = np.cumsum([(-1) ** k * term(k) for k in range(n)])
    while s.size > 1:
        s = 0.5 * (s[:-1] + s[1:])
    return float(s[0])


def dirichlet_beta(s: float) -> float:
    """beta(s) = sum (-1)^k / (2k+1)^s, Euler-accelerated."""
    if not s > 0:
        raise ValueError("dirichlet_beta needs s > 0")
    return _euler_alternating(lambda k: (2.0 * k + 1.0) ** (-s))


def _zeta_em(q: float, n: int = 200) -> tuple[float, float]:
    """zeta(q), q > 1: direct sum to n-1 plus Euler-Maclaurin tail.

    Returns (value, size of the first omitted correction).
    """
    k = np.arange(1, n, dtype=float)
    head = math.fsum(k ** (-q))
    tail = n ** (1 - q) / (q - 1) + 0.5 * n ** (-q) + q * n ** (-q - 1) / 12
    tail -= q * (q + 1) * (q + 2) * n ** (-q - 3) / 720
    nxt = q * (q + 1) * (q + 2) * (q + 3) * (q + 4) * n ** (-q - 5) / 30240
    return head + tail, abs(nxt)


def riemann_zeta(q: float) -> float:
    if not q > 1:
        raise ValueError("riemann_zeta needs q > 1")
    return _zeta_em(q)[0]


def odd_zeta(q: float) -> float:
    """sum_{k>=0} (2k+1)^{-q} = (1 - 2^{-q}) zeta(q)."""
    return (1 - 2.0 ** (-q)) * riemann_zeta(q)


def davis_weak_d1() -> float:
    """pi^2 / (8 beta(2)), the weak-type Davis constant for p = 1."""
    return math.pi ** 2 / (8 * dirichlet_beta(2.0))


def davis_weak_d1_ratio_form() -> float:
    """Same constant written as sum 1/(2k+1)^2 over sum (-1)^k/(2k+1)^2."""
    return odd_zeta(2.0) / dirichlet_beta(2.0)


def c_p_branches(p: float) -> tuple[float, float]:
    """Both closed forms of C_p evaluated at the same p (no branch selection).

    lower: (2/pi) [(4/pi) Gamma(q+1) beta(q+1)]^{1/q}
    upper: [pi^{-q} (2^{q+1} - 2) Gamma(q+1) zeta(q)]^{1/q}
    """
    _need_p_gt1(p)
    q = p / (p - 1)
    lower = 2 / math.pi * (4 / math.pi * math.gamma(q + 1) * dirichlet_beta(q + 1)) ** (1 / q)
    upper = (math.pi ** (-q) * (2 ** (q + 1) - 2) * math.gamma(q + 1) * riemann_zeta(q)) ** (1 / q)
    return lower, upper


def c_p(p: float) -> float:
    """Weak-type constant C_p for the renormed L^{p,infty} functional."""
    lower, upper = c_p_branches(p)
    return lower if p < 2 else upper


def c_p_displayed(p: float) -> float:
    """C_p from the series display with 2^{q+2} in both branches.

    Kept for comparison only: for p >= 2 it differs from :func:`c_p` by a
    factor 2^{1/q} (see the decisions ledger).
    """
    _need_p_gt1(p)
    q = p / (p - 1)
    if p < 2:
        s = dirichlet_beta(q + 1)
        return (2 ** (q + 2) * math.gamma(q + 1) / math.pi ** (q + 1) * s) ** (1 / q)
    return (2 ** (q + 2) * math.gamma(q + 1) / math.pi ** q * odd_zeta(q)) ** (1 / q)


def k_p_branches(p: float) -> tuple[float, float]:
    _need_p_gt1(p)
    lower = (0.5 * math.gamma((2 * p - 1) / (p - 1))) ** (1 - 1 / p)
    upper = (p ** (p - 1) / 2) ** (1 / p)
    return lower, upper


def k_p(p: float) -> float:
    lower, upper = k_p_branches(p)
    return lower if p < 2 else upper


def young_phi(t):
    return np.expm1(t) - t


def young_psi(t):
    t = np.asarray(t, dtype=float)
    out = (t + 1) * np.log1p(t) - t
    return float(out) if out.ndim == 0 else out


def _l_integrand_v(c: float):
    # t = e^{-v} on (0,1]:  Phi(c v) e^{-v} / (1 + e^{-2v}), with c < 1
    def f(v):
        if v < 1.0:
            num = (math.expm1(c * v) - c * v) * math.exp(-v)
        else:
            num = math.exp((c - 1) * v) - (1 + c * v) * math.exp(-v)
        return num / (1 + math.exp(-2 * v))

    return f


def l_k(K: float, with_error: bool = False):
    """L(K) = (K/pi) int_R Phi(|2/(pi K) log|t||) / (t^2+1) dt, K > 2/pi.

    Even in t and invariant under t -> 1/t (with the Jacobian), so
    L(K) = (4K/pi) int_0^inf Phi(c v) e^{-v} / (1 + e^{-2v}) dv, c = 2/(pi K).
    """
    if not K > 2 / math.pi:
        raise ValueError("L(K) diverges for K <= 2/pi")
    c = 2 / (math.pi * K)
    val, err = integrate.quad(_l_integrand_v(c), 0, math.inf, epsabs=0, epsrel=1e-11, limit=400)
    scale = 4 * K / math.pi
    return (scale * val, scale * err) if with_error else scale * val


def l_k_halves(K: float) -> tuple[float, float]:
    """The t-integral over (0,1] and over [1,inf), each in the original variable."""
    if not K > 2 / math.pi:
        raise ValueError("L(K) diverges for K <= 2/pi")
    c = 2 / (math.pi * K)
    f = lambda t: young_phi(abs(c * math.log(t))) / (t * t + 1)
    lo, _ = integrate.quad(f, 0, 1, epsabs=0, epsrel=1e-12, limit=400)
    hi, _ = integrate.quad(f, 1, math.inf, epsabs=0, epsrel=1e-12, limit=400)
    return lo, hi


def davis_dp(p: float, branch: str | None = None) -> float:
    """D_p: nu_p for p <= 2, mu_p for p >= 2.  ``branch`` forces 'nu' or 'mu'."""
    if not p > 0:
        raise ValueError("davis_dp needs p > 0")
    if branch is None:
        branch = "nu" if p <= 2 else "mu"
    if branch == "nu":
        return specfun.nu_p(p)
    if branch == "mu":
        return specfun.mu_p(p)
    raise ValueError(f"unknown branch {branch!r}")


def a_p_bound(p: float) -> float:
    """Upper bound 2 p^{3/2} / (p-1) for the maximal Davis constant A_p."""
    _need_p_gt1(p)
    return 2 * p ** 1.5 / (p - 1)


def constant_table(p: float | None = None, K: float | None = None) -> list[ConstantReport]:
    """All constants defined at the given parameters."""
    rows: list[ConstantReport] = []
    eps = np.finfo(float).eps
    if p is not None:
        if p > 1:
            rows += [
                ConstantReport("p_star", p, p_star(p), "closed_form"),
                ConstantReport("pichorides", p, pichorides(p), "closed_form", 4 * eps),
                ConstantReport("C_p", p, c_p(p), "series", 1e-10),
                ConstantReport("K_p", p, k_p(p), "closed_form", 4 * eps),
                ConstantReport("A_p_bound", p, a_p_bound(p), "closed_form"),
            ]
            if p < 2:
                rows.append(ConstantReport("gamma0", p, specfun.gamma_fn(p, 0.0), "quadrature", 1e-12))
        rows.append(ConstantReport("D_p", p, davis_dp(p), "root", specfun.ROOT_TOL))
    if K is not None:
        val, err = l_k(K, with_error=True)
        rows.append(ConstantReport("L_K", K, val, "quadrature", err))
    rows.append(ConstantReport("D_1_weak", 1.0, davis_weak_d1(), "series", 1e-12))
    return rows
