"""Monte Carlo for Brownian martingale transforms and stopped extremal pairs.

Every path owns a numpy Generator keyed by (seed, path_index), so results do
not depend on how paths are split across worker threads.  Inner loops are
numba kernels that consume pre-drawn normals in chunks.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numba
import numpy as np
from scipy import linalg, signal

from . import constants, specfun

__all__ = [
    "PathGrid",
    "TransformSpec",
    "PotentialSpec",
    "McEstimate",
    "LpConfig",
    "DavisRatio",
    "ExtremalConfig",
    "ExtremalResult",
    "UnstoppedPathsError",
    "MomentRow",
    "path_rng",
    "sgn",
    "simulate_bm",
    "ito_integral",
    "check_subordination",
    "feynman_kac_transform",
    "estimate_lp_ratio",
    "estimate_davis_ratio",
    "extremal_llogl",
    "extremal_weak",
    "exit_time_moments",
    "richardson_agree",
]

# Broadie-Glasserman-Kou continuity correction for discretely monitored barriers
BGK_BETA = 0.5826
SUB_TOL = 1e-12
SYM_TOL = 1e-12
EIG_TOL = 1e-10
UNSTOPPED_BUDGET = 1e-3


class UnstoppedPathsError(RuntimeError):
    pass


@dataclass
class PathGrid:
    dt: float
    values: np.ndarray  # (n_steps + 1, n)
    qv: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim == 1:
            self.values = self.values[:, None]
        self.qv = np.asarray(self.qv, dtype=float)
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.qv.shape != (self.values.shape[0],):
            raise ValueError("qv and values must have the same length")
        if self.qv[0] != 0 or np.any(np.diff(self.qv) < 0):
            raise ValueError("qv must start at 0 and be nondecreasing")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("non-finite path values")

    @property
    def n_steps(self) -> int:
        return self.values.shape[0] - 1

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.n_steps + 1)


@dataclass
class TransformSpec:
    """Predictable transformer K of X = int H dB into Y = int K dB.

    scalar_sign: K_s = sgn(X_s) H_s (the one-dimensional sign transform).
    fixed_matrix: K_s = A H_s.
    predictable_callback: K_s = callback(t_s, X_s) @ H_s, checked per step.
    """

    kind: str = "scalar_sign"
    matrix: np.ndarray | None = None
    constraint: str = "subordinate"
    callback: Callable | None = None

    def __post_init__(self):
        if self.kind not in ("scalar_sign", "fixed_matrix", "predictable_callback"):
            raise ValueError(f"unknown transform kind {self.kind!r}")
        if self.constraint not in ("subordinate", "orthogonal_subordinate"):
            raise ValueError(f"unknown constraint {self.constraint!r}")
        if self.kind == "fixed_matrix":
            if self.matrix is None:
                raise ValueError("fixed_matrix needs a matrix")
            self.matrix = np.atleast_2d(np.asarray(self.matrix, dtype=float))
            self.check_matrix(self.matrix)
        if self.kind == "scalar_sign" and self.constraint == "orthogonal_subordinate":
            raise ValueError("a sign transform is never orthogonal")
        if self.kind == "predictable_callback" and self.callback is None:
            raise ValueError("predictable_callback needs a callback")

    def check_matrix(self, A):
        if np.linalg.norm(A, 2) > 1 + 1e-12:
            raise ValueError("transform matrix has operator norm > 1")
        if self.constraint == "orthogonal_subordinate" and np.abs(A + A.T).max() > 1e-12:
            raise ValueError("orthogonal transform must be antisymmetric")

    def apply(self, t, x, h):
        """K at one grid time given the state x and integrand h (vectors)."""
        if self.kind == "scalar_sign":
            return sgn(x[0]) * h
        if self.kind == "fixed_matrix":
            return self.matrix @ h
        A = np.atleast_2d(np.asarray(self.callback(t, x), dtype=float))
        self.check_matrix(A)
        return A @ h


@dataclass
class PotentialSpec:
    """Damping rate a >= 0 and a symmetric non-positive matrix field V(t, state)."""

    a: float
    v_callback: Callable
    dim: int = 1
    constant: bool = False

    def __post_init__(self):
        if not self.a >= 0:
            raise ValueError("damping rate a must be >= 0")

    @classmethod
    def constant_matrix(cls, V, a: float = 0.0):
        V = np.atleast_2d(np.asarray(V, dtype=float))
        pot = cls(a=a, v_callback=lambda t, x: V, dim=V.shape[0], constant=True)
        pot.check_matrix(V)
        return pot

    @classmethod
    def zero(cls, dim: int = 1):
        return cls.constant_matrix(np.zeros((dim, dim)))

    @staticmethod
    def check_matrix(V):
        if np.abs(V - V.T).max() > SYM_TOL:
            raise ValueError("potential is not symmetric")
        if np.linalg.eigvalsh(V).max() > EIG_TOL:
            raise ValueError("potential has a positive eigenvalue")

    def matrix(self, t, x) -> np.ndarray:
        V = np.atleast_2d(np.asarray(self.v_callback(t, x), dtype=float))
        if V.shape != (self.dim, self.dim):
            raise ValueError(f"potential has shape {V.shape}, expected {(self.dim, self.dim)}")
        self.check_matrix(V)
        return V

    def validate(self, n_samples: int = 64, seed: int = 0, T: float = 1.0):
        rng = np.random.default_rng(seed)
        for t in rng.uniform(0, T, n_samples):
            self.matrix(t, rng.standard_normal(self.dim))


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_err: float
    n_paths: int
    seed: int

    def __post_init__(self):
        if not self.std_err >= 0:
            raise ValueError("std_err must be >= 0")

    def within(self, target: float, k: float = 3.0) -> bool:
        return abs(self.mean - target) <= k * self.std_err


def path_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, index])))


def sgn(x):
    """Sign with sgn(0) = 1, so |sgn|^2 = 1 everywhere."""
    return np.where(np.asarray(x) >= 0, 1.0, -1.0)


def simulate_bm(n: int, n_steps: int, dt: float, start=None, seed: int = 0) -> PathGrid:
    start = np.zeros(n) if start is None else np.asarray(start, dtype=float).reshape(n)
    if not dt > 0:
        raise ValueError("dt must be positive")
    dB = path_rng(seed, 0).standard_normal((n_steps, n)) * math.sqrt(dt)
    vals = np.vstack([start, start + np.cumsum(dB, axis=0)])
    # summed the same way as ito_integral so that |H| = 1 reproduces it bit for bit
    qv = np.concatenate([[0.0], np.cumsum(np.full(n_steps, n * dt))])
    return PathGrid(dt, vals, qv)


def ito_integral(integrand, driver: PathGrid) -> PathGrid:
    """Left-endpoint Ito sum of H against the driver, started at 0.

    ``integrand`` is either an array of H at the left grid points or a
    callable ``(t, x)`` evaluated on them.  H may be a scalar per step, a
    vector (giving a scalar integral H . dB) or a matrix (giving A dB).
    """
    if callable(integrand):
        H = np.asarray(integrand(driver.times[:-1], driver.values[:-1]), dtype=float)
    else:
        H = np.asarray(integrand, dtype=float)
    k, n = driver.n_steps, driver.dim
    if H.ndim == 0 or H.shape[0] != k:  # a constant integrand
        H = np.broadcast_to(H, (k,) + H.shape)
    dB = np.diff(driver.values, axis=0)
    if H.ndim == 1:
        inc, sq = H[:, None] * dB, n * H ** 2
    elif H.ndim == 2 and H.shape[1] == n:
        inc, sq = np.einsum("ki,ki->k", H, dB)[:, None], np.sum(H ** 2, axis=1)
    elif H.ndim == 3 and H.shape[2] == n:
        inc, sq = np.einsum("kij,kj->ki", H, dB), np.sum(H ** 2, axis=(1, 2))
    else:
        raise ValueError(f"integrand shape {H.shape} does not match driver dimension {n}")
    vals = np.vstack([np.zeros(inc.shape[1]), np.cumsum(inc, axis=0)])
    qv = np.concatenate([[0.0], np.cumsum(sq * driver.dt)])
    return PathGrid(driver.dt, vals, qv)


def check_subordination(X: PathGrid, Y: PathGrid) -> tuple[bool, float]:
    """Y subordinate to X on the grid; returns (verdict, worst margin)."""
    if X.n_steps != Y.n_steps or X.dt != Y.dt:
        raise ValueError("X and Y live on different grids")
    start = np.linalg.norm(X.values[0]) - np.linalg.norm(Y.values[0])
    incr = np.diff(X.qv - Y.qv)
    worst = min(start, incr.min()) if incr.size else start
    return bool(start >= 0 and (incr.size == 0 or incr.min() >= -SUB_TOL)), float(worst)


def _exp_euler_factors(A: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    """e^{Ah} and phi_1(Ah) = (Ah)^{-1}(e^{Ah} - I), both from one block exponential."""
    n = A.shape[0]
    blk = np.zeros((2 * n, 2 * n))
    blk[:n, :n] = A * h
    blk[:n, n:] = np.eye(n)
    E = linalg.expm(blk)
    return E[:n, :n], E[:n, n:]


def feynman_kac_transform(Y: PathGrid, pot: PotentialSpec) -> PathGrid:
    """Z with dZ = (V - a I) Z dt + dY, Z_0 = 0, by exponential Euler.

    On each step Z_{k+1} = e^{A h} Z_k + phi_1(A h) dY_k with A frozen at the
    left point; exact when A is constant and Y is linear on the step.
    """
    n = Y.dim
    if pot.dim != n:
        raise ValueError("potential and path dimensions differ")
    dY = np.diff(Y.values, axis=0)
    Z = np.zeros_like(Y.values)
    I = np.eye(n)
    if pot.constant:
        A = pot.matrix(0.0, Y.values[0]) - pot.a * I
        E, P = _exp_euler_factors(A, Y.dt)
        if n == 1:
            Z[1:, 0] = signal.lfilter([P[0, 0]], [1.0, -E[0, 0]], dY[:, 0])
        else:
            for k in range(Y.n_steps):
                Z[k + 1] = E @ Z[k] + P @ dY[k]
    else:
        for k in range(Y.n_steps):
            A = pot.matrix(k * Y.dt, Y.values[k]) - pot.a * I
            E, P = _exp_euler_factors(A, Y.dt)
            Z[k + 1] = E @ Z[k] + P @ dY[k]
    # the drift does not move the bracket: [Z, Z] = [Y, Y]
    return PathGrid(Y.dt, Z, Y.qv.copy())


# ---------------------------------------------------------------- ensembles

def _blocks(n_paths: int, block: int):
    return [(s, min(s + block, n_paths)) for s in range(0, n_paths, block)]


def _run_blocks(fn, n_paths: int, block: int, threads: int):
    spans = _blocks(n_paths, block)
    if threads <= 1:
        parts = [fn(s, e) for s, e in spans]
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(lambda se: fn(*se), spans))
    return [np.concatenate(col) for col in zip(*parts)]


@numba.njit(cache=True, nogil=True)
def _fk_kernel(z, sdt, x0, sign_mode, M, E, P):
    """Terminal X, Z and running max |Z| for each path of a block.

    z: (paths, steps, n) standard normals.  X = x0 + B; Y = int K dB with
    K = sgn(X_1) I (sign_mode) or the fixed matrix M; Z by exponential Euler.
    """
    n_p, n_s, n = z.shape
    xT = np.empty((n_p, n))
    zT = np.empty((n_p, n))
    zmax = np.empty(n_p)
    for i in range(n_p):
        x = x0.copy()
        zz = np.zeros(n)
        m = 0.0
        dy = np.empty(n)
        new = np.empty(n)
        for k in range(n_s):
            if sign_mode:
                s = 1.0 if x[0] >= 0 else -1.0
                for j in range(n):
                    dy[j] = s * z[i, k, j] * sdt
            else:
                for j in range(n):
                    acc = 0.0
                    for l in range(n):
                        acc += M[j, l] * z[i, k, l]
                    dy[j] = acc * sdt
            r = 0.0
            for j in range(n):
                acc = 0.0
                for l in range(n):
                    acc += E[j, l] * zz[l] + P[j, l] * dy[l]
                new[j] = acc
            for j in range(n):
                zz[j] = new[j]
                r += new[j] * new[j]
                x[j] += z[i, k, j] * sdt
            r = math.sqrt(r)
            if r > m:
                m = r
        xT[i] = x
        zT[i] = zz
        zmax[i] = m
    return xT, zT, zmax


@dataclass
class LpConfig:
    p: float = 3.0
    T: float = 1.0
    dt: float = 1e-4
    n_paths: int = 10_000
    seed: int = 0
    dim: int = 1
    x0: float = 0.0
    threads: int = 1
    block: int = 64
    n_boot: int = 200


def _fk_ensemble(cfg: LpConfig, transform: TransformSpec, pot: PotentialSpec | None):
    n = cfg.dim
    n_steps = int(round(cfg.T / cfg.dt))
    if pot is None:
        pot = PotentialSpec.zero(n)
    if not pot.constant:
        raise ValueError("ensemble runs need a constant potential")
    if transform.kind == "predictable_callback":
        raise ValueError("ensemble runs support scalar_sign and fixed_matrix transforms")
    A = pot.matrix(0.0, np.zeros(n)) - pot.a * np.eye(n)
    E, P = _exp_euler_factors(A, cfg.dt)
    M = transform.matrix if transform.kind == "fixed_matrix" else np.eye(n)
    if M.shape != (n, n):
        raise ValueError("transform matrix does not match dimension")
    x0 = np.full(n, float(cfg.x0))
    sdt = math.sqrt(cfg.dt)

    def block(s, e):
        z = np.stack([path_rng(cfg.seed, i).standard_normal((n_steps, n)) for i in range(s, e)])
        return _fk_kernel(z, sdt, x0, transform.kind == "scalar_sign", M, E, P)

    return _run_blocks(block, cfg.n_paths, cfg.block, cfg.threads)


def _boot_ratio(num, den, p, n_boot, seed):
    """(mean num / mean den)^{1/p} with a bootstrap standard error."""
    est = (num.mean() / den.mean()) ** (1 / p)
    rng = path_rng(seed, 2 ** 40)  # index outside any path range
    idx = rng.integers(0, num.size, size=(n_boot, num.size))
    boots = (num[idx].mean(axis=1) / den[idx].mean(axis=1)) ** (1 / p)
    return float(est), float(boots.std(ddof=1))


def estimate_lp_ratio(cfg: LpConfig, transform: TransformSpec | None = None,
                      pot: PotentialSpec | None = None) -> McEstimate:
    """||Z_T||_p / ||X_T||_p for X = B and Z the (damped) transform of X."""
    if not cfg.p > 1:
        raise ValueError("p must be > 1")
    transform = transform or TransformSpec("scalar_sign")
    xT, zT, _ = _fk_ensemble(cfg, transform, pot)
    num = np.linalg.norm(zT, axis=1) ** cfg.p
    den = np.linalg.norm(xT, axis=1) ** cfg.p
    if den.mean() <= 0:
        raise ValueError("degenerate denominator")
    est, se = _boot_ratio(num, den, cfg.p, cfg.n_boot, cfg.seed)
    return McEstimate(est, se, cfg.n_paths, cfg.seed)


@dataclass(frozen=True)
class DavisRatio:
    terminal: McEstimate
    d_p: float
    maximal: McEstimate | None
    a_p: float | None


def estimate_davis_ratio(cfg: LpConfig, pot: PotentialSpec | None = None) -> DavisRatio:
    """||Z_T||_p / ||[Y,Y]_T^{1/2}||_p and its running-max analogue, Y = B.

    [Y,Y]_T = dim * T is deterministic here.  The maximal variant is only
    reported for real-valued paths and p > 1.
    """
    if not cfg.p > 0:
        raise ValueError("p must be > 0")
    _, zT, zmax = _fk_ensemble(cfg, TransformSpec("fixed_matrix", np.eye(cfg.dim)), pot)
    den = np.full(cfg.n_paths, (cfg.dim * cfg.T) ** (cfg.p / 2))
    num = np.linalg.norm(zT, axis=1) ** cfg.p
    t_est, t_se = _boot_ratio(num, den, cfg.p, cfg.n_boot, cfg.seed)
    terminal = McEstimate(t_est, t_se, cfg.n_paths, cfg.seed)
    maximal, a_p = None, None
    if cfg.dim == 1 and cfg.p > 1:
        m_est, m_se = _boot_ratio(zmax ** cfg.p, den, cfg.p, cfg.n_boot, cfg.seed)
        maximal, a_p = McEstimate(m_est, m_se, cfg.n_paths, cfg.seed), constants.a_p_bound(cfg.p)
    return DavisRatio(terminal, constants.davis_dp(cfg.p), maximal, a_p)


# ---------------------------------------------------------- stopped problems

@numba.njit(cache=True, nogil=True)
def _interp(xs, ys, v):
    if v >= xs[-1]:
        return np.nan
    j = np.searchsorted(xs, v) - 1
    if j < 0:
        j = 0
    w = (v - xs[j]) / (xs[j + 1] - xs[j])
    return ys[j] * (1 - w) + ys[j + 1] * w


@numba.njit(cache=True, nogil=True)
def _pair_chunk(x, d, steps, done, margin, z, sdt, c0, cs, thr):
    """Advance (B, D) with dD = -sgn(D) dB until B <= thr(|B| + |D|).

    The level c = x + |d| only grows when D crosses zero; while D keeps its
    sign the pair slides along the line x + |y| = c.  ``margin`` records the
    lowest value of min(x, x + |d| - c0) over the non-terminal steps, to
    check the pair stays in {x >= 0, x + |y| >= c0}; the overshoot of the
    stopping step is excluded since the terminal pair is projected back onto
    the stopping curve.
    """
    n_p, n_s = z.shape
    for i in range(n_p):
        if done[i]:
            continue
        xi, di = x[i], d[i]
        c = xi + abs(di)
        t = _interp(cs, thr, c)
        for k in range(n_s):
            db = z[i, k] * sdt
            s = 1.0 if di >= 0 else -1.0
            xi += db
            di -= s * db
            steps[i] += 1
            cn = xi + abs(di)
            if cn > c:
                c = cn
                t = _interp(cs, thr, c)
                if np.isnan(t):
                    break
            if xi <= t:
                done[i] = True
                break
            m = min(xi, cn - c0)
            if m < margin[i]:
                margin[i] = m
        x[i], d[i] = xi, di


@numba.njit(cache=True, nogil=True)
def _ball_chunk(pos, steps, done, z, sdt, r_stop):
    n_p, n_s, n = z.shape
    r2 = r_stop * r_stop
    for i in range(n_p):
        if done[i]:
            continue
        for k in range(n_s):
            acc = 0.0
            for j in range(n):
                pos[i, j] += z[i, k, j] * sdt
                acc += pos[i, j] * pos[i, j]
            steps[i] += 1
            if acc >= r2:
                done[i] = True
                break


def _chunked_stop(n_paths, seed, block, threads, max_steps, chunk, init, advance, shape):
    """Generic driver: per-path streams, chunks of normals until stop or budget."""

    def run(s, e):
        gens = [path_rng(seed, i) for i in range(s, e)]
        state = init(e - s)
        steps = np.zeros(e - s, dtype=np.int64)
        done = np.zeros(e - s, dtype=np.bool_)
        while True:
            live = np.flatnonzero(~done & (steps < max_steps))
            if live.size == 0:
                break
            z = np.zeros((e - s, chunk) + shape)
            for j in live:
                z[j] = gens[j].standard_normal((chunk,) + shape)
            advance(state, steps, done, z)
        return tuple(state) + (steps, done)

    return _run_blocks(run, n_paths, block, threads)


@dataclass(frozen=True)
class ExtremalResult:
    lhs: McEstimate
    rhs: McEstimate
    gap: float  # |lhs - rhs| / rhs
    gap_se: float  # standard error of lhs - rhs, relative to rhs
    n_unstopped: int
    min_margin: float  # lowest excursion outside the admissible set (negative = outside)
    mean_tau: float
    extra: dict = field(default_factory=dict)

    @property
    def unstopped_fraction(self) -> float:
        return self.n_unstopped / self.lhs.n_paths


@dataclass
class ExtremalConfig:
    n_paths: int = 10_000
    dt: float = 1e-4
    seed: int = 0
    threads: int = 1
    block: int = 256
    chunk: int = 4096
    horizon_factor: float = 50.0
    pilot_paths: int = 200
    strict: bool = True


def _pair_run(cfg: ExtremalConfig, c0, cs, thr):
    sdt = math.sqrt(cfg.dt)

    def init(m):
        return [np.full(m, c0 / 2), np.full(m, c0 / 2), np.full(m, np.inf)]

    def advance(state, steps, done, z):
        _pair_chunk(state[0], state[1], steps, done, state[2], z, sdt, c0, cs, thr)

    def go(n_paths, max_steps, seed):
        return _chunked_stop(n_paths, seed, cfg.block, cfg.threads, max_steps,
                             cfg.chunk, init, advance, ())

    # pilot for the horizon; its own stream so the main run is unaffected
    pilot_cap = int(1e3 / cfg.dt)
    *_, ps, pdone = go(cfg.pilot_paths, pilot_cap, cfg.seed + 7919)
    mean_tau_pilot = ps[pdone].mean() * cfg.dt if pdone.any() else 1.0
    max_steps = int(cfg.horizon_factor * mean_tau_pilot / cfg.dt)
    x, d, margin, steps, done = go(cfg.n_paths, max_steps, cfg.seed)
    return x, d, margin, steps, done


def _finish(cfg, lhs_i, rhs_i, done, margin, steps, extra):
    n = cfg.n_paths
    n_unstopped = int((~done).sum())
    if cfg.strict and n_unstopped > UNSTOPPED_BUDGET * n:
        raise UnstoppedPathsError(f"{n_unstopped} of {n} paths not stopped within the horizon")
    lhs_i, rhs_i = lhs_i[done], rhs_i[done]
    m = lhs_i.size
    lhs = McEstimate(float(lhs_i.mean()), float(lhs_i.std(ddof=1) / math.sqrt(m)), n, cfg.seed)
    rhs = McEstimate(float(rhs_i.mean()), float(rhs_i.std(ddof=1) / math.sqrt(m)), n, cfg.seed)
    diff = lhs_i - rhs_i
    return ExtremalResult(
        lhs=lhs,
        rhs=rhs,
        gap=abs(lhs.mean - rhs.mean) / rhs.mean,
        gap_se=float(diff.std(ddof=1) / math.sqrt(m)) / rhs.mean,
        n_unstopped=n_unstopped,
        min_margin=float(margin.min()),
        mean_tau=float(steps[done].mean() * cfg.dt),
        extra=extra,
    )


def extremal_llogl(K: float, cfg: ExtremalConfig | None = None) -> ExtremalResult:
    """Equality case of the logarithmic bound with E = Omega.

    B starts at c0/2 with c0 = 1/(K-1), D = c0/2 - int sgn(D) dB, and the pair
    is stopped on {|y| = (x+1)/(K-1)} (which contains the exit point x = 0).
    On the line x + |y| = c that set is hit at x = ((K-1)c - 1)/K; the
    terminal pair is placed there to remove the grid overshoot.
    lhs = E|Y_inf|, rhs = K E Psi(X_inf) + 1/(2(K-1)).
    """
    if not K > 1:
        raise ValueError("K must be > 1")
    cfg = cfg or ExtremalConfig()
    c0 = 1 / (K - 1)
    cs = np.array([c0, 1e12])
    thr = ((K - 1) * cs - 1) / K
    x, d, margin, steps, done = _pair_run(cfg, c0, cs, thr)
    c = np.maximum(x + np.abs(d), c0)
    xT = ((K - 1) * c - 1) / K
    yT = c - xT
    lhs_i = yT
    rhs_i = K * constants.young_psi(xT) + 1 / (2 * (K - 1))
    return _finish(cfg, lhs_i, rhs_i, done, margin, steps, {"K": K, "start": c0 / 2})


def extremal_weak(p: float, cfg: ExtremalConfig | None = None, c_max: float = 400.0) -> ExtremalResult:
    """Equality case of the weak-type bound for 1 < p < 2 with E = Omega.

    B and D start at gamma(0)/2 and the pair is stopped on |y| = gamma(x),
    which on the line x + |y| = c is the point x = H(c).
    lhs = E|Y_inf|, rhs = E X_inf^p + gamma(0)/2; ``extra['ratio']`` is
    E|Y_inf| / ||X_inf||_p, to be compared with K_p.
    """
    if not 1 < p < 2:
        raise ValueError("extremal_weak needs 1 < p < 2")
    cfg = cfg or ExtremalConfig()
    g0 = specfun.gamma_fn(p, 0.0)
    cs = g0 + np.concatenate([[0.0], np.geomspace(1e-8, c_max, 20000)])
    thr = specfun.h_inverse_vec(p, cs)
    x, d, margin, steps, done = _pair_run(cfg, g0, cs, thr)
    c = np.maximum(x + np.abs(d), g0)
    xT = specfun.h_inverse_vec(p, c)
    yT = c - xT
    lhs_i = yT
    rhs_i = xT ** p + g0 / 2
    res = _finish(cfg, lhs_i, rhs_i, done, margin, steps, {"p": p, "start": g0 / 2})
    xp = xT[done] ** p
    ratio = res.lhs.mean / xp.mean() ** (1 / p)
    # delta method for E|Y| / (E X^p)^{1/p}
    g = np.stack([yT[done], xp])
    cov = np.cov(g) / xp.size
    grad = np.array([1 / xp.mean() ** (1 / p), -ratio / (p * xp.mean())])
    res.extra.update(ratio=float(ratio), ratio_se=float(math.sqrt(grad @ cov @ grad)),
                     k_p=constants.k_p(p))
    return res


@dataclass(frozen=True)
class MomentRow:
    k: int
    estimate: McEstimate
    bound: float  # k! (E tau)^k with the exact E tau = 1/dim


def exit_time_moments(dim: int = 3, k_max: int = 3, cfg: ExtremalConfig | None = None,
                      bgk: bool = True) -> list[MomentRow]:
    """Moments of the exit time of Brownian motion from the unit ball, from 0.

    Exit is monitored on the grid; with ``bgk`` the radius is shrunk by
    0.5826 sqrt(dt) to offset the discrete-monitoring delay.
    """
    cfg = cfg or ExtremalConfig()
    sdt = math.sqrt(cfg.dt)
    r_stop = 1.0 - BGK_BETA * sdt if bgk else 1.0

    def init(m):
        return [np.zeros((m, dim))]

    def advance(state, steps, done, z):
        _ball_chunk(state[0], steps, done, z, sdt, r_stop)

    max_steps = int(cfg.horizon_factor / dim / cfg.dt)
    _, steps, done = _chunked_stop(cfg.n_paths, cfg.seed, cfg.block, cfg.threads, max_steps,
                                   cfg.chunk, init, advance, (dim,))
    n_unstopped = int((~done).sum())
    if cfg.strict and n_unstopped > UNSTOPPED_BUDGET * cfg.n_paths:
        raise UnstoppedPathsError(f"{n_unstopped} of {cfg.n_paths} paths not stopped")
    tau = steps[done] * cfg.dt
    rows = []
    for k in range(1, k_max + 1):
        v = tau ** k
        est = McEstimate(float(v.mean()), float(v.std(ddof=1) / math.sqrt(v.size)), cfg.n_paths, cfg.seed)
        rows.append(MomentRow(k, est, math.factorial(k) * dim ** (-k)))
    return rows


def richardson_agree(a: McEstimate, b: McEstimate, k: float = 3.0) -> bool:
    """Two runs (dt and dt/2) agree within k combined standard errors."""
    return abs(a.mean - b.mean) <= k * math.hypot(a.std_err, b.std_err)
