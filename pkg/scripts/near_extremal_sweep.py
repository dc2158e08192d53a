"""Discrete L^p norm of the grid conjugate-function operator versus grid size.

Two lower bounds for ||H||_{p->p} on a grid of size n:
  * the power profile Im((1+z)/(1-z))^gamma, gamma close to 1/p (p >= 2);
  * Boyd's nonlinear power iteration x <- psi_q(H^T psi_p(H x)), which
    increases ||Hx||_p / ||x||_p monotonically.
The continuum value is cot(pi / (2 p*)).

    python scripts/near_extremal_sweep.py --p 4 --kmin 8 --kmax 16
"""
import argparse

import numpy as np

from sharpmart import constants, spectral


def psi(v, p):
    return np.abs(v) ** (p - 1) * np.sign(v)


def grid_hilbert(x):
    return spectral.hilbert_circle(spectral.SpectralField.from_samples(x)).samples


def boyd_norm(n, p, iters=400, seed=0, start=None):
    q = p / (p - 1)
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n) if start is None else start.copy()
    x -= x.mean()
    x /= np.linalg.norm(x, p)
    best = 0.0
    for _ in range(iters):
        hx = grid_hilbert(x)
        best = max(best, np.linalg.norm(hx, p) / np.linalg.norm(x, p))
        # H^T = -H for the antisymmetric multiplier
        x = psi(-grid_hilbert(psi(hx, p)), q)
        x -= x.mean()
        x /= np.linalg.norm(x, p)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=float, default=4.0)
    ap.add_argument("--kmin", type=int, default=8)
    ap.add_argument("--kmax", type=int, default=14)
    ap.add_argument("--iters", type=int, default=300)
    a = ap.parse_args()
    target = constants.pichorides(a.p)
    gammas = 1 / a.p - np.array([0.05, 0.02, 0.01, 0.005, 0.001])
    print(f"p={a.p}  continuum norm {target:.6f}  0.9 x norm {0.9 * target:.6f}")
    print(f"{'n':>8} {'power profile':>14} {'gamma':>7} {'Boyd':>9}")
    for k in range(a.kmin, a.kmax + 1, 2):
        n = 2 ** k
        prof = [(spectral.lp_ratio(spectral.conjugate_power_pair(n, g)[0], a.p), g) for g in gammas]
        r, g = max(prof)
        start = spectral.conjugate_power_pair(n, g)[0].samples
        b = max(boyd_norm(n, a.p, a.iters, start=start), boyd_norm(n, a.p, a.iters, seed=1))
        print(f"{n:>8} {r:>14.6f} {g:>7.3f} {b:>9.6f}")


if __name__ == "__main__":
    main()
