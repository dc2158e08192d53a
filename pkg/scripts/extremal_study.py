"""How often does a finite sample reproduce the extremal identities within 2%?

Uses the exact laws of the stopped extremal pairs (no time stepping), so the
only error left is sampling error at the given path count.

  logarithmic, K > 1: with prob 1/2 the level stays at c0 = 1/(K-1), else
      c + 1 ~ Pareto(K, scale c0 + 1); X = ((K-1)c - 1)/K, |Y| = (c+1)/K;
      identity E|Y| = K E Psi(X) + 1/(2(K-1)).
  weak type, 1 < p < 2: with prob 1/2 T = 0, else P(T > t) = exp(-p t^{p-1});
      X = T, |Y| = gamma(T); identity E|Y| = E X^p + gamma(0)/2.

    python scripts/extremal_study.py --n 10000 --reps 400
"""
import argparse

import numpy as np

from sharpmart import constants, specfun


def sample_llogl(rng, K, n):
    c0 = 1 / (K - 1)
    # numpy.pareto draws Lomax samples L, and (c0 + 1)(1 + L) is Pareto(K, c0 + 1)
    c = np.where(rng.random(n) < 0.5, c0, c0 + (c0 + 1) * rng.pareto(K, n))
    x = ((K - 1) * c - 1) / K
    return (c + 1) / K, K * constants.young_psi(x) + 1 / (2 * (K - 1))


def sample_weak(rng, p, n):
    g0 = specfun.gamma_fn(p, 0.0)
    e = rng.exponential(size=n)
    t = np.where(rng.random(n) < 0.5, 0.0, (e / p) ** (1 / (p - 1)))
    return specfun.gamma_fn_vec(p, t), t ** p + g0 / 2, t


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=10_000)
    ap.add_argument("--reps", type=int, default=400)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    rng = np.random.default_rng(a.seed)
    for K in (2.0, 5.0):
        gaps = []
        for _ in range(a.reps):
            lhs, rhs = sample_llogl(rng, K, a.n)
            gaps.append(abs(lhs.mean() - rhs.mean()) / rhs.mean())
        gaps = np.array(gaps)
        print(f"log K={K}: median gap {np.median(gaps):.4f}, P(gap < 2%) = {np.mean(gaps < 0.02):.2f}")
    p = 1.5
    kp = constants.k_p(p)
    gaps, ratio_ok = [], []
    for _ in range(a.reps):
        lhs, rhs, t = sample_weak(rng, p, a.n)
        gaps.append(abs(lhs.mean() - rhs.mean()) / rhs.mean())
        ratio_ok.append(abs(lhs.mean() / np.mean(t ** p) ** (1 / p) / kp - 1) < 0.03)
    gaps = np.array(gaps)
    print(f"weak p={p}: median gap {np.median(gaps):.4f}, P(gap < 2%) = {np.mean(gaps < 0.02):.2f}, "
          f"P(ratio within 3% of K_p) = {np.mean(ratio_ok):.2f}")


if __name__ == "__main__":
    main()
