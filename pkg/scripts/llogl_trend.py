"""Relative slack of the circle LlogL checker on two crafted families.

  step:    f = lam * sgn(cos theta), whose conjugate is a logarithmic spike
           (2 lam / pi) log|cot|; lam near 1/K gives the smallest slack.
  poisson: f = P_r - 1, with conjugate Q_r; the slack grows with the height.

For each input the set A runs over superlevel sets of |Hf| and the smallest
relative slack (rhs - lhs) / rhs is reported.  Nothing here is asserted.

    python scripts/llogl_trend.py --K 2 --grid 65536
"""
import argparse

import numpy as np

from sharpmart import spectral


def best_record(f, K):
    h = np.abs(spectral.hilbert_circle(f).samples)
    recs = [spectral.check_llogl(f, h >= np.quantile(h, q), K) for q in np.linspace(0.0, 0.999, 60)]
    return min(recs, key=lambda r: r.slack / r.rhs)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--K", type=float, default=2.0)
    ap.add_argument("--grid", type=int, default=2 ** 16)
    a = ap.parse_args()
    th = 2 * np.pi * (np.arange(a.grid) + 0.5) / a.grid
    print(f"{'family':>8} {'param':>8} {'lhs':>10} {'rhs':>10} {'rel slack':>10} {'|A|':>8}")
    for lam in np.array([0.2, 0.5, 0.8, 1.0, 1.2, 2.0]) / a.K:
        f = spectral.SpectralField.from_samples(lam * np.sign(np.cos(th)))
        r = best_record(f, a.K)
        print(f"{'step':>8} {lam:>8.3f} {r.lhs:>10.4f} {r.rhs:>10.4f} {r.slack / r.rhs:>10.4f} {r.info['measure']:>8.4f}")
    for rad in (0.5, 0.8, 0.9, 0.95, 0.99):
        P = (1 - rad ** 2) / (1 - 2 * rad * np.cos(th) + rad ** 2)
        r = best_record(spectral.SpectralField.from_samples(P - 1), a.K)
        print(f"{'poisson':>8} {rad:>8.3f} {r.lhs:>10.4f} {r.rhs:>10.4f} {r.slack / r.rhs:>10.4f} {r.info['measure']:>8.4f}")


if __name__ == "__main__":
    main()
