#!/usr/bin/env python3
"""Fit the low-temperature scaling exponent theta of S ~ T^theta.

Sweeps beta*omega over a log grid for a few (N, g) combinations and prints
the fitted exponent over the window beta*omega in [20, 60].
"""

import sys

from rcprobe.sweep import SweepConfig, fit_scaling, run_sweep

CASES = [
    (1, 0.4),
    (2, 0.3),
    (3, 0.3),
]


def main():
    window = (20.0, 60.0)
    import numpy as np

    grid = tuple(np.geomspace(window[0], window[1], 12))
    for N, g in CASES:
        cfg = SweepConfig(
            model="rabi_exact", grid_axis="beta_omega", grid=grid,
            N=N, epsilon=1.0, g=g, n_max=48,
        )
        rows = run_sweep(cfg)
        fit = fit_scaling(rows, window)
        print(f"N={N} g={g}: theta = {fit.theta:+.4f} "
              f"(stderr {fit.stderr:.1e}, R^2 {fit.r_squared:.6f})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
