"""Compare the second eigenvalue of the walk with its guaranteed ceiling.

For each odd r the walk runs on Z/r with generators +-2^j, j = 0..M. The
ceiling 1 - 1/(2(M+1)) is what drives the step count; the actual lambda*
is usually much smaller, which is why early stopping pays off.
"""

import argparse

import numpy as np

from diffusion_factor.cayley import additive_model
from diffusion_factor.diffusion import run_walk, spectral_data


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rmax", type=int, default=301)
    parser.add_argument("--steps", type=int, default=40)
    args = parser.parse_args()

    print(f"{'r':>5} {'M':>3} {'lambda*':>9} {'ceiling':>9} {'dev@n':>10} {'lam*^n':>10}")
    for r in range(3, args.rmax + 1, 2):
        if r % 50 not in (1, 3, 11):
            continue
        M = r.bit_length()
        s = spectral_data(r, M)
        ceiling = 1 - 1 / (2 * (M + 1))
        p = run_walk(additive_model(r, M), args.steps).probabilities
        dev = np.abs(p - 1 / r).max()
        print(f"{r:5d} {M:3d} {s.lambda_star:9.5f} {ceiling:9.5f} {dev:10.2e} "
              f"{s.lambda_star ** args.steps:10.2e}")


if __name__ == "__main__":
    main()
