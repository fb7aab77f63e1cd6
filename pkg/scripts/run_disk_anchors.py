#!/usr/bin/env python3
"""Print the unit-disk closed-form anchors next to computed values.

Usage: python3 scripts/run_disk_anchors.py [--n-r 64 --n-theta 128]
"""

import argparse
import math

from robinlab import fem, geometry, radial
from robinlab.radial import RadialParams


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n-r", type=int, default=64)
    ap.add_argument("--n-theta", type=int, default=128)
    args = ap.parse_args()

    exact_E = -(math.pi / 2.0) * (5.0 / 8.0)
    exact_lam = 8.0 / (5.0 * math.pi)

    prof = radial.solve_ball(RadialParams(n=2, q=1.0, beta=1.0), 1.0)
    e = radial.ball_energy(prof)
    print(f"radial E      {e.E:+.12f}   exact {exact_E:+.12f}   err {abs(e.E - exact_E):.2e}")
    print(f"radial lam_1  {e.lambda_q:+.12f}   exact {exact_lam:+.12f}")
    print(f"psi(0) {prof.psi[0]:.12f} (exact 0.75)   psi(1) {prof.psi[-1]:.12f} (exact 0.5)")

    mesh = fem.mesh_star(geometry.disk(1.0), args.n_r, args.n_theta)
    _, rep = fem.minimize_energy(mesh, RadialParams(n=2, q=1.0, beta=1.0))
    print(
        f"fem {args.n_r}x{args.n_theta}: E {rep.E:+.12f}"
        f"   rel err {abs(rep.E - exact_E) / abs(exact_E):.2e}"
        f"   iters {rep.iterations}"
    )

    for c in (0.25, 0.5, 1.0):
        p = radial.solve_ball(RadialParams(n=2, q=1.0, beta=1.0, c=c), 1.0)
        ec = radial.ball_energy(p).E
        exact = -5 * math.pi / 16 - math.pi * c**2 + math.pi * c if c <= 0.5 else -math.pi / 16
        print(f"obstacle c={c}: E^c {ec:+.12f}   exact {exact:+.12f}   mode {p.mode}")


if __name__ == "__main__":
    main()
