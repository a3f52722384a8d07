"""Ring radii across particle counts, and their continuum limits.

Solves the force-balance radius for a few attraction/repulsion pairs at
increasing N, printing the gap to the N -> infinity radius, then shows
how a rotating ring grows with speed.

Run:  python demos/ring_radius_tour.py
"""

import math

from swarmlab.potentials import Morse, PowerLaw
from swarmlab.rings import RadiusProblem, continuum_radius, solve_radius, solve_radius_all


def main():
    print("discrete ring radius vs the continuum limit")
    print(f"{'(a, b)':>10} {'N':>6} {'R(N)':>12} {'|R(N) - R_inf|':>15}")
    for a, b in ((4, 2), (3, 1.5), (5, 0.5)):
        limit = continuum_radius(a, b, 0.0)
        for n in (10, 100, 1000, 10000):
            ring = solve_radius(RadiusProblem(potential=PowerLaw(a, b), n=n))
            print(f"({a:>3}, {b:<4}) {n:>6} {ring.radius:>12.8f} {abs(ring.radius - limit):>15.3e}")
        print(f"{'':>10} {'inf':>6} {limit:>12.8f}")
    print()

    print("mill radius grows with rotation speed (a=4, b=2, N=200)")
    for speed in (0.0, 0.25, 0.5, 1.0, 2.0):
        ring = solve_radius(RadiusProblem(potential=PowerLaw(4, 2), n=200, speed=speed))
        omega = speed / ring.radius if speed else 0.0
        print(f"  speed {speed:4.2f}: R = {ring.radius:.6f}  omega = {omega:.4f}")
    print()

    # short-range repulsion / long-range attraction well: the balance can
    # have several rings, or none once the centrifugal term is too strong
    morse = Morse(C_A=0.5, C_R=1.0, l_A=2.0, l_R=0.5)
    print("Morse well (C_A=0.5, C_R=1, l_A=2, l_R=0.5), N=100")
    for speed in (0.0, 0.1, 0.3):
        roots = solve_radius_all(
            RadiusProblem(potential=morse, n=100, speed=speed, bracket=(0.01, 10.0))
        )
        if roots:
            desc = ", ".join(f"{r.radius:.6f}" for r in roots)
            print(f"  speed {speed:4.2f}: radii {desc}")
        else:
            print(f"  speed {speed:4.2f}: no ring balance in (0.01, 10)")


if __name__ == "__main__":
    main()
