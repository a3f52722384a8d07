"""Ring radii for flock and mill states, discrete and continuum.

N particles equally spaced on a circle of radius R balance pairwise
attraction/repulsion against the centrifugal pull of rigid rotation.
The chord from particle 0 to particle p has length 2R sin(p pi / N), and
the radial force balance reads

    (1/N) sum_{p=1}^{N-1} sin(p pi / N) k'(2R sin(p pi / N)) = speed^2 / R

with speed = R * omega for a rotating mill and 0 for a translating flock
(a flock ring is the static balance; its common drift speed does not enter
the shape).  For the power-law potential the left side collapses to
(2R)^(a-1) S_a - (2R)^(b-1) S_b with the moments S_alpha computed by
:func:`trig_moment`, which is what makes large-N scans cheap.

As N grows, S_alpha tends to an integral expressible through the Beta
function, giving closed continuum radii (:func:`continuum_radius`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .potentials import Morse, PowerLaw

__all__ = [
    "RingSolution",
    "RadiusProblem",
    "trig_moment",
    "radius_residual",
    "solve_radius",
    "solve_radius_all",
    "flock_ring",
    "mill_ring",
    "beta_fn",
    "sine_moment_limit",
    "continuum_radius",
    "ring_positions",
]

# default search interval for power-law roots; every known case has R = O(1)
_DEFAULT_BRACKET = (1e-6, 1e3)
_MAX_EXPANSION = 1e12


@dataclass(frozen=True)
class RingSolution:
    """An N-particle ring state.

    ``kind`` is ``"flock"`` (rigid translation, omega = 0) or ``"mill"``
    (rigid rotation with omega = speed / radius).
    """

    n: int
    radius: float
    speed: float
    omega: float
    kind: str

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("ring needs n >= 3 particles")
        if not self.radius > 0:
            raise ValueError("ring radius must be positive")
        if self.speed < 0:
            raise ValueError("ring speed must be nonnegative")
        if self.kind not in ("flock", "mill"):
            raise ValueError(f"ring kind must be 'flock' or 'mill', got {self.kind!r}")
        if self.kind == "flock" and self.omega != 0.0:
            raise ValueError("flock rings have omega = 0")
        if self.kind == "mill":
            if abs(self.radius * self.omega - self.speed) > 1e-9 * max(1.0, self.speed):
                raise ValueError("mill rings need radius * omega = speed")


@dataclass(frozen=True)
class RadiusProblem:
    """Root-finding setup for the ring radius.

    ``speed`` is the centrifugal speed R*omega entering the balance (0 for
    flocks).  ``bracket`` of None means the default power-law interval with
    geometric expansion; Morse problems must supply one explicitly.
    """

    potential: object
    n: int
    speed: float = 0.0
    bracket: tuple | None = None
    tolerance: float = 1e-12

    def __post_init__(self):
        if not isinstance(self.potential, (PowerLaw, Morse)):
            raise TypeError("potential must be PowerLaw or Morse")
        if self.n < 3:
            raise ValueError("need n >= 3")
        if self.speed < 0:
            raise ValueError("speed must be nonnegative")
        if self.bracket is not None:
            lo, hi = self.bracket
            if not (0 < lo < hi):
                raise ValueError("bracket needs 0 < lo < hi")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")


def trig_moment(n, alpha):
    """Moment S_alpha = (1/n) sum_{p=0}^{n-1} sin(p pi / n)^alpha.

    Even integer exponents take the exact closed form
    S_{2k} = binom(2k, k) / 4^k (valid while n > k, since the discrete
    Fourier comb kills every binomial cross term); in particular
    S_2 = 1/2 and S_4 = 3/8 bit-exactly.  Other exponents fall back to
    compensated summation.  2^(alpha-1) S_alpha tends to
    :func:`sine_moment_limit` as n grows.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    if alpha < 0:
        raise ValueError("need alpha >= 0")
    if alpha == int(alpha) and int(alpha) % 2 == 0 and n > alpha // 2:
        k = int(alpha) // 2
        return math.comb(2 * k, k) / 4**k
    return math.fsum(math.sin(p * math.pi / n) ** alpha for p in range(n)) / n


def _powerlaw_moments(potential, n):
    return trig_moment(n, potential.a), trig_moment(n, potential.b)


def _residual_fn(potential, n, speed):
    """Build a cheap scalar residual R -> balance defect.

    Power laws precompute the two trig moments so each call is O(1);
    the Morse route sums chords term by term.
    """
    s2 = speed * speed
    if isinstance(potential, PowerLaw):
        s_a, s_b = _powerlaw_moments(potential, n)
        ea, eb = potential.a - 1.0, potential.b - 1.0

        def residual(R):
            d = 2.0 * R
            return d**ea * s_a - d**eb * s_b - s2 / R

        def residual_deriv(R):
            d = 2.0 * R
            return 2.0 * ea * d ** (ea - 1.0) * s_a - 2.0 * eb * d ** (eb - 1.0) * s_b + s2 / (R * R)

        return residual, residual_deriv

    sines = [math.sin(p * math.pi / n) for p in range(1, n)]

    def residual(R):
        om2 = s2 / (R * R)
        terms = []
        for s in sines:
            d = 2.0 * R * s
            kd = (potential.C_A / potential.l_A) * math.exp(-d / potential.l_A) - (
                potential.C_R / potential.l_R
            ) * math.exp(-d / potential.l_R)
            terms.append(s * (kd - om2 * d))
        return math.fsum(terms) / n

    return residual, None


def radius_residual(problem, R):
    """Radial force balance defect at candidate radius R.

    Zero at a ring radius; negative when short-range repulsion (or the
    centrifugal term) wins, positive when attraction wins.
    """
    if not R > 0:
        raise ValueError("R must be positive")
    residual, _ = _residual_fn(problem.potential, problem.n, problem.speed)
    return residual(float(R))


def _bisect(residual, lo, hi, f_lo, tol):
    # classic bisection; interval width drops below tol
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        f_mid = residual(mid)
        if f_mid == 0.0:
            return mid
        if (f_lo < 0) == (f_mid < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _refine(residual, residual_deriv, lo, hi, f_lo, tol):
    root = _bisect(residual, lo, hi, f_lo, tol)
    if residual_deriv is not None:
        # two Newton steps restore the digits bisection left on the table
        for _ in range(2):
            d = residual_deriv(root)
            if d == 0.0:
                break
            step = residual(root) / d
            cand = root - step
            if lo < cand < hi:
                root = cand
    return root


def _make_ring(problem, root):
    if problem.speed > 0:
        return RingSolution(
            n=problem.n,
            radius=root,
            speed=problem.speed,
            omega=problem.speed / root,
            kind="mill",
        )
    return RingSolution(n=problem.n, radius=root, speed=0.0, omega=0.0, kind="flock")


def solve_radius(problem):
    """Find the ring radius for the given problem.

    Power laws have a unique root (repulsion wins for small R, attraction
    for large R, and the residual crosses once); the default bracket is
    expanded geometrically until it straddles the sign change.  Morse
    problems must carry an explicit bracket with a sign change inside.
    Returns a mill ring when problem.speed > 0, a flock ring otherwise.
    """
    residual, residual_deriv = _residual_fn(problem.potential, problem.n, problem.speed)
    if problem.bracket is not None:
        lo, hi = float(problem.bracket[0]), float(problem.bracket[1])
        f_lo, f_hi = residual(lo), residual(hi)
        if f_lo == 0.0:
            return _make_ring(problem, lo)
        if f_hi == 0.0:
            return _make_ring(problem, hi)
        if (f_lo < 0) == (f_hi < 0):
            raise ValueError(
                f"no sign change in bracket ({lo:g}, {hi:g}); "
                "widen it or use solve_radius_all"
            )
    elif isinstance(problem.potential, PowerLaw):
        lo, hi = _DEFAULT_BRACKET
        f_lo = residual(lo)
        while f_lo >= 0 and lo > 1.0 / _MAX_EXPANSION:
            lo /= 4.0
            f_lo = residual(lo)
        f_hi = residual(hi)
        while f_hi <= 0 and hi < _MAX_EXPANSION:
            hi *= 4.0
            f_hi = residual(hi)
        if f_lo >= 0 or f_hi <= 0:
            raise ValueError("failed to bracket a ring radius after expansion")
    else:
        raise ValueError("Morse problems need an explicit bracket")
    root = _refine(residual, residual_deriv, lo, hi, f_lo, problem.tolerance)
    return _make_ring(problem, root)


def solve_radius_all(problem, segments=1024):
    """All ring radii inside the problem's bracket, sorted ascending.

    Scans the bracket on a uniform grid, refines every sign change by
    bisection.  Returns [] when the bracket holds no root; general
    potentials (Morse in particular) can hold several.
    """
    if problem.bracket is None:
        raise ValueError("solve_radius_all needs an explicit bracket")
    residual, residual_deriv = _residual_fn(problem.potential, problem.n, problem.speed)
    lo, hi = float(problem.bracket[0]), float(problem.bracket[1])
    grid = np.linspace(lo, hi, segments + 1)
    values = [residual(float(x)) for x in grid]
    roots = []
    for i in range(segments):
        f0, f1 = values[i], values[i + 1]
        if f0 == 0.0:
            roots.append(float(grid[i]))
        elif (f0 < 0) != (f1 < 0):
            roots.append(
                _refine(
                    residual,
                    residual_deriv,
                    float(grid[i]),
                    float(grid[i + 1]),
                    f0,
                    problem.tolerance,
                )
            )
    if values[-1] == 0.0:
        roots.append(float(grid[-1]))
    return [_make_ring(problem, r) for r in sorted(roots)]


def flock_ring(potential, n, speed=0.0):
    """Flock ring: static shape balance, common drift at ``speed``.

    The drift does not enter the radius; it is recorded on the solution
    for downstream use (stability matrices, initial conditions).
    """
    sol = solve_radius(RadiusProblem(potential=potential, n=n, speed=0.0))
    return RingSolution(n=n, radius=sol.radius, speed=speed, omega=0.0, kind="flock")


def mill_ring(potential, n, speed):
    """Mill ring rotating at omega = speed / radius."""
    if not speed > 0:
        raise ValueError("mill rings need speed > 0")
    return solve_radius(RadiusProblem(potential=potential, n=n, speed=speed))


def beta_fn(x, y):
    """Euler Beta function B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y)."""
    if not (x > 0 and y > 0):
        raise ValueError("beta_fn needs positive arguments")
    return math.exp(math.lgamma(x) + math.lgamma(y) - math.lgamma(x + y))


def sine_moment_limit(alpha):
    """Large-n limit of 2^(alpha-1) * trig_moment(n, alpha).

    Equals 2^(alpha-1)/pi * B((alpha+1)/2, 1/2); gives 1 at alpha=2,
    3 at alpha=4, 2/pi at alpha=1.
    """
    if not alpha > 0:
        raise ValueError("need alpha > 0")
    return 2.0 ** (alpha - 1.0) / math.pi * beta_fn(0.5 * (alpha + 1.0), 0.5)


def continuum_radius(a, b, speed=0.0):
    """Ring radius in the infinite-particle limit of the power-law model.

    At speed 0 the balance psi_a R^(a-1) = psi_b R^(b-1) has the closed
    form R = (1/2) (B((b+1)/2,1/2) / B((a+1)/2,1/2))^(1/(a-b)); with a
    centrifugal term the unique root is found numerically.
    """
    if not a > b > 0:
        raise ValueError("need a > b > 0")
    if speed < 0:
        raise ValueError("speed must be nonnegative")
    if speed == 0.0:
        ratio = beta_fn(0.5 * (b + 1.0), 0.5) / beta_fn(0.5 * (a + 1.0), 0.5)
        return 0.5 * ratio ** (1.0 / (a - b))
    psi_a, psi_b = sine_moment_limit(a), sine_moment_limit(b)
    s2 = speed * speed

    def residual(R):
        return psi_a * R ** (a - 1.0) - psi_b * R ** (b - 1.0) - s2 / R

    def residual_deriv(R):
        return (
            psi_a * (a - 1.0) * R ** (a - 2.0)
            - psi_b * (b - 1.0) * R ** (b - 2.0)
            + s2 / (R * R)
        )

    lo, hi = _DEFAULT_BRACKET
    f_lo = residual(lo)
    while f_lo >= 0 and lo > 1.0 / _MAX_EXPANSION:
        lo /= 4.0
        f_lo = residual(lo)
    f_hi = residual(hi)
    while f_hi <= 0 and hi < _MAX_EXPANSION:
        hi *= 4.0
        f_hi = residual(hi)
    if f_lo >= 0 or f_hi <= 0:
        raise ValueError("failed to bracket the continuum radius")
    return _refine(residual, residual_deriv, lo, hi, f_lo, 1e-12)


def ring_positions(ring):
    """Particle positions R (cos t_j, sin t_j), t_j = 2 pi j / n, j = 1..n."""
    j = np.arange(1, ring.n + 1, dtype=float)
    theta = 2.0 * math.pi * j / ring.n
    return ring.radius * np.column_stack([np.cos(theta), np.sin(theta)])
