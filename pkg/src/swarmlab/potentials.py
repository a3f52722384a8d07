"""Pair potentials, self-propulsion, and velocity-alignment kernels.

The particle model integrates, for j = 1..N,

    x_j' = v_j
    v_j' = (alpha - beta |v_j|^2) v_j + (1/N) sum_{l != j} grad W(x_l - x_j)

with a radial pair potential W(x) = k(|x|).  The gradient convention makes
k'(r) > 0 attractive: the force on j points toward a neighbour at distance r
whenever k'(r) > 0.  The alignment variant replaces the propulsion term with
a Cucker-Smale average (1/N) sum_l g(|x_j - x_l|)(v_l - v_j).

The potential family is closed: a power-law difference and a Morse pair.
Everything downstream (ring radii, mode matrices, scans) assumes one of
these two; there is no hook for user-defined potentials.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "PowerLaw",
    "Morse",
    "Propulsion",
    "AlignmentKernel",
    "potential_deriv",
    "radial_force_factor",
    "pairwise_force",
    "propulsion_term",
    "kernel_value",
]


@dataclass(frozen=True)
class PowerLaw:
    """Power-law pair interaction k(r) = r^a / a - r^b / b with a > b > 0.

    The exponent a controls long-range attraction, b short-range repulsion.
    k'(r) = r^(a-1) - r^(b-1) vanishes at r = 1, is negative (repulsive)
    below and positive (attractive) above.
    """

    a: float
    b: float

    def __post_init__(self):
        if not (self.a > self.b > 0):
            raise ValueError(
                f"power-law exponents need a > b > 0, got a={self.a}, b={self.b}"
            )

    def value(self, r):
        return np.asarray(r) ** self.a / self.a - np.asarray(r) ** self.b / self.b

    def deriv(self, r):
        """k'(r) = r^(a-1) - r^(b-1), exact analytic form."""
        r = np.asarray(r, dtype=float)
        return r ** (self.a - 1.0) - r ** (self.b - 1.0)

    def second_deriv(self, r):
        r = np.asarray(r, dtype=float)
        return (self.a - 1.0) * r ** (self.a - 2.0) - (self.b - 1.0) * r ** (self.b - 2.0)


@dataclass(frozen=True)
class Morse:
    """Morse pair interaction, k(r) = C_R exp(-r/l_R) - C_A exp(-r/l_A).

    All four parameters are strictly positive.  With the attractive range
    longer than the repulsive one (l_A > l_R), k'(r) > 0 at long range
    (attraction toward distant particles, same force convention as
    :class:`PowerLaw`) and k'(r) < 0 near contact when C_R/l_R > C_A/l_A.
    """

    C_A: float
    C_R: float
    l_A: float
    l_R: float

    def __post_init__(self):
        for name in ("C_A", "C_R", "l_A", "l_R"):
            if not getattr(self, name) > 0:
                raise ValueError(f"Morse parameter {name} must be positive")

    def value(self, r):
        r = np.asarray(r, dtype=float)
        return self.C_R * np.exp(-r / self.l_R) - self.C_A * np.exp(-r / self.l_A)

    def deriv(self, r):
        """k'(r) = (C_A/l_A) exp(-r/l_A) - (C_R/l_R) exp(-r/l_R)."""
        r = np.asarray(r, dtype=float)
        return (self.C_A / self.l_A) * np.exp(-r / self.l_A) - (
            self.C_R / self.l_R
        ) * np.exp(-r / self.l_R)

    def second_deriv(self, r):
        r = np.asarray(r, dtype=float)
        return (self.C_R / self.l_R**2) * np.exp(-r / self.l_R) - (
            self.C_A / self.l_A**2
        ) * np.exp(-r / self.l_A)


#: the closed set of admissible pair interactions
InteractionPotential = (PowerLaw, Morse)


@dataclass(frozen=True)
class Propulsion:
    """Self-propulsion / friction pair: acceleration (alpha - beta |v|^2) v.

    Drives every particle toward the asymptotic speed sqrt(alpha/beta).
    """

    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError("propulsion needs alpha > 0 and beta > 0")

    @property
    def asymptotic_speed(self):
        return float(np.sqrt(self.alpha / self.beta))


@dataclass(frozen=True)
class AlignmentKernel:
    """Cucker-Smale communication rate g(r) = (1 + r^2)^(-gamma), gamma > 0.

    Strictly positive and strictly decreasing in r.
    """

    gamma: float

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError("alignment kernel needs gamma > 0")

    def value(self, r):
        r = np.asarray(r, dtype=float)
        return (1.0 + r * r) ** (-self.gamma)


def _check_potential(potential):
    if not isinstance(potential, InteractionPotential):
        raise TypeError(
            f"unsupported potential type {type(potential).__name__}; "
            "the admissible set is PowerLaw and Morse"
        )


def potential_deriv(potential, r):
    """Radial derivative k'(r) of the pair potential, exact analytic form."""
    _check_potential(potential)
    return potential.deriv(r)


def radial_force_factor(potential, r):
    """Factor f(r) = -k'(r) / r, so the pairwise force is -f(|x|) x."""
    _check_potential(potential)
    r = np.asarray(r, dtype=float)
    return -potential.deriv(r) / r


def pairwise_force(potential, x):
    """Force contribution grad W(x) = k'(|x|) x / |x| for offset(s) x.

    Accepts a single offset of shape (2,) or a stack of shape (..., 2);
    odd in x and equivariant under rotations.
    """
    _check_potential(potential)
    x = np.asarray(x, dtype=float)
    r = np.sqrt(np.sum(x * x, axis=-1))
    return (potential.deriv(r) / r)[..., np.newaxis] * x


def propulsion_term(prop, v):
    """Acceleration (alpha - beta |v|^2) v for velocities of shape (..., 2)."""
    v = np.asarray(v, dtype=float)
    speed2 = np.sum(v * v, axis=-1)
    return (prop.alpha - prop.beta * speed2)[..., np.newaxis] * v


def kernel_value(kernel, r):
    """Alignment rate g(r) = (1 + r^2)^(-gamma)."""
    return kernel.value(r)
