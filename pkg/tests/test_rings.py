import math

import numpy as np
import pytest

from swarmlab.potentials import Morse, PowerLaw
from swarmlab.rings import (
    RadiusProblem,
    RingSolution,
    beta_fn,
    continuum_radius,
    flock_ring,
    mill_ring,
    radius_residual,
    ring_positions,
    sine_moment_limit,
    solve_radius,
    solve_radius_all,
    trig_moment,
)

CANONICAL_MORSE = Morse(C_A=0.5, C_R=1.0, l_A=2.0, l_R=0.5)


class TestTrigMoment:
    def test_even_exponents_bit_exact(self):
        # closed form binom(2k,k)/4^k holds for every n above k
        for n in (3, 5, 7, 64, 333, 1000):
            assert trig_moment(n, 2) == 0.5
            assert trig_moment(n, 4) == 0.375
        assert trig_moment(10, 6) == 0.3125
        assert trig_moment(11, 8) == 35.0 / 128.0

    def test_closed_form_matches_direct_sum(self):
        for n, alpha in [(5, 2), (9, 4), (32, 6)]:
            direct = sum(math.sin(p * math.pi / n) ** alpha for p in range(n)) / n
            assert trig_moment(n, alpha) == pytest.approx(direct, rel=1e-14)

    def test_fractional_exponent_against_independent_sum(self):
        for n, alpha in [(7, 1.5), (40, 3.7), (100, 0.5)]:
            terms = np.sin(np.arange(n) * np.pi / n) ** alpha
            ref = float(np.sum(np.sort(terms))) / n
            assert trig_moment(n, alpha) == pytest.approx(ref, rel=1e-13)

    def test_odd_integer_exponent(self):
        n = 5
        ref = sum(math.sin(p * math.pi / n) ** 3 for p in range(n)) / n
        assert trig_moment(5, 3) == pytest.approx(ref, rel=1e-15)

    def test_limit_consistency(self):
        # 2^(alpha-1) S_alpha approaches the continuum moment
        for alpha in (1.5, 2.0, 3.0, 4.0):
            val = 2.0 ** (alpha - 1.0) * trig_moment(4000, alpha)
            assert val == pytest.approx(sine_moment_limit(alpha), abs=1e-6)

    def test_domain_validation(self):
        with pytest.raises(ValueError):
            trig_moment(2, 2)
        with pytest.raises(ValueError):
            trig_moment(5, -1)


class TestBetaAndLimits:
    def test_beta_closed_forms(self):
        assert beta_fn(1.0, 1.0) == pytest.approx(1.0, rel=1e-14)
        assert beta_fn(0.5, 0.5) == pytest.approx(math.pi, rel=1e-14)
        assert beta_fn(2.5, 1.5) == pytest.approx(math.pi / 16.0, rel=1e-13)
        # symmetry
        assert beta_fn(3.2, 1.7) == pytest.approx(beta_fn(1.7, 3.2), rel=1e-14)

    def test_beta_validation(self):
        with pytest.raises(ValueError):
            beta_fn(0.0, 1.0)
        with pytest.raises(ValueError):
            beta_fn(1.0, -2.0)

    def test_sine_moment_limit_values(self):
        assert sine_moment_limit(2.0) == pytest.approx(1.0, rel=1e-14)
        assert sine_moment_limit(4.0) == pytest.approx(3.0, rel=1e-14)
        assert sine_moment_limit(1.0) == pytest.approx(2.0 / math.pi, rel=1e-14)


class TestSolveRadius:
    def test_quartic_quadratic_closed_form(self):
        # (2R)^2 = S_2/S_4 = 4/3 for a=4, b=2, independent of n
        for n in (5, 100, 1000):
            sol = solve_radius(RadiusProblem(potential=PowerLaw(4, 2), n=n))
            assert sol.radius == pytest.approx(3.0**-0.5, abs=1e-12)
            assert sol.kind == "flock"

    def test_residual_vanishes_at_root(self):
        prob = RadiusProblem(potential=PowerLaw(3, 1.5), n=50)
        sol = solve_radius(prob)
        assert abs(radius_residual(prob, sol.radius)) < 1e-12

    def test_residual_sign_structure(self):
        prob = RadiusProblem(potential=PowerLaw(4, 2), n=20)
        R = solve_radius(prob).radius
        assert radius_residual(prob, 0.5 * R) < 0
        assert radius_residual(prob, 2.0 * R) > 0

    def test_auto_bracket_expansion(self):
        sol = solve_radius(RadiusProblem(potential=PowerLaw(1.2, 0.2), n=30))
        prob = RadiusProblem(potential=PowerLaw(1.2, 0.2), n=30)
        assert abs(radius_residual(prob, sol.radius)) < 1e-10

    def test_mill_radius_grows_with_speed(self):
        pot = PowerLaw(4, 2)
        r0 = solve_radius(RadiusProblem(potential=pot, n=60)).radius
        r1 = solve_radius(RadiusProblem(potential=pot, n=60, speed=0.3)).radius
        r2 = solve_radius(RadiusProblem(potential=pot, n=60, speed=0.6)).radius
        assert r0 < r1 < r2

    def test_mill_solution_fields(self):
        sol = solve_radius(RadiusProblem(potential=PowerLaw(5, 2), n=40, speed=0.5))
        assert sol.kind == "mill"
        assert sol.omega == pytest.approx(0.5 / sol.radius, rel=1e-12)

    def test_morse_canonical_root(self):
        prob = RadiusProblem(potential=CANONICAL_MORSE, n=100, bracket=(0.01, 10.0))
        sol = solve_radius(prob)
        assert sol.radius == pytest.approx(1.1863109197394057, abs=1e-9)
        assert abs(radius_residual(prob, sol.radius)) < 1e-12

    def test_morse_requires_bracket(self):
        with pytest.raises(ValueError):
            solve_radius(RadiusProblem(potential=CANONICAL_MORSE, n=100))

    def test_morse_no_root_at_speed(self):
        # the centrifugal term pushes the balance out of reach in this window
        prob = RadiusProblem(
            potential=CANONICAL_MORSE, n=100, speed=0.3, bracket=(0.01, 10.0)
        )
        with pytest.raises(ValueError):
            solve_radius(prob)
        assert solve_radius_all(prob) == []

    def test_solve_radius_all_finds_single_root(self):
        prob = RadiusProblem(potential=CANONICAL_MORSE, n=100, bracket=(0.01, 10.0))
        roots = solve_radius_all(prob)
        assert len(roots) == 1
        assert roots[0].radius == pytest.approx(solve_radius(prob).radius, abs=1e-9)

    def test_solve_radius_all_powerlaw_matches(self):
        prob = RadiusProblem(potential=PowerLaw(4, 2), n=12, bracket=(0.05, 5.0))
        roots = solve_radius_all(prob)
        assert len(roots) == 1
        assert roots[0].radius == pytest.approx(3.0**-0.5, abs=1e-10)

    def test_solve_radius_all_needs_bracket(self):
        with pytest.raises(ValueError):
            solve_radius_all(RadiusProblem(potential=PowerLaw(4, 2), n=12))


class TestRingConstructors:
    def test_flock_ring_records_drift(self):
        ring = flock_ring(PowerLaw(4, 2), 64, speed=0.25)
        assert ring.kind == "flock"
        assert ring.speed == 0.25
        assert ring.omega == 0.0
        # drift does not move the radius
        assert ring.radius == pytest.approx(flock_ring(PowerLaw(4, 2), 64).radius)

    def test_mill_ring_requires_positive_speed(self):
        with pytest.raises(ValueError):
            mill_ring(PowerLaw(4, 2), 64, 0.0)

    def test_ring_positions_geometry(self):
        ring = flock_ring(PowerLaw(4, 2), 8)
        x = ring_positions(ring)
        assert x.shape == (8, 2)
        assert np.allclose(np.hypot(x[:, 0], x[:, 1]), ring.radius, atol=1e-14)
        # first particle sits at angle 2 pi / n, last closes the circle at angle 0
        assert np.allclose(x[-1], [ring.radius, 0.0], atol=1e-12)
        assert x[0] == pytest.approx(
            [ring.radius * math.cos(2 * math.pi / 8), ring.radius * math.sin(2 * math.pi / 8)]
        )

    def test_ring_solution_validation(self):
        with pytest.raises(ValueError):
            RingSolution(n=2, radius=1.0, speed=0.0, omega=0.0, kind="flock")
        with pytest.raises(ValueError):
            RingSolution(n=5, radius=-1.0, speed=0.0, omega=0.0, kind="flock")
        with pytest.raises(ValueError):
            RingSolution(n=5, radius=1.0, speed=0.5, omega=0.1, kind="mill")
        with pytest.raises(ValueError):
            RingSolution(n=5, radius=1.0, speed=0.0, omega=0.2, kind="flock")
        with pytest.raises(ValueError):
            RingSolution(n=5, radius=1.0, speed=0.0, omega=0.0, kind="blob")

    def test_radius_problem_validation(self):
        with pytest.raises(TypeError):
            RadiusProblem(potential="not-a-potential", n=10)
        with pytest.raises(ValueError):
            RadiusProblem(potential=PowerLaw(4, 2), n=10, bracket=(2.0, 1.0))
        with pytest.raises(ValueError):
            RadiusProblem(potential=PowerLaw(4, 2), n=10, speed=-0.5)


class TestContinuum:
    def test_closed_form_quartic_quadratic(self):
        # beta-function ratio collapses to (4/3)^(1/2)/2 = 3^(-1/2)
        assert continuum_radius(4, 2) == pytest.approx(3.0**-0.5, rel=1e-14)

    def test_discrete_converges_to_continuum(self):
        target = continuum_radius(3, 1.5)
        errors = []
        for n in (10, 100, 1000):
            sol = solve_radius(RadiusProblem(potential=PowerLaw(3, 1.5), n=n))
            errors.append(abs(sol.radius - target))
        assert errors[0] > errors[1] > errors[2]
        assert errors[2] < 1e-6

    def test_continuum_with_speed_larger(self):
        assert continuum_radius(4, 2, speed=0.5) > continuum_radius(4, 2)

    def test_continuum_residual_at_root(self):
        R = continuum_radius(5, 1.5, speed=0.3)
        psi_a, psi_b = sine_moment_limit(5), sine_moment_limit(1.5)
        assert psi_a * R**4 - psi_b * R**0.5 - 0.09 / R == pytest.approx(0.0, abs=1e-10)

    def test_validation(self):
        with pytest.raises(ValueError):
            continuum_radius(2, 2)
        with pytest.raises(ValueError):
            continuum_radius(4, 2, speed=-1.0)
