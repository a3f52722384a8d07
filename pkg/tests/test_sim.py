import math

import numpy as np
import pytest

from swarmlab.potentials import AlignmentKernel, PowerLaw, Propulsion
from swarmlab.rings import flock_ring, mill_ring, ring_positions
from swarmlab.sim import (
    MetricSeries,
    ModePerturbation,
    RandomNoise,
    SimConfig,
    SimulationError,
    SwarmState,
    bifurcation_sweep,
    ic_flock_ring,
    ic_mill_ring,
    integrate,
    metric_angular_momentum,
    metric_cluster,
    metric_fatten,
    metric_polarization,
    rhs,
)
from swarmlab.spectra import cs_flock_mode_matrix, eig4


def propulsion_config(pot, n, t_final, alpha=1.0, beta=1.0, **kw):
    return SimConfig(
        model="propulsion", potential=pot, n=n, t_final=t_final,
        propulsion=Propulsion(alpha, beta), **kw,
    )


class TestRhs:
    def test_single_particle_on_speed(self):
        cfg = propulsion_config(PowerLaw(4, 2), 1, 1.0)
        st = SwarmState(t=0.0, positions=np.zeros((1, 2)), velocities=np.array([[1.0, 0.0]]))
        dx, dv = rhs(st, cfg)
        assert np.array_equal(dx, [[1.0, 0.0]])
        assert np.allclose(dv, 0.0, atol=1e-15)

    def test_pair_at_equilibrium_distance_is_propulsion_only(self):
        # k'(1) = 0 for PowerLaw(2,1): the interaction contributes nothing
        cfg = propulsion_config(PowerLaw(2, 1), 2, 1.0, alpha=1.0, beta=1.0)
        v = np.array([[0.5, 0.0], [0.5, 0.0]])
        st = SwarmState(
            t=0.0, positions=np.array([[0.0, 0.0], [1.0, 0.0]]), velocities=v
        )
        _, dv = rhs(st, cfg)
        expect = (1.0 - 0.25) * v
        assert np.allclose(dv, expect, atol=1e-14)

    def test_flock_ring_is_steady(self):
        pot = PowerLaw(5, 1.5)
        ring = flock_ring(pot, 40, speed=0.5)
        cfg = propulsion_config(pot, 40, 1.0, alpha=1.0, beta=4.0)  # speed 0.5
        st = ic_flock_ring(ring)
        _, dv = rhs(st, cfg)
        assert np.max(np.abs(dv)) < 1e-11

    def test_mill_ring_is_centripetal(self):
        pot = PowerLaw(5, 1.5)
        ring = mill_ring(pot, 40, 0.5)
        cfg = propulsion_config(pot, 40, 1.0, alpha=1.0, beta=4.0)
        st = ic_mill_ring(ring)
        _, dv = rhs(st, cfg)
        expect = -(ring.omega**2) * st.positions
        assert np.max(np.abs(dv - expect)) < 1e-11

    def test_guard_violation_names_pair(self):
        cfg = propulsion_config(PowerLaw(2, 1), 3, 1.0, min_distance_guard=10.0)
        st = SwarmState(t=0.0, positions=np.array([[0.0, 0.0], [1.0, 0.0], [30.0, 0.0]]),
                        velocities=np.zeros((3, 2)))
        with pytest.raises(SimulationError, match="particles 0 and 1"):
            rhs(st, cfg)

    def test_cs_rhs_matches_direct_sum(self):
        pot = PowerLaw(3, 1.5)
        cfg = SimConfig(model="cucker-smale", potential=pot, n=3, t_final=1.0,
                        alignment=AlignmentKernel(1.2))
        x = np.array([[0.0, 0.0], [1.1, 0.2], [-0.4, 0.9]])
        v = np.array([[0.3, 0.0], [0.0, -0.2], [0.1, 0.5]])
        st = SwarmState(t=0.0, positions=x, velocities=v)
        _, dv = rhs(st, cfg)
        expect = np.zeros_like(dv)
        kern = AlignmentKernel(1.2)
        for j in range(3):
            for l in range(3):
                if l == j:
                    continue
                d = np.linalg.norm(x[j] - x[l])
                expect[j] += pot.deriv(d) / d * (x[l] - x[j]) / 3
                expect[j] += float(kern.value(d)) * (v[l] - v[j]) / 3
        assert np.allclose(dv, expect, atol=1e-14)


class TestIntegrate:
    def test_logistic_speed_relaxation(self):
        cfg = propulsion_config(PowerLaw(4, 2), 1, 10.0, sample_every=1.0)
        st = SwarmState(t=0.0, positions=np.zeros((1, 2)), velocities=np.array([[0.5, 0.0]]))
        res = integrate(cfg, st)
        s0 = 0.25
        for state in res.states:
            s = s0 * math.exp(2 * state.t) / (1.0 - s0 + s0 * math.exp(2 * state.t))
            assert np.hypot(*state.velocities[0]) == pytest.approx(math.sqrt(s), abs=1e-6)

    def test_error_drops_with_tolerance(self):
        s0 = 0.25
        s = s0 * math.exp(20.0) / (1.0 - s0 + s0 * math.exp(20.0))
        exact = math.sqrt(s)
        errors = []
        for rtol, atol in [(1e-4, 1e-7), (1e-5, 1e-8), (1e-6, 1e-9), (1e-7, 1e-10)]:
            cfg = propulsion_config(PowerLaw(4, 2), 1, 10.0, rtol=rtol, atol=atol,
                                    sample_every=10.0)
            st = SwarmState(t=0.0, positions=np.zeros((1, 2)),
                            velocities=np.array([[0.5, 0.0]]))
            res = integrate(cfg, st)
            errors.append(abs(np.hypot(*res.final_state.velocities[0]) - exact))
        for worse, better in zip(errors, errors[1:]):
            assert better < worse / 2

    def test_sampling_grid_and_stats(self):
        cfg = propulsion_config(PowerLaw(4, 2), 1, 2.5, sample_every=1.0)
        st = SwarmState(t=0.0, positions=np.zeros((1, 2)), velocities=np.array([[0.5, 0.0]]))
        res = integrate(cfg, st)
        assert np.allclose(res.metrics.t, [0.0, 1.0, 2.0, 2.5])
        assert res.stats["steps_accepted"] > 0
        assert res.stats["rhs_evals"] > 6 * res.stats["steps_accepted"]

    def test_n_mismatch_rejected(self):
        cfg = propulsion_config(PowerLaw(4, 2), 3, 1.0)
        st = SwarmState(t=0.0, positions=np.zeros((2, 2)), velocities=np.zeros((2, 2)))
        with pytest.raises(ValueError):
            integrate(cfg, st)

    def test_deterministic_repeats(self):
        pot = PowerLaw(4, 2)
        ring = flock_ring(pot, 20, speed=0.5)
        runs = []
        for _ in range(2):
            rng = np.random.default_rng(7)
            st = ic_flock_ring(ring, perturbation=RandomNoise(1e-3, 1e-3), rng=rng)
            cfg = propulsion_config(pot, 20, 5.0, alpha=1.0, beta=4.0, seed=7)
            res = integrate(cfg, st, reference=ring)
            runs.append(res)
        assert runs[0].metrics.csv_text() == runs[1].metrics.csv_text()
        assert np.array_equal(runs[0].final_state.positions, runs[1].final_state.positions)

    def test_steady_flock_translates_rigidly(self):
        pot = PowerLaw(5, 1.5)
        ring = flock_ring(pot, 30, speed=0.3)
        cfg = propulsion_config(pot, 30, 10.0, alpha=0.9, beta=10.0,
                                rtol=1e-9, atol=1e-12, sample_every=10.0)
        st = ic_flock_ring(ring)
        res = integrate(cfg, st)
        x0, x1 = st.positions, res.final_state.positions
        d0 = np.linalg.norm(x0[:, None, :] - x0[None, :, :], axis=-1)
        d1 = np.linalg.norm(x1[:, None, :] - x1[None, :, :], axis=-1)
        mask = ~np.eye(30, dtype=bool)
        assert np.max(np.abs(d1[mask] - d0[mask]) / d0[mask]) < 1e-6
        # the centroid actually moved at the drift speed
        assert np.linalg.norm(x1.mean(axis=0) - x0.mean(axis=0)) == pytest.approx(3.0, rel=1e-6)

    def test_steady_mill_preserves_radii_over_one_period(self):
        pot = PowerLaw(5, 1.25)
        ring = mill_ring(pot, 30, 0.5)
        period = 2 * math.pi / ring.omega
        cfg = propulsion_config(pot, 30, period, alpha=1.0, beta=4.0,
                                rtol=1e-9, atol=1e-12, sample_every=period)
        st = ic_mill_ring(ring)
        res = integrate(cfg, st, reference=ring)
        x = res.final_state.positions
        radii = np.hypot(*(x - x.mean(axis=0)).T)
        assert np.max(np.abs(radii - ring.radius) / ring.radius) < 1e-6

    def test_asymptotic_speed_reached(self):
        pot = PowerLaw(4, 2)
        ring = flock_ring(pot, 20, speed=0.5)
        rng = np.random.default_rng(3)
        st = ic_flock_ring(ring, perturbation=RandomNoise(1e-3, 1e-2), rng=rng)
        cfg = propulsion_config(pot, 20, 30.0, alpha=1.0, beta=4.0, sample_every=30.0)
        res = integrate(cfg, st)
        speeds = np.hypot(*res.final_state.velocities.T)
        assert np.max(np.abs(speeds - 0.5)) < 1e-3

    def test_cluster_error_stays_bounded_on_stable_ring(self):
        # alignment damping acts mode by mode, so on this stable ring the
        # perturbation decays and the cluster error stays within 2x its start
        pot = PowerLaw(4, 2)
        ring = flock_ring(pot, 100)
        st = ic_flock_ring(ring, perturbation=ModePerturbation(m=3, xi_plus=1e-3))
        cfg = SimConfig(model="cucker-smale", potential=pot, n=100, t_final=50.0,
                        alignment=AlignmentKernel(1.0), sample_every=5.0)
        res = integrate(cfg, st, reference=ring)
        mu = res.metrics.mu_rel
        assert mu[0] > 0
        assert max(mu) <= 2.0 * mu[0]

    def test_cluster_error_drift_scales_with_propulsion(self):
        # self-propulsion damps velocities along the fixed drift direction
        # only, which feeds the neutral shape modes of this a = 2b ring at a
        # rate proportional to alpha: weak propulsion keeps the start bounded
        # while order-one propulsion ramps it secularly
        pot = PowerLaw(4, 2)

        def final_ratio(alpha, beta):
            ring = flock_ring(pot, 100, speed=math.sqrt(alpha / beta))
            st = ic_flock_ring(ring, perturbation=ModePerturbation(m=3, xi_plus=1e-3))
            cfg = propulsion_config(pot, 100, 50.0, alpha=alpha, beta=beta,
                                    sample_every=10.0)
            res = integrate(cfg, st, reference=ring)
            return res.metrics.mu_rel[-1] / res.metrics.mu_rel[0]

        assert final_ratio(0.01, 1.0) <= 2.0
        assert final_ratio(1.0, 1.0) > 4.0

    def test_linear_regime_matches_mode_matrix(self):
        # alignment coupling keeps the mode decomposition exact, so the
        # fitted amplitude decay matches the 4x4 leading eigenvalue
        n, m = 64, 3
        pot = PowerLaw(5, 1.5)
        ring = flock_ring(pot, n)
        st = ic_flock_ring(ring, perturbation=ModePerturbation(m=m, xi_plus=1e-4))
        cfg = SimConfig(model="cucker-smale", potential=pot, n=n, t_final=20.0,
                        alignment=AlignmentKernel(1.0), rtol=1e-9, atol=1e-12,
                        sample_every=0.5)
        res = integrate(cfg, st, reference=ring)
        theta = 2.0 * np.pi * np.arange(1, n + 1) / n
        to_c = np.array([1.0, 1.0j])
        amps = []
        for s in res.states:
            z = (s.positions - s.positions.mean(axis=0)) @ to_c
            dz = z * np.exp(-1j * theta) - ring.radius
            vz = (s.velocities - s.velocities.mean(axis=0)) @ to_c
            dvz = vz * np.exp(-1j * theta)
            comps = (
                np.mean(dz * np.exp(-1j * m * theta)),
                np.conj(np.mean(dz * np.exp(1j * m * theta))),
                np.mean(dvz * np.exp(-1j * m * theta)),
                np.conj(np.mean(dvz * np.exp(1j * m * theta))),
            )
            amps.append(np.sqrt(sum(abs(c) ** 2 for c in comps)) / ring.radius)
        slope = np.polyfit(res.metrics.t, np.log(amps), 1)[0]
        target = float(np.max(eig4(cs_flock_mode_matrix(5, 1.5, n, m, 1.0)).real))
        assert target < 0
        assert slope == pytest.approx(target, rel=0.2)


class TestInitialConditions:
    def test_unperturbed_flock_ring(self):
        ring = flock_ring(PowerLaw(4, 2), 12, speed=0.7)
        st = ic_flock_ring(ring, direction=(0.0, 2.0))
        assert np.allclose(st.positions, ring_positions(ring), atol=1e-14)
        assert np.allclose(st.velocities, np.tile([0.0, 0.7], (12, 1)), atol=1e-14)

    def test_mode_perturbation_centroid_free(self):
        ring = flock_ring(PowerLaw(4, 2), 16)
        for m in (2, 5, 14):
            st = ic_flock_ring(ring, perturbation=ModePerturbation(m=m, xi_plus=1e-3,
                                                                   xi_minus=2e-3j))
            assert np.linalg.norm(st.positions.mean(axis=0)) < 1e-12

    def test_mode_perturbation_range_checked(self):
        ring = flock_ring(PowerLaw(4, 2), 16)
        with pytest.raises(ValueError):
            ic_flock_ring(ring, perturbation=ModePerturbation(m=15, xi_plus=1e-3))
        with pytest.raises(ValueError):
            ModePerturbation(m=1, xi_plus=1e-3)

    def test_noise_centered_exactly(self):
        ring = flock_ring(PowerLaw(4, 2), 25, speed=0.4)
        rng = np.random.default_rng(11)
        st = ic_flock_ring(ring, perturbation=RandomNoise(1e-2, 1e-2), rng=rng)
        ref = ring_positions(ring)
        assert np.linalg.norm((st.positions - ref).mean(axis=0)) < 1e-14
        assert np.linalg.norm(st.velocities.mean(axis=0) - [0.4, 0.0]) < 1e-14

    def test_noise_requires_rng(self):
        ring = flock_ring(PowerLaw(4, 2), 8)
        with pytest.raises(ValueError):
            ic_flock_ring(ring, perturbation=RandomNoise(1e-2, 0.0))

    def test_mill_orientation_sets_rotation_sense(self):
        ring = mill_ring(PowerLaw(4, 2), 10, 0.5)
        ccw = ic_mill_ring(ring, orientation=1)
        cw = ic_mill_ring(ring, orientation=-1)
        cross = lambda st: np.sum(
            st.positions[:, 0] * st.velocities[:, 1]
            - st.positions[:, 1] * st.velocities[:, 0]
        )
        assert cross(ccw) > 0
        assert cross(cw) < 0
        assert np.allclose(np.hypot(*ccw.velocities.T), 0.5, atol=1e-12)

    def test_mill_orientation_validated(self):
        ring = mill_ring(PowerLaw(4, 2), 10, 0.5)
        with pytest.raises(ValueError):
            ic_mill_ring(ring, orientation=0)

    def test_state_validation(self):
        with pytest.raises(ValueError):
            SwarmState(t=0.0, positions=np.zeros((3, 2)), velocities=np.zeros((2, 2)))
        with pytest.raises(ValueError):
            SwarmState(t=0.0, positions=np.full((2, 2), np.inf),
                       velocities=np.zeros((2, 2)))


class TestMetrics:
    def test_cluster_zero_on_rotated_ring(self):
        ring = flock_ring(PowerLaw(4, 2), 30)
        x = ring_positions(ring)
        c, s = np.cos(0.37), np.sin(0.37)
        Q = np.array([[c, -s], [s, c]])
        st = SwarmState(t=0.0, positions=x @ Q.T, velocities=np.zeros((30, 2)))
        assert metric_cluster(st, ring) < 1e-12

    def test_cluster_three_point_collapse(self):
        # N particles on 3 cluster points: closed form sqrt(N/3 - 1)
        n = 12
        angles = np.repeat([0.0, 2 * np.pi / 3, 4 * np.pi / 3], n // 3)
        x = np.column_stack([np.cos(angles), np.sin(angles)])
        st = SwarmState(t=0.0, positions=x, velocities=np.zeros((n, 2)))
        assert metric_cluster(st, None) == pytest.approx(math.sqrt(n / 3 - 1), rel=1e-6)

    def test_cluster_relabel_invariant(self, rng):
        ring = flock_ring(PowerLaw(4, 2), 20)
        x = ring_positions(ring)
        perm = rng.permutation(20)
        st = SwarmState(t=0.0, positions=x[perm], velocities=np.zeros((20, 2)))
        assert metric_cluster(st, ring) < 1e-12

    def test_fatten_reference_cases(self):
        ring = flock_ring(PowerLaw(4, 2), 24)
        x = ring_positions(ring)
        zeros = np.zeros((24, 2))
        assert metric_fatten(SwarmState(t=0, positions=x, velocities=zeros), ring) < 1e-12
        assert metric_fatten(
            SwarmState(t=0, positions=x * 1.1, velocities=zeros), ring
        ) == pytest.approx(0.1, abs=1e-12)
        assert metric_fatten(
            SwarmState(t=0, positions=zeros, velocities=zeros), ring
        ) == pytest.approx(1.0, abs=1e-12)

    def test_fatten_sees_symmetric_band(self):
        # half the particles pushed out, half pulled in: the mean radius
        # barely moves but the spread must register
        ring = flock_ring(PowerLaw(4, 2), 24)
        x = ring_positions(ring)
        scale = np.where(np.arange(24) % 2 == 0, 1.2, 0.8)
        st = SwarmState(t=0, positions=x * scale[:, None], velocities=np.zeros((24, 2)))
        assert metric_fatten(st, ring) == pytest.approx(0.2, abs=1e-3)

    def test_polarization_and_angular_momentum_flock(self):
        ring = flock_ring(PowerLaw(4, 2), 16, speed=0.8)
        st = ic_flock_ring(ring)
        assert metric_polarization(st) == pytest.approx(1.0, abs=1e-12)
        assert metric_angular_momentum(st) < 1e-10

    def test_polarization_and_angular_momentum_mill(self):
        ring = mill_ring(PowerLaw(4, 2), 16, 0.5)
        st = ic_mill_ring(ring)
        assert metric_polarization(st) < 1e-12
        assert metric_angular_momentum(st) == pytest.approx(1.0, abs=1e-12)

    def test_antipodal_pair_mill(self):
        x = np.array([[1.0, 0.0], [-1.0, 0.0]])
        v = np.array([[0.0, 1.0], [0.0, -1.0]])
        st = SwarmState(t=0.0, positions=x, velocities=v)
        assert metric_polarization(st) == 0.0
        assert metric_angular_momentum(st) == pytest.approx(1.0)

    def test_metrics_csv_column_order(self):
        series = MetricSeries(
            t=np.array([0.0]), mu_rel=np.array([1.0]), eta_rel=np.array([2.0]),
            speed_dev=np.array([3.0]), polarization=np.array([4.0]),
            angular_momentum=np.array([5.0]),
        )
        lines = series.csv_text().splitlines()
        assert lines[0] == "t,mu_rel,eta_rel,speed_dev,polarization,angular_momentum"
        assert lines[1] == "0.0,1.0,2.0,3.0,4.0,5.0"


class TestBifurcationSweep:
    def test_single_value_equals_direct_run(self):
        pot = PowerLaw(5, 1.5)
        cfg = propulsion_config(pot, 30, 5.0, alpha=1.0, beta=4.0, seed=5,
                                sample_every=5.0)
        rows = bifurcation_sweep(cfg, "b", [1.5], ic_kind="flock", metric="cluster")
        assert len(rows) == 1
        ring = flock_ring(pot, 30, 0.5)
        rng = np.random.default_rng(5)
        st = ic_flock_ring(
            ring, perturbation=RandomNoise(1e-3 * ring.radius, 1e-3 * 0.5), rng=rng
        )
        res = integrate(cfg, st, reference=ring)
        assert rows[0] == (1.5, pytest.approx(res.metrics.mu_rel[-1], rel=1e-12))

    def test_worker_count_invariance(self):
        pot = PowerLaw(5, 1.5)
        cfg = propulsion_config(pot, 20, 2.0, alpha=1.0, beta=4.0, seed=9,
                                sample_every=2.0)
        one = bifurcation_sweep(cfg, "b", [1.2, 1.5], metric="fatten", workers=1)
        two = bifurcation_sweep(cfg, "b", [1.2, 1.5], metric="fatten", workers=2)
        assert one == two

    def test_speed_parameter_rebuilds_propulsion(self):
        pot = PowerLaw(5, 1.25)
        cfg = propulsion_config(pot, 20, 2.0, alpha=1.0, beta=4.0, sample_every=2.0)
        rows = bifurcation_sweep(cfg, "speed", [0.3, 0.6], ic_kind="mill",
                                 metric="angular_momentum")
        assert [v for v, _ in rows] == [0.3, 0.6]
        assert all(0.0 <= m <= 1.0 for _, m in rows)

    def test_parameter_validation(self):
        cfg = propulsion_config(PowerLaw(5, 1.5), 10, 1.0)
        with pytest.raises(ValueError):
            bifurcation_sweep(cfg, "gamma", [1.0])
        with pytest.raises(ValueError):
            bifurcation_sweep(cfg, "b", [1.0], ic_kind="blob")

    def test_threshold_crossings(self):
        # either stability boundary shows up as a jump in its end metric:
        # clustering past the upper one, fattening below the lower one
        cfg = propulsion_config(PowerLaw(5, 1.5), 200, 100.0, alpha=6.25,
                                beta=1.0, seed=7, sample_every=10.0)
        pert = RandomNoise(1e-5, 1e-5)
        cluster = dict(bifurcation_sweep(cfg, "b", [1.9, 2.2], metric="cluster",
                                         perturbation=pert))
        assert cluster[1.9] < 0.05
        assert cluster[2.2] > 0.2
        fatten = dict(bifurcation_sweep(cfg, "b", [0.6, 1.6], metric="fatten",
                                        perturbation=pert))
        assert fatten[0.6] > 0.05
        assert fatten[1.6] < 0.02
