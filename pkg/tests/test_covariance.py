"""Drift/diffusion construction, propagation, and steady states."""
import math

import numpy as np
import pytest

from pulsecool import covariance as cov
from pulsecool.errors import (
    DivergenceError,
    NoSteadyStateError,
    PhysicalityError,
    ValidationError,
)
from pulsecool.model import ControlPulse, RADIANS_PER_PERIOD, make_params


class TestBuildDrift:
    def test_uncoupled_diagonal(self):
        p = make_params(0.1, 0.0, [(0.2, 0.0)])
        A = cov.build_drift(p, [0.0])
        expected = np.diag([
            -1j - 0.05, 1j - 0.05, -1j - 0.1, 1j - 0.1,
        ])
        assert np.allclose(A, expected)

    def test_coupling_sign_pattern(self):
        p = make_params(0.0, 0.0, [(0.0, 0.0)])
        A = cov.build_drift(p, [1.0])
        # annihilation rows carry -i g, creation rows +i g, in both blocks
        assert np.allclose(A[0, 2:], [-1j, -1j])
        assert np.allclose(A[1, 2:], [1j, 1j])
        assert np.allclose(A[2, :2], [-1j, -1j])
        assert np.allclose(A[3, :2], [1j, 1j])
        assert np.allclose(np.diag(A), [-1j, 1j, -1j, 1j])

    def test_two_aux_block_structure(self):
        p2 = make_params(0.3, 0.0, [(0.2, 0.0), (0.4, 0.0)])
        p1 = make_params(0.3, 0.0, [(0.2, 0.0)])
        A2 = cov.build_drift(p2, [0.7, 0.0])
        A1 = cov.build_drift(p1, [0.7])
        assert np.allclose(A2[:4, :4], A1)
        # the two auxiliaries never couple to each other
        assert np.allclose(A2[2:4, 4:6], 0)
        assert np.allclose(A2[4:6, 2:4], 0)

    def test_arity_error(self):
        p = make_params(0.0, 0.0, [(0.0, 0.0)])
        with pytest.raises(ValidationError):
            cov.build_drift(p, [1.0, 2.0])


class TestBuildDiffusion:
    def test_entrywise_values(self):
        p = make_params(1e-3, 100.0, [(0.1, 0.0)])
        G = cov.build_diffusion(p)
        assert G[0, 1] == pytest.approx(0.101)
        assert G[1, 0] == pytest.approx(0.1)
        assert G[2, 3] == pytest.approx(0.1)
        assert G[3, 2] == 0.0
        G_nonzero = np.zeros((4, 4), dtype=bool)
        G_nonzero[0, 1] = G_nonzero[1, 0] = G_nonzero[2, 3] = True
        assert np.all((G != 0) == G_nonzero)

    def test_zero_rates(self):
        p = make_params(0.0, 0.0, [(0.0, 0.0)])
        assert np.all(cov.build_diffusion(p) == 0)

    def test_hot_auxiliary(self):
        p = make_params(0.0, 0.0, [(1e-3, 1e-4)])
        G = cov.build_diffusion(p)
        assert G[3, 2] == pytest.approx(1e-7)

    def test_independent_of_g(self):
        p = make_params(1e-3, 10.0, [(0.1, 0.0)])
        assert np.allclose(cov.build_diffusion(p), cov.build_diffusion(p))


class TestThermalCovariance:
    def test_thermal_entries(self):
        p = make_params(0.0, 100.0, [(0.0, 0.0)])
        C = cov.thermal_covariance(p).matrix
        assert C[1, 0] == 100.0
        assert C[0, 1] == 101.0
        assert C[3, 2] == 0.0
        assert C[2, 3] == 1.0

    def test_vacuum(self):
        p = make_params(0.0, 0.0, [(0.0, 0.0)])
        C = cov.thermal_covariance(p).matrix
        expected = np.zeros((4, 4))
        expected[0, 1] = expected[2, 3] = 1.0
        assert np.allclose(C, expected)

    def test_two_aux_blocks(self):
        p = make_params(0.0, 2.0, [(0.0, 0.5), (0.0, 0.25)])
        C = cov.thermal_covariance(p).matrix
        assert C.shape == (6, 6)
        assert C[3, 2] == 0.5
        assert C[5, 4] == 0.25

    def test_target_override(self):
        p = make_params(0.0, 1.0, [(0.0, 0.0)])
        C = cov.thermal_covariance(p, n_target=0.9).matrix
        assert C[1, 0] == 0.9
        assert C[0, 1] == pytest.approx(1.9)


class TestPropagateSegment:
    def test_thermal_fixed_point_uncoupled(self):
        p = make_params(1e-3, 50.0, [(0.1, 0.0)])
        state = cov.thermal_covariance(p)
        A = cov.build_drift(p, [0.0])
        G = cov.build_diffusion(p)
        out = cov.propagate_segment(state, A, G, 2.5)
        assert np.allclose(out.matrix, state.matrix, atol=1e-8)
        assert out.time == pytest.approx(2.5)

    def test_rwa_swap_transfers_occupation(self):
        # closed system, weak coupling: a pi/(2g) swap empties the target
        g = 0.01
        p = make_params(0.0, 0.5, [(0.0, 0.0)])
        state = cov.thermal_covariance(p)
        A = cov.build_drift(p, [g])
        G = cov.build_diffusion(p)
        dt = (math.pi / (2 * g)) / RADIANS_PER_PERIOD
        out = cov.propagate_segment(state, A, G, dt)
        assert cov.mean_occupation(out) <= 1e-3 * p.n_T
        assert cov.aux_occupation(out) == pytest.approx(0.5, rel=5e-3)

    def test_uncoupled_relaxation_matches_closed_form(self):
        # single-mode thermal relaxation: n(t) = n_T + (n0 - n_T) exp(-gamma t)
        p = make_params(1e-2, 100.0, [(0.0, 0.0)])
        start = cov.CovarianceState(
            matrix=cov.thermal_covariance(p, n_target=20.0).matrix
        )
        A = cov.build_drift(p, [0.0])
        G = cov.build_diffusion(p)
        dt = 3.0
        out = cov.propagate_segment(start, A, G, dt)
        t_rad = dt * RADIANS_PER_PERIOD
        expected = 100.0 + (20.0 - 100.0) * math.exp(-1e-2 * t_rad)
        assert cov.mean_occupation(out) == pytest.approx(expected, rel=1e-10)

    def test_nonpositive_dt_rejected(self):
        p = make_params(0.0, 0.0, [(0.0, 0.0)])
        state = cov.thermal_covariance(p)
        A = cov.build_drift(p, [0.0])
        G = cov.build_diffusion(p)
        with pytest.raises(ValidationError):
            cov.propagate_segment(state, A, G, 0.0)


class TestPropagatePulse:
    def test_zero_pulse_flat_trajectory(self):
        p = make_params(0.0, 100.0, [(0.0, 0.0)])
        pulse = ControlPulse.equal_segments([0.0, 0.0], 1.0)
        final, traj = cov.propagate_pulse(p, pulse, cov.thermal_covariance(p))
        assert np.allclose(traj.n_target, 100.0, atol=1e-8)
        assert cov.mean_occupation(final) == pytest.approx(100.0, abs=1e-8)

    def test_single_segment_matches_propagate_segment(self):
        p = make_params(1e-4, 10.0, [(1e-3, 0.0)])
        pulse = ControlPulse.equal_segments([0.2], 0.8)
        final, _ = cov.propagate_pulse(p, pulse, cov.thermal_covariance(p))
        A = cov.build_drift(p, [0.2])
        G = cov.build_diffusion(p)
        direct = cov.propagate_segment(cov.thermal_covariance(p), A, G, 0.8)
        assert np.allclose(final.matrix, direct.matrix, rtol=1e-10, atol=1e-12)

    def test_sampling_density(self):
        p = make_params(0.0, 1.0, [(0.0, 0.0)])
        pulse = ControlPulse.equal_segments([0.1, 0.2], 2.0)
        _, traj = cov.propagate_pulse(p, pulse, cov.thermal_covariance(p))
        assert len(traj.time) >= 50 * 2
        assert traj.time[0] == 0.0
        assert traj.time[-1] == pytest.approx(2.0, rel=1e-9)

    def test_channel_count_mismatch(self):
        p = make_params(0.0, 0.0, [(0.0, 0.0), (0.0, 0.0)])
        pulse = ControlPulse.equal_segments([0.1], 1.0)
        with pytest.raises(ValidationError):
            cov.propagate_pulse(p, pulse, cov.thermal_covariance(p))

    def test_divergence_guard(self):
        # gigantic coupling at zero damping blows up the anti-rotating terms
        p = make_params(0.0, 1.0, [(0.0, 0.0)])
        pulse = ControlPulse.equal_segments([80.0], 10.0)
        with pytest.raises(DivergenceError):
            cov.propagate_pulse(p, pulse, cov.thermal_covariance(p))


class TestCommutatorConservation:
    def test_commutators_preserved_under_random_pulses(self, rng):
        p = make_params(1e-3, 5.0, [(1e-2, 1e-4)])
        for _ in range(100):
            n_seg = int(rng.integers(1, 5))
            values = rng.uniform(-0.8, 0.8, n_seg)
            tau = float(rng.uniform(0.2, 2.0))
            pulse = ControlPulse.equal_segments(values, tau)
            final, _ = cov.propagate_pulse(p, pulse, cov.thermal_covariance(p))
            C = final.matrix
            assert abs(C[0, 1] - C[1, 0] - 1) < 1e-8
            assert abs(C[2, 3] - C[3, 2] - 1) < 1e-8

    def test_commutators_preserved_two_aux(self, rng):
        p = make_params(1e-3, 5.0, [(1e-2, 0.0), (0.1, 1e-4)])
        for _ in range(10):
            values = rng.uniform(-0.8, 0.8, (2, 3))
            pulse = ControlPulse.equal_segments(values, 1.0)
            final, _ = cov.propagate_pulse(p, pulse, cov.thermal_covariance(p))
            C = final.matrix
            for lo in (0, 2, 4):
                assert abs(C[lo, lo + 1] - C[lo + 1, lo] - 1) < 1e-8

    def test_cross_block_symmetry(self, rng):
        p = make_params(1e-3, 5.0, [(1e-2, 0.0)])
        pulse = ControlPulse.equal_segments(rng.uniform(-0.5, 0.5, 4), 1.3)
        final, _ = cov.propagate_pulse(p, pulse, cov.thermal_covariance(p))
        C = final.matrix
        for i in (0, 1):
            for j in (2, 3):
                assert abs(C[i, j] - C[j, i]) < 1e-8


class TestMeanOccupation:
    def test_thermal(self):
        p = make_params(0.0, 100.0, [(0.0, 0.0)])
        assert cov.mean_occupation(cov.thermal_covariance(p)) == 100.0

    def test_vacuum(self):
        p = make_params(0.0, 0.0, [(0.0, 0.0)])
        assert cov.mean_occupation(cov.thermal_covariance(p)) == 0.0

    def test_imaginary_part_rejected(self):
        C = np.zeros((4, 4), dtype=complex)
        C[0, 1] = 1.0
        C[1, 0] = 0.5 + 1e-6j
        C[2, 3] = 1.0
        with pytest.raises(PhysicalityError):
            cov.mean_occupation(cov.CovarianceState(matrix=C))


class TestSteadyState:
    def test_uncoupled_steady_state_is_thermal(self):
        p = make_params(1e-3, 100.0, [(0.1, 0.0)])
        ss = cov.steady_state(p, [0.0])
        assert cov.mean_occupation(ss) == pytest.approx(100.0, rel=1e-10)
        assert cov.aux_occupation(ss) == pytest.approx(0.0, abs=1e-10)

    def test_matches_long_time_propagation(self):
        p = make_params(0.0, 3.0, [(0.3, 0.0)])
        ss = cov.steady_state(p, [0.05])
        A = cov.build_drift(p, [0.05])
        G = cov.build_diffusion(p)
        # propagate long past the 1/kappa relaxation time
        out = cov.propagate_segment(cov.thermal_covariance(p), A, G, 500.0)
        assert cov.mean_occupation(out) == pytest.approx(
            cov.mean_occupation(ss), rel=1e-6
        )

    def test_fixed_point_property(self):
        p = make_params(1e-4, 10.0, [(0.05, 0.0)])
        ss = cov.steady_state(p, [0.02])
        A = cov.build_drift(p, [0.02])
        G = cov.build_diffusion(p)
        out = cov.propagate_segment(ss, A, G, 7.0)
        scale = max(np.abs(ss.matrix).max(), 1.0)
        assert np.max(np.abs(out.matrix - ss.matrix)) / scale < 1e-8

    def test_residual_tolerance(self):
        p = make_params(1e-2, 100.0, [(1e-4, 0.0)])
        ss = cov.steady_state(p, [0.01])
        A = cov.build_drift(p, [0.01])
        G = cov.build_diffusion(p)
        res = A @ ss.matrix + ss.matrix @ A.T + G
        assert np.linalg.norm(res) <= 1e-10 * np.linalg.norm(G)

    def test_non_hurwitz_rejected(self):
        p = make_params(0.0, 0.0, [(0.0, 0.0)])
        with pytest.raises(NoSteadyStateError, match="eigenvalue"):
            cov.steady_state(p, [0.1])

    def test_linear_in_diffusion_occupations(self):
        # steady state is linear in (n_T, n_aux) at fixed drift
        def n_ss(n_T, n_aux):
            p = make_params(2e-3, n_T, [(0.15, n_aux)])
            return cov.mean_occupation(cov.steady_state(p, [0.04]))

        base = n_ss(0.0, 0.0)
        dt_only = n_ss(7.0, 0.0) - base
        da_only = n_ss(0.0, 3.0) - base
        combined = n_ss(7.0, 3.0)
        assert combined == pytest.approx(base + dt_only + da_only, rel=1e-8)


class TestGammaNtProductLaw:
    def test_cooling_depends_on_product_only(self):
        # same gamma*n_T, different splits: relative occupation n/n_T matches
        pulse = ControlPulse.equal_segments([0.12, 0.3, 0.21, 0.05], 0.8)

        def relative_occupation(n_T):
            gamma = 1e-4 / n_T
            p = make_params(gamma, n_T, [(1e-3, 0.0)])
            return cov.final_occupation(p, pulse) / n_T

        r100 = relative_occupation(100.0)
        r1000 = relative_occupation(1000.0)
        assert r1000 == pytest.approx(r100, rel=1e-2)
