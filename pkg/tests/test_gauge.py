"""Gauge transform building blocks, inverses, and the continuity probe."""
import math

import numpy as np
import pytest

import dnlslab as lab
from dnlslab.fields import ROOT_TWO_PI, Trajectory, x_grid
from dnlslab.gauge import gauge_phase_tail


def primitive_oracle(u, k_target, mesh=4096):
    """Quadrature of the defining double integral for the mean-zero primitive.

    Returns the mean over starting points theta of integral_theta^{x_k} of the
    zero-mean squared modulus, evaluated at the grid point x_k.
    """
    dens = np.abs(lab.to_physical(u, mesh)) ** 2
    dens = dens - np.mean(dens)
    cumulative = np.concatenate([[0.0], np.cumsum(dens)]) * (2 * math.pi / mesh)
    return float(cumulative[k_target] - np.mean(cumulative[:-1]))


class TestMassPrimitive:
    def test_constant_input(self):
        assert lab.mass_primitive(lab.constant_field(4, 2.5)).l2_norm() < 1e-13

    def test_unimodular_wave(self):
        assert lab.mass_primitive(lab.plane_wave(4, 1)).l2_norm() < 1e-13

    def test_two_mode_closed_form(self):
        u = lab.constant_field(4, 1.0) + lab.plane_wave(4, 1)
        prim = lab.mass_primitive(u)
        vals = lab.to_physical(prim, 64)
        assert np.max(np.abs(vals - 2.0 * np.sin(x_grid(64)))) < 1e-12

    def test_against_double_integral_oracle(self):
        u = lab.constant_field(8, 0.7) + lab.plane_wave(8, 2, 0.4) + lab.plane_wave(8, -1, 0.3j)
        vals = lab.to_physical(lab.mass_primitive(u), 4096)
        for k in (333, 1111, 2600):
            assert abs(vals[k] - primitive_oracle(u, k)) < 5e-3  # quadrature-limited

    def test_derivative_identity_and_mean(self):
        # d/dx primitive + mean(|u|^2) = |u|^2 exactly on the doubled band
        u = lab.random_field(8, np.random.default_rng(6), l2_norm=1.3)
        prim = lab.mass_primitive(u)
        sq = lab.physical_product([u, u], conjugate=[False, True], out_cutoff=16)
        recon = lab.derivative(prim) + lab.constant_field(16, u.mass_mean())
        assert (recon - sq).l2_norm() < 1e-12
        assert abs(lab.mean_value(prim)) < 1e-13


class TestGaugePhase:
    def test_plane_wave_fixed(self):
        ctx = lab.GaugeContext.for_cutoff(8)
        w = lab.plane_wave(8, 3, 1.7)
        assert (lab.gauge_phase(w, ctx) - w).l2_norm() < 1e-12

    def test_zero(self):
        ctx = lab.GaugeContext.for_cutoff(8)
        assert lab.gauge_phase(lab.SpectralField.zeros(8), ctx).l2_norm() == 0.0

    def test_two_mode_against_physical_oracle(self):
        ctx = lab.GaugeContext.for_cutoff(32)
        u = lab.constant_field(32, 1.0) + lab.plane_wave(32, 1)
        got = lab.to_physical(lab.gauge_phase(u, ctx), 256)
        grid = x_grid(256)
        expected = np.exp(-2j * np.sin(grid)) * (1.0 + np.exp(1j * grid))
        assert np.max(np.abs(got - expected)) < 1e-10

    def test_unimodularity_before_truncation(self):
        u = lab.random_field(16, np.random.default_rng(9), l2_norm=1.0)
        prim = lab.mass_primitive(u)
        vals = lab.to_physical(prim, 128)
        assert np.max(np.abs(vals.imag)) < 1e-12
        assert np.max(np.abs(np.abs(np.exp(-1j * vals)) - 1.0)) < 1e-12

    def test_l2_preserved(self):
        ctx = lab.GaugeContext.for_cutoff(32)
        u = lab.random_field(32, np.random.default_rng(10), active_cutoff=8, l2_norm=1.0)
        assert abs(lab.gauge_phase(u, ctx).l2_norm() - u.l2_norm()) < 1e-10

    def test_roundtrip_random_unit_fields(self):
        ctx = lab.GaugeContext(cutoff=32, gridsize=256)
        rng = np.random.default_rng(12)
        for _ in range(10):
            u = lab.random_field(32, rng, active_cutoff=8, l2_norm=1.0)
            back = lab.gauge_phase_inv(lab.gauge_phase(u, ctx), ctx)
            assert (back - u).l2_norm() <= 1e-8

    def test_truncation_tail_reported(self):
        ctx = lab.GaugeContext.for_cutoff(16)
        u = lab.random_field(16, np.random.default_rng(13), active_cutoff=4, l2_norm=0.8)
        tail = gauge_phase_tail(u, ctx)
        assert 0.0 <= tail < 1e-6

    def test_gridsize_guard(self):
        with pytest.raises(ValueError):
            lab.GaugeContext(cutoff=8, gridsize=32)


class TestTranslate:
    def test_time_zero_identity(self):
        u = lab.random_field(8, np.random.default_rng(1), l2_norm=1.0)
        assert (lab.translate_field(u, 0.0, -1) - u).l2_norm() == 0.0

    def test_plane_wave_phase(self):
        A, n, t = 2.0, 3, 0.7
        w = lab.plane_wave(8, n, A)
        for sign in (-1, +1):
            v = lab.translate_field(w, t, sign)
            expected = np.exp(sign * 2j * t * n * A * A)
            assert abs(v.coeff(n) / w.coeff(n) - expected) < 1e-12

    def test_inverse_composition(self):
        rng = np.random.default_rng(3)
        samples = tuple(lab.random_field(8, rng, l2_norm=1.0) for _ in range(9))
        traj = Trajectory(samples, window=0.5)
        back = lab.translate(lab.translate(traj, -1), +1)
        assert back.sup_l2_distance(traj) <= 1e-12


class TestFullGauge:
    def test_plane_wave_trajectory_closed_form(self):
        A, n, theta = 1.3, 2, 0.8
        cutoff, steps, window = 8, 32, 0.4
        ctx = lab.GaugeContext.for_cutoff(cutoff)
        dt = 2 * window / steps
        times = -window + dt * np.arange(steps + 1)
        traj = Trajectory(
            tuple(lab.plane_wave(cutoff, n, A * np.exp(1j * theta * t)) for t in times),
            window,
        )
        got = lab.gauge(traj, ctx)
        for t, s in zip(times, got.samples):
            expected = A * np.exp(1j * (-2 * t * A * A * n + theta * t))
            assert abs(s.coeff(n) - ROOT_TWO_PI * expected) < 1e-11

    def test_zero_trajectory(self):
        traj = Trajectory(tuple(lab.SpectralField.zeros(4) for _ in range(5)), 0.2)
        ctx = lab.GaugeContext.for_cutoff(4)
        assert lab.gauge(traj, ctx).sup_l2_distance(traj) == 0.0

    def test_roundtrip_on_solver_output(self):
        cfg = lab.SolveConfig(cutoff=16, horizon=0.05, steps=60, equation=lab.Equation.DNLS)
        rep = lab.picard_solve(lab.random_field(16, np.random.default_rng(8),
                                                active_cutoff=4, l2_norm=0.3), cfg)
        ctx = lab.GaugeContext.for_cutoff(16)
        assert lab.gauge_roundtrip_error(rep.trajectory, ctx) <= 1e-7

    def test_lipschitz_on_fixed_mass_family(self):
        # pairs with one prescribed L2 norm: the gauge gap stays comparable
        rng = np.random.default_rng(21)
        ctx = lab.GaugeContext.for_cutoff(16)
        worst = 0.0
        for _ in range(20):
            u = lab.random_field(16, rng, active_cutoff=6, l2_norm=1.0)
            v = lab.random_field(16, rng, active_cutoff=6, l2_norm=1.0)
            gap_in = (u - v).l2_norm()
            if gap_in < 1e-3:
                continue
            t = rng.uniform(-1.0, 1.0)
            gap_out = (lab.gauge_field(u, t, ctx) - lab.gauge_field(v, t, ctx)).l2_norm()
            worst = max(worst, gap_out / gap_in)
        assert 0.0 < worst < 10.0


class TestTranslationGapProbe:
    def test_input_gap_exact(self):
        report = lab.translation_gap_probe(1.0, 0.5, 2.0, [4, 16], t_samples=11,
                                           include_gauge_gap=False)
        for n, gap in zip(report.summary["n"], report.summary["input_gap"]):
            assert abs(gap - ROOT_TWO_PI / math.sqrt(n)) < 1e-12

    def test_output_gap_scale(self):
        report = lab.translation_gap_probe(1.0, 0.5, 2.0, [4], t_samples=101,
                                           include_gauge_gap=False)
        assert report.summary["output_gap"][0] >= 0.5

    def test_gap_sequence_non_vanishing(self):
        report = lab.translation_gap_probe(1.0, 0.5, 2.0, [4, 16, 64, 256],
                                           t_samples=41, include_gauge_gap=True)
        gaps_in = report.summary["input_gap"]
        gaps_out = report.summary["output_gap"]
        assert all(b < a for a, b in zip(gaps_in, gaps_in[1:]))
        assert min(gaps_out) > 0.5 * gaps_out[0]
        assert len(report.summary["gauge_gap"]) == 4  # recorded, not asserted

    def test_requires_increasing_frequencies(self):
        with pytest.raises(ValueError):
            lab.translation_gap_probe(1.0, 0.5, 2.0, [16, 4])
