"""Masked convolutions against brute-force oracles and physical-space forms."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import dnlslab as lab
from dnlslab.fields import ROOT_TWO_PI
from dnlslab.nonlinear import CUBIC_MASK, QUINTIC_MASK

TWO_PI = 2.0 * math.pi


# -- independent brute-force oracles (literal masked lattice sums) -----------

def oracle_cubic(u1, u2, u3, derivative_weight=True, mask=CUBIC_MASK, out_cutoff=None):
    n = u1.cutoff
    if out_cutoff is None:
        out_cutoff = n
    out = np.zeros(2 * out_cutoff + 1, dtype=complex)
    for xi1 in range(-n, n + 1):
        for xi2 in range(-n, n + 1):
            for xi3 in range(-n, n + 1):
                xi = xi1 + xi2 + xi3
                if abs(xi) > out_cutoff or not mask(xi, xi1, xi2):
                    continue
                term = u1.coeff(xi1) * u2.coeff(xi2) * np.conj(u3.coeff(-xi3))
                if derivative_weight:
                    term *= 1j * xi3
                out[xi + out_cutoff] += term / TWO_PI
    return lab.SpectralField(out, out_cutoff)


def oracle_quintic(us, out_cutoff=None):
    n = us[0].cutoff
    if out_cutoff is None:
        out_cutoff = n
    out = np.zeros(2 * out_cutoff + 1, dtype=complex)
    rng = range(-n, n + 1)
    for xi1 in rng:
        for xi2 in rng:
            for xi3 in rng:
                for xi4 in rng:
                    if not QUINTIC_MASK(xi1, xi2, xi3, xi4):
                        continue
                    c = (us[0].coeff(xi1) * np.conj(us[1].coeff(-xi2))
                         * us[2].coeff(xi3) * np.conj(us[3].coeff(-xi4)))
                    if c == 0:
                        continue
                    for xi5 in rng:
                        xi = xi1 + xi2 + xi3 + xi4 + xi5
                        if abs(xi) <= out_cutoff:
                            out[xi + out_cutoff] += c * us[4].coeff(xi5) / TWO_PI**2
    return lab.SpectralField(out, out_cutoff)


def fields(seed, cutoff, count, norm=1.0):
    rng = np.random.default_rng(seed)
    return [lab.random_field(cutoff, rng, l2_norm=norm) for _ in range(count)]


class TestCubicRestricted:
    def test_single_mode_excluded(self):
        w = lab.plane_wave(4, 1)
        assert lab.cubic_restricted(w, w, w).l2_norm() == 0.0

    def test_multilinear_zero(self):
        u1, u2 = fields(1, 4, 2)
        zero = lab.SpectralField.zeros(4)
        assert lab.cubic_restricted(u1, u2, zero).l2_norm() == 0.0
        assert lab.cubic_restricted(zero, u1, u2).l2_norm() == 0.0

    def test_matches_bruteforce(self):
        u1, u2, u3 = fields(2, 4, 3)
        got = lab.cubic_restricted(u1, u2, u3)
        want = oracle_cubic(u1, u2, u3)
        assert (got - want).l2_norm() < 1e-12

    def test_mask_soundness_at_larger_band(self):
        u1, u2, u3 = fields(3, 8, 3)
        got = lab.cubic_restricted(u1, u2, u3, out_cutoff=24)
        want = oracle_cubic(u1, u2, u3, out_cutoff=24)
        assert (got - want).l2_norm() < 1e-12

    def test_cutoff_mismatch_rejected(self):
        with pytest.raises(ValueError):
            lab.cubic_restricted(lab.SpectralField.zeros(4), lab.SpectralField.zeros(5),
                                 lab.SpectralField.zeros(4))

    @settings(max_examples=10, deadline=None)
    @given(st.integers(min_value=0, max_value=2**31 - 1))
    def test_additivity_first_slot(self, seed):
        rng = np.random.default_rng(seed)
        a, b, u2, u3 = (lab.random_field(3, rng) for _ in range(4))
        lhs = lab.cubic_restricted(a + b, u2, u3)
        rhs = lab.cubic_restricted(a, u2, u3) + lab.cubic_restricted(b, u2, u3)
        assert (lhs - rhs).l2_norm() < 1e-12 * max(1.0, rhs.l2_norm())


class TestCubicDiagonal:
    def test_single_mode_pin(self):
        w = lab.plane_wave(4, 1)
        out = lab.cubic_diagonal(w, w, w)
        assert abs(out.coeff(1) - 1j * ROOT_TWO_PI) < 1e-12
        assert (out - lab.plane_wave(4, 1, 1j)).l2_norm() < 1e-12

    def test_zero(self):
        z = lab.SpectralField.zeros(4)
        assert lab.cubic_diagonal(z, z, z).l2_norm() == 0.0

    def test_conjugate_even_field_enumeration(self):
        # five-coefficient field, diagonal term summed by hand per frequency
        u = lab.SpectralField.from_coeff_dict(
            2, {-2: 0.3, -1: 0.5 - 0.1j, 0: 1.0, 1: 0.5 + 0.1j, 2: 0.3}
        )
        got = lab.cubic_diagonal(u, u, u)
        for xi in range(-2, 3):
            want = u.coeff(xi) * u.coeff(xi) * 1j * xi * np.conj(u.coeff(xi)) / TWO_PI
            assert abs(got.coeff(xi) - want) < 1e-14

    def test_split_reassembles_full(self):
        u1, u2, u3 = fields(4, 4, 3)
        total = lab.cubic_restricted(u1, u2, u3) + lab.cubic_diagonal(u1, u2, u3)
        assert (total - lab.cubic_full(u1, u2, u3)).l2_norm() < 1e-13


class TestCubicPhysicalIdentity:
    def test_single_mode_hand_value(self):
        w = lab.plane_wave(4, 1)
        out = lab.cubic_physical(w)
        assert (out - lab.plane_wave(4, 1, 1j)).l2_norm() < 1e-12

    def test_constant_annihilated(self):
        assert lab.cubic_physical(lab.constant_field(4, 2.0)).l2_norm() < 1e-13

    def test_two_mode_matches_convolution(self):
        v = lab.constant_field(8, 1.0) + lab.plane_wave(8, 1)
        gap = (lab.cubic_physical(v) - lab.cubic_full(v, v, v)).l2_norm()
        assert gap < 1e-12

    def test_identity_on_random_fields(self):
        for seed in range(8):
            (v,) = fields(seed + 100, 16, 1, norm=0.9)
            gap = (lab.cubic_physical(v) - lab.cubic_full(v, v, v)).l2_norm()
            assert gap < 1e-10


class TestQuintic:
    def test_single_mode_masked_out(self):
        w = lab.plane_wave(3, 1)
        got = lab.quintic_restricted(w, w, w, w, w)
        want = oracle_quintic([w] * 5)
        assert got.l2_norm() == 0.0
        assert want.l2_norm() == 0.0

    def test_zero_slot(self):
        u1, u2, u3, u4 = fields(5, 3, 4)
        z = lab.SpectralField.zeros(3)
        assert lab.quintic_restricted(u1, u2, u3, u4, z).l2_norm() == 0.0

    def test_fast_matches_bruteforce_and_oracle(self):
        us = fields(6, 4, 5)
        fast = lab.quintic_restricted(*us)
        brute = lab.quintic_restricted(*us, method="bruteforce")
        want = oracle_quintic(us)
        assert (fast - brute).l2_norm() < 1e-12
        assert (fast - want).l2_norm() < 1e-12

    def test_bruteforce_cutoff_guard(self):
        us = [lab.SpectralField.zeros(17) for _ in range(5)]
        with pytest.raises(ValueError):
            lab.quintic_restricted(*us, method="bruteforce")

    def test_physical_form_plane_wave(self):
        w = lab.plane_wave(4, 2, 1.3)
        assert lab.quintic_physical(w).l2_norm() < 1e-12

    def test_physical_matches_masked_sum(self):
        v = lab.constant_field(8, 1.0) + lab.plane_wave(8, 1)
        gap = (lab.quintic_physical(v) - lab.quintic_restricted(v, v, v, v, v)).l2_norm()
        assert gap < 1e-10
        for seed in range(4):
            (w,) = fields(seed + 200, 8, 1, norm=0.8)
            gap = (lab.quintic_physical(w) - lab.quintic_restricted(w, w, w, w, w)).l2_norm()
            assert gap < 1e-10


class TestRestrictedProductAndShiftedCubic:
    def test_single_mode_excluded(self):
        w = lab.plane_wave(4, 1)
        assert lab.product_restricted(w, w, w).l2_norm() == 0.0

    def test_zero(self):
        z = lab.SpectralField.zeros(4)
        assert lab.product_restricted(z, z, z).l2_norm() == 0.0

    def test_matches_bruteforce(self):
        u1, u2, u3 = fields(7, 4, 3)
        got = lab.product_restricted(u1, u2, u3)
        want = oracle_cubic(u1, u2, u3, derivative_weight=False)
        assert (got - want).l2_norm() < 1e-12

    def test_diagonal_complement_reassembles_product(self):
        # restricted part plus the three excluded slices equals u1*u2*conj(u3)
        u1, u2, u3 = fields(8, 6, 3)
        mean23 = lab.mean_value(lab.physical_product([u2, u3], conjugate=[False, True],
                                                     out_cutoff=0))
        mean13 = lab.mean_value(lab.physical_product([u1, u3], conjugate=[False, True],
                                                     out_cutoff=0))
        both = lab.SpectralField(u1.coeffs * u2.coeffs * np.conj(u3.coeffs) / TWO_PI, 6)
        recon = (lab.product_restricted(u1, u2, u3)
                 + mean23 * u1 + mean13 * u2 - both)
        full = lab.physical_product([u1, u2, u3], conjugate=[False, False, True],
                                    out_cutoff=6)
        assert (recon - full).l2_norm() < 1e-12

    def test_shifted_cubic_plane_wave(self):
        A, n = 1.7, 2
        w = lab.plane_wave(6, n, A)
        got = lab.mean_shifted_cubic(w)
        assert (got - lab.plane_wave(6, n, -A**3)).l2_norm() < 1e-12

    def test_shifted_cubic_zero(self):
        assert lab.mean_shifted_cubic(lab.SpectralField.zeros(4)).l2_norm() == 0.0

    def test_shifted_cubic_forms_agree(self):
        for seed in range(6):
            (u,) = fields(seed + 300, 10, 1, norm=1.1)
            gap = (lab.mean_shifted_cubic(u) - lab.mean_shifted_cubic_spectral(u)).l2_norm()
            assert gap < 1e-12


class TestMultilinearity:
    @pytest.mark.parametrize("op,arity", [
        (lab.cubic_restricted, 3),
        (lab.cubic_diagonal, 3),
        (lab.product_restricted, 3),
        (lab.quintic_restricted, 5),
    ])
    def test_additive_and_homogeneous_in_every_slot(self, op, arity):
        rng = np.random.default_rng(hash((arity, op.__name__)) % 2**32)
        base = [lab.random_field(3, rng) for _ in range(arity)]
        extra = lab.random_field(3, rng)
        for slot in range(arity):
            args_a = list(base)
            args_b = list(base)
            args_b[slot] = extra
            args_sum = list(base)
            args_sum[slot] = base[slot] + extra
            additive = op(*args_sum) - op(*args_a) - op(*args_b)
            assert additive.l2_norm() < 1e-12
            args_scaled = list(base)
            args_scaled[slot] = 2.5 * base[slot]
            # conjugated slots are antilinear: scaling by a real is enough
            scaled = op(*args_scaled) - 2.5 * op(*args_a)
            assert scaled.l2_norm() < 1e-12


class TestResonanceIdentity:
    def test_hand_value(self):
        lhs, rhs = lab.resonance_identity(3, 1, 2, 0.7, -1.3, 2.2)
        assert lhs == rhs == 4.0

    def test_vanishing_factor(self):
        lhs, rhs = lab.resonance_identity(5, 5, -7, 1.0, 2.0, 3.0)
        assert rhs == 0.0 and abs(lhs) < 1e-9

    def test_bulk_random_tuples(self):
        rng = np.random.default_rng(515)
        xi, xi1, xi2 = rng.integers(-500, 501, size=(3, 10**5))
        # integer part: exact in integer arithmetic
        int_lhs = xi**2 - xi1**2 - xi2**2 + (xi - xi1 - xi2) ** 2
        int_rhs = 2 * (xi - xi1) * (xi - xi2)
        assert np.array_equal(int_lhs, int_rhs)
        alt = 2 * (xi1 * xi2 + xi * (xi - xi1 - xi2))
        assert np.array_equal(int_rhs, alt)
        # float path through the public function
        taus = rng.uniform(-100, 100, size=(3, 1000))
        for k in range(1000):
            lhs, rhs = lab.resonance_identity(
                int(xi[k]), int(xi1[k]), int(xi2[k]),
                taus[0, k], taus[1, k], taus[2, k],
            )
            assert abs(lhs - rhs) <= 1e-9

    @settings(max_examples=50, deadline=None)
    @given(
        st.integers(-10**4, 10**4), st.integers(-10**4, 10**4), st.integers(-10**4, 10**4),
        st.floats(-1e3, 1e3), st.floats(-1e3, 1e3), st.floats(-1e3, 1e3),
    )
    def test_property(self, xi, xi1, xi2, tau, tau1, tau2):
        lhs, rhs = lab.resonance_identity(xi, xi1, xi2, tau, tau1, tau2)
        assert abs(lhs - rhs) <= 1e-6 * max(1.0, abs(rhs))


class TestFrequencyMask:
    def test_pure_predicate(self):
        assert CUBIC_MASK(0, 1, 2) and not CUBIC_MASK(1, 1, 2)
        assert QUINTIC_MASK(1, 2, 3, 4) and not QUINTIC_MASK(1, -1, 3, 4)

    def test_conjunction(self):
        even = lab.FrequencyMask(lambda *ix: ix[0] % 2 == 0, "first even")
        combined = even & lab.FrequencyMask(lambda *ix: ix[1] > 0, "second positive")
        assert combined(2, 1) and not combined(2, -1) and not combined(3, 1)
