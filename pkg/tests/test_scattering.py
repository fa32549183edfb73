"""External-potential scattering: reduced amplitudes, spin sums, Mott ratio."""

import numpy as np
import pytest

from paradirac.algebra import ELECTRON_MASS, FINE_STRUCTURE, four_vector
from paradirac.errors import ForwardSingular, SubspaceViolation
from paradirac.sampling import random_spin_coefficients
from paradirac.scattering import (
    ReducedAmplitude,
    coulomb_ft,
    coulomb_potential,
    mott_dcs,
    mott_factor_momentum_form,
    mott_ratio,
    rutherford_dcs,
    s1_amplitude,
    spin_averaged_amp2,
    zero_potential,
)


def _elastic(p_mag, kappa, mass=1.0):
    e = float(np.hypot(mass, p_mag))
    p_i = four_vector(e, 0.0, 0.0, p_mag)
    p_f = four_vector(e, p_mag * np.sin(kappa), 0.0, p_mag * np.cos(kappa))
    return p_i, p_f


class TestCoulombTransform:
    def test_only_time_component(self):
        val = coulomb_ft(four_vector(0.0, 0.3, -0.4, 1.2), Z=2.0)
        assert np.abs(val[1:]).max() == 0.0
        assert val[0] != 0.0

    def test_forward_singular(self):
        with pytest.raises(ForwardSingular):
            coulomb_ft(four_vector(0.0, 0.0, 0.0, 0.0), Z=1.0)

    def test_screening_regularizes_forward(self):
        val = coulomb_ft(four_vector(0.0, 0.0, 0.0, 0.0), Z=1.0, mu=0.1)
        assert np.isfinite(val[0])

    def test_z_linearity(self):
        dp = four_vector(0.0, 0.5, 0.0, 0.0)
        assert np.allclose(coulomb_ft(dp, Z=3.0), 3.0 * coulomb_ft(dp, Z=1.0))

    def test_potential_hermiticity(self):
        pot = coulomb_potential(Z=1.0)
        assert pot.static
        dp = four_vector(0.0, 0.4, -0.2, 0.9)
        assert pot.hermiticity_residual(dp) <= 1e-14


class TestReducedAmplitude:
    def test_negative_energy_rejected(self, rng):
        p_i, p_f = _elastic(0.8, 0.6)
        a = random_spin_coefficients(rng)
        with pytest.raises(SubspaceViolation):
            s1_amplitude(-p_i, a, p_f, a, coulomb_potential(1.0))

    def test_mass_mismatch_flagged_zero(self, rng):
        p_i = four_vector(np.hypot(1.0, 0.5), 0.0, 0.0, 0.5)
        p_f = four_vector(np.hypot(1.4, 0.5), 0.0, 0.5, 0.0)
        a = random_spin_coefficients(rng)
        amp = s1_amplitude(p_i, a, p_f, a, coulomb_potential(1.0))
        assert amp.value == 0.0j
        assert "mass_shell_mismatch" in amp.flags

    def test_off_energy_shell_flagged_zero(self, rng):
        # equal mass, different p0: static potential cannot supply energy
        p_i = four_vector(np.hypot(1.0, 0.5), 0.0, 0.0, 0.5)
        p_f = four_vector(np.hypot(1.0, 1.1), 0.0, 1.1, 0.0)
        a = random_spin_coefficients(rng)
        amp = s1_amplitude(p_i, a, p_f, a, coulomb_potential(1.0))
        assert amp.value == 0.0j
        assert "off_energy_shell" in amp.flags

    def test_factors_recorded(self, rng):
        p_i, p_f = _elastic(0.8, 0.9)
        a = random_spin_coefficients(rng)
        amp = s1_amplitude(p_i, a, p_f, a, coulomb_potential(1.0))
        assert isinstance(amp, ReducedAmplitude)
        factor_names = [name for name, _ in amp.stripped_factors]
        assert "i*e/L^3" in factor_names
        assert "delta(Dm)" in factor_names
        assert "2pi*delta(Dp0)" in factor_names

    def test_zero_potential_gives_zero(self, rng):
        p_i, p_f = _elastic(0.8, 0.9)
        a = random_spin_coefficients(rng)
        assert s1_amplitude(p_i, a, p_f, a, zero_potential()).value == 0.0j


class TestSpinSum:
    @pytest.mark.parametrize("kappa", [0.3, 1.0, 2.2, np.pi])
    def test_enumeration_equals_trace(self, kappa):
        p_i, p_f = _elastic(1.3, kappa, mass=0.7)
        result = spin_averaged_amp2(p_i, p_f, coulomb_potential(2.0))
        assert result.by_enumeration > 0.0
        assert abs(result.by_enumeration - result.by_trace) <= 1e-12 * result.by_trace

    def test_inelastic_zeros(self):
        p_i = four_vector(np.hypot(1.0, 0.5), 0.0, 0.0, 0.5)
        p_f = four_vector(np.hypot(1.4, 0.5), 0.0, 0.5, 0.0)
        result = spin_averaged_amp2(p_i, p_f, coulomb_potential(1.0))
        assert result == (0.0, 0.0)


class TestMott:
    def test_ratio_closed_form(self):
        # the computed ratio reduces to 1 - beta^2 sin^2(kappa/2)
        for p_mag in (0.1, ELECTRON_MASS, 2.0):
            energy = np.hypot(ELECTRON_MASS, p_mag)
            beta2 = (p_mag / energy) ** 2
            for kappa in (0.4, 1.3, 2.7):
                expect = 1.0 - beta2 * np.sin(kappa / 2.0) ** 2
                assert abs(mott_ratio(p_mag, kappa) - expect) <= 1e-10

    def test_z_scaling(self):
        kappa = 1.1
        d1 = mott_dcs(0.7, kappa, Z=1.0)
        d2 = mott_dcs(0.7, kappa, Z=2.0)
        assert abs(d2 - 4.0 * d1) <= 1e-12 * d2
        assert abs(mott_ratio(0.7, kappa, Z=2.0) - mott_ratio(0.7, kappa, Z=1.0)) <= 1e-12

    def test_nonrelativistic_limit_is_rutherford(self):
        p_mag = 1e-3 * ELECTRON_MASS
        for kappa in (0.5, 1.5, 3.0):
            assert abs(mott_ratio(p_mag, kappa) - 1.0) <= 2e-6

    def test_forward_angle_rejected(self):
        with pytest.raises(ForwardSingular):
            mott_dcs(0.5, 0.0, Z=1.0)
        with pytest.raises(ForwardSingular):
            rutherford_dcs(0.5, -0.1, Z=1.0)

    def test_rutherford_closed_form(self):
        p_mag, kappa = 0.9, 1.7
        energy = np.hypot(ELECTRON_MASS, p_mag)
        expect = (2.0 * FINE_STRUCTURE * energy) ** 2 / (
            4.0 * p_mag**4 * np.sin(kappa / 2.0) ** 4
        )
        assert abs(rutherford_dcs(p_mag, kappa, Z=2.0) - expect) <= 1e-12 * expect

    def test_momentum_form_variant(self):
        # the printed variant uses |p/m|^2 where the computed factor has
        # beta^2; they agree only in the nonrelativistic regime
        p_mag, kappa = 0.05 * ELECTRON_MASS, 2.0
        variant = mott_factor_momentum_form(p_mag, kappa)
        computed = mott_ratio(p_mag, kappa)
        assert abs(variant - computed) <= (p_mag / ELECTRON_MASS) ** 4
        expect = 1.0 - (p_mag / ELECTRON_MASS) ** 2 * np.sin(kappa / 2.0) ** 2
        assert abs(variant - expect) <= 1e-14

    def test_dcs_backward_angle_allowed(self):
        assert mott_dcs(0.5, np.pi, Z=1.0) > 0.0
