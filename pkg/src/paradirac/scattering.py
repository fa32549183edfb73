"""First-order scattering off an external potential: amplitudes and cross-sections.

The first-order S-matrix element between box-normalized u modes is

    S1 = (i e / L^3) delta(Dm) [2 pi delta(Dp0) for static potentials]
         * ubar_f slash(A~(Dp)) u_i,

with Dp = p_f - p_i.  The delta factors are squared into the symbolic scales
T_tau and T_0 and cancelled against beam normalization and observation time
before any cross-section number is produced; what this module returns are the
stripped reduced amplitudes plus the fully cancelled differential
cross-section.

The Mott factor is never hard-coded: the angular dependence comes out of the
spin sums.  The computed factor is 1 - beta^2 sin^2(kappa/2) with
beta = |p|/E; the momentum-form variant 1 - |p/m|^2 sin^2(kappa/2) sometimes
quoted for this ratio is exposed separately for comparison (the two agree only
to leading order in beta).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .algebra import (
    ELECTRON_MASS,
    ELEMENTARY_CHARGE,
    FINE_STRUCTURE,
    TWO_PI,
    bar,
    dirac_adjoint,
    mass_of,
    slash,
)
from .errors import ForwardSingular, SubspaceViolation
from .spinors import lambda_u, u_block


@dataclass(frozen=True)
class ExternalPotential:
    """Momentum-space external potential A~^mu(Dp).

    static=True declares an overall 2 pi delta(Dp0) carried symbolically; the
    fourier callable then returns the coefficient of that delta.  Position
    space hermiticity requires A~(-Dp) = conj(A~(Dp)); hermiticity_residual
    probes it pointwise.
    """

    fourier: Callable[[np.ndarray], np.ndarray]
    static: bool = False
    params: dict = field(default_factory=dict)

    def hermiticity_residual(self, dp) -> float:
        dp = np.asarray(dp, dtype=float)
        return float(np.abs(self.fourier(-dp) - np.conj(self.fourier(dp))).max())


def coulomb_ft(dp, Z: float, e: float = ELEMENTARY_CHARGE, mu: float = 0.0):
    """Fourier transform of the point-charge Coulomb potential.

    A~^0 = -Z e / (|Dp_vec|^2 + mu^2), spatial components zero; mu is an
    optional screening mass regulating the forward direction.  The static
    2 pi delta(Dp0) is carried by the ExternalPotential flag, not returned.
    """
    if mu < 0.0:
        raise ValueError("screening mass must be nonnegative")
    dp = np.asarray(dp, dtype=float)
    denom = float(np.dot(dp[1:], dp[1:])) + mu * mu
    if denom == 0.0:
        raise ForwardSingular("Coulomb transform diverges at zero momentum transfer")
    out = np.zeros(4, dtype=complex)
    out[0] = -Z * e / denom
    return out


def coulomb_potential(Z: float, e: float = ELEMENTARY_CHARGE, mu: float = 0.0) -> ExternalPotential:
    return ExternalPotential(
        fourier=lambda dp: coulomb_ft(dp, Z, e, mu),
        static=True,
        params={"Z": Z, "e": e, "mu": mu},
    )


def zero_potential() -> ExternalPotential:
    return ExternalPotential(fourier=lambda dp: np.zeros(4, dtype=complex), static=False)


@dataclass(frozen=True)
class ReducedAmplitude:
    """Amplitude with its singular normalization factors stripped.

    stripped_factors lists (factor, scale) pairs removed from the raw matrix
    element; value times those factors reassembles the full first-order
    element.  flags records exact zeros imposed by unresolved deltas.
    """

    value: complex
    stripped_factors: tuple
    flags: tuple = ()


_BASE_FACTORS = (("i*e/L^3", "prefactor"), ("delta(Dm)", "T_tau"))
_STATIC_FACTOR = (("2pi*delta(Dp0)", "T_0"),)


def s1_amplitude(p_i, a_i, p_f, a_f, pot: ExternalPotential, mass_atol: float = 1e-9) -> ReducedAmplitude:
    """Reduced first-order amplitude ubar_f slash(A~(Dp)) u_i.

    Both momenta must have positive energy (u-type S+ modes).  A mass
    mismatch or, for static potentials, an energy mismatch does not raise:
    the corresponding delta annihilates the element, so the value is exactly
    zero and the cause is flagged.
    """
    p_i = np.asarray(p_i, dtype=float)
    p_f = np.asarray(p_f, dtype=float)
    if p_i[0] <= 0.0 or p_f[0] <= 0.0:
        raise SubspaceViolation("first-order amplitude defined for positive-energy u modes")
    factors = _BASE_FACTORS + (_STATIC_FACTOR if pot.static else ())
    flags = []
    m_i, m_f = mass_of(p_i), mass_of(p_f)
    if abs(m_f - m_i) > mass_atol * max(1.0, m_i):
        flags.append("mass_shell_mismatch")
    dp = p_f - p_i
    if pot.static and abs(dp[0]) > mass_atol:
        flags.append("off_energy_shell")
    if flags:
        return ReducedAmplitude(0.0j, factors, tuple(flags))
    a_tilde = pot.fourier(dp)
    u_i = u_block(p_i) @ np.asarray(a_i, dtype=complex)
    u_f = u_block(p_f) @ np.asarray(a_f, dtype=complex)
    value = bar(u_f) @ slash(a_tilde) @ u_i
    return ReducedAmplitude(complex(value), factors, ())


class SpinSum(NamedTuple):
    """One spin-averaged |amplitude|^2 computed two independent ways."""

    by_enumeration: float
    by_trace: float


def spin_averaged_amp2(p_i, p_f, pot: ExternalPotential, mass_atol: float = 1e-9) -> SpinSum:
    """(1/2) sum over incident and final spins of |ubar_f slash(A~) u_i|^2.

    Computed by explicit enumeration over the 2x2 spin bases and
    independently as the trace (1/2) Tr[X Lambda_u(p_i) Xbar Lambda_u(p_f)]
    with X = slash(A~); the pair is returned for cross-validation.  Inelastic
    kinematics give exact zeros, mirroring s1_amplitude.
    """
    p_i = np.asarray(p_i, dtype=float)
    p_f = np.asarray(p_f, dtype=float)
    if p_i[0] <= 0.0 or p_f[0] <= 0.0:
        raise SubspaceViolation("spin sums defined for positive-energy u modes")
    m_i, m_f = mass_of(p_i), mass_of(p_f)
    dp = p_f - p_i
    if abs(m_f - m_i) > mass_atol * max(1.0, m_i):
        return SpinSum(0.0, 0.0)
    if pot.static and abs(dp[0]) > mass_atol:
        return SpinSum(0.0, 0.0)
    x = slash(pot.fourier(dp))

    ui = u_block(p_i)
    uf = u_block(p_f)
    total = 0.0
    for r in range(2):
        for s in range(2):
            amp = bar(uf[:, s]) @ x @ ui[:, r]
            total += abs(amp) ** 2
    by_enum = 0.5 * total

    by_trace = 0.5 * np.trace(x @ lambda_u(p_i) @ dirac_adjoint(x) @ lambda_u(p_f))
    return SpinSum(float(by_enum), float(by_trace.real))


def _elastic_pair(p_mag: float, kappa: float, mass: float):
    if p_mag <= 0.0:
        raise ValueError("momentum magnitude must be positive")
    energy = float(np.hypot(mass, p_mag))
    p_i = np.array([energy, 0.0, 0.0, p_mag])
    p_f = np.array([energy, p_mag * np.sin(kappa), 0.0, p_mag * np.cos(kappa)])
    return p_i, p_f


def mott_dcs(p_mag: float, kappa: float, Z: float, mass: float = ELECTRON_MASS,
             e: float = ELEMENTARY_CHARGE) -> float:
    """Differential cross-section for elastic Coulomb scattering, MeV^-2 per sr.

    Assembled from the computed spin sum: after cancelling the squared delta
    scales T_tau, T_0 against beam normalization and observation time, the
    box volumes drop and

        dcs = (m^2 / 4 pi^2) e^2 * <|amplitude|^2>_spin.

    The nonrelativistic limit of this expression reproduces Rutherford,
    which fixes the normalization without external input.
    """
    if not 0.0 < kappa <= np.pi:
        raise ForwardSingular("scattering angle must lie in (0, pi]")
    p_i, p_f = _elastic_pair(p_mag, kappa, mass)
    amp2 = spin_averaged_amp2(p_i, p_f, coulomb_potential(Z, e)).by_trace
    return mass**2 / TWO_PI**2 * e**2 * amp2


def rutherford_dcs(p_mag: float, kappa: float, Z: float, mass: float = ELECTRON_MASS) -> float:
    """Spinless baseline Z^2 alpha^2 E^2 / (4 p^4 sin^4(kappa/2)), MeV^-2 per sr."""
    if not 0.0 < kappa <= np.pi:
        raise ForwardSingular("scattering angle must lie in (0, pi]")
    energy = float(np.hypot(mass, p_mag))
    s4 = np.sin(kappa / 2.0) ** 4
    return (Z * FINE_STRUCTURE * energy) ** 2 / (4.0 * p_mag**4 * s4)


def mott_ratio(p_mag: float, kappa: float, Z: float = 1.0, mass: float = ELECTRON_MASS) -> float:
    """Computed ratio dcs/rutherford; analytically 1 - beta^2 sin^2(kappa/2)."""
    return mott_dcs(p_mag, kappa, Z, mass) / rutherford_dcs(p_mag, kappa, Z, mass)


def mott_factor_momentum_form(p_mag: float, kappa: float, mass: float = ELECTRON_MASS) -> float:
    """The variant factor 1 - |p/m|^2 sin^2(kappa/2), reported for comparison.

    Agrees with the computed beta^2 form only to leading order in |p|/m; the
    computed form is normative here.
    """
    return 1.0 - (p_mag / mass) ** 2 * np.sin(kappa / 2.0) ** 2
