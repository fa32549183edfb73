"""Free influence functions acting spectrally, and first-order scattering.

The forward and backward free influence functions decompose over plane-wave
modes: acting through (1/i) integral d^4x, each mode is either kept with its
tau phase advanced or annihilated, depending on the sign of branch * phi_p
relative to which kernel is applied and the direction of the tau step.  All
action here is mode-wise; no position-space 4D integral is ever evaluated,
since every state in scope is a finite superposition.

Sign bookkeeping, fixed once: with sgn = sign(tau' - tau),

    (1/i) integral d^4x Gamma0_w : mode survives iff branch * phi = w * sgn,
                                   coefficient *= sgn * exp(i nu (tau'-tau)),

with nu = branch phi m the tau frequency.  The composite of two steps of
equal direction therefore reproduces the single step up to the overall
sign(tau2 - tau0), and opposite-direction chains annihilate every mode.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    ELEMENTARY_CHARGE,
    GAMMA0,
    TWO_PI,
    bar,
    energy_sign,
    mass_of,
    minkowski_dot,
    slash,
)
from .errors import DegenerateInterval, UnresolvedDelta
from .spinors import branch_block, lambda_u, lambda_v
from .states import Mode, SpectralState, Subspace, classify_subspace


@dataclass(frozen=True)
class InfluenceKernel:
    """Spectral action of one free influence function over a tau step.

    which = +1 selects the kernel whose forward step preserves S+; which = -1
    the one preserving S-.  The raw kernel multiplies a surviving mode by
    i * sign(dtau) * exp(i nu dtau); evolution maps carry an extra 1/i.
    """

    which: int
    dtau: float

    def __post_init__(self):
        if self.which not in (1, -1):
            raise ValueError("which must be +1 or -1")
        if self.dtau == 0.0:
            raise DegenerateInterval("influence functions need a nonzero tau step")

    @property
    def step_sign(self):
        return 1 if self.dtau > 0 else -1

    def mode_factor(self, mode: Mode) -> complex:
        """Multiplier i*sgn*exp(i nu dtau) on survivors, 0 on annihilated modes."""
        sgn = self.step_sign
        if mode.branch * mode.phi != self.which * sgn:
            return 0.0j
        return 1j * sgn * np.exp(1j * mode.frequency * self.dtau)

    def apply(self, state: SpectralState) -> SpectralState:
        def fn(coeff, mode):
            f = self.mode_factor(mode)
            return None if f == 0.0 else (coeff * f, mode)

        return state.map_terms(fn)


def free_evolve(state: SpectralState, tau: float, tau_prime: float, which: int) -> SpectralState:
    """Apply (1/i) integral d^4x Gamma0_which from tau to tau_prime.

    For which=+1 and tau' > tau only modes with branch*phi = +1 (the subspace
    S+) survive, phases advancing by nu*(tau'-tau); for tau' < tau only the
    complementary set survives.  which=-1 mirrors the pattern.  Annihilated
    modes are dropped from the term list.
    """
    if tau_prime == tau:
        raise DegenerateInterval("evolution interval is degenerate")
    kernel = InfluenceKernel(which, tau_prime - tau)

    def fn(coeff, mode):
        f = kernel.mode_factor(mode)
        return None if f == 0.0 else (coeff * (-1j) * f, mode)

    return state.map_terms(fn)


def semigroup_compose(state: SpectralState, tau0: float, tau1: float, tau2: float, which: int) -> SpectralState:
    """Two-step evolution tau0 -> tau1 -> tau2 with the same kernel.

    When tau1 lies between tau0 and tau2 this equals sign(tau2 - tau0) times
    the direct single step.  When tau1 lies outside the interval the two
    steps impose contradictory subspace filters and the composition is the
    empty state; that ordering violation is reported through the returned
    value, not an exception.
    """
    return free_evolve(free_evolve(state, tau0, tau1, which), tau1, tau2, which)


def kernel_matrix(which: int, momenta, dx, dtau: float, box_edge: float = TWO_PI):
    """Position-space 4x4 kernel value over a finite momentum support.

    Each support momentum p contributes its u-type projector when phi_p
    matches which*sign(dtau) and its v-type projector when it matches the
    opposite sign, with phases exp[i(p.dx +/- phi_p m_p dtau)]:

        sign(dtau) * i / L^4 * sum_p [ Lambda_u(p) e^{i(p.dx + phi m dtau)}
                                     + Lambda_v(p) e^{i(p.dx - phi m dtau)} ].
    """
    kernel = InfluenceKernel(which, dtau)
    sgn = kernel.step_sign
    sigma = which * sgn
    dx = np.asarray(dx, dtype=float)
    out = np.zeros((4, 4), dtype=complex)
    for p in momenta:
        p = np.asarray(p, dtype=float)
        phi = energy_sign(p)
        m = mass_of(p)
        space_phase = minkowski_dot(p, dx)
        if phi == sigma:
            out += lambda_u(p) * np.exp(1j * (space_phase + phi * m * dtau))
        else:
            out += lambda_v(p) * np.exp(1j * (space_phase - phi * m * dtau))
    return sgn * 1j / box_edge**4 * out


def influence_conjugation_check(dx, dtau: float, momenta, box_edge: float = TWO_PI) -> float:
    """Max mode-wise residual of g0 (Gamma0+)^dag g0 = Gamma0- at reversed arguments.

    The identity holds per support momentum, so the residual is reported as
    the max over single-momentum kernels.
    """
    dx = np.asarray(dx, dtype=float)
    worst = 0.0
    for p in momenta:
        plus = kernel_matrix(+1, [p], dx, dtau, box_edge)
        minus = kernel_matrix(-1, [p], -dx, -dtau, box_edge)
        residual = np.abs(GAMMA0 @ plus.conj().T @ GAMMA0 - minus).max()
        worst = max(worst, float(residual))
    return worst


def elastic_shell(p_in, kappas, n_azimuth: int = 8):
    """Outgoing momenta with |p| and p0 equal to the incident values.

    Polar angles kappa are measured from the incident direction; n_azimuth
    equally spaced azimuths are generated per angle.  Returns an array of
    four-momenta of shape (len(kappas)*n_azimuth, 4).
    """
    p_in = np.asarray(p_in, dtype=float)
    pvec = p_in[1:]
    pmag = np.linalg.norm(pvec)
    if pmag == 0.0:
        raise ValueError("elastic shell needs a nonzero incident momentum")
    axis = pvec / pmag
    # any transverse pair completes the triad
    seed = np.array([1.0, 0.0, 0.0]) if abs(axis[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = seed - axis * np.dot(seed, axis)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(axis, e1)
    out = []
    for kappa in np.atleast_1d(kappas):
        for j in range(n_azimuth):
            psi = TWO_PI * j / n_azimuth
            direction = (
                np.cos(kappa) * axis
                + np.sin(kappa) * (np.cos(psi) * e1 + np.sin(psi) * e2)
            )
            q = np.empty(4)
            q[0] = p_in[0]
            q[1:] = pmag * direction
            out.append(q)
    return np.array(out)


def moller_first_order(
    incident: Mode,
    potential,
    out_momenta,
    charge: float = ELEMENTARY_CHARGE,
    box_edge: float = TWO_PI,
    mass_atol: float = 1e-9,
) -> SpectralState:
    """Incident mode plus the first Born term of the forward wave operator.

    The Born term places weight on each supplied outgoing momentum q that
    conserves the tau frequency (equivalently the mass, both states sitting
    in S+); static potentials additionally require q0 = p0.  Outgoing spin
    coefficients are the mode-space sandwich of slash(A~(q - p)) with the
    incident amplitude spinor:

        u-type node:  +i (charge/L^3) ubar(q) slash(A~) w_i
        v-type node:  -i (charge/L^3) vbar(q) slash(A~) w_i

    the relative sign carried by Lambda_v = -v vbar.  An incident mode in S-
    is annihilated by the forward operator: the empty state is returned (the
    subspace violation is the documented zero, not an exception).
    """
    if classify_subspace(incident) is Subspace.S_MINUS:
        return SpectralState((), box_edge)
    w_in = incident.amplitude_spinor()
    m_in = incident.mass
    prefactor = 1j * charge / box_edge**3

    terms = [(1.0 + 0.0j, incident)]
    found_shell = False
    for q in np.atleast_2d(np.asarray(out_momenta, dtype=float)):
        m_out = mass_of(q)
        if abs(m_out - m_in) > mass_atol * max(1.0, m_in):
            continue
        found_shell = True
        dp = q - incident.p
        if getattr(potential, "static", False) and abs(dp[0]) > mass_atol:
            continue
        a_tilde = potential.fourier(dp)
        if not np.any(a_tilde):
            continue
        branch_out = 1 if energy_sign(q) > 0 else -1
        block = branch_block(q, branch_out)
        a_out = bar(block) @ (slash(a_tilde) @ w_in)
        if not np.any(a_out):
            continue
        terms.append((branch_out * prefactor, Mode(q, branch_out, a_out)))
    if not found_shell:
        raise UnresolvedDelta("no outgoing momentum conserves the mass")
    return SpectralState(tuple(terms), box_edge)
