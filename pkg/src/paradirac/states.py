"""Box-normalized plane-wave modes and finite spectral superpositions.

A Mode is one plane-wave solution of the free parameter-time Dirac equation

    (1/i) d psi / d tau + gamma^mu (1/i) d psi / d x^mu = 0,

labelled by a timelike four-momentum p, a branch (+1 for the u block, -1 for
the v block) and a complex spin coefficient pair a:

    psi(x, tau) = (block(p) @ a) / L^2 * exp[i (p.x + branch phi_p m_p tau)].

The box edge L replaces the (2 pi)^2 of continuum normalization; momenta are
treated as exact lattice labels, so distinct momenta are orthogonal and equal
momenta overlap through the spinor metric (+1 for u modes, -1 for v modes).

Frequency in tau is nu = branch * phi_p * m_p.  States with nu = +m span the
subspace S+, states with nu = -m span S-; the discrete symmetry maps below
permute the branches accordingly.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .algebra import (
    ATOL_ALGEBRA,
    GAMMA0,
    GAMMA1,
    GAMMA2,
    GAMMA3,
    GAMMA5,
    TWO_PI,
    bar,
    energy_sign,
    gamma,
    lower_index,
    mass_of,
    minkowski_dot,
)
from .errors import BoxMismatch, MasslessState
from .spinors import branch_block, decompose_in_block


class Subspace(enum.Enum):
    """The two invariant subspaces of free evolution."""

    S_PLUS = "S+"
    S_MINUS = "S-"


@dataclass(frozen=True)
class Mode:
    """One box-normalized plane-wave mode (p, branch, spin coefficients)."""

    p: np.ndarray
    branch: int
    a: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float).copy()
        a = np.asarray(self.a, dtype=complex).copy()
        if p.shape != (4,):
            raise ValueError("momentum must be a four-vector")
        if a.shape != (2,):
            raise ValueError("spin coefficients must be a complex pair")
        if not (np.all(np.isfinite(p)) and np.all(np.isfinite(a))):
            raise ValueError("mode fields must be finite")
        branch = int(self.branch)
        if branch not in (1, -1):
            raise ValueError("branch must be +1 or -1")
        m = mass_of(p)
        if m == 0.0:
            raise MasslessState("modes require strictly timelike momenta")
        p.setflags(write=False)
        a.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "branch", branch)
        object.__setattr__(self, "mass", m)
        object.__setattr__(self, "phi", energy_sign(p))

    @property
    def frequency(self):
        """Tau frequency nu = branch phi_p m_p."""
        return self.branch * self.phi * self.mass

    @property
    def energy(self):
        return abs(self.p[0])

    def block(self):
        return branch_block(self.p, self.branch)

    def amplitude_spinor(self):
        """The bispinor factor block(p) @ a (box factor 1/L^2 not included)."""
        return self.block() @ self.a


def same_mode(m1: Mode, m2: Mode) -> bool:
    """Exact equality of the labels (p, branch, a)."""
    return (
        m1.branch == m2.branch
        and np.array_equal(m1.p, m2.p)
        and np.array_equal(m1.a, m2.a)
    )


def classify_subspace(mode: Mode) -> Subspace:
    """S+ for modes evolving as exp(+i m tau), S- for exp(-i m tau)."""
    return Subspace.S_PLUS if mode.branch * mode.phi > 0 else Subspace.S_MINUS


def plane_wave_value(mode: Mode, x, tau, box_edge=TWO_PI):
    """Value of the mode wavefunction at event x and parameter time tau."""
    x = np.asarray(x, dtype=float)
    phase = np.exp(1j * (minkowski_dot(mode.p, x) + mode.frequency * tau))
    return mode.amplitude_spinor() * (phase / box_edge**2)


def coordinate_velocity(mode: Mode):
    """dt/dtau along constant phase: +m/E on branch +1, -m/E on branch -1.

    Independent of the energy sign phi_p.
    """
    return mode.branch * mode.mass / mode.energy


def free_equation_residual(mode: Mode, x, tau, step=1e-4, box_edge=TWO_PI):
    """Finite-difference residual of the free parameter-time wave equation.

    Every mode satisfies (1/i) d_tau psi + gamma^mu (1/i) d_mu psi = 0
    identically, so the returned max-norm measures only the central
    difference truncation (quadratic in step).
    """
    x = np.asarray(x, dtype=float)
    d_tau = (
        plane_wave_value(mode, x, tau + step, box_edge)
        - plane_wave_value(mode, x, tau - step, box_edge)
    ) / (2.0 * step)
    total = d_tau / 1j
    for mu in range(4):
        shift = np.zeros(4)
        shift[mu] = step
        d_mu = (
            plane_wave_value(mode, x + shift, tau, box_edge)
            - plane_wave_value(mode, x - shift, tau, box_edge)
        ) / (2.0 * step)
        total = total + gamma(mu) @ (d_mu / 1j)
    return float(np.abs(total).max())


@dataclass(frozen=True)
class SpectralState:
    """Finite superposition sum_k c_k * mode_k over one quantization box.

    Terms with exactly equal mode labels are merged on construction and
    vanishing coefficients dropped, so the term list is a canonical sparse
    spectral representation.
    """

    terms: tuple
    box_edge: float = TWO_PI

    def __post_init__(self):
        if self.box_edge <= 0.0:
            raise ValueError("box edge must be positive")
        merged: list[list] = []
        for coeff, mode in self.terms:
            if not isinstance(mode, Mode):
                raise TypeError("state terms must be (coefficient, Mode) pairs")
            for entry in merged:
                if same_mode(entry[1], mode):
                    entry[0] += complex(coeff)
                    break
            else:
                merged.append([complex(coeff), mode])
        kept = tuple((c, m) for c, m in merged if c != 0.0)
        object.__setattr__(self, "terms", kept)
        object.__setattr__(self, "box_edge", float(self.box_edge))

    @property
    def is_empty(self):
        return not self.terms

    def value(self, x, tau):
        """Wavefunction value sum_k c_k f_k(x, tau)."""
        out = np.zeros(4, dtype=complex)
        for coeff, mode in self.terms:
            out += coeff * plane_wave_value(mode, x, tau, self.box_edge)
        return out

    def map_terms(self, fn):
        """New state with (coeff, mode) -> fn(coeff, mode) or None to drop."""
        new = []
        for coeff, mode in self.terms:
            item = fn(coeff, mode)
            if item is not None:
                new.append(item)
        return SpectralState(tuple(new), self.box_edge)


def single_mode_state(mode: Mode, coeff=1.0, box_edge=TWO_PI) -> SpectralState:
    return SpectralState(((complex(coeff), mode),), box_edge)


# ---------------------------------------------------------------------------
# discrete symmetries
#
# Each map sends a plane-wave mode to another plane-wave mode; the transformed
# spinor is re-expressed in the block basis of the image momentum, which is
# exact because the maps commute with the free equation.

def _transform_mode(mode: Mode, matrix, conjugate, flip_space, flip_energy, flip_branch):
    w = mode.amplitude_spinor()
    if conjugate:
        w = w.conj()
    w = matrix @ w
    q = mode.p.copy()
    if flip_space:
        q[1:] = -q[1:]
    if flip_energy:
        q[0] = -q[0]
    branch = -mode.branch if flip_branch else mode.branch
    a = decompose_in_block(q, branch, w)
    return Mode(q, branch, a)


def charge_conjugate(state: SpectralState) -> SpectralState:
    """Antilinear map psi -> i gamma^2 psi*(x, -tau); momentum and branch flip."""
    return state.map_terms(
        lambda c, m: (
            np.conj(c),
            _transform_mode(m, 1j * GAMMA2, True, True, True, True),
        )
    )


def parity(state: SpectralState) -> SpectralState:
    """Linear map psi -> gamma^0 psi(t, -x, tau); spatial momentum flips."""
    return state.map_terms(
        lambda c, m: (c, _transform_mode(m, GAMMA0, False, True, False, False))
    )


def time_reverse(state: SpectralState) -> SpectralState:
    """Antilinear map psi -> i gamma^1 gamma^3 psi*(-t, x, -tau)."""
    return state.map_terms(
        lambda c, m: (
            np.conj(c),
            _transform_mode(m, 1j * GAMMA1 @ GAMMA3, True, True, False, False),
        )
    )


def tpc(state: SpectralState) -> SpectralState:
    """Linear composite map psi -> -i gamma^5 psi(-x, tau).

    Sends u modes at p to v modes at -p and conversely, exchanging the two
    tau-frequency subspaces' particle/antiparticle labels.
    """
    return state.map_terms(
        lambda c, m: (c, _transform_mode(m, -1j * GAMMA5, False, True, True, True))
    )


# ---------------------------------------------------------------------------
# inner products and concatenated currents

def inner_product(state_a: SpectralState, state_b: SpectralState, atol=None):
    """Box inner product integral d^4x of bar(psi_a) psi_b at fixed tau.

    Distinct lattice momenta are orthogonal; equal momenta contract through
    the spinor metric, +a*.b on the u branch and -a*.b on the v branch, and
    mixed branches vanish.  The result does not depend on tau.
    """
    if state_a.box_edge != state_b.box_edge:
        raise BoxMismatch("states quantized in different boxes")
    total = 0.0j
    for ca, ma in state_a.terms:
        for cb, mb in state_b.terms:
            if ma.branch != mb.branch or not np.array_equal(ma.p, mb.p):
                continue
            total += np.conj(ca) * cb * ma.branch * np.vdot(ma.a, mb.a)
    return total


def mode_overlap(ma: Mode, mb: Mode):
    """Single-mode box inner product, the (k, l) kernel of inner_product."""
    if ma.branch != mb.branch or not np.array_equal(ma.p, mb.p):
        return 0.0j
    return complex(ma.branch * np.vdot(ma.a, mb.a))


def concatenated_pairs(state: SpectralState, freq_atol=None):
    """Mode pairs surviving the tau-concatenation integral of a bilinear.

    Yields (weight, dp, w_bra, w_ket) for each ordered pair (k, l) whose tau
    frequencies match; weight = conj(c_k) c_l / L^4 and dp = p_l - p_k.  The
    overall scale T_tau of the concatenation integral is carried symbolically
    by the caller.
    """
    tol = ATOL_ALGEBRA if freq_atol is None else freq_atol
    terms = state.terms
    spinors = [mode.amplitude_spinor() for _, mode in terms]
    box4 = state.box_edge**4
    for k, (ck, mk) in enumerate(terms):
        for l, (cl, ml) in enumerate(terms):
            scale = max(1.0, abs(mk.frequency), abs(ml.frequency))
            if abs(mk.frequency - ml.frequency) > tol * scale:
                continue
            weight = np.conj(ck) * cl / box4
            yield weight, ml.p - mk.p, spinors[k], spinors[l]


class CurrentField(NamedTuple):
    """Current samples and the symbolic concatenation scale they carry."""

    values: np.ndarray
    scale: str


def bilinear_concatenated(state: SpectralState, insert, points, freq_atol=None):
    """sum over surviving pairs of w_bar_k @ insert @ w_l exp(i dp.x).

    insert may be a (4, 4) matrix or a stack of them with shape (..., 4, 4);
    returns complex samples of shape (npoints, ...).  Values are in units of
    T_tau (the symbolic tau-concatenation scale).
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    insert = np.asarray(insert, dtype=complex)
    stack_shape = insert.shape[:-2]
    out = np.zeros((points.shape[0], *stack_shape), dtype=complex)
    for weight, dp, wk, wl in concatenated_pairs(state, freq_atol):
        sandwich = np.einsum("i,...ij,j->...", bar(wk), insert, wl)
        phases = np.exp(1j * (points @ lower_index(dp)))
        out += weight * np.multiply.outer(phases, sandwich)
    return out


_GAMMA_STACK = np.stack([gamma(mu) for mu in range(4)])


def concatenated_current(state: SpectralState, points, freq_atol=None) -> CurrentField:
    """Vector current J^mu(x) = integral d tau bar(psi) gamma^mu psi.

    Only equal-frequency mode pairs survive the tau integral; the values are
    reported in units of the symbolic concatenation scale T_tau.
    """
    raw = bilinear_concatenated(state, _GAMMA_STACK, points, freq_atol)
    if raw.size and np.abs(raw.imag).max() > 1e-10 * max(1.0, np.abs(raw).max()):
        raise AssertionError("vector current acquired an imaginary part")
    return CurrentField(values=raw.real, scale="T_tau")


def current_divergence_fd(state: SpectralState, points, step=1e-3, freq_atol=None):
    """Finite-difference divergence d_mu J^mu at each point (4th order central).

    Returns the samples; the identity value is zero for equal-frequency
    superpositions, so the magnitude measures the discretization residual.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    npts = points.shape[0]
    shifted = []
    for mu in range(4):
        for k in (-2, -1, 1, 2):
            block = points.copy()
            block[:, mu] += k * step
            shifted.append(block)
    values = concatenated_current(state, np.vstack(shifted), freq_atol).values
    div = np.zeros(npts)
    idx = 0
    for mu in range(4):
        f_m2 = values[idx * npts:(idx + 1) * npts, mu]; idx += 1
        f_m1 = values[idx * npts:(idx + 1) * npts, mu]; idx += 1
        f_p1 = values[idx * npts:(idx + 1) * npts, mu]; idx += 1
        f_p2 = values[idx * npts:(idx + 1) * npts, mu]; idx += 1
        div += (f_m2 - 8.0 * f_m1 + 8.0 * f_p1 - f_p2) / (12.0 * step)
    return div


# ---------------------------------------------------------------------------
# serialization
#
# The wire shape is a JSON list of {p, branch, a, L}; term coefficients are
# folded into the spin coefficients, which is lossless for the wavefunction.

def state_to_json(state: SpectralState) -> str:
    items = []
    for coeff, mode in state.terms:
        a_eff = coeff * mode.a
        items.append(
            {
                "p": [float(c) for c in mode.p],
                "branch": mode.branch,
                "a": [[float(z.real), float(z.imag)] for z in a_eff],
                "L": state.box_edge,
            }
        )
    return json.dumps(items)


def state_from_json(text: str) -> SpectralState:
    items = json.loads(text)
    if not isinstance(items, list):
        raise ValueError("spectral state JSON must be a list of mode records")
    terms = []
    box = None
    for item in items:
        edge = float(item["L"])
        if box is None:
            box = edge
        elif edge != box:
            raise BoxMismatch("mode records disagree on the box edge")
        a = np.array([complex(re, im) for re, im in item["a"]])
        terms.append((1.0 + 0.0j, Mode(np.array(item["p"], dtype=float), int(item["branch"]), a)))
    return SpectralState(tuple(terms), TWO_PI if box is None else box)
