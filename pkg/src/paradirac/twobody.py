"""Two-particle tensor-product states, their currents, evolution and scattering.

States live in the tensor product of two single-particle mode spaces over a
common quantization box, with optional fermionic or bosonic exchange
symmetry.  Free evolution factorizes (each tensor factor evolves under its
own influence function), so unentangled products stay unentangled; currents
marginalize the partner factor through the box mode overlap; the first-order
two-particle S-matrix is a sum of one-particle Born sandwiches weighted by
partner overlaps.

The wavefunction value is the 4x4 outer product psi_1(x) (x) psi_2(y); under
fermionic exchange value(y, x)^T = -value(x, y), under bosonic exchange the
sign is +.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .algebra import (
    ATOL_ALGEBRA,
    ELEMENTARY_CHARGE,
    GAMMA0,
    TWO_PI,
    bar,
    gamma,
    minkowski_dot,
    slash,
)
from .errors import (
    BoxMismatch,
    GridIncompatible,
    OnLightCone,
    OnMassShell,
    SubspaceViolation,
)
from .propagate import InfluenceKernel, kernel_matrix
from .scattering import ExternalPotential, ReducedAmplitude
from .states import (
    CurrentField,
    Mode,
    Subspace,
    classify_subspace,
    mode_overlap,
    plane_wave_value,
)

_EXCHANGE_TAGS = ("none", "fermionic", "bosonic")


@dataclass(frozen=True)
class TwoParticleState:
    """Finite superposition sum_k c_k mode_xk (x) mode_yk over one box."""

    terms: tuple
    exchange: str = "none"
    box_edge: float = TWO_PI

    def __post_init__(self):
        if self.exchange not in _EXCHANGE_TAGS:
            raise ValueError(f"exchange must be one of {_EXCHANGE_TAGS}")
        if self.box_edge <= 0.0:
            raise ValueError("box edge must be positive")
        merged: list[list] = []
        for coeff, mx, my in self.terms:
            if not (isinstance(mx, Mode) and isinstance(my, Mode)):
                raise TypeError("terms must be (coefficient, Mode, Mode) triples")
            for entry in merged:
                if _same_pair(entry[1], entry[2], mx, my):
                    entry[0] += complex(coeff)
                    break
            else:
                merged.append([complex(coeff), mx, my])
        kept = tuple((c, mx, my) for c, mx, my in merged if c != 0.0)
        object.__setattr__(self, "terms", kept)
        object.__setattr__(self, "box_edge", float(self.box_edge))

    @property
    def is_empty(self):
        return not self.terms

    def value(self, x, y, tau):
        """4x4 outer-product wavefunction, first index particle 1."""
        out = np.zeros((4, 4), dtype=complex)
        for coeff, mx, my in self.terms:
            f1 = plane_wave_value(mx, x, tau, self.box_edge)
            f2 = plane_wave_value(my, y, tau, self.box_edge)
            out += coeff * np.outer(f1, f2)
        return out

    def map_terms(self, fn):
        new = []
        for term in self.terms:
            item = fn(*term)
            if item is not None:
                new.append(item)
        return TwoParticleState(tuple(new), self.exchange, self.box_edge)


def _same_pair(ax, ay, bx, by):
    from .states import same_mode

    return same_mode(ax, bx) and same_mode(ay, by)


def antisymmetrize(psi: Mode, chi: Mode, box_edge: float = TWO_PI) -> TwoParticleState:
    """(psi (x) chi - chi (x) psi) / sqrt(2), exchange-antisymmetric.

    Equal modes annihilate each other: exclusion is realized as the exact
    empty state, not an exception.
    """
    rt = 1.0 / np.sqrt(2.0)
    return TwoParticleState(((rt, psi, chi), (-rt, chi, psi)), "fermionic", box_edge)


def symmetrize(phi: Mode, xi: Mode, box_edge: float = TWO_PI) -> TwoParticleState:
    """(phi (x) xi + xi (x) phi) / sqrt(2), exchange-symmetric."""
    rt = 1.0 / np.sqrt(2.0)
    return TwoParticleState(((rt, phi, xi), (rt, xi, phi)), "bosonic", box_edge)


def permute_labels(state: TwoParticleState) -> TwoParticleState:
    """Swap the tensor factors of every term."""
    return TwoParticleState(
        tuple((c, my, mx) for c, mx, my in state.terms), state.exchange, state.box_edge
    )


def exchange_residual(state: TwoParticleState, samples=4, seed=0) -> float:
    """Max deviation of value(y,x)^T from -+ value(x,y) at random events.

    Zero for correctly tagged fermionic/bosonic states; meaningless for
    exchange='none' (returns 0.0 without sampling).
    """
    if state.exchange == "none":
        return 0.0
    sign = -1.0 if state.exchange == "fermionic" else 1.0
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        x, y = rng.normal(size=4), rng.normal(size=4)
        tau = rng.normal()
        resid = np.abs(state.value(y, x, tau).T - sign * state.value(x, y, tau)).max()
        worst = max(worst, float(resid))
    return worst


def two_inner_product(state_a: TwoParticleState, state_b: TwoParticleState) -> complex:
    """Tensor inner product: partner overlaps multiply per term pair."""
    if state_a.box_edge != state_b.box_edge:
        raise BoxMismatch("states quantized in different boxes")
    total = 0.0j
    for ca, ax, ay in state_a.terms:
        for cb, bx, by in state_b.terms:
            ov = mode_overlap(ax, bx) * mode_overlap(ay, by)
            if ov != 0.0:
                total += np.conj(ca) * cb * ov
    return total


def two_evolve(state: TwoParticleState, tau: float, tau_prime: float, which: int) -> TwoParticleState:
    """Factorized free evolution: each tensor factor under its own kernel.

    Both factors filter on the same (which, sign dtau) rule, so the two step
    signs square away and survivors pick up exp[i (nu_1 + nu_2) dtau].
    Exchange symmetry is preserved because the operator is symmetric under
    the factor swap.
    """
    kernel = InfluenceKernel(which, tau_prime - tau)

    def fn(coeff, mx, my):
        f1 = -1j * kernel.mode_factor(mx)
        f2 = -1j * kernel.mode_factor(my)
        f = f1 * f2
        return None if f == 0.0 else (coeff * f, mx, my)

    return state.map_terms(fn)


# ---------------------------------------------------------------------------
# marginalized currents

_GAMMA_STACK = np.stack([gamma(mu) for mu in range(4)])


def _marginal_pairs(state: TwoParticleState, particle: int, freq_atol):
    """Surviving (weight, dp, w_bra, w_ket) after tau concatenation and
    marginalization of the partner factor."""
    tol = ATOL_ALGEBRA if freq_atol is None else freq_atol
    box4 = state.box_edge**4
    for ck, xk, yk in state.terms:
        ak, bk = (xk, yk) if particle == 1 else (yk, xk)
        for cl, xl, yl in state.terms:
            al, bl = (xl, yl) if particle == 1 else (yl, xl)
            partner = mode_overlap(bk, bl)
            if partner == 0.0:
                continue
            nu_k = ak.frequency + bk.frequency
            nu_l = al.frequency + bl.frequency
            if abs(nu_k - nu_l) > tol * max(1.0, abs(nu_k), abs(nu_l)):
                continue
            weight = np.conj(ck) * cl * partner / box4
            yield weight, al.p - ak.p, ak.amplitude_spinor(), al.amplitude_spinor()


def _current_from_pairs(pairs, points) -> CurrentField:
    points = np.atleast_2d(np.asarray(points, dtype=float))
    out = np.zeros((points.shape[0], 4), dtype=complex)
    for weight, dp, wk, wl in pairs:
        sandwich = np.einsum("i,mij,j->m", bar(wk), _GAMMA_STACK, wl)
        lowered = dp.copy()
        lowered[0] = -lowered[0]
        phases = np.exp(1j * (points @ lowered))
        out += weight * np.multiply.outer(phases, sandwich)
    if out.size and np.abs(out.imag).max() > 1e-10 * max(1.0, np.abs(out).max()):
        raise AssertionError("marginal current acquired an imaginary part")
    return CurrentField(values=out.real, scale="T_tau")


def two_currents(state: TwoParticleState, points, freq_atol=None):
    """Marginal currents (J1, J2): tau concatenated, partner integrated out.

    For a simple product each reduces to the single-particle concatenated
    current of its own factor times the partner's norm; for exchange-
    symmetric states both are invariant under permuting the state labels.
    """
    j1 = _current_from_pairs(_marginal_pairs(state, 1, freq_atol), points)
    j2 = _current_from_pairs(_marginal_pairs(state, 2, freq_atol), points)
    return j1, j2


def two_current_divergence_fd(state: TwoParticleState, points, particle: int = 1,
                              step: float = 1e-3, freq_atol=None):
    """4th-order central-difference divergence of one marginal current."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    npts = points.shape[0]
    shifted = []
    for mu in range(4):
        for k in (-2, -1, 1, 2):
            block = points.copy()
            block[:, mu] += k * step
            shifted.append(block)
    pairs = list(_marginal_pairs(state, particle, freq_atol))
    values = _current_from_pairs(pairs, np.vstack(shifted)).values
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
# first-order two-particle S-matrix

def _require_s_plus(state: TwoParticleState, label: str):
    for _, mx, my in state.terms:
        for mode in (mx, my):
            if classify_subspace(mode) is not Subspace.S_PLUS:
                raise SubspaceViolation(f"{label} state leaves the forward subspace")


def _born_sandwich(mode_in: Mode, mode_out: Mode, pot: ExternalPotential, atol: float) -> complex:
    """bar(w_out) slash(A~(Dp)) w_in with the conservation deltas resolved.

    Frequency (hence mass) conservation and, for static potentials, energy
    conservation are enforced as exact zeros.  Projection onto a definite
    final mode cancels the branch signs, so one formula covers u and v type.
    """
    if abs(mode_out.frequency - mode_in.frequency) > atol * max(1.0, abs(mode_in.frequency)):
        return 0.0j
    dp = mode_out.p - mode_in.p
    if pot.static and abs(dp[0]) > atol:
        return 0.0j
    a_tilde = pot.fourier(dp)
    if not np.any(a_tilde):
        return 0.0j
    return complex(bar(mode_out.amplitude_spinor()) @ slash(a_tilde) @ mode_in.amplitude_spinor())


def s2_first_order(
    state_i: TwoParticleState,
    state_f: TwoParticleState,
    pot_pair,
    charges=(ELEMENTARY_CHARGE, ELEMENTARY_CHARGE),
    mass_atol: float = 1e-9,
) -> ReducedAmplitude:
    """S_fi through first order: free overlap plus one-potential Born terms.

    value = <f|i> + sum over term pairs of
            (i e1 / L^3) B(x_i -> x_f; A1) <y_f|y_i>
          + (i e2 / L^3) <x_f|x_i> B(y_i -> y_f; A2),

    with B the reduced sandwich of _born_sandwich.  The delta factors
    (total frequency, and energy for static potentials) are resolved inside
    B; their squared scales are recorded symbolically.  Both states must lie
    in the forward subspace tensor square.
    """
    if state_i.box_edge != state_f.box_edge:
        raise BoxMismatch("states quantized in different boxes")
    _require_s_plus(state_i, "incident")
    _require_s_plus(state_f, "final")
    pot1, pot2 = pot_pair
    e1, e2 = charges
    box3 = state_i.box_edge**3

    value = two_inner_product(state_f, state_i)
    for cf, fx, fy in state_f.terms:
        for ci, ix, iy in state_i.terms:
            weight = np.conj(cf) * ci
            ov_y = mode_overlap(fy, iy)
            if ov_y != 0.0:
                value += weight * (1j * e1 / box3) * _born_sandwich(ix, fx, pot1, mass_atol) * ov_y
            ov_x = mode_overlap(fx, ix)
            if ov_x != 0.0:
                value += weight * ov_x * (1j * e2 / box3) * _born_sandwich(iy, fy, pot2, mass_atol)
    factors = (("delta(Dnu_total)", "T_tau"),)
    if pot1.static or pot2.static:
        factors += (("2pi*delta(Dp0)", "T_0"),)
    return ReducedAmplitude(complex(value), factors)


# ---------------------------------------------------------------------------
# two-particle kernel conjugation

def two_kernel_matrix(which: int, momenta_pair, dx_pair, dtau: float, box_edge: float = TWO_PI):
    """16x16 tensor kernel for one (p_x, p_y) support pair, bare product form."""
    px, py = momenta_pair
    dx, dy = dx_pair
    kx = kernel_matrix(which, [px], dx, dtau, box_edge)
    ky = kernel_matrix(which, [py], dy, dtau, box_edge)
    return np.kron(kx, ky)


def two_conjugation_check(dx_pair, dtau: float, momenta_pairs, box_edge: float = TWO_PI) -> float:
    """Residual of (g0 (x) g0) K++^dag (g0 (x) g0) = K-- at reversed arguments.

    The identity holds for the bare tensor product of the two single-particle
    kernels, support-pair-wise; the max residual over pairs is returned.
    """
    dx, dy = (np.asarray(v, dtype=float) for v in dx_pair)
    g00 = np.kron(GAMMA0, GAMMA0)
    worst = 0.0
    for px, py in momenta_pairs:
        plus = two_kernel_matrix(+1, (px, py), (dx, dy), dtau, box_edge)
        minus = two_kernel_matrix(-1, (px, py), (-dx, -dy), -dtau, box_edge)
        resid = np.abs(g00 @ plus.conj().T @ g00 - minus).max()
        worst = max(worst, float(resid))
    return worst


# ---------------------------------------------------------------------------
# Bethe-Salpeter Born step

def bs_born_step(coeffs, pair_basis, v_matrix, mass: float, atol: float = 1e-12):
    """One iteration of the integral term: combined kernel times V times Psi.

    In the joint mode basis the mass-transformed combined free kernel is
    diagonal with entries -2/(nu_k - mass) on forward-subspace pairs
    (nu_k the total tau frequency) and zero elsewhere; repeated application
    of D V generates the Born series.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    v_matrix = np.asarray(v_matrix, dtype=complex)
    n = len(pair_basis)
    if coeffs.shape != (n,) or v_matrix.shape != (n, n):
        raise GridIncompatible("coefficient vector, basis and kernel sizes disagree")
    driven = v_matrix @ coeffs
    out = np.zeros(n, dtype=complex)
    for k, (mx, my) in enumerate(pair_basis):
        if classify_subspace(mx) is not Subspace.S_PLUS or classify_subspace(my) is not Subspace.S_PLUS:
            continue
        nu = mx.frequency + my.frequency
        if abs(nu - mass) < atol * max(1.0, abs(mass)):
            raise OnMassShell("combined kernel pole at the requested mass")
        out[k] = -2.0 / (nu - mass) * driven[k]
    return out


def bs_power_iteration(pair_basis, v_matrix, mass: float, iterations: int = 20, seed: int = 0):
    """Dominant eigenvalue/vector of the Born-step operator by power iteration."""
    rng = np.random.default_rng(seed)
    n = len(pair_basis)
    vec = rng.normal(size=n) + 1j * rng.normal(size=n)
    vec /= np.linalg.norm(vec)
    eig = 0.0j
    for _ in range(iterations):
        nxt = bs_born_step(vec, pair_basis, v_matrix, mass)
        norm = np.linalg.norm(nxt)
        if norm == 0.0:
            return 0.0j, nxt
        eig = np.vdot(vec, nxt) / np.vdot(vec, vec)
        vec = nxt / norm
    return eig, vec


# ---------------------------------------------------------------------------
# mutual scattering through a once-iterated sourced potential

def potential_from_transition(mode_in: Mode, mode_out: Mode, charge: float,
                              atol: float = 1e-9) -> ExternalPotential:
    """Potential sourced by the transition current of one particle.

    The current component able to drive a partner transition with opposite
    momentum transfer sits at k0 = p_in - p_out; its amplitude is
    charge * jmu / k0^2 with jmu = bar(w_out) gamma^mu w_in, plus the
    hermitian partner node at -k0.
    """
    k0 = mode_in.p - mode_out.p
    kk = float(minkowski_dot(k0, k0))
    if abs(kk) < atol:
        raise OnLightCone("transition momentum transfer is lightlike")
    jmu = np.einsum(
        "i,mij,j->m", bar(mode_out.amplitude_spinor()), _GAMMA_STACK, mode_in.amplitude_spinor()
    )
    node = charge * jmu / kk

    def fourier(dp):
        dp = np.asarray(dp, dtype=float)
        if np.allclose(dp, k0, atol=atol):
            return node.copy()
        if np.allclose(dp, -k0, atol=atol):
            return np.conj(node)
        return np.zeros(4, dtype=complex)

    return ExternalPotential(fourier=fourier, static=False,
                             params={"charge": charge, "node": k0})


def mutual_scattering_amplitude(in1: Mode, out1: Mode, in2: Mode, out2: Mode,
                                charge1: float = ELEMENTARY_CHARGE,
                                charge2: float = ELEMENTARY_CHARGE,
                                box_edge: float = TWO_PI) -> complex:
    """First-order amplitude for particle 1 scattering off the field of 2.

    A single source iteration: particle 2's transition current sources a
    potential through the photon kernel, and particle 1 scatters off it at
    momentum transfer Dp1.  Exchanging the roles of the particles yields the
    same number, which is the mutuality property under test; the contraction
    symmetry is not assumed here.
    """
    pot = potential_from_transition(in2, out2, charge2)
    dp1 = out1.p - in1.p
    a_tilde = pot.fourier(dp1)
    sandwich = bar(out1.amplitude_spinor()) @ slash(a_tilde) @ in1.amplitude_spinor()
    return complex(1j * charge1 / box_edge**3 * sandwich)


# ---------------------------------------------------------------------------
# serialization

def two_state_to_json(state: TwoParticleState) -> str:
    def mode_record(mode: Mode):
        return {
            "p": [float(c) for c in mode.p],
            "branch": mode.branch,
            "a": [[float(z.real), float(z.imag)] for z in mode.a],
        }

    payload = {
        "exchange": state.exchange,
        "L": state.box_edge,
        "pairs": [
            {"c": [float(c.real), float(c.imag)], "x": mode_record(mx), "y": mode_record(my)}
            for c, mx, my in state.terms
        ],
    }
    return json.dumps(payload)


def two_state_from_json(text: str) -> TwoParticleState:
    payload = json.loads(text)

    def mode_from(rec):
        a = np.array([complex(re, im) for re, im in rec["a"]])
        return Mode(np.array(rec["p"], dtype=float), int(rec["branch"]), a)

    terms = tuple(
        (complex(pair["c"][0], pair["c"][1]), mode_from(pair["x"]), mode_from(pair["y"]))
        for pair in payload["pairs"]
    )
    return TwoParticleState(terms, payload["exchange"], float(payload["L"]))
