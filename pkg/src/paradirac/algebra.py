"""Minkowski geometry and the Dirac Clifford algebra in a fixed representation.

Conventions used throughout the package:

* metric g = diag(-1, +1, +1, +1); indices are raised and lowered with g,
* natural units hbar = c = 1; energies and momenta in MeV, lengths in 1/MeV,
* standard Dirac representation,
      gamma^0 = diag(1, 1, -1, -1),
      gamma^j = [[0, sigma_j], [-sigma_j, 0]],
      gamma^5 = i gamma^0 gamma^1 gamma^2 gamma^3 = [[0, I2], [I2, 0]],
* with this metric signature the Clifford relation reads
      {gamma^mu, gamma^nu} = -2 g^{mu nu} I4,
  so slash(p) @ slash(p) = -(p.p) I4 and a timelike p gives +m^2 I4.

Four-vectors are plain numpy arrays of shape (4,) holding contravariant
components.  Spinor matrices are complex (4, 4) arrays, bispinors complex (4,)
columns.  The module also carries the numeric constants shared by the rest of
the package.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import SuperluminalMomentum, ZeroEnergy

# default absolute tolerance for algebraic identities and kinematic checks
ATOL_ALGEBRA = 1e-12
# default relative tolerance for quadrature-derived quantities
RTOL_QUADRATURE = 1e-9

# CODATA-style constants, MeV and dimensionless
ELECTRON_MASS = 0.51099895
FINE_STRUCTURE = 1.0 / 137.035999
ELEMENTARY_CHARGE = math.sqrt(4.0 * math.pi * FINE_STRUCTURE)

# 1 MeV expressed in MHz (E / h)
MEV_TO_MHZ = 1.602176634e-13 / 6.62607015e-34 * 1e-6

TWO_PI = 2.0 * math.pi

METRIC = np.diag([-1.0, 1.0, 1.0, 1.0])
METRIC.setflags(write=False)

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)

SIGMA = np.array(
    [
        [[0.0, 1.0], [1.0, 0.0]],
        [[0.0, -1.0j], [1.0j, 0.0]],
        [[1.0, 0.0], [0.0, -1.0]],
    ],
    dtype=complex,
)

_Z2 = np.zeros((2, 2), dtype=complex)

GAMMA0 = np.block([[I2, _Z2], [_Z2, -I2]])
GAMMA1 = np.block([[_Z2, SIGMA[0]], [-SIGMA[0], _Z2]])
GAMMA2 = np.block([[_Z2, SIGMA[1]], [-SIGMA[1], _Z2]])
GAMMA3 = np.block([[_Z2, SIGMA[2]], [-SIGMA[2], _Z2]])
GAMMA5 = 1j * GAMMA0 @ GAMMA1 @ GAMMA2 @ GAMMA3

_GAMMAS = (GAMMA0, GAMMA1, GAMMA2, GAMMA3)
for _g in (*_GAMMAS, GAMMA5, I2, I4, SIGMA):
    _g.setflags(write=False)


def four_vector(t, x=0.0, y=0.0, z=0.0):
    """Pack contravariant components into a float four-vector array."""
    return np.array([t, x, y, z], dtype=float)


def minkowski_dot(a, b):
    """g_{mu nu} a^mu b^nu = -a0 b0 + a.b for the (-,+,+,+) metric."""
    a = np.asarray(a)
    b = np.asarray(b)
    return -a[..., 0] * b[..., 0] + np.sum(a[..., 1:] * b[..., 1:], axis=-1)


def lower_index(p):
    """Covariant components p_mu = g_{mu nu} p^nu."""
    p = np.asarray(p)
    out = p.copy().astype(p.dtype if np.iscomplexobj(p) else float)
    out[..., 0] = -out[..., 0]
    return out


def mass_of(p, atol=None):
    """Rest mass sqrt(-p.p) of a subluminal four-momentum.

    Raises ZeroEnergy for p0 = 0 and SuperluminalMomentum when p.p > 0 beyond
    tolerance.  An exactly lightlike p with p0 != 0 returns 0.0.
    """
    p = np.asarray(p, dtype=float)
    if p[0] == 0.0:
        raise ZeroEnergy("four-momentum has p0 = 0; no rest frame branch")
    pp = float(minkowski_dot(p, p))
    scale = max(1.0, float(np.dot(p, p)))
    tol = (ATOL_ALGEBRA if atol is None else atol) * scale
    if pp > tol:
        raise SuperluminalMomentum(f"p.p = {pp:g} > 0; momentum is spacelike")
    return math.sqrt(max(-pp, 0.0))


def energy_sign(p):
    """sign(p0), written phi_p below; the branch label of the energy."""
    p = np.asarray(p, dtype=float)
    if p[0] == 0.0:
        raise ZeroEnergy("four-momentum has p0 = 0; energy sign undefined")
    return 1.0 if p[0] > 0.0 else -1.0


def gamma(index):
    """Dirac matrix gamma^index for index in {0, 1, 2, 3} or 'five' (also 5).

    The returned arrays are read-only module constants.
    """
    if index in (5, "five", "5"):
        return GAMMA5
    if index in (0, 1, 2, 3):
        return _GAMMAS[index]
    raise ValueError(f"no gamma matrix with index {index!r}")


def slash(p):
    """Contraction gamma^mu p_mu (index lowered with the metric).

    Accepts complex components, e.g. Fourier transforms of potentials.
    For real momenta slash(p) @ slash(p) = -(p.p) I4.
    """
    p = np.asarray(p)
    return -p[0] * GAMMA0 + p[1] * GAMMA1 + p[2] * GAMMA2 + p[3] * GAMMA3


def dirac_adjoint(m):
    """Adjoint with respect to the spinor metric: gamma^0 M^dagger gamma^0."""
    m = np.asarray(m)
    return GAMMA0 @ m.conj().T @ GAMMA0


def bar(psi):
    """Row adjoint psi^dagger gamma^0 of a bispinor column or a (4, k) block."""
    psi = np.asarray(psi)
    return psi.conj().T @ GAMMA0


def pauli_dot(v3):
    """2x2 matrix v . sigma for a spatial 3-vector."""
    v3 = np.asarray(v3)
    return v3[0] * SIGMA[0] + v3[1] * SIGMA[1] + v3[2] * SIGMA[2]
