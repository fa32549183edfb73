"""Named residual suites behind ``paradirac verify``.

Each suite draws its inputs from a seeded generator and returns a list of
named checks with measured residuals, so a run is reproducible bit for bit
for a given seed.  Residuals are max-norm deviations of exact algebraic
identities; default tolerances are set per suite a decade or two above the
observed machine-precision plateau.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .algebra import (
    ELEMENTARY_CHARGE,
    GAMMA5,
    I2,
    I4,
    METRIC,
    TWO_PI,
    bar,
    dirac_adjoint,
    four_vector,
    gamma,
    minkowski_dot,
    slash,
)
from .propagate import (
    elastic_shell,
    free_evolve,
    influence_conjugation_check,
    moller_first_order,
)
from .radiative import (
    FieldConfiguration,
    anomaly_rhs,
    axial_divergence_tree,
    epsilon_tensor,
    vector_divergence_check,
)
from .sampling import (
    random_mode,
    random_spin_coefficients,
    random_state,
    random_timelike_momentum,
    random_unit_vector,
)
from .scattering import coulomb_potential, s1_amplitude, zero_potential
from .spinors import (
    boost_spin,
    branch_block,
    decompose_in_block,
    lambda_u,
    lambda_v,
    spin_projector,
    u_block,
    v_block,
)
from .states import (
    Mode,
    SpectralState,
    Subspace,
    bilinear_concatenated,
    concatenated_current,
    current_divergence_fd,
    inner_product,
    single_mode_state,
)
from .twobody import (
    TwoParticleState,
    antisymmetrize,
    bs_born_step,
    bs_power_iteration,
    exchange_residual,
    mutual_scattering_amplitude,
    permute_labels,
    s2_first_order,
    symmetrize,
    two_conjugation_check,
    two_currents,
    two_evolve,
    two_inner_product,
)

SUITE_NAMES = ("algebra", "spinors", "propagate", "twobody", "currents")

DEFAULT_TOLS = {
    "algebra": 1e-14,
    "spinors": 1e-12,
    "propagate": 1e-13,
    "twobody": 1e-12,
    "currents": 1e-10,
}


@dataclass(frozen=True)
class Check:
    """One named identity with its measured residual and pass threshold."""

    name: str
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol


def _max_abs(arr) -> float:
    return float(np.abs(np.asarray(arr)).max())


# ---------------------------------------------------------------------------
# algebra


def suite_algebra(rng, tol: float) -> list[Check]:
    checks = []
    for mu in range(4):
        for nu in range(4):
            anti = gamma(mu) @ gamma(nu) + gamma(nu) @ gamma(mu)
            resid = _max_abs(anti + 2.0 * METRIC[mu, nu] * I4)
            checks.append(Check(f"anticommutator ({mu},{nu}) + 2 g^{mu}{nu}", resid, tol))
    for mu in range(4):
        resid = _max_abs(GAMMA5 @ gamma(mu) + gamma(mu) @ GAMMA5)
        checks.append(Check(f"gamma5 anticommutes with gamma^{mu}", resid, tol))
    for mu in range(4):
        for nu in range(4):
            tr = np.trace(gamma(mu) @ gamma(nu))
            resid = abs(tr + 4.0 * METRIC[mu, nu])
            checks.append(Check(f"trace pair ({mu},{nu}) + 4 g^{mu}{nu}", resid, tol))
    worst_sq = 0.0
    worst_adj = 0.0
    for _ in range(8):
        p = random_timelike_momentum(rng)
        sp = slash(p)
        worst_sq = max(worst_sq, _max_abs(sp @ sp + minkowski_dot(p, p) * I4))
        worst_adj = max(worst_adj, _max_abs(dirac_adjoint(sp) - sp))
    checks.append(Check("slash(p)^2 + p.p (8 random timelike p)", worst_sq, tol))
    checks.append(Check("slash(p) self-adjoint under bar (8 draws)", worst_adj, tol))
    resid = _max_abs(GAMMA5 @ GAMMA5 - I4)
    checks.append(Check("gamma5 squares to identity", resid, tol))
    return checks


# ---------------------------------------------------------------------------
# spinors


def suite_spinors(rng, tol: float, count: int = 1000) -> list[Check]:
    names = (
        "u-block orthonormality ubar u - 1",
        "v-block orthonormality vbar v + 1",
        "cross orthogonality ubar v",
        "cross orthogonality vbar u",
        "projector from block u ubar - P_u",
        "projector from block v vbar + P_v",
        "projector completeness P_u + P_v - 1",
        "frequency relation slash(p) u + phi m u",
        "frequency relation slash(p) v - phi m v",
        "branch decomposition roundtrip",
        "spin projector idempotence",
        "spin projector commutes with P_u",
        "spin trace normalization",
    )
    worst = dict.fromkeys(names, 0.0)

    def bump(name, value):
        worst[name] = max(worst[name], value)

    for k in range(count):
        phi = 1 if k % 2 == 0 else -1
        p = random_timelike_momentum(rng, phi=phi)
        m = np.sqrt(-minkowski_dot(p, p))
        ub, vb = u_block(p), v_block(p)
        bump(names[0], _max_abs(bar(ub) @ ub - I2))
        bump(names[1], _max_abs(bar(vb) @ vb + I2))
        bump(names[2], _max_abs(bar(ub) @ vb))
        bump(names[3], _max_abs(bar(vb) @ ub))
        bump(names[4], _max_abs(ub @ bar(ub) - lambda_u(p)))
        bump(names[5], _max_abs(vb @ bar(vb) + lambda_v(p)))
        bump(names[6], _max_abs(lambda_u(p) + lambda_v(p) - I4))
        bump(names[7], _max_abs(slash(p) @ ub + phi * m * ub))
        bump(names[8], _max_abs(slash(p) @ vb - phi * m * vb))
        a_u = random_spin_coefficients(rng)
        a_v = random_spin_coefficients(rng)
        w = ub @ a_u + 0.6 * vb @ a_v
        rebuilt = ub @ (bar(ub) @ w) + vb @ (-(bar(vb) @ w))
        pure = branch_block(p, +1) @ decompose_in_block(p, +1, ub @ a_u)
        bump(names[9], max(_max_abs(rebuilt - w), _max_abs(pure - ub @ a_u)))
        if k % 10 == 0:
            s = boost_spin(random_unit_vector(rng), p)
            sig = spin_projector(s)
            bump(names[10], _max_abs(sig @ sig - sig))
            bump(names[11], _max_abs(sig @ lambda_u(p) - lambda_u(p) @ sig))
            bump(names[12], abs(np.trace(sig @ lambda_u(p)) - 1.0))
    return [Check(name, worst[name], tol) for name in names]


# ---------------------------------------------------------------------------
# propagation


def suite_propagate(rng, tol: float) -> list[Check]:
    checks = []
    coeff = 0.8 - 0.3j
    for which, direction, branch, phi in itertools.product((1, -1), repeat=4):
        dtau = 0.7 * direction
        mode = random_mode(rng, branch=branch, phi=phi, p_scale=0.7)
        state = single_mode_state(mode, coeff=coeff)
        evolved = free_evolve(state, 0.0, dtau, which)
        survives = branch * phi == which * direction
        if survives:
            expected = coeff * direction * np.exp(1j * mode.frequency * dtau)
            resid = 1.0 if evolved.is_empty else abs(evolved.terms[0][0] - expected)
            verdict = "keeps"
        else:
            resid = 0.0 if evolved.is_empty else abs(evolved.terms[0][0])
            verdict = "drops"
        label = (
            f"filter w={which:+d} dt={direction:+d} b={branch:+d} "
            f"phi={phi:+d} {verdict}"
        )
        checks.append(Check(label, resid, tol))

    for which, direction in ((1, 1), (-1, -1)):
        state = random_state(rng, n_modes=6)
        taus = np.cumsum(np.concatenate(([0.0], 0.1 + rng.random(5)))) * direction
        chained = state
        for t0, t1 in zip(taus[:-1], taus[1:]):
            chained = free_evolve(chained, t0, t1, which)
        direct = free_evolve(state, taus[0], taus[-1], which)
        resid = _max_abs(
            [c1 - c2 for (c1, _), (c2, _) in zip(chained.terms, direct.terms)]
        ) if chained.terms else (0.0 if direct.is_empty else 1.0)
        checks.append(Check(f"semigroup chain of 5 (w={which:+d})", resid, tol))

    state = random_state(rng, n_modes=6)
    wobble = free_evolve(free_evolve(state, 0.0, 1.0, 1), 1.0, 0.5, 1)
    checks.append(Check("non-monotone chain empties", float(len(wobble.terms)), tol))

    momenta = [random_timelike_momentum(rng) for _ in range(5)]
    dx = rng.normal(size=4)
    resid = influence_conjugation_check(dx, 0.9, momenta)
    checks.append(Check("kernel conjugation g0 K+^dag g0 = K- rev", resid, tol))

    m = 1.0
    p_in = four_vector(np.hypot(m, 1.0), 0.0, 0.0, 1.0)
    incident = Mode(p=p_in, branch=1, a=random_spin_coefficients(rng))
    pot = coulomb_potential(Z=2.0)
    outs = elastic_shell(p_in, [0.5, 1.4], n_azimuth=3)
    scattered = moller_first_order(incident, pot, outs)
    worst = 0.0
    e3 = ELEMENTARY_CHARGE / TWO_PI**3
    for c, mode in scattered.terms:
        if same_vec(mode.p, p_in):
            continue
        for k, a_f in enumerate(np.eye(2)):
            s1 = s1_amplitude(p_in, incident.a, mode.p, a_f, pot)
            worst = max(worst, abs(c * mode.a[k] - 1j * e3 * s1.value))
    checks.append(Check("first Born node matches reduced amplitude", worst, tol))

    backward = Mode(p=p_in, branch=-1, a=incident.a)
    silent = moller_first_order(backward, pot, outs)
    checks.append(Check("backward incident mode yields no nodes", float(len(silent.terms)), tol))
    return checks


def same_vec(p, q, atol=1e-12):
    return bool(np.allclose(p, q, atol=atol))


# ---------------------------------------------------------------------------
# two-body


def suite_twobody(rng, tol: float) -> list[Check]:
    checks = []
    mode = random_mode(rng, branch=1, phi=1)
    pauli = antisymmetrize(mode, mode)
    checks.append(Check("identical-mode antisymmetrization empties", float(len(pauli.terms)), tol))

    m1 = random_mode(rng, branch=1, phi=1)
    m2 = random_mode(rng, branch=1, phi=1)
    anti = antisymmetrize(m1, m2)
    sym = symmetrize(m1, m2)
    checks.append(Check("fermionic exchange antisymmetry", exchange_residual(anti), tol))
    checks.append(Check("bosonic exchange symmetry", exchange_residual(sym), tol))

    f1 = random_mode(rng, branch=1, phi=1)
    f2 = random_mode(rng, branch=1, phi=1)
    final = antisymmetrize(f1, f2)
    pots = (coulomb_potential(Z=1.0), coulomb_potential(Z=3.0))
    plain = s2_first_order(anti, final, pots).value
    flipped = s2_first_order(permute_labels(anti), final, pots).value
    checks.append(Check("label permutation flips the amplitude sign", abs(plain + flipped), tol))

    shift = 0.83
    anti_s = two_evolve(anti, 0.0, shift, 1)
    final_s = two_evolve(final, 0.0, shift, 1)
    shifted = s2_first_order(anti_s, final_s, pots).value
    checks.append(Check("amplitude invariant under common tau shift", abs(shifted - plain), tol))

    ix, iy = random_mode(rng, branch=1, phi=1), random_mode(rng, branch=1, phi=1)
    fx = Mode(p=elastic_shell(ix.p, [0.9], n_azimuth=1)[0], branch=1,
              a=random_spin_coefficients(rng))
    prod_i = TwoParticleState(terms=((1.0, ix, iy),), exchange="none")
    prod_f = TwoParticleState(terms=((1.0, fx, iy),), exchange="none")
    amp = s2_first_order(prod_i, prod_f, (pots[0], zero_potential())).value
    s1 = s1_amplitude(ix.p, ix.a, fx.p, fx.a, pots[0])
    partner = np.vdot(iy.a, iy.a)
    target = 1j * ELEMENTARY_CHARGE / TWO_PI**3 * s1.value * partner
    checks.append(Check("separable amplitude factorizes", abs(amp - target), tol))

    basis = []
    for _ in range(5):
        basis.append((random_mode(rng, branch=1, phi=1), random_mode(rng, branch=1, phi=1)))
    basis.append((random_mode(rng, branch=-1, phi=1), random_mode(rng, branch=1, phi=1)))
    g = rng.normal(size=6) + 1j * rng.normal(size=6)
    lam = 0.37 - 0.12j
    v_matrix = lam * np.outer(g, g.conj())
    nu = np.array([mx.frequency + my.frequency for mx, my in basis])
    dvec = np.where([bx.branch * np.sign(bx.p[0]) > 0 and by.branch * np.sign(by.p[0]) > 0
                     for bx, by in basis], -2.0 / (nu - 1.3), 0.0)
    ratio = lam * np.vdot(g, dvec * g)
    psi = rng.normal(size=6) + 1j * rng.normal(size=6)
    k1 = bs_born_step(psi, basis, v_matrix, 1.3)
    k2 = bs_born_step(k1, basis, v_matrix, 1.3)
    k3 = bs_born_step(k2, basis, v_matrix, 1.3)
    scale = _max_abs(k1)
    checks.append(Check("rank-1 Born series is geometric (step 2)",
                        _max_abs(k2 - ratio * k1) / scale, tol))
    checks.append(Check("rank-1 Born series is geometric (step 3)",
                        _max_abs(k3 - ratio**2 * k1) / scale, tol))
    checks.append(Check("kernel annihilates backward pairs", abs(k1[-1]), tol))
    eig, _ = bs_power_iteration(basis, v_matrix, 1.3)
    checks.append(Check("power iteration finds the geometric ratio",
                        abs(eig - ratio) / abs(ratio), tol))

    pairs = [
        (random_timelike_momentum(rng), random_timelike_momentum(rng))
        for _ in range(3)
    ]
    resid = two_conjugation_check((rng.normal(size=4), rng.normal(size=4)), 0.6, pairs)
    checks.append(Check("two-body kernel conjugation", resid, tol))

    in1 = random_mode(rng, branch=1, phi=1, p_scale=0.4)
    in2 = random_mode(rng, mass=2.0, branch=1, phi=1, p_scale=0.3)
    out1 = Mode(p=elastic_shell(in1.p, [0.8], n_azimuth=1)[0], branch=1,
                a=random_spin_coefficients(rng))
    out2 = Mode(p=in2.p + (in1.p - out1.p), branch=1, a=random_spin_coefficients(rng))
    amp12 = mutual_scattering_amplitude(in1, out1, in2, out2, 0.4, 0.9)
    amp21 = mutual_scattering_amplitude(in2, out2, in1, out1, 0.9, 0.4)
    scale = max(abs(amp12), 1e-300)
    checks.append(Check("mutual scattering is symmetric", abs(amp12 - amp21) / scale, tol))

    norm = two_inner_product(anti, anti)
    target = np.vdot(m1.a, m1.a) * np.vdot(m2.a, m2.a)
    checks.append(Check("antisymmetrized norm matches factor norms",
                        abs(norm - target), tol))
    return checks


# ---------------------------------------------------------------------------
# currents


def suite_currents(rng, tol: float) -> list[Check]:
    checks = []
    points = rng.normal(size=(12, 4))

    state = random_state(rng, n_modes=8, mass=1.0)
    checks.append(Check("vector current divergence (spectral)",
                        vector_divergence_check(state, points), tol))

    gentle = random_state(rng, n_modes=6, mass=1.0, p_scale=0.5)
    fd = current_divergence_fd(gentle, points[:4], step=2e-3)
    checks.append(Check("vector current divergence (finite difference)",
                        _max_abs(fd), tol))

    imag_worst = 0.0
    for mu in range(4):
        vals = bilinear_concatenated(state, gamma(mu), points)
        imag_worst = max(imag_worst, _max_abs(vals.imag))
    checks.append(Check("concatenated current reality", imag_worst, tol))

    minus = random_state(rng, n_modes=8, mass=1.0, subspace=Subspace.S_MINUS)
    lhs, rhs = axial_divergence_tree(minus, 1.0, points)
    checks.append(Check("axial divergence identity on backward states",
                        _max_abs(lhs - rhs), tol))
    plus = random_state(rng, n_modes=8, mass=1.0, subspace=Subspace.S_PLUS)
    lhs_p, rhs_p = axial_divergence_tree(plus, 1.0, points)
    checks.append(Check("axial divergence sign reversal on forward states",
                        _max_abs(lhs_p + rhs_p), tol))

    e_vec = rng.normal(size=3)
    b_vec = rng.normal(size=3)
    field = FieldConfiguration.from_fields(e_vec, b_vec)
    low = field.lowered()
    eps = epsilon_tensor()
    charge = ELEMENTARY_CHARGE
    oracle = 0.0
    for perm in itertools.permutations(range(4)):
        mu, nu, rho, sig = perm
        oracle += eps[mu, nu, rho, sig] * low[..., mu, nu] * low[..., rho, sig]
    oracle *= -(charge**2) / (2.0 * TWO_PI) ** 2
    resid = abs(float(anomaly_rhs(field, charge)) - float(oracle))
    checks.append(Check("anomaly contraction vs permutation oracle", resid, tol))

    analytic = charge**2 * float(np.dot(e_vec, b_vec)) / (2.0 * np.pi**2)
    checks.append(Check("anomaly contraction vs E.B closed form",
                        abs(float(anomaly_rhs(field, charge)) - analytic), tol))

    mx = random_mode(rng, branch=1, phi=1, p_scale=0.5)
    my = random_mode(rng, branch=1, phi=1, p_scale=0.5)
    prod = TwoParticleState(terms=((0.7 + 0.2j, mx, my),), exchange="none")
    j1, j2 = two_currents(prod, points[:4])
    single_x = concatenated_current(single_mode_state(mx, coeff=abs(0.7 + 0.2j)), points[:4])
    weight_y = float(np.vdot(my.a, my.a).real)
    resid = _max_abs(j1.values - single_x.values * weight_y)
    checks.append(Check("marginal current reduces on product states", resid, tol))
    return checks


# ---------------------------------------------------------------------------
# orchestration


_SUITE_FN = {
    "algebra": suite_algebra,
    "spinors": suite_spinors,
    "propagate": suite_propagate,
    "twobody": suite_twobody,
    "currents": suite_currents,
}


def run_suite(name: str, seed: int = 0, tol: float = None) -> list[Check]:
    """Run one named suite with a seed-derived generator."""
    if name not in _SUITE_FN:
        raise KeyError(f"unknown suite {name!r}")
    rng = np.random.default_rng([seed, SUITE_NAMES.index(name)])
    use_tol = DEFAULT_TOLS[name] if tol is None else tol
    return _SUITE_FN[name](rng, use_tol)


def run_suites(names, seed: int = 0, tol: float = None):
    """Run several suites; returns [(suite, [Check, ...]), ...] in order."""
    return [(name, run_suite(name, seed=seed, tol=tol)) for name in names]


def format_report(results) -> str:
    """Fixed-width text report; deterministic for a given seed and flags."""
    lines = []
    all_ok = True
    for suite, checks in results:
        for check in checks:
            status = "pass" if check.passed else "FAIL"
            all_ok = all_ok and check.passed
            lines.append(
                f"[{suite}] {check.name:<52s} {check.residual:11.3e}"
                f"  tol {check.tol:8.1e}  {status}"
            )
        n_pass = sum(1 for c in checks if c.passed)
        lines.append(f"[{suite}] {n_pass}/{len(checks)} checks passed")
    lines.append("verify: PASS" if all_ok else "verify: FAIL")
    return "\n".join(lines) + "\n"


def all_passed(results) -> bool:
    return all(check.passed for _, checks in results for check in checks)
