"""Momentum-block spinors: orthonormality, projectors, spin machinery."""

import numpy as np
import pytest

from paradirac.algebra import I2, I4, GAMMA5, bar, four_vector, minkowski_dot, slash
from paradirac.errors import NonUnitSpin
from paradirac.sampling import (
    random_spin_coefficients,
    random_timelike_momentum,
    random_unit_vector,
)
from paradirac.spinors import (
    boost_spin,
    branch_block,
    branch_projector,
    chirality_projector,
    decompose_in_block,
    helicity_operator,
    lambda_u,
    lambda_v,
    spin_projector,
    u_block,
    v_block,
)


def _draws(rng, count=60):
    for k in range(count):
        yield random_timelike_momentum(rng, phi=1 if k % 2 == 0 else -1)


class TestOrthonormality:
    def test_u_and_v_blocks(self, rng):
        for p in _draws(rng):
            ub, vb = u_block(p), v_block(p)
            assert np.abs(bar(ub) @ ub - I2).max() <= 1e-12
            assert np.abs(bar(vb) @ vb + I2).max() <= 1e-12
            assert np.abs(bar(ub) @ vb).max() <= 1e-12
            assert np.abs(bar(vb) @ ub).max() <= 1e-12

    def test_ultrarelativistic_stability(self):
        # cancellation-prone regime: |p| huge against the rest mass
        p = four_vector(np.hypot(1.0, 3e7), 3e7, 0.0, 0.0)
        ub, vb = u_block(p), v_block(p)
        assert np.abs(bar(ub) @ ub - I2).max() <= 1e-9
        assert np.abs(bar(vb) @ vb + I2).max() <= 1e-9

    def test_rest_frame_blocks(self):
        p = four_vector(1.7, 0.0, 0.0, 0.0)
        ub, vb = u_block(p), v_block(p)
        assert np.abs(ub[:2] - I2).max() <= 1e-15 and np.abs(ub[2:]).max() <= 1e-15
        assert np.abs(vb[2:] - I2).max() <= 1e-15 and np.abs(vb[:2]).max() <= 1e-15


class TestProjectors:
    def test_outer_products(self, rng):
        for p in _draws(rng):
            ub, vb = u_block(p), v_block(p)
            assert np.abs(ub @ bar(ub) - lambda_u(p)).max() <= 1e-12
            assert np.abs(vb @ bar(vb) + lambda_v(p)).max() <= 1e-12

    def test_completeness_and_idempotence(self, rng):
        for p in _draws(rng, count=20):
            lu, lv = lambda_u(p), lambda_v(p)
            assert np.abs(lu + lv - I4).max() <= 1e-12
            assert np.abs(lu @ lu - lu).max() <= 1e-12
            assert np.abs(lv @ lv - lv).max() <= 1e-12
            assert np.abs(lu @ lv).max() <= 1e-12

    def test_closed_form(self, rng):
        for p in _draws(rng, count=20):
            m = np.sqrt(-minkowski_dot(p, p))
            phi = np.sign(p[0])
            assert np.abs(lambda_u(p) - (m * I4 - phi * slash(p)) / (2 * m)).max() <= 1e-12

    def test_frequency_eigenrelation(self, rng):
        # slash(p) w = -nu w with nu = branch * phi * m, uniformly in branch
        for p in _draws(rng, count=20):
            m = np.sqrt(-minkowski_dot(p, p))
            phi = np.sign(p[0])
            for branch in (1, -1):
                blk = branch_block(p, branch)
                nu = branch * phi * m
                assert np.abs(slash(p) @ blk + nu * blk).max() <= 1e-11 * max(1.0, m)


class TestBranchDecomposition:
    def test_roundtrip_pure_branch(self, rng):
        for p in _draws(rng, count=10):
            for branch in (1, -1):
                a = random_spin_coefficients(rng)
                w = branch_block(p, branch) @ a
                assert np.abs(decompose_in_block(p, branch, w) - a).max() <= 1e-12

    def test_rejects_mixed_spinor(self, rng):
        p = random_timelike_momentum(rng, phi=1)
        w = u_block(p) @ np.array([1.0, 0.0]) + v_block(p) @ np.array([0.0, 1.0])
        with pytest.raises(ValueError):
            decompose_in_block(p, +1, w)

    def test_branch_dispatch(self, rng):
        p = random_timelike_momentum(rng)
        assert np.array_equal(branch_block(p, 1), u_block(p))
        assert np.array_equal(branch_block(p, -1), v_block(p))
        assert np.array_equal(branch_projector(p, 1), lambda_u(p))
        assert np.array_equal(branch_projector(p, -1), lambda_v(p))
        with pytest.raises(ValueError):
            branch_block(p, 0)


class TestSpinMachinery:
    def test_boost_spin_constraints(self, rng):
        for p in _draws(rng, count=20):
            s = boost_spin(random_unit_vector(rng), p)
            assert abs(minkowski_dot(p, s)) <= 1e-10 * max(1.0, float(np.dot(p, p)))
            assert abs(minkowski_dot(s, s) - 1.0) <= 1e-10 * max(1.0, float(np.dot(s, s)))

    def test_boost_spin_at_rest(self):
        p = four_vector(0.9, 0.0, 0.0, 0.0)
        n = np.array([0.0, 0.6, 0.8])
        s = boost_spin(n, p)
        assert abs(s[0]) <= 1e-15
        assert np.abs(s[1:] - n).max() <= 1e-15

    def test_spin_projector_properties(self, rng):
        for p in _draws(rng, count=15):
            s = boost_spin(random_unit_vector(rng), p)
            sig = spin_projector(s)
            assert np.abs(sig @ sig - sig).max() <= 1e-12
            assert np.abs(sig @ lambda_u(p) - lambda_u(p) @ sig).max() <= 1e-12
            assert abs(np.trace(sig @ lambda_u(p)) - 1.0) <= 1e-12

    def test_spin_projector_extreme_boost(self):
        # the unit-norm gate must not trip on cancellation at high energy,
        # and idempotence holds to machine precision relative to the entry
        # scale (the absolute residual grows as |s|^2 by conditioning)
        p = four_vector(np.hypot(1.0, 4e6), 0.0, 4e6, 0.0)
        s = boost_spin(np.array([0.0, 1.0, 0.0]), p)
        sig = spin_projector(s)
        scale = max(1.0, float(np.abs(sig).max()) ** 2)
        assert np.abs(sig @ sig - sig).max() <= 1e-12 * scale

    def test_spin_projector_rejects_non_unit(self):
        with pytest.raises(NonUnitSpin):
            spin_projector(four_vector(0.0, 0.5, 0.0, 0.0))

    def test_chirality_projectors(self):
        pl, pr = chirality_projector(-1), chirality_projector(+1)
        assert np.abs(pl + pr - I4).max() == 0.0
        assert np.abs(pl @ pl - pl).max() <= 1e-15
        assert np.abs(pl @ pr).max() <= 1e-15
        assert np.abs(GAMMA5 @ pr - pr).max() <= 1e-15
        assert np.abs(GAMMA5 @ pl + pl).max() <= 1e-15

    def test_helicity_operator(self, rng):
        for p in _draws(rng, count=10):
            h = helicity_operator(p)
            assert np.abs(h @ h - I4).max() <= 1e-12
            assert np.abs(h @ lambda_u(p) - lambda_u(p) @ h).max() <= 1e-12
            assert np.abs(h @ GAMMA5 - GAMMA5 @ h).max() <= 1e-12
