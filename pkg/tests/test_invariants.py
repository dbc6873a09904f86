import math

import numpy as np
import pytest

from spinaxes.axes import decompose
from spinaxes.errors import DomainError
from spinaxes.invariants import (
    enumerate_invariants,
    invariant_count,
    spin1_named,
    verify_invariance,
)
from spinaxes.states import ChannelParams, channel_mixed, pure_two_spinor, random_density_matrix
from spinaxes.tensors import DensityMatrix, to_tensor

SQRT3 = math.sqrt(3.0)


def pipeline(rho):
    return enumerate_invariants(decompose(to_tensor(rho)))


class TestInvariantCount:
    def test_known_values(self):
        assert invariant_count(0.5) == 1
        assert invariant_count(1) == 5
        assert invariant_count(1.5) == 18
        assert invariant_count(2) == 49

    def test_rejects_j_zero(self):
        with pytest.raises(DomainError):
            invariant_count(0)


class TestEnumerate:
    def test_pure_state_generic_angle(self):
        theta = math.pi / 3
        named = spin1_named(pipeline(pure_two_spinor(2 * theta)))
        assert named["I1"] == pytest.approx(math.sqrt(6) * math.cos(theta) / (1 + math.cos(theta) ** 2), abs=1e-12)
        assert named["I2"] == pytest.approx(SQRT3 / (1 + math.cos(theta) ** 2), abs=1e-12)
        assert named["I3"] == pytest.approx(-math.cos(theta) / SQRT3, abs=1e-12)
        assert named["I4"] == pytest.approx(-math.cos(theta) / SQRT3, abs=1e-12)
        assert named["I5"] == pytest.approx(-math.cos(2 * theta) / SQRT3, abs=1e-12)

    def test_separable_endpoints(self):
        aligned = spin1_named(pipeline(pure_two_spinor(0.0)))
        assert aligned["I1"] == pytest.approx(math.sqrt(1.5), abs=1e-12)
        assert aligned["I2"] == pytest.approx(SQRT3 / 2, abs=1e-12)
        assert aligned["I3"] == pytest.approx(-1 / SQRT3, abs=1e-12)
        assert aligned["I4"] == pytest.approx(-1 / SQRT3, abs=1e-12)
        assert aligned["I5"] == pytest.approx(-1 / SQRT3, abs=1e-12)
        # at theta = pi the rank-1 axis flips to -z, so I3 and I4 change sign
        anti = spin1_named(pipeline(pure_two_spinor(2 * math.pi)))
        assert anti["I1"] == pytest.approx(math.sqrt(1.5), abs=1e-12)
        assert anti["I2"] == pytest.approx(SQRT3 / 2, abs=1e-12)
        assert anti["I3"] == pytest.approx(+1 / SQRT3, abs=1e-12)
        assert anti["I5"] == pytest.approx(-1 / SQRT3, abs=1e-12)

    def test_mixed_state_example(self):
        named = spin1_named(pipeline(channel_mixed(ChannelParams.equal(0.5, math.pi / 2))))
        assert named["I1"] == pytest.approx(SQRT3 / 3, abs=1e-12)
        assert named["I2"] == pytest.approx(SQRT3 / 6, abs=1e-12)
        assert named["I5"] == pytest.approx(0.0, abs=1e-12)

    def test_maximally_mixed_is_empty(self):
        inv = pipeline(DensityMatrix.maximally_mixed(1))
        assert inv.count == 0
        assert inv.scalars == ()
        assert inv.pairwise == ()

    def test_empty_rank_drops_members(self):
        # rank 1 vanishes at theta = pi/2: only r_2 and the intra-rank pair remain
        inv = pipeline(pure_two_spinor(math.pi))
        assert inv.count == 2
        named = spin1_named(inv)
        assert named["I1"] is None and named["I3"] is None and named["I4"] is None
        assert named["I2"] is not None and named["I5"] is not None

    def test_count_matches_formula_on_random_states(self):
        rng = np.random.default_rng(30)
        for j in (0.5, 1, 1.5, 2):
            inv = pipeline(random_density_matrix(j, rng))
            assert inv.count == invariant_count(j)
            assert len(inv.scalars) + len(inv.pairwise) == inv.count

    def test_pairwise_range_and_cosine_relation(self):
        rng = np.random.default_rng(31)
        for _ in range(10):
            inv = pipeline(random_density_matrix(1.5, rng))
            labeled = dict(zip(inv.axis_labels, range(len(inv.axis_labels))))
            for la, lb, value in inv.pairwise:
                assert -1 / SQRT3 - 1e-12 <= value <= 1 / SQRT3 + 1e-12
                ia, ib = labeled[la], labeled[lb]
                assert abs(value) * SQRT3 == pytest.approx(inv.abs_cosines[ia, ib], abs=1e-12)

    def test_parallel_axes_saturate(self):
        inv = pipeline(pure_two_spinor(0.0))  # all axes along +z
        for _, _, value in inv.pairwise:
            assert abs(value) == pytest.approx(1 / SQRT3, abs=1e-12)

    def test_single_qubit_polarization(self):
        p = 0.63
        rho = DensityMatrix(np.array([[ (1 + p) / 2, 0.0], [0.0, (1 - p) / 2]]))
        inv = pipeline(rho)
        assert inv.count == 1
        assert dict(inv.scalars)[1] == pytest.approx(p, abs=1e-12)

    def test_spin1_named_rejects_other_spins(self):
        rng = np.random.default_rng(32)
        with pytest.raises(DomainError):
            spin1_named(pipeline(random_density_matrix(1.5, rng)))


class TestVerifyInvariance:
    def test_pure_state(self):
        report = verify_invariance(pure_two_spinor(2 * math.pi / 3), trials=50, seed=1)
        assert report.passed
        assert report.max_scalar_dev < 1e-8
        assert report.max_pairwise_dev < 1e-8
        assert report.max_axis_dev < 1e-7

    def test_maximally_mixed(self):
        report = verify_invariance(DensityMatrix.maximally_mixed(1), trials=5, seed=2)
        assert report.passed
        assert report.max_scalar_dev == 0.0

    def test_mixed_state(self):
        rho = channel_mixed(ChannelParams.equal(0.8, 2.0))
        report = verify_invariance(rho, trials=50, seed=3)
        assert report.passed
        assert report.max_scalar_dev < 1e-8
        assert report.max_pairwise_dev < 1e-8

    def test_spin_three_halves(self):
        rng = np.random.default_rng(33)
        report = verify_invariance(random_density_matrix(1.5, rng), trials=20, seed=4)
        assert report.passed
