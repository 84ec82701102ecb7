"""Dependence conditions on joint laws and the comonotonicity test."""

import random
from fractions import Fraction as F

import pytest

from stochorder import (
    check_cx,
    check_icx,
    check_ssd,
    cond_classic,
    cond_cx_pair,
    cond_icx,
    cond_new,
    cond_on_difference,
    is_comonotone,
    joint_marginal_w,
    joint_sum,
    joint_z,
    mean,
    normalize,
    normalize_joint,
    point_mass_dist,
    relevant_thresholds,
)
from stochorder.gen import random_joint


def J(*cells):
    return normalize_joint(cells)


def _recentered(j):
    """Shift the move so E[Z] = 0 exactly."""
    m = mean(joint_z(j))
    return normalize_joint((w, z - m, p) for w, z, p in j.atoms)


class TestExamples:
    def test_icx_example_fails_at_top_anchor(self):
        j = J((0, 1, F(1, 2)), (1, F(-1, 4), F(1, 2)))
        v = cond_icx(j)
        assert not v.holds
        assert v.witness.value == 1
        assert v.witness.lhs == F(-1, 4)

    def test_new_holds_on_negatively_aligned_square(self):
        # lower anchor pairs with the negative move
        j = J((0, F(-1, 2), F(1, 2)), (1, F(1, 4), F(1, 2)))
        v = cond_new(j)
        assert v.holds  # E[Z|W<=0] = -1/2, E[Z] = -1/8
        assert not cond_classic(j).holds  # E[Z|W=1] = 1/4 > 0

    def test_classic_symmetric_square(self):
        j = J(
            (0, F(-1, 2), F(1, 4)), (0, F(1, 2), F(1, 4)),
            (1, F(-1, 2), F(1, 4)), (1, F(1, 2), F(1, 4)),
        )
        assert cond_classic(j).holds
        assert cond_new(j).holds
        assert cond_cx_pair(j).holds

    def test_difference_condition_degenerate(self):
        j = J((1, 1, F(1, 2)), (-1, -1, F(1, 2)))
        assert cond_on_difference(j).holds
        # the certified convex-order conclusion for the zero-mean case
        diff = normalize((y - z, p) for y, z, p in j.atoms)
        assert diff == point_mass_dist(0)
        assert check_cx(diff, joint_marginal_w(j)).holds

    def test_difference_condition_failing(self):
        j = J((1, 1, F(1, 2)), (-1, F(-1, 2), F(1, 2)))
        # V = Y - Z has atoms -1/2 and 0; the full-space anchor x=0 exposes
        # the positive expected move E[Z] = 1/4
        v = cond_on_difference(j)
        assert not v.holds
        assert v.witness.value == F(0)

    def test_relevant_thresholds(self):
        j = J((0, 1, F(1, 4)), (2, 0, F(1, 2)), (0, -1, F(1, 4)))
        assert list(relevant_thresholds(j)) == [F(0), F(2)]


class TestImplications:
    def test_classic_implies_new_and_ssd(self):
        rng = random.Random(101)
        found = 0
        for _ in range(800):
            j = random_joint(rng)
            if cond_classic(j).holds:
                found += 1
                assert cond_new(j).holds
                assert check_ssd(joint_marginal_w(j), joint_sum(j)).holds
        assert found > 20

    def test_new_implies_ssd_of_sum(self):
        rng = random.Random(102)
        found = 0
        for _ in range(800):
            j = random_joint(rng)
            if cond_new(j).holds:
                found += 1
                assert check_ssd(joint_marginal_w(j), joint_sum(j)).holds
        assert found > 100

    def test_icx_condition_implies_icx_dominance_of_sum(self):
        rng = random.Random(103)
        found = 0
        for _ in range(800):
            j = random_joint(rng)
            if cond_icx(j).holds:
                found += 1
                assert check_icx(joint_sum(j), joint_marginal_w(j)).holds
        assert found > 100

    def test_cx_pair_implies_convex_order(self):
        rng = random.Random(104)
        found = 0
        for _ in range(600):
            j = _recentered(random_joint(rng))
            if cond_cx_pair(j).holds:
                found += 1
                assert check_cx(joint_marginal_w(j), joint_sum(j)).holds
        assert found > 10

    def test_cx_pair_is_zero_mean_plus_either_tail_condition(self):
        rng = random.Random(105)
        for _ in range(400):
            raw = random_joint(rng)
            assert cond_cx_pair(raw).holds == (
                mean(joint_z(raw)) == 0 and cond_new(raw).holds
            )
            j = _recentered(raw)
            assert cond_cx_pair(j).holds == cond_new(j).holds
            # with a centered move the two one-sided tail conditions coincide
            assert cond_new(j).holds == cond_icx(j).holds


class TestCouplingTransport:
    def test_martingale_transport_passes_difference_condition(self):
        from stochorder import coupling_to_joint, synth_martingale
        from .test_dists import uniform

        x = uniform(0, 2)
        y = uniform(-1, 0, 2, 3)
        res = synth_martingale(x, y)
        assert res.feasible
        j = coupling_to_joint(res.coupling)
        relabeled = normalize_joint((w + z, z, p) for w, z, p in j.atoms)
        assert cond_on_difference(relabeled).holds


class TestComonotone:
    def test_sorted_pairs(self):
        assert is_comonotone([(0, 0), (1, 2), (3, 2)])

    def test_discordant_pair(self):
        assert not is_comonotone([(0, 1), (1, 0)])

    def test_constant_first_coordinate_is_fine(self):
        assert is_comonotone([(1, 0), (1, 5), (2, 5)])

    def test_zero_mass_atoms_ignored(self):
        assert is_comonotone([(0, 1, F(1, 2)), (1, 0, F(0)), (1, 2, F(1, 2))])

    def test_weighted_discordance(self):
        assert not is_comonotone([(0, 1, F(1, 2)), (1, 0, F(1, 2))])




class TestBiatomicEquivalence:
    def test_small_spread_addon_exhaustive(self):
        """Exploratory: for a two-point W at gap 1 and bi-atomic Z with
        spread at most that gap, the lower-tail condition is not just
        sufficient but equivalent to the dominance conclusion.  Verified
        here by exhaustive search over an eighth-resolution grid; advisory
        rather than gating, since the general claim is not part of the
        package's contract."""
        grid = [F(k, 8) for k in range(5)]  # cell masses 0..1/2
        for z1_num in range(-8, 1):
            z1 = F(z1_num, 8)
            for s_num in range(0, 9):
                z2 = z1 + F(s_num, 8)
                for p00 in grid:
                    for p10 in grid:
                        cells = [
                            (F(0), z1, p00),
                            (F(0), z2, F(1, 2) - p00),
                            (F(1), z1, p10),
                            (F(1), z2, F(1, 2) - p10),
                        ]
                        j = normalize_joint(
                            (w, z, p) for w, z, p in cells if p > 0
                        )
                        ssd = check_ssd(joint_marginal_w(j), joint_sum(j)).holds
                        assert ssd == cond_new(j).holds, (z1, z2, p00, p10)
