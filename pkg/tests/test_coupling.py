"""Coupling synthesis: feasibility verdicts, verification, invariances."""

import random
from fractions import Fraction as F

import pytest

from stochorder import (
    Coupling,
    InputError,
    Normal,
    SynthResult,
    affine,
    check_cx,
    check_ssd,
    cond_classic,
    cond_new,
    coupling_to_joint,
    joint_marginal_w,
    joint_sum,
    normalize,
    point_mass_dist,
    synth_martingale,
    synth_supermartingale,
    verify_coupling,
)
from stochorder.gen import mean_preserving_spread, random_discrete, random_shift_down

from .test_dists import uniform


class TestGoldenCouplings:
    def test_martingale_two_by_two(self):
        x = uniform(0, 2)
        y = uniform(-1, 3)
        res = synth_martingale(x, y)
        assert res.feasible
        assert res.coupling.pi == (
            (F(3, 8), F(1, 8)),
            (F(1, 8), F(3, 8)),
        )

    def test_identity_coupling(self):
        x = uniform(0, 1, 2)
        res = synth_martingale(x, x)
        assert res.feasible
        assert verify_coupling(res.coupling, x, x, "martingale")

    def test_constant_shift_supermartingale(self):
        x = uniform(0, 1)
        y = uniform(F(-1, 2), F(1, 2))
        res = synth_supermartingale(x, y)
        assert res.feasible
        assert verify_coupling(res.coupling, x, y, "supermartingale")

    def test_point_mass_to_spread_is_jensen_case(self):
        res = synth_supermartingale(point_mass_dist(0), uniform(-1, 1))
        assert res.feasible
        assert res.coupling.pi == ((F(1, 2), F(1, 2)),)
        assert synth_martingale(point_mass_dist(0), uniform(-1, 1)).feasible

    def test_infeasible_with_certificate(self):
        res = synth_supermartingale(uniform(0, 1), point_mass_dist(1))
        assert not res.feasible
        assert res.coupling is None
        assert res.certificate is not None

    def test_strict_contraction_martingale_infeasible(self):
        res = synth_martingale(uniform(-1, 1), point_mass_dist(0))
        assert not res.feasible
        assert res.certificate is not None


class TestVerifier:
    def _feasible_pair(self):
        x = uniform(0, 1, 4)
        y = normalize([(-1, F(1, 3)), (1, F(1, 3)), (4, F(1, 3))])
        res = synth_supermartingale(x, y)
        assert res.feasible
        return res.coupling, x, y

    def test_perturbed_mass_fails(self):
        c, x, y = self._feasible_pair()
        eps = F(1, 1000)
        rows = [list(row) for row in c.pi]
        rows[0][0] += eps
        total = 1 + eps
        pi = tuple(tuple(v / total for v in row) for row in rows)
        bad = Coupling(c.row_values, c.col_values, c.row_probs, c.col_probs, pi)
        assert not verify_coupling(bad, x, y, "supermartingale")

    def test_wrong_marginals_fail(self):
        c, x, y = self._feasible_pair()
        other = uniform(0, 1, 5)
        assert not verify_coupling(c, other, y, "supermartingale")

    def test_mode_distinguishes_drift(self):
        x = uniform(0, 1)
        y = uniform(F(-1, 2), F(1, 2))
        res = synth_supermartingale(x, y)
        assert verify_coupling(res.coupling, x, y, "supermartingale")
        # strict negative drift rows cannot satisfy the martingale equality
        assert not verify_coupling(res.coupling, x, y, "martingale")

    def test_hand_built_square_joint_as_coupling(self):
        # four-cell square with E[Z|W] = 0 row by row
        x = uniform(0, 1)
        y = normalize([(F(-1, 2), F(1, 4)), (F(1, 2), F(1, 2)), (F(3, 2), F(1, 4))])
        pi = (
            (F(1, 4), F(1, 4), F(0)),
            (F(0), F(1, 4), F(1, 4)),
        )
        c = Coupling(x.values, y.values, x.probs, y.probs, pi)
        assert verify_coupling(c, x, y, "supermartingale")
        assert verify_coupling(c, x, y, "martingale")

    def test_bad_mode_rejected(self):
        c, x, y = self._feasible_pair()
        with pytest.raises(InputError):
            verify_coupling(c, x, y, "submartingale")


class TestRoundtrip:
    def test_sweep_agrees_with_checkers(self):
        rng = random.Random(7)
        for k in range(120):
            x = random_discrete(rng)
            if k % 3 == 0:
                y = random_shift_down(rng, x)
            elif k % 3 == 1:
                y = mean_preserving_spread(rng, x)
            else:
                y = random_discrete(rng)
            rs = synth_supermartingale(x, y)
            assert rs.feasible == check_ssd(x, y).holds
            rm = synth_martingale(x, y)
            assert rm.feasible == check_cx(x, y).holds
            for res, mode in ((rs, "supermartingale"), (rm, "martingale")):
                if res.feasible:
                    assert verify_coupling(res.coupling, x, y, mode)
                    j = coupling_to_joint(res.coupling)
                    assert cond_classic(j).holds
                    assert cond_new(j).holds

    def test_joint_reproduces_marginals(self):
        x = uniform(0, 2, 3)
        y = random_shift_down(random.Random(9), x)
        res = synth_supermartingale(x, y)
        j = coupling_to_joint(res.coupling)
        assert joint_marginal_w(j) == x
        assert joint_sum(j) == y

    def test_deterministic_output(self):
        x = uniform(0, 1, 4)
        y = normalize([(-1, F(1, 3)), (1, F(1, 3)), (4, F(1, 3))])
        first = synth_supermartingale(x, y)
        second = synth_supermartingale(x, y)
        assert first.coupling.pi == second.coupling.pi


class TestInvariances:
    def test_location_shift_preserves_feasibility(self):
        rng = random.Random(11)
        for _ in range(60):
            x = random_discrete(rng)
            y = random_discrete(rng)
            shift = F(rng.randint(-6, 6), 2)
            xs = affine(x, 1, shift)
            ys = affine(y, 1, shift)
            assert (
                synth_supermartingale(x, y).feasible
                == synth_supermartingale(xs, ys).feasible
            )
            assert (
                synth_martingale(x, y).feasible
                == synth_martingale(xs, ys).feasible
            )


class TestGuards:
    def test_support_guard(self, monkeypatch):
        monkeypatch.setenv("STOCHORDER_MAX_SUPPORT", "3")
        big = uniform(0, 1, 2, 3)
        with pytest.raises(InputError):
            synth_supermartingale(big, big)

    def test_support_guard_override_up(self, monkeypatch):
        monkeypatch.setenv("STOCHORDER_MAX_SUPPORT", "4")
        big = uniform(0, 1, 2, 3)
        assert synth_supermartingale(big, big).feasible

    def test_bad_env_value(self, monkeypatch):
        monkeypatch.setenv("STOCHORDER_MAX_SUPPORT", "zero")
        with pytest.raises(InputError):
            synth_supermartingale(uniform(0, 1), uniform(0, 1))

    def test_parametric_inputs_rejected(self):
        with pytest.raises(InputError):
            synth_supermartingale(Normal(0.0, 1.0), uniform(0, 1))

    def test_result_invariant(self):
        with pytest.raises(Exception):
            SynthResult(True, None, None)
