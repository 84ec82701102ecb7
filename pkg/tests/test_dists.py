"""Distribution layer: exact conversion, conventions, tail means, JSON."""

import json
import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from stochorder import (
    Bernoulli,
    DiscreteDist,
    Exponential,
    InputError,
    IrrelevantThresholdError,
    LogNormal,
    Normal,
    PointMass,
    UnsupportedPairingError,
    affine,
    as_discrete,
    as_fraction,
    cdf,
    discretize,
    dist_from_json,
    dist_to_json,
    joint_from_json,
    joint_marginal_w,
    joint_sum,
    joint_to_json,
    joint_z,
    mean,
    negate,
    normalize,
    normalize_joint,
    point_mass_dist,
    quantile_right,
    variance,
)
from stochorder.dists import lower_tail_mean, norm_cdf, norm_pdf, norm_quantile, upper_tail_mean
from stochorder.risk import es


def uniform(*values) -> DiscreteDist:
    p = F(1, len(values))
    return normalize((v, p) for v in values)


lattice_values = st.integers(-12, 12).map(lambda k: F(k, 2))


@st.composite
def discrete_dists(draw, max_atoms=6):
    n = draw(st.integers(1, max_atoms))
    values = draw(
        st.lists(lattice_values, min_size=n, max_size=n, unique=True)
    )
    weights = draw(st.lists(st.integers(1, 59), min_size=n, max_size=n))
    return normalize((v, F(w, 60)) for v, w in zip(values, weights))


class TestAsFraction:
    def test_int(self):
        assert as_fraction(3) == F(3)

    def test_rational_string(self):
        assert as_fraction("-7/3") == F(-7, 3)

    def test_decimal_string(self):
        assert as_fraction("0.5") == F(1, 2)

    def test_float_is_exact_dyadic(self):
        assert as_fraction(0.1) == F(0.1)
        assert as_fraction(0.1) != F(1, 10)

    def test_rejects_bool(self):
        with pytest.raises(InputError):
            as_fraction(True)

    def test_rejects_non_finite(self):
        with pytest.raises(InputError):
            as_fraction(float("nan"))
        with pytest.raises(InputError):
            as_fraction(float("inf"))


class TestConstruction:
    def test_normalize_merges_and_rescales(self):
        d = normalize([(1, F(1, 3)), (1, F(1, 3)), (0, F(1, 3))])
        assert d.atoms == ((F(0), F(1, 3)), (F(1), F(2, 3)))

    def test_normalize_drops_zero_mass(self):
        d = normalize([(0, F(1, 2)), (5, F(0)), (1, F(1, 2))])
        assert d.values == (F(0), F(1))

    def test_normalize_rescales_unnormalized_weights(self):
        d = normalize([(0, 3), (1, 1)])
        assert d.probs == (F(3, 4), F(1, 4))

    def test_empty_rejected(self):
        with pytest.raises(InputError):
            normalize([])

    def test_negative_weight_rejected(self):
        with pytest.raises(InputError):
            normalize([(0, F(-1, 2)), (1, F(3, 2))])

    def test_direct_constructor_checks_sorted_and_total(self):
        with pytest.raises(InputError):
            DiscreteDist(((F(1), F(1, 2)), (F(0), F(1, 2))))
        with pytest.raises(InputError):
            DiscreteDist(((F(0), F(1, 2)),))

    def test_parametric_validation(self):
        with pytest.raises(InputError):
            Normal(0.0, 0.0)
        with pytest.raises(InputError):
            Exponential(-1.0)
        with pytest.raises(InputError):
            Bernoulli(1.5)
        with pytest.raises(InputError):
            LogNormal(0.0, -0.1)

    def test_joint_duplicate_cells_merge(self):
        j = normalize_joint([(0, 1, F(1, 4)), (0, 1, F(1, 4)), (1, 0, F(1, 2))])
        assert j.atoms == ((F(0), F(1), F(1, 2)), (F(1), F(0), F(1, 2)))


class TestQuantileConvention:
    """Q(t) = inf{x : P(X <= x) > t}, with strict inequality."""

    def test_atom_boundary_goes_right(self):
        d = uniform(0, 1)
        assert quantile_right(d, F(1, 4)) == 0
        assert quantile_right(d, F(1, 2)) == 1  # P(X<=0)=1/2 is not > 1/2
        assert quantile_right(d, F(3, 4)) == 1

    def test_bernoulli(self):
        b = Bernoulli(0.3)
        assert quantile_right(b, 0.699) == 0.0
        assert quantile_right(b, 0.7) == 1.0

    def test_level_domain(self):
        with pytest.raises(InputError):
            quantile_right(uniform(0, 1), F(0))
        with pytest.raises(InputError):
            quantile_right(uniform(0, 1), F(1))

    def test_normal_matches_scipy(self):
        d = Normal(1.0, 2.0)
        for t in (0.01, 0.25, 0.5, 0.9, 0.999):
            assert quantile_right(d, t) == pytest.approx(
                1.0 + 2.0 * special.ndtri(t), abs=1e-9
            )

    @given(discrete_dists(), st.integers(1, 59))
    def test_cdf_quantile_adjoint(self, d, num):
        t = F(num, 60)
        q = quantile_right(d, t)
        assert cdf(d, q) > t
        below = [v for v in d.values if v < q]
        if below:
            assert cdf(d, below[-1]) <= t


class TestMoments:
    def test_discrete_exact(self):
        d = uniform(0, 1, 2, 3)
        assert mean(d) == F(3, 2)
        assert variance(d) == F(5, 4)

    def test_parametric(self):
        assert mean(Normal(2.0, 3.0)) == 2.0
        assert variance(Normal(2.0, 3.0)) == 9.0
        assert mean(Exponential(4.0)) == 0.25
        assert mean(Bernoulli(0.3)) == pytest.approx(0.3)
        m = mean(LogNormal(0.1, 0.4))
        assert m == pytest.approx(math.exp(0.1 + 0.08))


class TestTailMeans:
    def test_discrete_lower(self):
        d = uniform(0, 1, 2, 3)
        assert lower_tail_mean(d, F(1)) == F(1, 2)
        assert upper_tail_mean(d, F(2)) == F(5, 2)

    def test_irrelevant_threshold(self):
        d = uniform(0, 1)
        with pytest.raises(IrrelevantThresholdError):
            lower_tail_mean(d, F(-1))
        with pytest.raises(IrrelevantThresholdError):
            upper_tail_mean(d, F(2))

    def test_normal_mills_vs_quadrature(self):
        d = Normal(0.5, 1.5)
        for x in (-2.0, 0.0, 1.0, 3.0):
            num, _ = integrate.quad(
                lambda t: t * norm_pdf((t - 0.5) / 1.5) / 1.5, -40, x
            )
            den = norm_cdf((x - 0.5) / 1.5)
            assert lower_tail_mean(d, x) == pytest.approx(num / den, abs=1e-9)

    def test_normal_upper_vs_quadrature(self):
        d = Normal(0.0, 1.0)
        for x in (-1.0, 0.5, 2.0):
            num, _ = integrate.quad(lambda t: t * norm_pdf(t), x, 40)
            den = 1.0 - norm_cdf(x)
            assert upper_tail_mean(d, x) == pytest.approx(num / den, abs=1e-9)

    def test_exponential_memoryless_upper(self):
        d = Exponential(2.0)
        assert upper_tail_mean(d, 3.0) == pytest.approx(3.0 + 0.5)
        assert upper_tail_mean(d, -1.0) == pytest.approx(0.5)

    def test_deep_tail_finite(self):
        # Mills-ratio form must survive far into the lower tail
        m = lower_tail_mean(Normal(0.0, 1.0), -35.0)
        assert -36.0 < m < -35.0


class TestTransforms:
    def test_negate_mirrors_discrete(self):
        d = normalize([(0, F(1, 4)), (2, F(3, 4))])
        nd = negate(d)
        assert nd.atoms == ((F(-2), F(3, 4)), (F(0), F(1, 4)))

    def test_negate_normal(self):
        nd = negate(Normal(1.0, 2.0))
        assert nd == Normal(-1.0, 2.0)

    def test_negate_involutive(self):
        d = normalize([(-1, F(1, 2)), (3, F(1, 2))])
        assert negate(negate(d)) == d

    def test_affine_discrete(self):
        d = uniform(0, 1)
        t = affine(d, F(2), F(-1))
        assert t.values == (F(-1), F(1))

    def test_affine_normal_negative_scale(self):
        t = affine(Normal(1.0, 2.0), -3, 0)
        assert t == Normal(-3.0, 6.0)

    def test_negate_unsupported(self):
        with pytest.raises(UnsupportedPairingError):
            negate(Exponential(1.0))

    def test_as_discrete(self):
        assert as_discrete(point_mass_dist(F(1, 3))).atoms == ((F(1, 3), F(1)),)
        b = as_discrete(Bernoulli(0.25))
        assert b.values == (F(0), F(1))
        assert b.probs == (F(0.75), F(0.25))
        assert as_discrete(Normal(0.0, 1.0)) is None


class TestNormalHelpers:
    def test_cdf_matches_scipy(self):
        for z in (-8.0, -2.0, 0.0, 1.3, 6.0):
            assert norm_cdf(z) == pytest.approx(special.ndtr(z), rel=1e-13, abs=1e-300)

    def test_quantile_matches_scipy(self):
        for t in (1e-6, 0.2, 0.5, 0.77, 1 - 1e-6):
            assert norm_quantile(t) == pytest.approx(special.ndtri(t), abs=1e-10)


class TestJointAccessors:
    def test_sum_law_merges(self):
        j = normalize_joint([
            (0, F(-1, 2), F(1, 4)), (0, F(1, 2), F(1, 4)),
            (1, F(-1, 2), F(1, 4)), (1, F(1, 2), F(1, 4)),
        ])
        s = joint_sum(j)
        assert s.atoms == ((F(-1, 2), F(1, 4)), (F(1, 2), F(1, 2)), (F(3, 2), F(1, 4)))

    def test_marginals(self):
        j = normalize_joint([(0, -1, F(1, 2)), (0, 1, F(1, 2))])
        assert joint_marginal_w(j).atoms == ((F(0), F(1)),)
        assert joint_z(j).values == (F(-1), F(1))
        assert joint_sum(j).values == (F(-1), F(1))


class TestJson:
    def test_discrete_round_trip(self):
        d = normalize([(F(-1, 3), F(1, 4)), (2, F(3, 4))])
        assert dist_from_json(dist_to_json(d)) == d

    def test_schema_example(self):
        obj = {"type": "discrete", "atoms": [{"x": 0, "p": "1/4"}, {"x": 1, "p": "3/4"}]}
        d = dist_from_json(obj)
        assert d.probs == (F(1, 4), F(3, 4))

    def test_float_probability_rejected(self):
        obj = {"type": "discrete", "atoms": [{"x": 0, "p": 0.5}, {"x": 1, "p": 0.5}]}
        with pytest.raises(InputError):
            dist_from_json(obj)

    def test_parametric_round_trip(self):
        for d in (Normal(0.5, 2.0), Exponential(1.5), Bernoulli(0.4),
                  LogNormal(0.0, 0.2), PointMass(-1.0)):
            assert dist_from_json(dist_to_json(d)) == d

    def test_joint_round_trip(self):
        j = normalize_joint([(0, -0.5, F(1, 4)), (1, F(1, 3), F(3, 4))])
        assert joint_from_json(joint_to_json(j)) == j

    def test_json_serializable(self):
        d = normalize([(F(1, 3), F(1))])
        json.dumps(dist_to_json(d))

    def test_bad_type_rejected(self):
        with pytest.raises(InputError):
            dist_from_json({"type": "triangular", "a": 0})


class TestDiscretize:
    def test_needs_two_atoms(self):
        with pytest.raises(InputError):
            discretize(Normal(0.0, 1.0), 1)

    def test_point_mass_exact(self):
        d = discretize(PointMass(2.5), 7)
        assert d.atoms == ((F(2.5), F(1)),)

    def test_bernoulli_exact(self):
        d = discretize(Bernoulli(0.25), 10)
        assert d.probs == (F(3, 4), F(1, 4))

    def test_passthrough(self):
        d = uniform(0, 1)
        assert discretize(d, 5) is d

    def test_normal_two_atoms_symmetric(self):
        d = discretize(Normal(0.0, 1.0), 2)
        assert len(d.atoms) == 2
        assert d.values[0] == -d.values[1]
        assert float(d.values[1]) == pytest.approx(special.ndtri(0.75), abs=1e-10)
        assert mean(d) == 0

    def test_normal_64_mean_and_tail(self):
        d = discretize(Normal(0.0, 1.0), 64)
        assert abs(mean(d)) < F(1, 10**12)
        closed = norm_pdf(0.0) / 0.5
        assert float(es(d, F(1, 2))) == pytest.approx(closed, abs=2e-2)

    @given(
        st.floats(-3, 3, allow_nan=False),
        st.floats(0.1, 4, allow_nan=False),
        st.integers(2, 33),
    )
    @settings(max_examples=40, deadline=None)
    def test_normal_mean_exact_by_mirroring(self, mu, sigma, n):
        d = discretize(Normal(mu, sigma), n)
        assert mean(d) == F(mu)

    def test_exponential_quantiles(self):
        d = discretize(Exponential(1.0), 4)
        expect = [-math.log(1 - (2 * k - 1) / 8) for k in (1, 2, 3, 4)]
        assert [float(v) for v in d.values] == pytest.approx(expect)
