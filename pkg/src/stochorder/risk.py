"""Expected shortfall, its concave envelope, and stop-loss premiums.

For a law X and level p in [0, 1),

    ES_p(X) = (1/(1-p)) * integral of Q_X(t) over t in (p, 1),

with Q_X the right quantile.  The map phi(p) = (1-p) * ES_p(X) is piecewise
linear and concave for finite laws, with slope -Q_X(p), phi(0) = E[X] and
phi(1) = 0; the discrete evaluator works through that envelope so every value
is an exact rational.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction

from .dists import (
    Bernoulli,
    DiscreteDist,
    Dist,
    Exponential,
    InputError,
    LogNormal,
    Normal,
    PointMass,
    RationalLike,
    as_discrete,
    as_fraction,
    mean,
    norm_cdf,
    norm_pdf,
    norm_quantile,
    quantile_right,
    upper_tail_mean,
)

__all__ = [
    "PhiEnvelope",
    "phi_envelope",
    "es",
    "phi",
    "stop_loss",
    "is_regular_level",
    "tail_mean_at_level",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class PhiEnvelope:
    """Piecewise-linear concave envelope p -> (1-p) ES_p of a finite law.

    points are (p, value) breakpoints with p strictly increasing from 0 to 1.
    Between breakpoints the envelope is linear with slope -Q(p).
    """

    points: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self) -> None:
        if len(self.points) < 2 or self.points[0][0] != 0 or self.points[-1][0] != 1:
            raise InputError("envelope must span p = 0 .. 1")
        ps = [p for p, _ in self.points]
        if any(b <= a for a, b in zip(ps, ps[1:])):
            raise InputError("envelope breakpoints must be strictly increasing")
        if self.points[-1][1] != 0:
            raise InputError("envelope must vanish at p = 1")

    @property
    def levels(self) -> tuple[Fraction, ...]:
        return tuple(p for p, _ in self.points)

    def value_at(self, p: RationalLike) -> Fraction:
        pf = as_fraction(p)
        if not 0 <= pf <= 1:
            raise InputError(f"level must lie in [0, 1], got {pf}")
        ps = self.levels
        k = bisect_right(ps, pf) - 1
        if k == len(ps) - 1:
            return self.points[-1][1]
        p0, v0 = self.points[k]
        p1, v1 = self.points[k + 1]
        return v0 + (v1 - v0) * (pf - p0) / (p1 - p0)

    def es_at(self, p: RationalLike) -> Fraction:
        pf = as_fraction(p)
        if not 0 <= pf < 1:
            raise InputError(f"expected shortfall needs p in [0, 1), got {pf}")
        return self.value_at(pf) / (1 - pf)

    def slopes(self) -> tuple[Fraction, ...]:
        """Per-segment slopes, left to right; concavity <=> nonincreasing."""
        out = []
        for (p0, v0), (p1, v1) in zip(self.points, self.points[1:]):
            out.append((v1 - v0) / (p1 - p0))
        return tuple(out)


def phi_envelope(d: DiscreteDist) -> PhiEnvelope:
    """Exact envelope of a finite law.

    Breakpoints sit at the cumulative probabilities; the value at each is the
    partial upper-tail expectation sum_{j>k} x_j * (P_j - P_{j-1}).
    """
    n = len(d.atoms)
    cums = []
    c = _ZERO
    for _, p in d.atoms:
        c += p
        cums.append(c)
    # walk from the top: value at P_n = 1 is 0
    vals = [_ZERO] * (n + 1)
    for k in range(n - 1, -1, -1):
        prev = cums[k - 1] if k > 0 else _ZERO
        vals[k] = vals[k + 1] + d.atoms[k][0] * (cums[k] - prev)
    points = [(_ZERO, vals[0])]
    for k in range(n):
        points.append((cums[k], vals[k + 1]))
    return PhiEnvelope(tuple(points))


def es(d: Dist, p: RationalLike) -> Fraction | float:
    """Expected shortfall ES_p at level p in [0, 1); ES_0 is the mean."""
    disc = as_discrete(d)
    if disc is not None:
        return phi_envelope(disc).es_at(p)
    pv = float(as_fraction(p)) if not isinstance(p, float) else p
    if not 0.0 <= pv < 1.0:
        raise InputError(f"expected shortfall needs p in [0, 1), got {pv}")
    if isinstance(d, Normal):
        if pv == 0.0:
            return d.mu
        z = norm_quantile(pv)
        return d.mu + d.sigma * norm_pdf(z) / (1.0 - pv)
    if isinstance(d, Exponential):
        # integral of -ln(1-t)/rate over (p,1) gives (1 - ln(1-p))/rate
        return (1.0 - math.log1p(-pv)) / d.rate
    if isinstance(d, LogNormal):
        m = math.exp(d.mu + 0.5 * d.sigma**2)
        if pv == 0.0:
            return m
        z = norm_quantile(pv)
        return m * norm_cdf(d.sigma - z) / (1.0 - pv)
    raise InputError(f"unknown distribution {d!r}")


def phi(d: Dist, p: RationalLike) -> Fraction | float:
    """The envelope value (1 - p) * ES_p; defined on all of [0, 1]."""
    disc = as_discrete(d)
    if disc is not None:
        return phi_envelope(disc).value_at(p)
    pv = float(as_fraction(p)) if not isinstance(p, float) else p
    if pv == 1.0:
        return 0.0
    return (1.0 - pv) * es(d, pv)


def stop_loss(d: Dist, t: RationalLike) -> Fraction | float:
    """Stop-loss premium E[(X - t)+]."""
    disc = as_discrete(d)
    if disc is not None:
        tf = as_fraction(t)
        return sum(((v - tf) * p for v, p in disc.atoms if v > tf), _ZERO)
    tv = float(as_fraction(t)) if not isinstance(t, float) else t
    if isinstance(d, Normal):
        z = (d.mu - tv) / d.sigma
        return (d.mu - tv) * norm_cdf(z) + d.sigma * norm_pdf(z)
    if isinstance(d, Exponential):
        if tv <= 0.0:
            return 1.0 / d.rate - tv
        return math.exp(-d.rate * tv) / d.rate
    if isinstance(d, LogNormal):
        m = math.exp(d.mu + 0.5 * d.sigma**2)
        if tv <= 0.0:
            return m - tv
        z = (math.log(tv) - d.mu) / d.sigma
        return m * norm_cdf(d.sigma - z) - tv * norm_cdf(-z)
    raise InputError(f"unknown distribution {d!r}")


def is_regular_level(d: DiscreteDist, p: RationalLike) -> bool:
    """True when P(X < Q(p)) = p, i.e. the level cuts cleanly at an atom edge."""
    if not isinstance(d, DiscreteDist):
        raise InputError("regular levels are defined for discrete laws")
    pf = as_fraction(p)
    if not 0 < pf < 1:
        raise InputError(f"level must lie in (0, 1), got {pf}")
    q = quantile_right(d, pf)
    below = sum((pr for v, pr in d.atoms if v < q), _ZERO)
    return below == pf


def tail_mean_at_level(d: DiscreteDist, p: RationalLike) -> Fraction:
    """E[X | X >= Q(p)] for a discrete law; at regular levels equals ES_p."""
    if not isinstance(d, DiscreteDist):
        raise InputError("tail means at a level are defined for discrete laws")
    pf = as_fraction(p)
    if not 0 < pf < 1:
        raise InputError(f"level must lie in (0, 1), got {pf}")
    q = quantile_right(d, pf)
    out = upper_tail_mean(d, q)
    assert isinstance(out, Fraction)
    return out
