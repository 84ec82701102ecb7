"""Decision procedures for stochastic orders, with checkable witnesses.

check_ssd(X, Y) decides X >=ssd Y (every risk-averse expected-utility agent
weakly prefers X), check_icx decides X >=icx Y (increasing convex), check_cx
decides X <=cx Y (convex order: Y is a mean-preserving spread of X), and
check_st decides X >=st Y (survival-function dominance).

Finite-support pairs are decided exactly through the piecewise-linear
expected-shortfall envelope: two envelopes on a merged breakpoint grid are
ordered everywhere iff they are ordered at the breakpoints.  Normal pairs use
mean/deviation closed forms.  Every negative verdict carries a witness whose
lhs/rhs re-evaluate to the reported violation; witnesses for finite laws are
exact rationals.

oracle_ssd and oracle_icx decide the same discrete relations through an
unrelated finite family of test functions (E[min(X, t)] and E[(X - t)+] over
the merged support), for cross-validation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .dists import (
    DiscreteDist,
    Dist,
    Normal,
    UnsupportedPairingError,
    as_discrete,
    cdf,
    mean,
    negate,
    norm_cdf,
    norm_pdf,
)
from .risk import PhiEnvelope, es, phi_envelope, stop_loss

__all__ = [
    "Witness",
    "OrderVerdict",
    "check_ssd",
    "check_icx",
    "check_cx",
    "check_st",
    "oracle_ssd",
    "oracle_icx",
]

Number = Union[Fraction, float]

WITNESS_KINDS = ("level_p", "threshold_x", "angle_t")


@dataclass(frozen=True)
class Witness:
    """One point at which the claimed inequality is violated.

    kind "level_p":     value is a probability level; lhs/rhs are the two
                        sides of the level comparison (expected shortfall for
                        icx, integrated lower quantile for ssd/cx).
    kind "threshold_x": value is a point on the real line; lhs/rhs are
                        survival probabilities or conditional expectations.
    kind "angle_t":     value is a test-function parameter; lhs/rhs are
                        E[min(., t)] or stop-loss values.
    """

    kind: str
    value: Number
    lhs: Number
    rhs: Number

    def __post_init__(self) -> None:
        if self.kind not in WITNESS_KINDS:
            raise ValueError(f"unknown witness kind {self.kind!r}")


@dataclass(frozen=True)
class OrderVerdict:
    holds: bool
    witness: Witness | None = None

    def __post_init__(self) -> None:
        if self.holds and self.witness is not None:
            raise ValueError("a holding verdict cannot carry a witness")
        if not self.holds and self.witness is None:
            raise ValueError("a failing verdict must carry a witness")


_HOLDS = OrderVerdict(True, None)


def _exact_pair(x: Dist, y: Dist) -> tuple[DiscreteDist, DiscreteDist] | None:
    dx, dy = as_discrete(x), as_discrete(y)
    if dx is not None and dy is not None:
        return dx, dy
    return None


def _normal_pair(x: Dist, y: Dist) -> tuple[Normal, Normal] | None:
    if isinstance(x, Normal) and isinstance(y, Normal):
        return x, y
    return None


def _reject(op: str, x: Dist, y: Dist) -> None:
    raise UnsupportedPairingError(
        f"{op} is defined for finite-support pairs and Normal/Normal pairs; "
        f"got {type(x).__name__} vs {type(y).__name__} (discretize first)"
    )


def _merged_levels(ex: PhiEnvelope, ey: PhiEnvelope) -> list[Fraction]:
    return sorted(set(ex.levels) | set(ey.levels))


def _integrated_lower_quantile(env: PhiEnvelope, p: Fraction) -> Fraction:
    # integral of Q over (0, p) = mean - integral over (p, 1)
    return env.points[0][1] - env.value_at(p)


# ---------------------------------------------------------------------------
# Increasing convex order
# ---------------------------------------------------------------------------


def check_icx(x: Dist, y: Dist) -> OrderVerdict:
    """Decide X >=icx Y, i.e. ES_p(X) >= ES_p(Y) for every p in [0, 1)."""
    pair = _exact_pair(x, y)
    if pair is not None:
        dx, dy = pair
        ex, ey = phi_envelope(dx), phi_envelope(dy)
        for p in _merged_levels(ex, ey):
            if p == 1:
                continue  # both envelopes vanish there
            vx, vy = ex.value_at(p), ey.value_at(p)
            if vx < vy:
                return OrderVerdict(
                    False, Witness("level_p", p, vx / (1 - p), vy / (1 - p))
                )
        return _HOLDS
    np_ = _normal_pair(x, y)
    if np_ is not None:
        nx, ny = np_
        if nx.mu >= ny.mu and nx.sigma >= ny.sigma:
            return _HOLDS
        if nx.mu < ny.mu:
            return OrderVerdict(False, Witness("level_p", 0.0, nx.mu, ny.mu))
        return OrderVerdict(False, _normal_tail_witness(nx, ny))
    _reject("icx order check", x, y)
    raise AssertionError  # unreachable


def _normal_tail_witness(nx: Normal, ny: Normal) -> Witness:
    """Stop-loss witness for a Normal pair with mu_x >= mu_y but sigma_x < sigma_y.

    The gap flips deep in the upper tail; scan outward until the flip is
    visible in binary64.  Beyond ~37 deviations both premiums underflow, in
    which case no float witness exists and we fail loudly.
    """
    steps = [0.25 * k for k in range(1, 153)]
    for zstep in steps:
        t = ny.mu + zstep * ny.sigma
        lhs, rhs = stop_loss(nx, t), stop_loss(ny, t)
        if lhs < rhs:
            return Witness("angle_t", t, lhs, rhs)
    raise RuntimeError(
        "icx violation exists but lies beyond binary64 tail resolution"
    )


# ---------------------------------------------------------------------------
# Second-order stochastic dominance
# ---------------------------------------------------------------------------


def check_ssd(x: Dist, y: Dist) -> OrderVerdict:
    """Decide X >=ssd Y.

    Finite pairs run two independent exact routes and insist they agree:
    integrated lower quantiles on the merged grid, and the increasing convex
    comparison of the negated pair.  The witness reports the integrated
    lower quantile comparison at the first violating level (p = 1 compares
    the means).
    """
    pair = _exact_pair(x, y)
    if pair is not None:
        dx, dy = pair
        ex, ey = phi_envelope(dx), phi_envelope(dy)
        verdict = _HOLDS
        for p in _merged_levels(ex, ey):
            if p == 0:
                continue  # both integrals vanish there
            vx = _integrated_lower_quantile(ex, p)
            vy = _integrated_lower_quantile(ey, p)
            if vx < vy:
                verdict = OrderVerdict(False, Witness("level_p", p, vx, vy))
                break
        dual = check_icx(negate(dy), negate(dx))
        if dual.holds != verdict.holds:
            raise RuntimeError("internal: ssd decision routes disagree")
        return verdict
    np_ = _normal_pair(x, y)
    if np_ is not None:
        nx, ny = np_
        if nx.mu >= ny.mu and nx.sigma <= ny.sigma:
            return _HOLDS
        if nx.mu < ny.mu:
            # integrated quantile at p = 1 is the mean
            return OrderVerdict(False, Witness("level_p", 1.0, nx.mu, ny.mu))
        return OrderVerdict(False, _normal_lower_witness(nx, ny))
    _reject("ssd order check", x, y)
    raise AssertionError  # unreachable


def _normal_lower_witness(nx: Normal, ny: Normal) -> Witness:
    """Integrated-quantile witness for mu_x >= mu_y but sigma_x > sigma_y.

    integral of Q over (0, p) for Normal(mu, sigma) equals mu*p - sigma*pdf(z_p);
    the violation sits at small p, where levels stay representable down to
    about 1e-300.
    """
    for zstep in [-0.25 * k for k in range(1, 153)]:
        p = norm_cdf(zstep)
        if p <= 0.0:
            break
        lhs = nx.mu * p - nx.sigma * norm_pdf(zstep)
        rhs = ny.mu * p - ny.sigma * norm_pdf(zstep)
        if lhs < rhs:
            return Witness("level_p", p, lhs, rhs)
    raise RuntimeError(
        "ssd violation exists but lies beyond binary64 tail resolution"
    )


# ---------------------------------------------------------------------------
# Convex order
# ---------------------------------------------------------------------------


def check_cx(x: Dist, y: Dist) -> OrderVerdict:
    """Decide X <=cx Y: equal means and X >=ssd Y (Y spreads X)."""
    pair = _exact_pair(x, y)
    if pair is not None:
        dx, dy = pair
        mx, my = mean(dx), mean(dy)
        if mx != my:
            return OrderVerdict(False, Witness("level_p", Fraction(1), mx, my))
        return check_ssd(dx, dy)
    np_ = _normal_pair(x, y)
    if np_ is not None:
        nx, ny = np_
        if abs(nx.mu - ny.mu) > 1e-12:
            return OrderVerdict(False, Witness("level_p", 1.0, nx.mu, ny.mu))
        if nx.sigma <= ny.sigma:
            return _HOLDS
        return OrderVerdict(False, _normal_lower_witness(nx, ny))
    _reject("cx order check", x, y)
    raise AssertionError  # unreachable


# ---------------------------------------------------------------------------
# Usual (first-order) stochastic order
# ---------------------------------------------------------------------------


def check_st(x: Dist, y: Dist) -> OrderVerdict:
    """Decide X >=st Y: P(X > t) >= P(Y > t) for every t."""
    pair = _exact_pair(x, y)
    if pair is not None:
        dx, dy = pair
        ts = sorted(set(dx.values) | set(dy.values))
        # survival functions are right-continuous steps; atoms suffice
        for t in ts:
            sx = 1 - cdf(dx, t)
            sy = 1 - cdf(dy, t)
            if sx < sy:
                return OrderVerdict(False, Witness("threshold_x", t, sx, sy))
        return _HOLDS
    np_ = _normal_pair(x, y)
    if np_ is not None:
        nx, ny = np_
        if nx.sigma != ny.sigma:
            raise UnsupportedPairingError(
                "st order for Normal pairs needs equal sigma; discretize first"
            )
        if nx.mu >= ny.mu:
            return _HOLDS
        t = 0.5 * (nx.mu + ny.mu)
        sx = 1.0 - norm_cdf((t - nx.mu) / nx.sigma)
        sy = 1.0 - norm_cdf((t - ny.mu) / ny.sigma)
        return OrderVerdict(False, Witness("threshold_x", t, sx, sy))
    _reject("st order check", x, y)
    raise AssertionError  # unreachable


# ---------------------------------------------------------------------------
# Independent oracles over finite test-function families
# ---------------------------------------------------------------------------


def oracle_ssd(x: Dist, y: Dist) -> OrderVerdict:
    """Decide X >=ssd Y via E[min(X, t)] >= E[min(Y, t)] on the merged support.

    The gap in t is piecewise linear with knots only at atoms, flat below the
    smallest and above the largest, so the merged support is a complete test
    set.  Shares no code with check_ssd.
    """
    pair = _exact_pair(x, y)
    if pair is None:
        raise UnsupportedPairingError("oracle_ssd is defined for finite-support pairs")
    dx, dy = pair
    for t in sorted(set(dx.values) | set(dy.values)):
        lhs = sum((min(v, t) * p for v, p in dx.atoms), Fraction(0))
        rhs = sum((min(v, t) * p for v, p in dy.atoms), Fraction(0))
        if lhs < rhs:
            return OrderVerdict(False, Witness("angle_t", t, lhs, rhs))
    return _HOLDS


def oracle_icx(x: Dist, y: Dist) -> OrderVerdict:
    """Decide X >=icx Y via stop-loss premiums on the merged support."""
    pair = _exact_pair(x, y)
    if pair is None:
        raise UnsupportedPairingError("oracle_icx is defined for finite-support pairs")
    dx, dy = pair
    for t in sorted(set(dx.values) | set(dy.values)):
        lhs = sum(((v - t) * p for v, p in dx.atoms if v > t), Fraction(0))
        rhs = sum(((v - t) * p for v, p in dy.atoms if v > t), Fraction(0))
        if lhs < rhs:
            return OrderVerdict(False, Witness("angle_t", t, lhs, rhs))
    return _HOLDS
