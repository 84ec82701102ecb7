"""Finite discrete laws, parametric families, and finite joint laws.

Discrete objects store both values and probabilities as `fractions.Fraction`,
so every comparison downstream (order checks, dependence conditions, coupling
feasibility) is exact.  Ints, rational strings and Fractions convert losslessly;
a float converts to the dyadic rational it actually is.  Parametric laws
(Normal, Exponential, Bernoulli, LogNormal, PointMass) carry float parameters
and are evaluated through binary64 closed forms.

Quantiles follow the right-quantile convention

    Q(t) = inf { x : P(X <= x) > t },

with strict inequality.  The choice matters exactly at atoms, and expected
shortfall / the order checkers assume it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

__all__ = [
    "StochOrderError",
    "InputError",
    "IrrelevantThresholdError",
    "UnsupportedPairingError",
    "as_fraction",
    "DiscreteDist",
    "Normal",
    "Exponential",
    "Bernoulli",
    "LogNormal",
    "PointMass",
    "Dist",
    "JointDist",
    "normalize",
    "normalize_joint",
    "point_mass_dist",
    "as_discrete",
    "cdf",
    "quantile_right",
    "mean",
    "variance",
    "lower_tail_mean",
    "upper_tail_mean",
    "negate",
    "affine",
    "joint_marginal_w",
    "joint_z",
    "joint_sum",
    "norm_pdf",
    "norm_cdf",
    "norm_quantile",
    "discretize",
    "rational_to_json",
    "dist_to_json",
    "dist_from_json",
    "joint_to_json",
    "joint_from_json",
]

RationalLike = Union[int, str, float, Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class StochOrderError(Exception):
    """Base class for every error this package raises deliberately."""


class InputError(StochOrderError, ValueError):
    """Invalid argument: domain violation, malformed schema, bad parameter."""


class IrrelevantThresholdError(InputError):
    """The conditioning event at the requested threshold has probability zero."""


class UnsupportedPairingError(InputError):
    """The operation is not defined for this combination of distribution kinds."""


def as_fraction(x: RationalLike) -> Fraction:
    """Convert exactly to Fraction.

    Floats map to the dyadic rational they represent in binary64; strings may
    be either decimal ("0.25") or ratio ("1/4") form.
    """
    if isinstance(x, bool):
        raise InputError("booleans are not numeric values")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise InputError(f"non-finite value {x!r}")
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"cannot parse rational from {x!r}") from exc
    raise InputError(f"cannot interpret {x!r} as a rational")


# ---------------------------------------------------------------------------
# Distribution types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiscreteDist:
    """Finite law: atoms sorted by value, positive probabilities, total mass 1.

    Construct through normalize(); the constructor only validates.
    """

    atoms: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self) -> None:
        if not self.atoms:
            raise InputError("discrete law needs at least one atom")
        total = _ZERO
        prev = None
        for value, prob in self.atoms:
            if not isinstance(value, Fraction) or not isinstance(prob, Fraction):
                raise InputError("atoms must hold Fraction values and probabilities")
            if prob <= 0:
                raise InputError(f"atom probability must be positive, got {prob}")
            if prev is not None and value <= prev:
                raise InputError("atom values must be strictly increasing")
            prev = value
            total += prob
        if total != 1:
            raise InputError(f"probabilities must sum to 1, got {total}")

    @property
    def values(self) -> tuple[Fraction, ...]:
        return tuple(v for v, _ in self.atoms)

    @property
    def probs(self) -> tuple[Fraction, ...]:
        return tuple(p for _, p in self.atoms)

    def support_size(self) -> int:
        return len(self.atoms)


@dataclass(frozen=True)
class Normal:
    mu: float
    sigma: float

    def __post_init__(self) -> None:
        _check_finite("mu", self.mu)
        _check_finite("sigma", self.sigma)
        if self.sigma <= 0:
            raise InputError(f"sigma must be positive, got {self.sigma}")


@dataclass(frozen=True)
class Exponential:
    rate: float

    def __post_init__(self) -> None:
        _check_finite("rate", self.rate)
        if self.rate <= 0:
            raise InputError(f"rate must be positive, got {self.rate}")


@dataclass(frozen=True)
class Bernoulli:
    q: float  # P(X = 1)

    def __post_init__(self) -> None:
        _check_finite("q", self.q)
        if not 0.0 <= self.q <= 1.0:
            raise InputError(f"q must lie in [0, 1], got {self.q}")


@dataclass(frozen=True)
class LogNormal:
    mu: float
    sigma: float

    def __post_init__(self) -> None:
        _check_finite("mu", self.mu)
        _check_finite("sigma", self.sigma)
        if self.sigma <= 0:
            raise InputError(f"sigma must be positive, got {self.sigma}")


@dataclass(frozen=True)
class PointMass:
    c: float

    def __post_init__(self) -> None:
        _check_finite("c", self.c)


Dist = Union[DiscreteDist, Normal, Exponential, Bernoulli, LogNormal, PointMass]

_PARAM_KINDS = (Normal, Exponential, Bernoulli, LogNormal, PointMass)


def _check_finite(name: str, x: float) -> None:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise InputError(f"{name} must be a real number, got {x!r}")
    if not math.isfinite(x):
        raise InputError(f"{name} must be finite, got {x!r}")


def normalize(raw_atoms: Iterable[tuple[RationalLike, RationalLike]]) -> DiscreteDist:
    """Build a canonical discrete law from (value, weight) pairs.

    Weights must be nonnegative with positive total; they are rescaled to sum
    to one.  Duplicate values merge, zero-weight atoms drop.
    """
    acc: dict[Fraction, Fraction] = {}
    for value, weight in raw_atoms:
        v = as_fraction(value)
        w = as_fraction(weight)
        if w < 0:
            raise InputError(f"negative weight {w} at value {v}")
        if w == 0:
            continue
        acc[v] = acc.get(v, _ZERO) + w
    total = sum(acc.values(), _ZERO)
    if total == 0:
        raise InputError("total weight must be positive")
    atoms = tuple((v, acc[v] / total) for v in sorted(acc))
    return DiscreteDist(atoms)


def point_mass_dist(value: RationalLike) -> DiscreteDist:
    return DiscreteDist(((as_fraction(value), _ONE),))


def as_discrete(d: Dist) -> DiscreteDist | None:
    """Exact discrete form for finite-support kinds; None for the rest."""
    if isinstance(d, DiscreteDist):
        return d
    if isinstance(d, PointMass):
        return point_mass_dist(as_fraction(d.c))
    if isinstance(d, Bernoulli):
        q = as_fraction(d.q)
        if q == 0:
            return point_mass_dist(0)
        if q == 1:
            return point_mass_dist(1)
        return DiscreteDist(((_ZERO, 1 - q), (_ONE, q)))
    return None


# ---------------------------------------------------------------------------
# Joint laws
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JointDist:
    """Finite joint law of a pair (W, Z): distinct (w, z) atoms, total mass 1."""

    atoms: tuple[tuple[Fraction, Fraction, Fraction], ...]  # (w, z, prob)

    def __post_init__(self) -> None:
        if not self.atoms:
            raise InputError("joint law needs at least one atom")
        total = _ZERO
        seen: set[tuple[Fraction, Fraction]] = set()
        for w, z, p in self.atoms:
            if not (isinstance(w, Fraction) and isinstance(z, Fraction) and isinstance(p, Fraction)):
                raise InputError("joint atoms must hold Fractions")
            if p <= 0:
                raise InputError(f"atom probability must be positive, got {p}")
            if (w, z) in seen:
                raise InputError(f"duplicate joint atom at (w={w}, z={z})")
            seen.add((w, z))
            total += p
        if total != 1:
            raise InputError(f"probabilities must sum to 1, got {total}")


def normalize_joint(
    raw_atoms: Iterable[tuple[RationalLike, RationalLike, RationalLike]],
) -> JointDist:
    """Build a canonical joint law; merges duplicate cells, rescales weights."""
    acc: dict[tuple[Fraction, Fraction], Fraction] = {}
    for w, z, weight in raw_atoms:
        key = (as_fraction(w), as_fraction(z))
        wt = as_fraction(weight)
        if wt < 0:
            raise InputError(f"negative weight {wt} at cell {key}")
        if wt == 0:
            continue
        acc[key] = acc.get(key, _ZERO) + wt
    total = sum(acc.values(), _ZERO)
    if total == 0:
        raise InputError("total weight must be positive")
    atoms = tuple((w, z, acc[(w, z)] / total) for (w, z) in sorted(acc))
    return JointDist(atoms)


def joint_marginal_w(j: JointDist) -> DiscreteDist:
    return normalize((w, p) for w, _, p in j.atoms)


def joint_z(j: JointDist) -> DiscreteDist:
    return normalize((z, p) for _, z, p in j.atoms)


def joint_sum(j: JointDist) -> DiscreteDist:
    """Law of W + Z."""
    return normalize((w + z, p) for w, z, p in j.atoms)


# ---------------------------------------------------------------------------
# Standard normal helpers
# ---------------------------------------------------------------------------

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def norm_pdf(z: float) -> float:
    return _INV_SQRT_2PI * math.exp(-0.5 * z * z)


def norm_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / _SQRT2)


def norm_quantile(t: float) -> float:
    """Standard normal quantile by bisection on the erfc-based CDF."""
    if not 0.0 < t < 1.0:
        raise InputError(f"quantile level must lie in (0, 1), got {t}")
    lo, hi = -40.0, 40.0
    # 1e-13 absolute is past what downstream tolerances need
    while hi - lo > 1e-13:
        mid = 0.5 * (lo + hi)
        if norm_cdf(mid) < t:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Generic operations
# ---------------------------------------------------------------------------


def cdf(d: Dist, x: RationalLike) -> Fraction | float:
    """P(X <= x).  Exact Fraction for discrete laws, float for parametric."""
    if isinstance(d, DiscreteDist):
        xf = as_fraction(x)
        total = _ZERO
        for v, p in d.atoms:
            if v <= xf:
                total += p
            else:
                break
        return total
    xv = float(as_fraction(x)) if not isinstance(x, float) else x
    if isinstance(d, Normal):
        return norm_cdf((xv - d.mu) / d.sigma)
    if isinstance(d, Exponential):
        return -math.expm1(-d.rate * xv) if xv > 0 else 0.0
    if isinstance(d, Bernoulli):
        if xv < 0.0:
            return 0.0
        if xv < 1.0:
            return 1.0 - d.q
        return 1.0
    if isinstance(d, LogNormal):
        if xv <= 0.0:
            return 0.0
        return norm_cdf((math.log(xv) - d.mu) / d.sigma)
    if isinstance(d, PointMass):
        return 1.0 if xv >= d.c else 0.0
    raise InputError(f"unknown distribution {d!r}")


def quantile_right(d: Dist, t: RationalLike) -> Fraction | float:
    """Right quantile Q(t) = inf{x : P(X <= x) > t} for t in (0, 1)."""
    if isinstance(d, DiscreteDist):
        tf = as_fraction(t)
        if not 0 < tf < 1:
            raise InputError(f"quantile level must lie in (0, 1), got {tf}")
        cum = _ZERO
        for v, p in d.atoms:
            cum += p
            if cum > tf:
                return v
        return d.atoms[-1][0]  # unreachable: cum reaches 1 > t
    tv = float(as_fraction(t)) if not isinstance(t, float) else t
    if not 0.0 < tv < 1.0:
        raise InputError(f"quantile level must lie in (0, 1), got {tv}")
    if isinstance(d, Normal):
        return d.mu + d.sigma * norm_quantile(tv)
    if isinstance(d, Exponential):
        return -math.log1p(-tv) / d.rate
    if isinstance(d, Bernoulli):
        # P(X <= 0) = 1 - q exceeds t exactly when t < 1 - q
        return 0.0 if tv < 1.0 - d.q else 1.0
    if isinstance(d, LogNormal):
        return math.exp(d.mu + d.sigma * norm_quantile(tv))
    if isinstance(d, PointMass):
        return d.c
    raise InputError(f"unknown distribution {d!r}")


def mean(d: Dist) -> Fraction | float:
    if isinstance(d, DiscreteDist):
        return sum((v * p for v, p in d.atoms), _ZERO)
    if isinstance(d, Normal):
        return d.mu
    if isinstance(d, Exponential):
        return 1.0 / d.rate
    if isinstance(d, Bernoulli):
        return d.q
    if isinstance(d, LogNormal):
        return math.exp(d.mu + 0.5 * d.sigma * d.sigma)
    if isinstance(d, PointMass):
        return d.c
    raise InputError(f"unknown distribution {d!r}")


def variance(d: Dist) -> Fraction | float:
    if isinstance(d, DiscreteDist):
        m = mean(d)
        return sum(((v - m) ** 2 * p for v, p in d.atoms), _ZERO)
    if isinstance(d, Normal):
        return d.sigma * d.sigma
    if isinstance(d, Exponential):
        return 1.0 / (d.rate * d.rate)
    if isinstance(d, Bernoulli):
        return d.q * (1.0 - d.q)
    if isinstance(d, LogNormal):
        s2 = d.sigma * d.sigma
        return math.expm1(s2) * math.exp(2.0 * d.mu + s2)
    if isinstance(d, PointMass):
        return 0.0
    raise InputError(f"unknown distribution {d!r}")


def lower_tail_mean(d: Dist, x: RationalLike) -> Fraction | float:
    """E[X | X <= x].  Raises IrrelevantThresholdError when P(X <= x) = 0."""
    if isinstance(d, DiscreteDist):
        xf = as_fraction(x)
        num = _ZERO
        den = _ZERO
        for v, p in d.atoms:
            if v <= xf:
                num += v * p
                den += p
        if den == 0:
            raise IrrelevantThresholdError(f"P(X <= {xf}) = 0")
        return num / den
    xv = float(as_fraction(x)) if not isinstance(x, float) else x
    if isinstance(d, Normal):
        z = (xv - d.mu) / d.sigma
        phi_z = norm_cdf(z)
        if phi_z == 0.0:
            raise IrrelevantThresholdError(f"P(X <= {xv}) underflows to 0")
        return d.mu - d.sigma * norm_pdf(z) / phi_z
    if isinstance(d, Exponential):
        if xv <= 0.0:
            raise IrrelevantThresholdError(f"P(X <= {xv}) = 0")
        # E[X 1{X<=x}] = 1/rate - (x + 1/rate) e^{-rate x}
        r = d.rate
        ex = math.exp(-r * xv)
        num = 1.0 / r - (xv + 1.0 / r) * ex
        den = 1.0 - ex
        return num / den
    if isinstance(d, Bernoulli):
        if xv < 0.0:
            raise IrrelevantThresholdError(f"P(X <= {xv}) = 0")
        if xv < 1.0:
            if d.q == 1.0:
                raise IrrelevantThresholdError(f"P(X <= {xv}) = 0")
            return 0.0
        return d.q
    if isinstance(d, LogNormal):
        if xv <= 0.0:
            raise IrrelevantThresholdError(f"P(X <= {xv}) = 0")
        z = (math.log(xv) - d.mu) / d.sigma
        den = norm_cdf(z)
        if den == 0.0:
            raise IrrelevantThresholdError(f"P(X <= {xv}) underflows to 0")
        num = math.exp(d.mu + 0.5 * d.sigma**2) * norm_cdf(z - d.sigma)
        return num / den
    if isinstance(d, PointMass):
        if xv < d.c:
            raise IrrelevantThresholdError(f"P(X <= {xv}) = 0")
        return d.c
    raise InputError(f"unknown distribution {d!r}")


def upper_tail_mean(d: Dist, x: RationalLike) -> Fraction | float:
    """E[X | X >= x].  Raises IrrelevantThresholdError when P(X >= x) = 0."""
    if isinstance(d, DiscreteDist):
        xf = as_fraction(x)
        num = _ZERO
        den = _ZERO
        for v, p in d.atoms:
            if v >= xf:
                num += v * p
                den += p
        if den == 0:
            raise IrrelevantThresholdError(f"P(X >= {xf}) = 0")
        return num / den
    xv = float(as_fraction(x)) if not isinstance(x, float) else x
    if isinstance(d, Normal):
        z = (xv - d.mu) / d.sigma
        surv = norm_cdf(-z)
        if surv == 0.0:
            raise IrrelevantThresholdError(f"P(X >= {xv}) underflows to 0")
        return d.mu + d.sigma * norm_pdf(z) / surv
    if isinstance(d, Exponential):
        # memoryless: E[X | X >= x] = max(x, 0) + 1/rate
        return max(xv, 0.0) + 1.0 / d.rate
    if isinstance(d, Bernoulli):
        if xv <= 0.0:
            return d.q
        if xv <= 1.0:
            if d.q == 0.0:
                raise IrrelevantThresholdError(f"P(X >= {xv}) = 0")
            return 1.0
        raise IrrelevantThresholdError(f"P(X >= {xv}) = 0")
    if isinstance(d, LogNormal):
        m = math.exp(d.mu + 0.5 * d.sigma**2)
        if xv <= 0.0:
            return m
        z = (math.log(xv) - d.mu) / d.sigma
        den = norm_cdf(-z)
        if den == 0.0:
            raise IrrelevantThresholdError(f"P(X >= {xv}) underflows to 0")
        return m * norm_cdf(d.sigma - z) / den
    if isinstance(d, PointMass):
        if xv > d.c:
            raise IrrelevantThresholdError(f"P(X >= {xv}) = 0")
        return d.c
    raise InputError(f"unknown distribution {d!r}")


def negate(d: Dist) -> Dist:
    """Law of -X.  Defined for discrete, Normal, Bernoulli and PointMass."""
    if isinstance(d, DiscreteDist):
        return DiscreteDist(tuple((-v, p) for v, p in reversed(d.atoms)))
    if isinstance(d, Normal):
        return Normal(-d.mu, d.sigma)
    if isinstance(d, PointMass):
        return PointMass(-d.c)
    if isinstance(d, Bernoulli):
        disc = as_discrete(d)
        assert disc is not None
        return negate(disc)
    raise UnsupportedPairingError(f"negation is not defined for {type(d).__name__}")


def affine(d: Dist, a: RationalLike, b: RationalLike) -> Dist:
    """Law of a*X + b for discrete laws, Normal and PointMass."""
    if isinstance(d, DiscreteDist):
        af, bf = as_fraction(a), as_fraction(b)
        return normalize((af * v + bf, p) for v, p in d.atoms)
    av, bv = float(as_fraction(a)), float(as_fraction(b))
    if isinstance(d, Normal):
        if av == 0.0:
            return PointMass(bv)
        return Normal(av * d.mu + bv, abs(av) * d.sigma)
    if isinstance(d, PointMass):
        return PointMass(av * d.c + bv)
    raise UnsupportedPairingError(f"affine map is not defined for {type(d).__name__}")


# ---------------------------------------------------------------------------
# JSON schema
# ---------------------------------------------------------------------------
#
# Discrete:   {"type": "discrete", "atoms": [{"x": 0, "p": "1/4"}, ...]}
# Parametric: {"type": "normal", "mu": 0.0, "sigma": 1.0}
#             {"type": "exponential", "rate": 1.0}
#             {"type": "bernoulli", "q": 0.5}
#             {"type": "lognormal", "mu": 0.0, "sigma": 1.0}
#             {"type": "point", "c": 1.0}
# Joint:      {"type": "joint", "atoms": [{"w": 0, "z": "-1/2", "p": "1/4"}, ...]}
#
# Probabilities must be ints or rational strings; floats there are rejected so
# that exactness is never silently lost.  Values may be ints, floats or
# rational strings.


def rational_to_json(q: Fraction) -> int | str:
    return int(q) if q.denominator == 1 else str(q)


def _prob_from_json(v: object, where: str) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise InputError(
            f"{where}: probability must be an int or a rational string, got {v!r}"
        )
    return as_fraction(v)


def _value_from_json(v: object, where: str) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (int, float, str)):
        raise InputError(f"{where}: value must be a number or rational string, got {v!r}")
    return as_fraction(v)


def _float_param(obj: dict, key: str) -> float:
    if key not in obj:
        raise InputError(f"missing parameter {key!r}")
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise InputError(f"parameter {key!r} must be a number, got {v!r}")
    return float(v)


def dist_from_json(obj: object) -> Dist:
    if not isinstance(obj, dict):
        raise InputError("distribution JSON must be an object")
    kind = obj.get("type")
    if kind == "discrete":
        atoms = obj.get("atoms")
        if not isinstance(atoms, list) or not atoms:
            raise InputError("discrete law needs a non-empty 'atoms' list")
        raw = []
        for i, a in enumerate(atoms):
            if not isinstance(a, dict) or "x" not in a or "p" not in a:
                raise InputError(f"atom {i} must be an object with 'x' and 'p'")
            raw.append(
                (_value_from_json(a["x"], f"atom {i}"), _prob_from_json(a["p"], f"atom {i}"))
            )
        return normalize(raw)
    if kind == "normal":
        return Normal(_float_param(obj, "mu"), _float_param(obj, "sigma"))
    if kind == "exponential":
        return Exponential(_float_param(obj, "rate"))
    if kind == "bernoulli":
        return Bernoulli(_float_param(obj, "q"))
    if kind == "lognormal":
        return LogNormal(_float_param(obj, "mu"), _float_param(obj, "sigma"))
    if kind == "point":
        return PointMass(_float_param(obj, "c"))
    raise InputError(f"unknown distribution type {kind!r}")


def dist_to_json(d: Dist) -> dict:
    if isinstance(d, DiscreteDist):
        return {
            "type": "discrete",
            "atoms": [
                {"x": rational_to_json(v), "p": rational_to_json(p)} for v, p in d.atoms
            ],
        }
    if isinstance(d, Normal):
        return {"type": "normal", "mu": d.mu, "sigma": d.sigma}
    if isinstance(d, Exponential):
        return {"type": "exponential", "rate": d.rate}
    if isinstance(d, Bernoulli):
        return {"type": "bernoulli", "q": d.q}
    if isinstance(d, LogNormal):
        return {"type": "lognormal", "mu": d.mu, "sigma": d.sigma}
    if isinstance(d, PointMass):
        return {"type": "point", "c": d.c}
    raise InputError(f"unknown distribution {d!r}")


def joint_from_json(obj: object) -> JointDist:
    if not isinstance(obj, dict):
        raise InputError("joint JSON must be an object")
    if obj.get("type") != "joint":
        raise InputError(f"expected type 'joint', got {obj.get('type')!r}")
    atoms = obj.get("atoms")
    if not isinstance(atoms, list) or not atoms:
        raise InputError("joint law needs a non-empty 'atoms' list")
    raw = []
    for i, a in enumerate(atoms):
        if not isinstance(a, dict) or not {"w", "z", "p"} <= set(a):
            raise InputError(f"joint atom {i} must be an object with 'w', 'z' and 'p'")
        raw.append(
            (
                _value_from_json(a["w"], f"atom {i}"),
                _value_from_json(a["z"], f"atom {i}"),
                _prob_from_json(a["p"], f"atom {i}"),
            )
        )
    return normalize_joint(raw)


def joint_to_json(j: JointDist) -> dict:
    return {
        "type": "joint",
        "atoms": [
            {
                "w": rational_to_json(w),
                "z": rational_to_json(z),
                "p": rational_to_json(p),
            }
            for w, z, p in j.atoms
        ],
    }


def discretize(d: Dist, n: int) -> DiscreteDist:
    """n equal-mass atoms at the midpoint quantiles Q((2k-1)/(2n)), k=1..n.

    An approximation for continuous families, never applied silently: callers
    that need a discrete law must invoke it themselves.  Laws that are
    already finite convert exactly and ignore n: a DiscreteDist passes
    through, a PointMass becomes its single atom and a Bernoulli its two.
    For a Normal the atoms are generated on the lower half and mirrored
    about mu, so the discretized mean is exactly mu.
    """
    if isinstance(n, bool) or not isinstance(n, int):
        raise InputError(f"n must be an integer, got {n!r}")
    if n < 2:
        raise InputError(f"discretization needs n >= 2 atoms, got {n}")
    exact = as_discrete(d)
    if exact is not None:
        return exact
    prob = Fraction(1, n)
    if isinstance(d, Normal):
        # pair each offset with its exact rational negation so the
        # discretized mean is exactly mu
        center = Fraction(d.mu)
        offsets = [
            Fraction(d.sigma * norm_quantile((2 * k - 1) / (2 * n)))
            for k in range(1, n // 2 + 1)
        ]
        values = [center + off for off in offsets]
        values += [center - off for off in offsets]
        if n % 2 == 1:
            values.append(center)
        return normalize((v, prob) for v in values)
    if isinstance(d, (Exponential, LogNormal)):
        levels = [Fraction(2 * k - 1, 2 * n) for k in range(1, n + 1)]
        return normalize((quantile_right(d, t), prob) for t in levels)
    raise InputError(f"cannot discretize {type(d).__name__}")
