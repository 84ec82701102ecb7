"""Sufficient dependence conditions on a finite joint law of (W, Z).

Each checker inspects conditional expectations of Z over tail events of an
anchor variable, exactly in rational arithmetic.  Thresholds are "relevant"
when the conditioning event has positive probability; only those are checked.

cond_new:            E[Z | W <= x] <= 0 at every relevant x  (implies W + Z <=ssd W)
cond_classic:        E[Z | W = w] <= 0 at every atom w of W  (pointwise; stronger anchor)
cond_icx:            E[Z | W >= x] >= 0 at every relevant x  (implies W + Z >=icx W)
cond_cx_pair:        E[Z] = 0 and cond_new                   (implies W + Z spreads W)
cond_on_difference:  E[Z | Y - Z <= x] <= 0 at every relevant x, for a joint of
                     (Y, Z); the anchor is the difference Y - Z itself
                     (implies Y <=ssd Y - Z)

is_comonotone decides whether a finite set of weighted points can be the law
of a comonotone pair: no two support points may move in opposite directions.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .dists import JointDist, RationalLike, as_fraction
from .orders import OrderVerdict, Witness

__all__ = [
    "relevant_thresholds",
    "cond_new",
    "cond_classic",
    "cond_icx",
    "cond_cx_pair",
    "cond_on_difference",
    "is_comonotone",
]

_ZERO = Fraction(0)

_HOLDS = OrderVerdict(True, None)


def relevant_thresholds(j: JointDist) -> list[Fraction]:
    """Distinct values of the anchor (first) coordinate, ascending.

    Lower-tail events {W <= x} change only at these points, and upper-tail
    events {W >= x} likewise, so they are the complete relevant test set.
    """
    return sorted({w for w, _, _ in j.atoms})


def cond_new(j: JointDist) -> OrderVerdict:
    """E[Z | W <= x] <= 0 for every relevant threshold x."""
    for x in relevant_thresholds(j):
        num = _ZERO
        den = _ZERO
        for w, z, p in j.atoms:
            if w <= x:
                num += z * p
                den += p
        # den > 0: x is an atom of W
        if num / den > 0:
            return OrderVerdict(False, Witness("threshold_x", x, num / den, _ZERO))
    return _HOLDS


def cond_classic(j: JointDist) -> OrderVerdict:
    """E[Z | W = w] <= 0 at every atom w of W."""
    for x in relevant_thresholds(j):
        num = _ZERO
        den = _ZERO
        for w, z, p in j.atoms:
            if w == x:
                num += z * p
                den += p
        if num / den > 0:
            return OrderVerdict(False, Witness("threshold_x", x, num / den, _ZERO))
    return _HOLDS


def cond_icx(j: JointDist) -> OrderVerdict:
    """E[Z | W >= x] >= 0 for every relevant threshold x."""
    for x in relevant_thresholds(j):
        num = _ZERO
        den = _ZERO
        for w, z, p in j.atoms:
            if w >= x:
                num += z * p
                den += p
        if num / den < 0:
            return OrderVerdict(False, Witness("threshold_x", x, num / den, _ZERO))
    return _HOLDS


def cond_cx_pair(j: JointDist) -> OrderVerdict:
    """E[Z] = 0 together with cond_new.

    Under a zero mean the lower-tail and upper-tail conditions are the same
    statement (the two tail sums are negatives of each other), so either one
    certifies the spread; both are computed and must agree.  A witness at the
    top threshold with nonzero lhs exhibits the mean failure.
    """
    mean_z = sum((z * p for _, z, p in j.atoms), _ZERO)
    if mean_z != 0:
        top = relevant_thresholds(j)[-1]
        return OrderVerdict(False, Witness("threshold_x", top, mean_z, _ZERO))
    lower = cond_new(j)
    upper = cond_icx(j)
    if lower.holds != upper.holds:
        raise RuntimeError("internal: zero-mean tail conditions disagree")
    return lower


def cond_on_difference(j: JointDist) -> OrderVerdict:
    """E[Z | Y - Z <= x] <= 0 at every relevant x, for a joint law of (Y, Z).

    The anchor is the difference V = Y - Z; relevant thresholds are V's
    atoms.  Holding, it certifies Y <=ssd Y - Z.
    """
    diffs = sorted({y - z for y, z, _ in j.atoms})
    for x in diffs:
        num = _ZERO
        den = _ZERO
        for y, z, p in j.atoms:
            if y - z <= x:
                num += z * p
                den += p
        if num / den > 0:
            return OrderVerdict(False, Witness("threshold_x", x, num / den, _ZERO))
    return _HOLDS


def is_comonotone(
    pairs: Iterable[Sequence[RationalLike]],
) -> bool:
    """Whether weighted points (a, b[, p]) support a comonotone pair.

    Comonotone means no two support points move in opposite directions:
    (a - a')(b - b') >= 0 for every pair of atoms.  After sorting
    lexicographically by (a, b), that is equivalent to the second coordinate
    being nondecreasing, so adjacent comparisons decide the whole set.
    Probabilities, when present, only need to be positive.
    """
    pts: list[tuple[Fraction, Fraction]] = []
    for item in pairs:
        seq = tuple(item)
        if len(seq) not in (2, 3):
            raise ValueError(f"expected (a, b) or (a, b, p), got {seq!r}")
        if len(seq) == 3 and as_fraction(seq[2]) <= 0:
            continue
        pts.append((as_fraction(seq[0]), as_fraction(seq[1])))
    pts.sort()
    for (a0, b0), (a1, b1) in zip(pts, pts[1:]):
        if a0 < a1 and b1 < b0:
            return False
    return True
