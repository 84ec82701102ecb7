"""Coupling synthesis by exact rational LP feasibility.

Given finite marginal laws X (rows) and Y (columns), find a joint matrix pi
on support(X) x support(Y) with those marginals such that, writing
Z = Y - W for the coordinate pair (W, Y),

    supermartingale mode:  E[Z | W = w] <= 0 at every atom w   (feasible iff X >=ssd Y)
    martingale mode:       E[Z | W = w]  = 0 at every atom w   (feasible iff X <=cx Y)

The search is a phase-1 simplex over exact Fractions with Bland's rule, so
feasibility answers are decisions, not approximations.  On the infeasible
side the result carries the witness of the violated order as a certificate;
the two must agree, and a disagreement raises instead of returning.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

from .dists import DiscreteDist, Dist, InputError, JointDist, as_discrete, normalize_joint
from .orders import OrderVerdict, Witness, check_cx, check_ssd

__all__ = [
    "Coupling",
    "SynthResult",
    "MODE_SUPERMARTINGALE",
    "MODE_MARTINGALE",
    "synth_supermartingale",
    "synth_martingale",
    "verify_coupling",
    "coupling_to_joint",
    "max_support",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)

MODE_SUPERMARTINGALE = "supermartingale"
MODE_MARTINGALE = "martingale"

_ENV_MAX_SUPPORT = "STOCHORDER_MAX_SUPPORT"
_DEFAULT_MAX_SUPPORT = 100


def max_support() -> int:
    """Per-marginal support bound for synthesis; override via STOCHORDER_MAX_SUPPORT."""
    raw = os.environ.get(_ENV_MAX_SUPPORT)
    if raw is None:
        return _DEFAULT_MAX_SUPPORT
    try:
        value = int(raw)
    except ValueError as exc:
        raise InputError(f"{_ENV_MAX_SUPPORT} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise InputError(f"{_ENV_MAX_SUPPORT} must be positive, got {value}")
    return value


@dataclass(frozen=True)
class Coupling:
    """Joint mass matrix over support(X) x support(Y), exact rationals."""

    row_values: tuple[Fraction, ...]
    col_values: tuple[Fraction, ...]
    row_probs: tuple[Fraction, ...]
    col_probs: tuple[Fraction, ...]
    pi: tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class SynthResult:
    feasible: bool
    coupling: Coupling | None = None
    certificate: Witness | None = None

    def __post_init__(self) -> None:
        if self.feasible and (self.coupling is None or self.certificate is not None):
            raise ValueError("feasible result must carry a coupling and no certificate")
        if not self.feasible and (self.coupling is not None or self.certificate is None):
            raise ValueError("infeasible result must carry a certificate and no coupling")


def synth_supermartingale(x: Dist, y: Dist) -> SynthResult:
    """Couple X and Y so the column coordinate drifts weakly down from the row."""
    return _synth(x, y, martingale=False)


def synth_martingale(x: Dist, y: Dist) -> SynthResult:
    """Couple X and Y with zero conditional drift (mean-preserving spread)."""
    return _synth(x, y, martingale=True)


def _require_discrete(d: Dist, side: str) -> DiscreteDist:
    disc = as_discrete(d)
    if disc is None:
        raise InputError(
            f"coupling synthesis needs finite-support marginals; {side} is "
            f"{type(d).__name__} (discretize first)"
        )
    return disc


def _synth(x: Dist, y: Dist, martingale: bool) -> SynthResult:
    dx = _require_discrete(x, "X")
    dy = _require_discrete(y, "Y")
    cap = max_support()
    if dx.support_size() > cap or dy.support_size() > cap:
        raise InputError(
            f"marginal support exceeds the bound {cap} "
            f"(set {_ENV_MAX_SUPPORT} to override)"
        )
    mode = MODE_MARTINGALE if martingale else MODE_SUPERMARTINGALE
    if dx.support_size() == 1 or dy.support_size() == 1:
        # degenerate marginal: the product coupling is the only candidate,
        # so feasibility reduces to checking it directly
        product = Coupling(
            row_values=dx.values,
            col_values=dy.values,
            row_probs=dx.probs,
            col_probs=dy.probs,
            pi=tuple(tuple(p * q for q in dy.probs) for p in dx.probs),
        )
        if verify_coupling(product, dx, dy, mode):
            return SynthResult(True, product, None)
        verdict = check_cx(dx, dy) if martingale else check_ssd(dx, dy)
        if verdict.holds:
            raise RuntimeError(
                "internal: order holds but the degenerate coupling fails"
            )
        assert verdict.witness is not None
        return SynthResult(False, None, verdict.witness)
    pi = _solve_transport(dx, dy, martingale)
    if pi is None:
        verdict = check_cx(dx, dy) if martingale else check_ssd(dx, dy)
        if verdict.holds:
            raise RuntimeError("internal: order holds but coupling LP is infeasible")
        assert verdict.witness is not None
        return SynthResult(False, None, verdict.witness)
    coupling = Coupling(
        row_values=dx.values,
        col_values=dy.values,
        row_probs=dx.probs,
        col_probs=dy.probs,
        pi=pi,
    )
    if not verify_coupling(coupling, dx, dy, mode):
        raise RuntimeError("internal: synthesized coupling fails verification")
    return SynthResult(True, coupling, None)


def _solve_transport(
    dx: DiscreteDist, dy: DiscreteDist, martingale: bool
) -> tuple[tuple[Fraction, ...], ...] | None:
    """Feasible transport matrix, or None.

    Variables: pi_ij (row-major), then one slack per drift row in
    supermartingale mode.  Constraints: n row sums, m column sums, n drift
    rows  sum_j (y_j - w_i) pi_ij (+ slack) = 0.  Column sums are kept even
    though one is redundant; phase 1 tolerates that.
    """
    ws, ps = dx.values, dx.probs
    ys, qs = dy.values, dy.probs
    n, m = len(ws), len(ys)
    nvars = n * m + (0 if martingale else n)

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    basic: list[int | None] = []

    for i in range(n):
        row = [_ZERO] * nvars
        for jx in range(m):
            row[i * m + jx] = _ONE
        rows.append(row)
        rhs.append(ps[i])
        basic.append(None)
    for jx in range(m):
        row = [_ZERO] * nvars
        for i in range(n):
            row[i * m + jx] = _ONE
        rows.append(row)
        rhs.append(qs[jx])
        basic.append(None)
    for i in range(n):
        row = [_ZERO] * nvars
        for jx in range(m):
            row[i * m + jx] = ys[jx] - ws[i]
        if not martingale:
            row[n * m + i] = _ONE
        rows.append(row)
        rhs.append(_ZERO)
        basic.append(None if martingale else n * m + i)

    solution = _phase_one(rows, rhs, basic)
    if solution is None:
        return None
    return tuple(
        tuple(solution[i * m + jx] for jx in range(m)) for i in range(n)
    )


def _phase_one(
    rows: list[list[Fraction]],
    rhs: list[Fraction],
    basic: list[int | None],
) -> list[Fraction] | None:
    """Exact phase-1 simplex: minimize artificial mass, Bland's rule.

    rows/rhs describe equality constraints over nonnegative variables; rhs
    must be nonnegative.  basic[i] names a column already usable as the
    initial basis in row i (a slack), or None to add an artificial.  Returns
    values for the original columns when total artificial mass reaches zero.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    tableau = [row[:] for row in rows]
    b = rhs[:]
    basis: list[int] = [0] * m
    ncol = n
    artificial: set[int] = set()
    for i in range(m):
        if b[i] < 0:
            raise ValueError("phase-1 right-hand sides must be nonnegative")
        if basic[i] is not None:
            basis[i] = basic[i]  # type: ignore[assignment]
        else:
            for r in range(m):
                tableau[r].append(_ONE if r == i else _ZERO)
            basis[i] = ncol
            artificial.add(ncol)
            ncol += 1

    # reduced-cost row for min sum(artificials); only original columns may enter
    cbar = [_ZERO] * ncol
    for j in range(ncol):
        s = _ZERO
        for i in range(m):
            if basis[i] in artificial:
                s += tableau[i][j]
        cbar[j] = (_ONE if j in artificial else _ZERO) - s
    w = sum((b[i] for i in range(m) if basis[i] in artificial), _ZERO)

    while True:
        enter = -1
        for j in range(n):
            if cbar[j] < 0:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best: Fraction | None = None
        for i in range(m):
            tij = tableau[i][enter]
            if tij > 0:
                ratio = b[i] / tij
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            raise RuntimeError("internal: phase-1 objective unbounded")
        assert best is not None
        w += cbar[enter] * best
        piv = tableau[leave][enter]
        tableau[leave] = [v / piv for v in tableau[leave]]
        b[leave] /= piv
        pivot_row = tableau[leave]
        pivot_rhs = b[leave]
        for i in range(m):
            if i == leave:
                continue
            f = tableau[i][enter]
            if f != 0:
                tableau[i] = [a - f * c for a, c in zip(tableau[i], pivot_row)]
                b[i] -= f * pivot_rhs
        f = cbar[enter]
        cbar = [a - f * c for a, c in zip(cbar, pivot_row)]
        basis[leave] = enter

    if w != 0:
        return None
    solution = [_ZERO] * n
    for i in range(m):
        if basis[i] < n:
            solution[basis[i]] = b[i]
    return solution


def verify_coupling(c: Coupling, x: Dist, y: Dist, mode: str) -> bool:
    """Recheck a coupling against its marginals and drift constraints.

    Independent arithmetic from the solver: plain sums over the matrix.
    """
    if mode not in (MODE_SUPERMARTINGALE, MODE_MARTINGALE):
        raise InputError(f"unknown mode {mode!r}")
    dx = _require_discrete(x, "X")
    dy = _require_discrete(y, "Y")
    if c.row_values != dx.values or c.col_values != dy.values:
        return False
    if c.row_probs != dx.probs or c.col_probs != dy.probs:
        return False
    n, m = len(c.row_values), len(c.col_values)
    if len(c.pi) != n or any(len(r) != m for r in c.pi):
        return False
    for row in c.pi:
        if any(v < 0 for v in row):
            return False
    for i in range(n):
        if sum(c.pi[i], _ZERO) != c.row_probs[i]:
            return False
    for jx in range(m):
        if sum((c.pi[i][jx] for i in range(n)), _ZERO) != c.col_probs[jx]:
            return False
    for i in range(n):
        drift = sum(
            ((c.col_values[jx] - c.row_values[i]) * c.pi[i][jx] for jx in range(m)),
            _ZERO,
        )
        if mode == MODE_MARTINGALE:
            if drift != 0:
                return False
        elif drift > 0:
            return False
    return True


def coupling_to_joint(c: Coupling) -> JointDist:
    """The coupling as a joint law of (W, Z) with Z = Y - W."""
    cells = []
    for i, wv in enumerate(c.row_values):
        for jx, yv in enumerate(c.col_values):
            p = c.pi[i][jx]
            if p > 0:
                cells.append((wv, yv - wv, p))
    return normalize_joint(cells)
