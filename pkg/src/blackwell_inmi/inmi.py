"""The inf-norm informativeness score and the checks built around it.

``d_inmi(E) = ||I - E||_inf`` is the distance of a square experiment from
the fully revealing one: 0 for the identity, larger for noisier
experiments.  Any two square experiments get comparable scores, including
pairs that Blackwell dominance leaves unranked.
"""

from __future__ import annotations

import enum
import math
from typing import NamedTuple

import numpy as np

from .blackwell import HypothesisViolation
from .experiments import (
    Dichotomy,
    Experiment,
    Garbling,
    as_experiment,
    as_garbling,
    dichotomy_to_experiment,
    is_straightforward,
)
from .matkernel import kron, norm, rank

TIE_TOL = 1e-12


class InmiRelation(str, enum.Enum):
    MORE = "more-informative"
    LESS = "less-informative"
    TIE = "tie"


class InmiComparison(NamedTuple):
    relation: InmiRelation
    score_a: float
    score_b: float


def _square(e) -> Experiment:
    e = as_experiment(e)
    if not e.is_square:
        raise ValueError(f"d_inmi only ranks square experiments, got shape {e.shape}")
    return e


def row_deviations(e) -> np.ndarray:
    """Absolute row sums of ``I - e``."""
    e = _square(e)
    return np.abs(np.eye(e.n_signals) - e.mat).sum(axis=1)


def d_inmi(e) -> float:
    e = _square(e)
    return norm(np.eye(e.n_signals) - e.mat, "infinity")


def inmi_compare(a, b, tie_tol: float = TIE_TOL) -> InmiComparison:
    """Rank two square experiments (sizes may differ) by their scores."""
    sa, sb = d_inmi(a), d_inmi(b)
    if abs(sa - sb) <= tie_tol:
        rel = InmiRelation.TIE
    elif sa < sb:
        rel = InmiRelation.MORE
    else:
        rel = InmiRelation.LESS
    return InmiComparison(rel, sa, sb)


def contraction_gap(m, a, b, kind="infinity", check_hypothesis: bool = True) -> float:
    """``||a - b|| - ||m a - m b||`` under ``kind``; nonnegative when garbling contracts.

    Raises:
        HypothesisViolation: ``a`` is not straightforward (unless
            ``check_hypothesis`` is false).
    """
    m = as_garbling(m)
    a, b = as_experiment(a), as_experiment(b)
    if a.shape != b.shape or m.shape[1] != a.n_signals:
        raise ValueError(f"shapes do not conform: m {m.shape}, a {a.shape}, b {b.shape}")
    if check_hypothesis and not is_straightforward(a):
        raise HypothesisViolation("contraction is only claimed for straightforward a")
    diff = a.mat - b.mat
    return norm(diff, kind) - norm(m.mat @ diff, kind)


# Coefficient on a2 in the second bracket of the closed form, per reading.
# "literal" keeps 1 - g2 + g2, which collapses to 1; "corrected" is what
# expanding the first row of (I - G) A gives; "swapped" is 1 - g2 + g1.
_A2_FACTOR = {
    "literal": lambda g1, g2: 1.0 - g2 + g2,
    "corrected": lambda g1, g2: 1.0 - g1 + g2,
    "swapped": lambda g1, g2: 1.0 - g2 + g1,
}


class FrobeniusGap(NamedTuple):
    direct: float
    closed_forms: dict

    def matching_readings(self, tol: float = 1e-9) -> list:
        return [k for k, v in self.closed_forms.items() if abs(v - self.direct) <= tol]


def _two_by_two(p1, p2) -> np.ndarray:
    return np.array([[p1, p2], [1.0 - p1, 1.0 - p2]])


def frobenius_closed_form(d: Dichotomy, gamma, m, reading: str = "corrected") -> float:
    """Closed-form ``||A - B||_F - ||MA - MB||_F`` for dichotomies, ``B = G A``."""
    g1, g2 = gamma
    m1, m2 = m
    x = d.a1 * (1.0 - g1 + g2) - g2
    y = d.a2 * _A2_FACTOR[reading](g1, g2) + g1 - 1.0
    first = math.sqrt(2.0 * (x * x + y * y))
    second = math.sqrt(2.0 * (((m1 - m2) * x) ** 2 + ((m2 - m1) * y) ** 2))
    return first - second


def frobenius_contraction_gap(d: Dichotomy, gamma, m) -> FrobeniusGap:
    """Closed-form Frobenius contraction for a dichotomy next to the direct value.

    ``gamma = (g1, g2)`` and ``m = (m1, m2)`` are the first rows of the
    2x2 garblings.  ``direct`` is computed from the matrices themselves and
    serves as the oracle for every closed-form reading.
    """
    if not d.is_straightforward:
        raise HypothesisViolation(f"dichotomy {d} is not straightforward")
    for p in (*gamma, *m):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"parameters must lie in [0, 1], got {p}")
    a = dichotomy_to_experiment(d).mat
    g = _two_by_two(*gamma)
    mm = _two_by_two(*m)
    diff = a - g @ a
    direct = norm(diff, "frobenius") - norm(mm @ diff, "frobenius")
    forms = {k: frobenius_closed_form(d, gamma, m, k) for k in _A2_FACTOR}
    return FrobeniusGap(direct, forms)


class RankOneReport(NamedTuple):
    rank_identity_gap: int
    rank_difference: int
    degenerate: bool
    u1: np.ndarray | None
    u2: np.ndarray | None
    u2_formula: np.ndarray | None
    v2: np.ndarray | None = None
    v2_formula: np.ndarray | None = None


def _u2_formula(a1, a2, g1, g2):
    return np.array([
        a1 - a1 * g1 + g2 * (a1 - 1.0),
        g1 * (a2 - 1.0) - a2 * g2 - a2 + 1.0,
    ])


def _v2_formula(a1, a2, g1, g2, m1, m2):
    p = g2 * m1 - m2 * (g2 - 1.0)
    q = g1 * m1 - m2 * (g1 - 1.0)
    return np.array([
        a1 * m1 + p * (a1 - 1.0) - m2 * (a1 - 1.0) - a1 * q,
        a2 * m2 + q * (a2 - 1.0) - m1 * (a2 - 1.0) - a2 * p,
    ])


def rank_one_structure(a, gamma, m=None) -> RankOneReport:
    """Rank-one factorization of ``a - gamma a`` for 2x2 inputs.

    Columns of a difference of column-stochastic 2x2 matrices sum to zero,
    so the second row is minus the first and ``a - gamma a = u1 u2^T`` with
    ``u1 = (1, -1)`` and ``u2`` the first row.  When ``m`` is given the same
    is done for ``m a - m gamma a = u1 v2^T``.  The ``*_formula`` fields hold
    the expanded parametric expressions for comparison.
    """
    a = as_experiment(a)
    g = as_garbling(gamma)
    if a.shape != (2, 2) or g.shape != (2, 2):
        raise ValueError("rank-one structure is defined for 2x2 inputs")
    diff = a.mat - g.mat @ a.mat
    r_gap = rank(np.eye(2) - g.mat)
    r_diff = rank(diff)
    if r_diff == 0:
        return RankOneReport(r_gap, 0, True, None, None, None)
    u1 = np.array([1.0, -1.0])
    a1, a2 = a.mat[0, 0], a.mat[1, 1]
    g1, g2 = g.mat[0, 0], g.mat[0, 1]
    v2 = v2_formula = None
    if m is not None:
        mm = as_garbling(m)
        v2 = (mm.mat @ diff)[0].copy()
        v2_formula = _v2_formula(a1, a2, g1, g2, mm.mat[0, 0], mm.mat[0, 1])
    return RankOneReport(
        r_gap, r_diff, False, u1, diff[0].copy(), _u2_formula(a1, a2, g1, g2), v2, v2_formula
    )


def kron_commutativity_gap(a, b) -> float:
    """``|d_inmi(a (x) b) - d_inmi(b (x) a)|``."""
    a, b = _square(a), _square(b)
    return abs(d_inmi(kron(a.mat, b.mat)) - d_inmi(kron(b.mat, a.mat)))


def delta_garbling(n: int, source_row: int, target_row: int) -> Garbling:
    """Identity garbling with row ``target_row`` replaced by the indicator of ``source_row``.

    Column ``source_row`` sends all its mass to ``target_row``.  If the two
    rows differ, column ``target_row`` loses its diagonal mass, which is
    spread uniformly over the other rows; every other column is untouched.
    """
    if not (0 <= source_row < n and 0 <= target_row < n):
        raise IndexError("row index out of range")
    g = np.eye(n)
    if source_row != target_row:
        g[:, source_row] = 0.0
        g[target_row, source_row] = 1.0
        g[:, target_row] = 1.0 / (n - 1)
        g[target_row, target_row] = 0.0
    return Garbling(g)


def delta_garbling_check(a, target_row: int | None = None) -> float:
    """Return ``d_inmi(a) - d_inmi(G a)`` for the delta garbling ``G``.

    ``G`` copies row ``r`` of ``a``, where row ``r`` of ``I - a`` attains the
    norm, into ``target_row`` of ``G a``; by default the target is ``r``
    itself, making ``G`` the identity.  For straightforward ``a`` the
    copied row deviates by ``2 * (a[r, r] - a[r, target])`` more than
    before, so the result is never positive.
    """
    a = _square(a)
    worst = int(np.argmax(row_deviations(a)))
    target = worst if target_row is None else target_row
    g = delta_garbling(a.n_signals, worst, target)
    return d_inmi(a) - d_inmi(g.mat @ a.mat)
