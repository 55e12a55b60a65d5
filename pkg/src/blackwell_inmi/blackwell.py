"""Blackwell dominance with witness garblings, and the translation transform.

``A`` dominates ``B`` when some garbling ``G`` gives ``B = G @ A``.  For a
nonsingular ``A`` the only candidate is ``B @ inv(A)``, so the decision is a
sign check on that matrix.  Otherwise a linear program searches for the
garbling that minimizes the largest entry of ``|G @ A - B|``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple

import numpy as np

from . import feasibility
from .experiments import Experiment, Garbling, as_experiment, as_garbling
from .matkernel import (
    ConvergenceError,
    SingularMatrixError,
    charpoly_coeffs,
    inverse,
    norm,
    refine_inverse,
)

DOMINANCE_TOL = 1e-7
STOCHASTIC_ENTRY_TOL = 1e-10
STOCHASTIC_SUM_TOL = 1e-9


class Relation(str, enum.Enum):
    DOMINATES = "dominates"
    NOT_DOMINATED = "not-dominated"
    EQUIVALENT = "equivalent"


class Method(str, enum.Enum):
    INVERSE = "inverse-oracle"
    LP = "lp"


class HypothesisViolation(ValueError):
    """Inputs break a precondition of the construction (e.g. singular ``M``)."""


class LpIterationLimit(ConvergenceError):
    pass


class GarblingSearch(NamedTuple):
    """Outcome of :func:`find_garbling`.

    ``witness`` is ``None`` when no garbling was found; ``residual`` is then
    the certificate of failure (most negative candidate entry for the
    inverse oracle, optimal max-entry residual for the LP).
    """

    witness: Garbling | None
    residual: float
    method: Method

    @property
    def found(self) -> bool:
        return self.witness is not None


@dataclass(frozen=True, eq=False)
class DominanceVerdict:
    relation: Relation
    witness: Garbling | None
    residual: float
    method: Method
    reverse: GarblingSearch | None = None


@dataclass(frozen=True, eq=False)
class TranslationResult:
    gamma2: np.ndarray
    is_stochastic: bool
    similarity_gap: float
    diagram_residual: float | None = None
    b: np.ndarray | None = None


def _check_pair(a: Experiment, b: Experiment):
    if not (a.is_square and b.is_square) or a.shape != b.shape:
        raise ValueError(
            f"dominance needs square experiments of equal size, got {a.shape} and {b.shape}"
        )


def _normalize(candidate: np.ndarray) -> np.ndarray:
    g = np.clip(candidate, 0.0, None)
    return g / g.sum(axis=0)


def _witness_residual(g, a, b) -> float:
    return norm(g @ a.mat - b.mat, "infinity")


def _inverse_oracle(a: Experiment, b: Experiment, tol: float) -> GarblingSearch | None:
    """Decide via ``b @ inv(a)``; ``None`` when the oracle cannot decide."""
    try:
        cand = b.mat @ inverse(a.mat)
    except SingularMatrixError:
        return None
    worst = max(-float(cand.min()), float(np.abs(cand.sum(axis=0) - 1.0).max()))
    if worst > tol:
        return GarblingSearch(None, worst, Method.INVERSE)
    g = _normalize(cand)
    res = _witness_residual(g, a, b)
    if res > tol:
        # clamping moved the witness too far; let the LP decide
        return None
    return GarblingSearch(Garbling(g), res, Method.INVERSE)


def _lp_search(a: Experiment, b: Experiment, tol: float) -> GarblingSearch:
    program = feasibility.garbling_feasibility_program(a.mat, b.mat)
    out = feasibility.solve(program)
    if out.status is feasibility.LpStatus.ITERATION_LIMIT:
        raise LpIterationLimit(f"LP hit the iteration limit after {out.iterations} pivots")
    if not out.is_optimal:
        raise feasibility.SolverError(f"garbling program reported {out.status.value}")
    g, t = feasibility.split_garbling_solution(out.x, b.n_signals, a.n_signals)
    g = _normalize(g)
    res = max(t, _witness_residual(g, a, b))
    if res > tol:
        return GarblingSearch(None, res, Method.LP)
    return GarblingSearch(Garbling(g), res, Method.LP)


def find_garbling(a, b, tol: float = DOMINANCE_TOL, method="auto") -> GarblingSearch:
    """Search for a garbling ``G`` with ``G @ a == b`` up to ``tol``.

    Args:
        a, b: square experiments of the same size.
        tol: acceptance threshold on the witness residual; candidate entries
            in ``[-tol, 0)`` are treated as rounding noise and clamped.
        method: ``"auto"`` uses the inverse oracle when ``a`` is nonsingular
            and falls back to the LP; ``"inverse-oracle"`` or ``"lp"`` force
            one path (the oracle still falls back on a singular ``a``).

    Raises:
        LpIterationLimit: the LP stopped without an answer.
    """
    a, b = as_experiment(a), as_experiment(b)
    _check_pair(a, b)
    if method != "auto":
        method = Method(method)
    if method is not Method.LP:
        found = _inverse_oracle(a, b, tol)
        if found is not None:
            return found
    return _lp_search(a, b, tol)


def dominates(a, b, tol: float = DOMINANCE_TOL, method="auto") -> DominanceVerdict:
    """Decide whether ``a`` Blackwell-dominates ``b``.

    The relation is ``equivalent`` when garblings exist in both directions,
    ``dominates`` when only ``a -> b`` exists, and ``not-dominated``
    otherwise.  ``witness`` and ``residual`` describe the ``a -> b`` search.
    """
    a, b = as_experiment(a), as_experiment(b)
    fwd = find_garbling(a, b, tol, method)
    if not fwd.found:
        return DominanceVerdict(Relation.NOT_DOMINATED, None, fwd.residual, fwd.method)
    back = find_garbling(b, a, tol, method)
    rel = Relation.EQUIVALENT if back.found else Relation.DOMINATES
    return DominanceVerdict(rel, fwd.witness, fwd.residual, fwd.method, back)


def compare_blackwell(a, b, tol: float = DOMINANCE_TOL, method="auto"):
    """Two-sided comparison.

    Returns ``(relation, forward, backward)`` where ``relation`` is one of
    ``"dominates"``, ``"dominated"``, ``"equivalent"``, ``"unranked"``.
    """
    fwd = find_garbling(a, b, tol, method)
    back = find_garbling(b, a, tol, method)
    if fwd.found and back.found:
        rel = "equivalent"
    elif fwd.found:
        rel = "dominates"
    elif back.found:
        rel = "dominated"
    else:
        rel = "unranked"
    return rel, fwd, back


def is_column_stochastic(m, entry_tol=STOCHASTIC_ENTRY_TOL, sum_tol=STOCHASTIC_SUM_TOL) -> bool:
    m = np.asarray(m, dtype=float)
    return bool(m.min() >= -entry_tol and np.abs(m.sum(axis=0) - 1.0).max() <= sum_tol)


def translate_garbling(gamma1, m) -> TranslationResult:
    """Conjugate ``gamma1`` by ``m``: ``gamma2 = m @ gamma1 @ inv(m)``.

    ``gamma2`` keeps unit column sums but may have negative entries, in
    which case it is not a garbling and ``is_stochastic`` is false.

    Raises:
        HypothesisViolation: ``m`` is singular.
    """
    g1 = as_garbling(gamma1)
    m = as_garbling(m)
    if g1.shape != m.shape:
        raise ValueError(f"gamma1 {g1.shape} and m {m.shape} differ in size")
    try:
        m_inv = inverse(m.mat)
    except SingularMatrixError as exc:
        raise HypothesisViolation(
            f"translation requires a nonsingular garbling M ({exc})"
        ) from exc
    # an ill-conditioned m inflates gamma2's entries, and charpoly
    # coefficients of such a matrix lose ~cond(m)**2 * eps in double
    # precision; form gamma2 and compare in extended precision
    g2_ext = m.mat.astype(np.longdouble) @ g1.mat.astype(np.longdouble) @ refine_inverse(m.mat, m_inv)
    gap = float(np.abs(charpoly_coeffs(g1.mat.astype(np.longdouble)) - charpoly_coeffs(g2_ext)).max())
    g2 = g2_ext.astype(float)
    return TranslationResult(g2, is_column_stochastic(g2), gap)


def check_diagram(a, gamma1, m) -> TranslationResult:
    """Build ``B = gamma1 @ a`` and measure how well ``gamma2 @ m @ a == m @ b``."""
    a = as_experiment(a)
    g1 = as_garbling(gamma1)
    if g1.shape[1] != a.n_signals:
        raise ValueError(f"gamma1 {g1.shape} cannot act on {a.n_signals} signals")
    tr = translate_garbling(g1, m)
    m = np.asarray(m, dtype=float)
    b = g1.mat @ a.mat
    residual = norm(tr.gamma2 @ m @ a.mat - m @ b, "infinity")
    return TranslationResult(tr.gamma2, tr.is_stochastic, tr.similarity_gap, residual, b)


def column_spread(e) -> float:
    """Largest max-abs distance between two columns; zero iff all columns agree."""
    m = np.asarray(e, dtype=float)
    if m.shape[1] < 2:
        return 0.0
    return max(float(np.abs(m[:, i] - m[:, j]).max()) for i, j in combinations(range(m.shape[1]), 2))


class GarblingTrajectory(NamedTuple):
    experiments: list
    spreads: list


def iterate_garblings(start, garblings, k: int | None = None) -> GarblingTrajectory:
    """Apply garblings one after another: ``[A, G1 A, G2 G1 A, ...]``.

    ``garblings`` is a sequence, or a single garbling to be repeated.  The
    column spread of every element is recorded alongside it.
    """
    e = as_experiment(start)
    if isinstance(garblings, (Experiment, np.ndarray)):
        if k is None:
            raise ValueError("k is required when repeating a single garbling")
        seq = [as_garbling(garblings)] * k
    else:
        seq = [as_garbling(g) for g in garblings]
        if k is None:
            k = len(seq)
        if k > len(seq):
            raise ValueError(f"asked for {k} steps but only {len(seq)} garblings given")
    out = [e]
    spreads = [column_spread(e)]
    cur = e.mat
    for g in seq[:k]:
        if g.shape[1] != cur.shape[0]:
            raise ValueError(f"garbling {g.shape} cannot act on {cur.shape[0]} signals")
        cur = g.mat @ cur
        # renormalize to stop rounding drift over long chains
        cur = cur / cur.sum(axis=0)
        out.append(Experiment(cur))
        spreads.append(column_spread(cur))
    return GarblingTrajectory(out, spreads)
