"""Seeded Monte-Carlo campaigns over the informativeness claims.

Every trial draws its inputs from its own generator, seeded with
``trial_seed(campaign_seed, index)`` (a splitmix64-based mixer), so a
campaign gives the same report whether trials run serially, in parallel
or out of order.  Aggregation uses only counts, sums and maxima with ties
broken by the lower trial index.
"""

from __future__ import annotations

import enum
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import blackwell, inmi
from .experiments import (
    Dichotomy,
    garble,
    random_experiment,
    random_garbling,
    random_straightforward,
)
from .feasibility import SolverError
from .matkernel import PIVOT_TOL, ConvergenceError, NormKind, is_singular
from .matrixio import matrix_from_json, matrix_to_json

MASK64 = (1 << 64) - 1
MAX_RESAMPLES = 100
SIMILARITY_TOL = 1e-8
LIMIT_MIN_ENTRY = 0.05


class Theorem(str, enum.Enum):
    TRANSLATION = "translation-3.1"
    CONTRACTION = "contraction-4.1"
    REPRESENTATION = "representation-5.1"
    KRON = "conjecture-kron"
    LIMITS = "limits-fig3"
    ORACLE_VS_LP = "oracle-vs-lp"
    FROBENIUS = "frobenius-closed-form"


DEFAULT_TOLERANCE = {
    Theorem.TRANSLATION: 1e-9,
    Theorem.CONTRACTION: 1e-12,
    Theorem.REPRESENTATION: 1e-12,
    Theorem.KRON: 1e-12,
    Theorem.LIMITS: 1e-6,
    Theorem.ORACLE_VS_LP: blackwell.DOMINANCE_TOL,
    Theorem.FROBENIUS: 1e-12,
}

# Contraction is a statement about dichotomies; larger sizes are opt-in.
DEFAULT_SIZE_RANGE = {
    Theorem.CONTRACTION: (2, 2),
    Theorem.FROBENIUS: (2, 2),
}

# Campaigns that publish a measurement rather than assert a claim.
INFORMATIONAL = {Theorem.KRON}


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def trial_seed(seed: int, index: int) -> int:
    """Per-trial seed: ``splitmix64(splitmix64(seed) ^ index)``."""
    return splitmix64(splitmix64(seed & MASK64) ^ (index & MASK64))


@dataclass(frozen=True)
class CampaignConfig:
    theorem: Theorem
    trials: int = 1000
    seed: int = 0
    size_range: tuple = None
    tolerance: float = None
    steps: int = 200

    def __post_init__(self):
        object.__setattr__(self, "theorem", Theorem(self.theorem))
        if int(self.trials) < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        object.__setattr__(self, "trials", int(self.trials))
        sr = self.size_range or DEFAULT_SIZE_RANGE.get(self.theorem, (2, 4))
        lo, hi = (int(v) for v in sr)
        if not 2 <= lo <= hi <= 16:
            raise ValueError(f"size_range must satisfy 2 <= lo <= hi <= 16, got {sr}")
        if self.theorem is Theorem.FROBENIUS and (lo, hi) != (2, 2):
            raise ValueError("the closed-form Frobenius campaign is 2x2 only")
        object.__setattr__(self, "size_range", (lo, hi))
        tol = DEFAULT_TOLERANCE[self.theorem] if self.tolerance is None else float(self.tolerance)
        if not tol >= 0.0:
            raise ValueError(f"tolerance must be nonnegative, got {tol}")
        object.__setattr__(self, "tolerance", tol)
        if int(self.steps) < 1:
            raise ValueError("steps must be >= 1")
        object.__setattr__(self, "steps", int(self.steps))


@dataclass
class TrialOutcome:
    """One trial: ``statistic`` exceeds the tolerance exactly when the claim fails."""

    index: int
    statistic: float | None
    violated: bool
    inputs: dict
    values: dict = field(default_factory=dict)
    cause: str | None = None


@dataclass
class TrialReport:
    theorem: str
    seed: int
    size_range: list
    tolerance: float
    trials_run: int
    violations: int
    max_violation: float
    worst_statistic: float | None
    worst_case: dict | None
    notes: dict
    elapsed: float | None = field(default=None, compare=False)


class _Resampled(Exception):
    pass


def _nonsingular(draw, rng):
    for _ in range(MAX_RESAMPLES):
        g = draw(rng)
        if not is_singular(g.mat, PIVOT_TOL):
            return g
    raise _Resampled(f"no nonsingular draw in {MAX_RESAMPLES} attempts")


def _size(cfg, rng):
    lo, hi = cfg.size_range
    return int(rng.integers(lo, hi + 1))


def _trial_representation(cfg, rng):
    n = _size(cfg, rng)
    a = random_straightforward(n, rng)
    g = random_garbling(n, rng)
    b = garble(g, a)
    da, db = inmi.d_inmi(a), inmi.d_inmi(b)
    return da - db, {"A": a.mat, "Gamma": g.mat}, {"d_A": da, "d_B": db}, {}


def _trial_contraction(cfg, rng):
    n = _size(cfg, rng)
    a = random_straightforward(n, rng)
    b = random_experiment(n, n, rng)
    m = random_garbling(n, rng)
    excess = {k.value: -inmi.contraction_gap(m, a, b, k) for k in NormKind}
    worst = max(excess.values())
    flags = {f"violated_{k}": v > cfg.tolerance for k, v in excess.items()}
    return worst, {"A": a.mat, "B": b.mat, "M": m.mat}, excess, flags


def _trial_translation(cfg, rng):
    n = _size(cfg, rng)
    a = _nonsingular(lambda r: random_straightforward(n, r), rng)
    g1 = random_garbling(n, rng)
    m = _nonsingular(lambda r: random_garbling(n, r), rng)
    tr = blackwell.check_diagram(a, g1, m)
    ma = m.mat @ a.mat
    mb = m.mat @ tr.b
    part1 = blackwell.find_garbling(ma, mb).found
    values = {
        "diagram_residual": tr.diagram_residual,
        "similarity_gap": tr.similarity_gap,
        "trace_gap": abs(float(np.trace(tr.gamma2) - np.trace(g1.mat))),
    }
    flags = {
        "gamma2_nonstochastic": not tr.is_stochastic,
        "MA_dominates_MB": part1,
        "part1_matches_stochastic": part1 == tr.is_stochastic,
        "similarity_violated": tr.similarity_gap > SIMILARITY_TOL,
    }
    # statistic normalised so that > tolerance flags either criterion
    stat = max(tr.diagram_residual, tr.similarity_gap * cfg.tolerance / SIMILARITY_TOL)
    return stat, {"A": a.mat, "Gamma1": g1.mat, "M": m.mat}, values, flags


def _trial_kron(cfg, rng):
    na, nb = _size(cfg, rng), _size(cfg, rng)
    a = random_experiment(na, na, rng)
    b = random_experiment(nb, nb, rng)
    gap = inmi.kron_commutativity_gap(a, b)
    return gap, {"A": a.mat, "B": b.mat}, {}, {}


def _trial_limits(cfg, rng):
    n = _size(cfg, rng)
    a = random_straightforward(n, rng)
    gs = [random_garbling(n, rng, LIMIT_MIN_ENTRY) for _ in range(cfg.steps)]
    traj = blackwell.iterate_garblings(a, gs)
    scores = [inmi.d_inmi(e) for e in traj.experiments]
    step_drop = max(0.0, max(scores[k] - scores[k + 1] for k in range(len(scores) - 1)))
    values = {
        "final_spread": traj.spreads[-1],
        "max_stepwise_score_drop": step_drop,
        # every later element is a garbling of the straightforward start
        "max_score_drop_below_start": max(0.0, max(scores[0] - s for s in scores[1:])),
    }
    flags = {"stepwise_score_decreased": step_drop > 1e-12}
    return traj.spreads[-1], {"A": a.mat}, values, flags


def _trial_oracle_vs_lp(cfg, rng):
    n = _size(cfg, rng)
    a = _nonsingular(lambda r: random_experiment(n, n, r), rng)
    dominated = bool(rng.integers(0, 2))
    if dominated:
        b = garble(random_garbling(n, rng), a)
    else:
        b = random_experiment(n, n, rng)
    oracle = blackwell.find_garbling(a, b, cfg.tolerance, method="inverse-oracle")
    lp = blackwell.find_garbling(a, b, cfg.tolerance, method="lp")
    agree = oracle.found == lp.found
    values = {"oracle_residual": oracle.residual, "lp_residual": lp.residual}
    flags = {"constructed_dominated": dominated, "dominated_verdict": oracle.found}
    return (0.0 if agree else 1.0), {"A": a.mat, "B": b.mat}, values, flags


def _trial_frobenius(cfg, rng):
    a1, a2 = rng.uniform(0.5, 1.0, size=2)
    gamma = tuple(rng.uniform(0.0, 1.0, size=2))
    m = tuple(rng.uniform(0.0, 1.0, size=2))
    fg = inmi.frobenius_contraction_gap(Dichotomy(a1, a2), gamma, m)
    values = {"direct": fg.direct}
    values.update({f"closed_form_{k}": v for k, v in fg.closed_forms.items()})
    flags = {f"matches_{k}": abs(v - fg.direct) <= 1e-9 for k, v in fg.closed_forms.items()}
    inputs = {
        "A": np.array([[a1, 1 - a2], [1 - a1, a2]]),
        "Gamma1": np.array([[gamma[0], gamma[1]], [1 - gamma[0], 1 - gamma[1]]]),
        "M": np.array([[m[0], m[1]], [1 - m[0], 1 - m[1]]]),
    }
    return -fg.direct, inputs, values, flags


_TRIALS = {
    Theorem.REPRESENTATION: _trial_representation,
    Theorem.CONTRACTION: _trial_contraction,
    Theorem.TRANSLATION: _trial_translation,
    Theorem.KRON: _trial_kron,
    Theorem.LIMITS: _trial_limits,
    Theorem.ORACLE_VS_LP: _trial_oracle_vs_lp,
    Theorem.FROBENIUS: _trial_frobenius,
}


def run_trial(cfg: CampaignConfig, index: int) -> TrialOutcome:
    """Run trial ``index`` of a campaign in isolation."""
    rng = np.random.default_rng(trial_seed(cfg.seed, index))
    try:
        stat, inputs, values, flags = _TRIALS[cfg.theorem](cfg, rng)
    except _Resampled as exc:
        return TrialOutcome(index, None, True, {}, cause=f"resample-exhausted: {exc}")
    except (ConvergenceError, SolverError, blackwell.HypothesisViolation) as exc:
        return TrialOutcome(index, None, True, {}, cause=f"{type(exc).__name__}: {exc}")
    values = dict(values)
    values.update(flags)
    return TrialOutcome(index, float(stat), bool(stat > cfg.tolerance), inputs, values)


def _run_chunk(args):
    cfg, lo, hi = args
    return [run_trial(cfg, i) for i in range(lo, hi)]


def _serialize_case(cfg, out: TrialOutcome) -> dict:
    return {
        "trial": out.index,
        "trial_seed": trial_seed(cfg.seed, out.index),
        "statistic": out.statistic,
        "cause": out.cause,
        "matrices": {k: matrix_to_json(v) for k, v in out.inputs.items()},
        "values": {k: (bool(v) if isinstance(v, (bool, np.bool_)) else float(v))
                   for k, v in out.values.items()},
    }


def _aggregate(cfg, outcomes, verbose=False) -> TrialReport:
    violations = 0
    max_violation = 0.0
    worst_violator = None
    worst_stat = None
    causes = {}
    counts = {}
    maxima = {}
    for out in outcomes:
        if out.violated:
            violations += 1
            if out.cause:
                causes[out.cause.split(":")[0]] = causes.get(out.cause.split(":")[0], 0) + 1
            key = -np.inf if out.statistic is None else out.statistic
            best = None if worst_violator is None else (
                -np.inf if worst_violator.statistic is None else worst_violator.statistic)
            if worst_violator is None or key > best:
                worst_violator = out
            if out.statistic is not None:
                max_violation = max(max_violation, out.statistic)
        if out.statistic is not None and (worst_stat is None or out.statistic > worst_stat):
            worst_stat = out.statistic
        for k, v in out.values.items():
            if isinstance(v, (bool, np.bool_)):
                counts[k] = counts.get(k, 0) + int(v)
            else:
                maxima[k] = max(maxima.get(k, -np.inf), float(v))
    n = len(outcomes)
    notes = {
        "informational": cfg.theorem in INFORMATIONAL,
        "counts": counts,
        "fractions": {k: v / n for k, v in counts.items()},
        "maxima": maxima,
    }
    if causes:
        notes["causes"] = causes
    if cfg.theorem is Theorem.FROBENIUS:
        notes["closed_form_readings_matching_direct"] = sorted(
            k[len("matches_"):] for k, v in counts.items() if k.startswith("matches_") and v == n
        )
    if cfg.theorem is Theorem.TRANSLATION:
        notes["similarity_tolerance"] = SIMILARITY_TOL
    if verbose:
        notes["all_violations"] = [_serialize_case(cfg, o) for o in outcomes if o.violated]
    return TrialReport(
        theorem=cfg.theorem.value,
        seed=cfg.seed,
        size_range=list(cfg.size_range),
        tolerance=cfg.tolerance,
        trials_run=n,
        violations=violations,
        max_violation=max_violation,
        worst_statistic=worst_stat,
        worst_case=None if worst_violator is None else _serialize_case(cfg, worst_violator),
        notes=notes,
    )


def run_campaign(cfg: CampaignConfig, workers: int = 1, verbose: bool = False) -> TrialReport:
    """Run every trial of ``cfg`` and aggregate.

    ``workers > 1`` spreads contiguous blocks of trials over processes; the
    report does not depend on it.
    """
    t0 = time.perf_counter()
    if workers <= 1:
        outcomes = [run_trial(cfg, i) for i in range(cfg.trials)]
    else:
        step = -(-cfg.trials // (workers * 4))
        chunks = [(cfg, lo, min(lo + step, cfg.trials)) for lo in range(0, cfg.trials, step)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = [o for part in pool.map(_run_chunk, chunks) for o in part]
    report = _aggregate(cfg, outcomes, verbose)
    report.elapsed = time.perf_counter() - t0
    return report


_FIELDS = (
    "theorem", "seed", "size_range", "tolerance", "trials_run", "violations",
    "max_violation", "worst_statistic", "worst_case", "notes",
)


def report_to_json(r: TrialReport, include_timing: bool = False) -> str:
    """Serialize with a fixed field order.

    Wall-clock time is left out by default so that repeated runs of one
    configuration produce byte-identical output.
    """
    obj = {k: getattr(r, k) for k in _FIELDS}
    if include_timing:
        obj["elapsed"] = r.elapsed
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def report_from_json(text: str) -> TrialReport:
    obj = json.loads(text)
    return TrialReport(**{k: obj[k] for k in _FIELDS}, elapsed=obj.get("elapsed"))


def worst_case_matrices(r: TrialReport) -> dict:
    if not r.worst_case:
        return {}
    return {k: matrix_from_json(v) for k, v in r.worst_case["matrices"].items()}
