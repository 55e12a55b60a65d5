"""Experiments, garblings and beliefs.

Convention: an experiment is column-stochastic, entry ``(i, j)`` being the
probability of signal ``i`` in state ``j``.  A garbling acts on signals by
left multiplication, so ``B = G @ A`` is a noisier version of ``A``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matkernel import as_matrix, kron, matmul

ENTRY_TOL = 1e-12
COLUMN_SUM_TOL = 1e-9
BELIEF_TOL = 1e-12


class StochasticityError(ValueError):
    """A matrix failed column-stochastic validation."""

    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        super().__init__(message)


def _check_column_stochastic(m: np.ndarray, what: str) -> None:
    if m.min() < -ENTRY_TOL:
        i, j = np.argwhere(m < -ENTRY_TOL)[0]
        raise StochasticityError(
            f"{what} has negative entry {m[i, j]:.6g} at row {i}, column {j}", i, j
        )
    if m.max() > 1.0 + ENTRY_TOL:
        i, j = np.argwhere(m > 1.0 + ENTRY_TOL)[0]
        raise StochasticityError(
            f"{what} has entry {m[i, j]:.6g} > 1 at row {i}, column {j}", i, j
        )
    sums = m.sum(axis=0)
    bad = np.flatnonzero(np.abs(sums - 1.0) > COLUMN_SUM_TOL)
    if bad.size:
        j = int(bad[0])
        raise StochasticityError(f"{what} column {j} sums to {sums[j]:.12g}, not 1", column=j)


@dataclass(frozen=True, eq=False)
class Experiment:
    """Column-stochastic matrix of signal probabilities given states.

    Instances are immutable; ``np.asarray(experiment)`` yields the read-only
    matrix so every kernel in :mod:`blackwell_inmi.matkernel` accepts them.
    """

    mat: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.mat, type(self).__name__.lower())
        self._validate(m)
        object.__setattr__(self, "mat", m)

    def _validate(self, m):
        _check_column_stochastic(m, "experiment")

    @property
    def n_signals(self) -> int:
        return self.mat.shape[0]

    @property
    def n_states(self) -> int:
        return self.mat.shape[1]

    @property
    def shape(self):
        return self.mat.shape

    @property
    def is_square(self) -> bool:
        return self.mat.shape[0] == self.mat.shape[1]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.mat
        return self.mat.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, Experiment):
            return NotImplemented
        return self.mat.shape == other.mat.shape and bool(np.array_equal(self.mat, other.mat))

    def __hash__(self):
        return hash((self.mat.shape, self.mat.tobytes()))

    def __repr__(self):
        return f"{type(self).__name__}({self.mat.tolist()!r})"


class Garbling(Experiment):
    """Square column-stochastic matrix acting on signals."""

    def _validate(self, m):
        if m.shape[0] != m.shape[1]:
            raise StochasticityError(f"garbling must be square, got shape {m.shape}")
        _check_column_stochastic(m, "garbling")


def make_experiment(mat) -> Experiment:
    return Experiment(np.asarray(mat))


def as_experiment(x) -> Experiment:
    """Coerce array-likes to :class:`Experiment`; experiments pass through."""
    if isinstance(x, Experiment):
        return x
    return Experiment(x)


def as_garbling(x) -> Garbling:
    if isinstance(x, Garbling):
        return x
    return Garbling(np.asarray(x))


def _require_square(e: Experiment, what="experiment"):
    if not e.is_square:
        raise ValueError(f"{what} must be square, got shape {e.shape}")


@dataclass(frozen=True)
class Dichotomy:
    """Two-state, two-signal experiment ``[[a1, 1 - a2], [1 - a1, a2]]``."""

    a1: float
    a2: float

    def __post_init__(self):
        for name in ("a1", "a2"):
            v = float(getattr(self, name))
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
            object.__setattr__(self, name, v)

    def to_experiment(self) -> Experiment:
        return dichotomy_to_experiment(self)

    @property
    def is_straightforward(self) -> bool:
        return self.a1 >= 0.5 and self.a2 >= 0.5


def dichotomy_to_experiment(d: Dichotomy) -> Experiment:
    return Experiment([[d.a1, 1.0 - d.a2], [1.0 - d.a1, d.a2]])


def dichotomy(a1: float, a2: float) -> Experiment:
    """Shorthand for ``dichotomy_to_experiment(Dichotomy(a1, a2))``."""
    return dichotomy_to_experiment(Dichotomy(a1, a2))


def is_straightforward(e) -> bool:
    """True iff every diagonal entry is at least 1/2.

    For a dichotomy this is exactly ``a1, a2 in [1/2, 1]``; for larger
    square experiments it says signal ``i`` is the modal signal in state ``i``.
    """
    e = as_experiment(e)
    _require_square(e)
    return bool(np.all(np.diag(e.mat) >= 0.5))


def permute_signals(e, perm) -> Experiment:
    """Relabel signals: row ``k`` of the result is row ``perm[k]`` of ``e``."""
    e = as_experiment(e)
    perm = np.asarray(perm, dtype=int)
    if sorted(perm.tolist()) != list(range(e.n_signals)):
        raise ValueError(f"not a permutation of {e.n_signals} signals: {perm.tolist()}")
    return Experiment(e.mat[perm])


def garble(g, e) -> Experiment:
    g = as_garbling(g)
    e = as_experiment(e)
    if g.shape[1] != e.n_signals:
        raise ValueError(
            f"garbling of shape {g.shape} cannot act on {e.n_signals} signals"
        )
    return Experiment(matmul(g.mat, e.mat))


def compound(a, b) -> Experiment:
    """Kronecker product of two square experiments, kept square.

    The extra columns carry no compound-experiment meaning but are
    retained so norm differences are taken over the full product.
    """
    a, b = as_experiment(a), as_experiment(b)
    _require_square(a)
    _require_square(b)
    return Experiment(kron(a.mat, b.mat))


def uninformative(n: int) -> Experiment:
    if n < 1:
        raise ValueError("n must be >= 1")
    return Experiment(np.full((n, n), 1.0 / n))


def fully_informative(n: int) -> Experiment:
    return Experiment(np.eye(n))


class ZeroProbabilitySignal(ValueError):
    """Posterior requested for a signal with zero marginal probability."""


def as_belief(p, n_states=None) -> np.ndarray:
    p = np.array(p, dtype=float, copy=True).reshape(-1)
    if n_states is not None and p.size != n_states:
        raise ValueError(f"belief has {p.size} components, expected {n_states}")
    if p.size == 0 or not np.all(np.isfinite(p)) or np.any(p < 0):
        raise ValueError(f"belief must be finite and nonnegative: {p.tolist()}")
    if abs(p.sum() - 1.0) > BELIEF_TOL:
        raise ValueError(f"belief sums to {p.sum():.15g}, not 1")
    p.flags.writeable = False
    return p


def signal_marginals(prior, e) -> np.ndarray:
    e = as_experiment(e)
    prior = as_belief(prior, e.n_states)
    return e.mat @ prior


def posterior(prior, e, signal_index: int) -> np.ndarray:
    """Bayes update of ``prior`` after observing ``signal_index``."""
    e = as_experiment(e)
    prior = as_belief(prior, e.n_states)
    if not 0 <= signal_index < e.n_signals:
        raise IndexError(f"signal {signal_index} out of range for {e.n_signals} signals")
    joint = e.mat[signal_index] * prior
    total = joint.sum()
    if total <= 0.0:
        raise ZeroProbabilitySignal(f"signal {signal_index} has zero marginal probability")
    out = joint / total
    out.flags.writeable = False
    return out


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def _simplex_columns(rng, n_rows, n_cols) -> np.ndarray:
    # normalized exponential spacings are uniform on the simplex
    x = rng.exponential(size=(n_rows, n_cols))
    return x / x.sum(axis=0)


def random_experiment(n_signals: int, n_states: int, seed=None) -> Experiment:
    """Experiment whose columns are independent uniform draws from the simplex."""
    if n_signals < 1 or n_states < 1:
        raise ValueError("dimensions must be >= 1")
    return Experiment(_simplex_columns(_rng(seed), n_signals, n_states))


def random_garbling(n: int, seed=None, min_entry: float = 0.0) -> Garbling:
    """Uniform random garbling, optionally with every entry at least ``min_entry``."""
    if n * min_entry > 1.0:
        raise ValueError(f"min_entry {min_entry} infeasible for n={n}")
    cols = _simplex_columns(_rng(seed), n, n)
    return Garbling(min_entry + (1.0 - n * min_entry) * cols)


def random_straightforward_dichotomy(seed=None) -> Dichotomy:
    a1, a2 = _rng(seed).uniform(0.5, 1.0, size=2)
    return Dichotomy(a1, a2)


def random_straightforward(n: int, seed=None) -> Experiment:
    """Square experiment with diagonal uniform on [1/2, 1].

    The remaining mass of each column is spread over the off-diagonal
    entries uniformly on the simplex.
    """
    rng = _rng(seed)
    m = np.zeros((n, n))
    diag = rng.uniform(0.5, 1.0, size=n)
    if n == 1:
        return Experiment(np.ones((1, 1)))
    for j in range(n):
        off = rng.exponential(size=n - 1)
        m[np.arange(n) != j, j] = off / off.sum() * (1.0 - diag[j])
        m[j, j] = diag[j]
    return Experiment(m)
