"""Dense small-matrix kernels.

Matrices are plain float64 :class:`numpy.ndarray` objects.  :func:`as_matrix`
is the single entry point that validates shape and finiteness and returns a
read-only copy, so values handed around the package are never mutated.
"""

from __future__ import annotations

import enum

import numpy as np

MAX_DIM = 64

RANK_TOL = 1e-10
PIVOT_TOL = 1e-12
TWO_NORM_RTOL = 1e-12
TWO_NORM_MAX_ITER = 10_000


class SingularMatrixError(np.linalg.LinAlgError):
    """Raised by :func:`inverse` when a pivot falls below tolerance."""

    def __init__(self, pivot_index, pivot_value):
        self.pivot_index = pivot_index
        self.pivot_value = pivot_value
        super().__init__(
            f"matrix is singular to working precision: pivot {pivot_index} "
            f"has magnitude {abs(pivot_value):.3e}"
        )


class ConvergenceError(ArithmeticError):
    """An iterative kernel stopped before meeting its convergence test."""


class NormKind(str, enum.Enum):
    ONE = "one"
    TWO = "two"
    INFINITY = "infinity"
    FROBENIUS = "frobenius"

    @classmethod
    def parse(cls, value) -> "NormKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {"1": "one", "2": "two", "inf": "infinity", "fro": "frobenius", "f": "frobenius"}
        return cls(aliases.get(key, key))


def as_matrix(x, name: str = "matrix") -> np.ndarray:
    """Validate ``x`` as a finite 2-D matrix and return a read-only float copy.

    Raises:
        ValueError: on wrong dimensionality, empty or oversized shape, or
            non-finite entries.
    """
    m = np.array(x, dtype=float, copy=True)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got {m.ndim}-D")
    r, c = m.shape
    if r < 1 or c < 1:
        raise ValueError(f"{name} must be nonempty, got shape {m.shape}")
    if r > MAX_DIM or c > MAX_DIM:
        raise ValueError(f"{name} exceeds {MAX_DIM}x{MAX_DIM}: shape {m.shape}")
    if not np.all(np.isfinite(m)):
        i, j = np.argwhere(~np.isfinite(m))[0]
        raise ValueError(f"{name} has a non-finite entry at row {i}, column {j}")
    m.flags.writeable = False
    return m


def _frozen(m: np.ndarray) -> np.ndarray:
    m.flags.writeable = False
    return m


def identity(n: int) -> np.ndarray:
    return _frozen(np.eye(n))


def zeros(n_rows: int, n_cols: int) -> np.ndarray:
    return _frozen(np.zeros((n_rows, n_cols)))


def matmul(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ValueError(f"cannot multiply shapes {a.shape} and {b.shape}")
    return _frozen(a @ b)


def kron(a, b) -> np.ndarray:
    """Block matrix whose block (i, j) is ``a[i, j] * b``."""
    return _frozen(np.kron(np.asarray(a, dtype=float), np.asarray(b, dtype=float)))


def two_norm(m, rtol: float = TWO_NORM_RTOL, max_iter: int = TWO_NORM_MAX_ITER) -> float:
    """Largest singular value by power iteration on ``m.T @ m``.

    Iterates the Rayleigh quotient of the Gram matrix until its relative
    change drops to ``rtol``.

    Raises:
        ConvergenceError: if ``max_iter`` iterations do not meet ``rtol``.
    """
    m = np.asarray(m, dtype=float)
    scale = float(np.abs(m).max()) if m.size else 0.0
    if scale == 0.0:
        return 0.0
    # scaling keeps m.T @ m clear of underflow and overflow
    m = m / scale
    gram = m.T @ m
    n = gram.shape[0]
    # fixed generic start; a structured start such as ones() is orthogonal
    # to the top singular vector of e.g. [[1, -1], [-1, 1]]
    x = np.random.default_rng(0x5EED).standard_normal(n)
    x /= np.linalg.norm(x)
    y = gram @ x
    if not np.any(y):
        x = gram[:, int(np.argmax(np.abs(gram).sum(axis=0)))].copy()
        x /= np.linalg.norm(x)
        y = gram @ x
    lam = float(x @ y)
    for _ in range(max_iter):
        ny = np.linalg.norm(y)
        x = y / ny
        y = gram @ x
        new = float(x @ y)
        if abs(new - lam) <= rtol * abs(new):
            return scale * float(np.sqrt(max(new, 0.0)))
        lam = new
    raise ConvergenceError(
        f"two-norm power iteration did not converge in {max_iter} iterations"
    )


def norm(m, kind="infinity") -> float:
    """Matrix norm of ``m``.

    ``one`` is the max absolute column sum, ``infinity`` the max absolute
    row sum, ``frobenius`` the root of the summed squares and ``two`` the
    largest singular value.
    """
    kind = NormKind.parse(kind)
    m = np.asarray(m, dtype=float)
    if m.size == 0:
        raise ValueError("norm of an empty matrix")
    if kind is NormKind.ONE:
        return float(np.abs(m).sum(axis=0).max())
    if kind is NormKind.INFINITY:
        return float(np.abs(m).sum(axis=1).max())
    if kind is NormKind.FROBENIUS:
        return float(np.sqrt(np.sum(m * m)))
    return two_norm(m)


def inverse(m, tol: float = PIVOT_TOL) -> np.ndarray:
    """Invert a square matrix by Gauss-Jordan elimination with partial pivoting.

    Raises:
        SingularMatrixError: when the best available pivot in some column has
            magnitude below ``tol``.
    """
    m = np.asarray(m, dtype=float)
    n, c = m.shape
    if n != c:
        raise ValueError(f"inverse needs a square matrix, got {m.shape}")
    work = np.hstack([m, np.eye(n)])
    for col in range(n):
        p = col + int(np.argmax(np.abs(work[col:, col])))
        if abs(work[p, col]) < tol:
            raise SingularMatrixError(col, work[p, col])
        if p != col:
            work[[col, p]] = work[[p, col]]
        work[col] /= work[col, col]
        factors = work[:, col].copy()
        factors[col] = 0.0
        work -= np.outer(factors, work[col])
    return _frozen(work[:, n:].copy())


def refine_inverse(m, approx, dtype=np.longdouble, steps: int = 2) -> np.ndarray:
    """Newton-Schulz refinement ``X <- X + X (I - m X)`` carried out in ``dtype``."""
    m = np.asarray(m).astype(dtype)
    x = np.asarray(approx).astype(dtype)
    eye = np.eye(m.shape[0], dtype=dtype)
    for _ in range(steps):
        x = x + x @ (eye - m @ x)
    return x


def is_singular(m, tol: float = PIVOT_TOL) -> bool:
    try:
        inverse(m, tol)
    except SingularMatrixError:
        return True
    return False


def rank(m, tol: float = RANK_TOL) -> int:
    """Number of rows with max-abs entry above ``tol`` after row reduction."""
    work = np.array(m, dtype=float, copy=True)
    n_rows, n_cols = work.shape
    row = 0
    for col in range(n_cols):
        if row == n_rows:
            break
        p = row + int(np.argmax(np.abs(work[row:, col])))
        if abs(work[p, col]) <= tol:
            work[row:, col] = 0.0
            continue
        if p != row:
            work[[row, p]] = work[[p, row]]
        below = work[row + 1:, col] / work[row, col]
        work[row + 1:] -= np.outer(below, work[row])
        work[row + 1:, col] = 0.0
        row += 1
    return int(np.sum(np.abs(work).max(axis=1) > tol))


def charpoly_coeffs(m) -> np.ndarray:
    """Monic characteristic polynomial coefficients, highest degree first.

    Uses the Leverrier-Faddeev recursion, which is well behaved for the
    small (n <= 8) matrices this package deals with.  Extended-precision
    input (``np.longdouble``) is kept in extended precision.
    """
    a = np.asarray(m)
    a = a.astype(np.result_type(a.dtype, float), copy=False)
    n, c = a.shape
    if n != c:
        raise ValueError(f"characteristic polynomial needs a square matrix, got {a.shape}")
    coeffs = np.zeros(n + 1, dtype=a.dtype)
    coeffs[0] = 1.0
    aux = np.zeros((n, n), dtype=a.dtype)
    eye = np.eye(n, dtype=a.dtype)
    for k in range(1, n + 1):
        aux = a @ aux + coeffs[k - 1] * eye
        coeffs[k] = -np.trace(a @ aux) / k
    return _frozen(coeffs)
