"""Dense positive matrices, diagonal scalings, and permutations.

The numeric core works in float64 throughout; exact rational matrices live
in :mod:`sinklab.rational`.  Matrices are immutable values: every operation
returns a new object, so iteration traces can safely retain history.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import InputError

__all__ = [
    "PositiveMatrix",
    "DiagScaling",
    "Permutation",
    "row_sums",
    "col_sums",
    "is_doubly_stochastic",
    "apply_scaling",
    "permute_dilate",
    "parse_matrix",
    "parse_matrix_csv",
]


class PositiveMatrix:
    """A dense matrix with strictly positive entries.

    Positivity is validated on construction with strict ``> 0`` -- a zero
    entry is a construction error, not a warning, because every theorem the
    engine relies on assumes positive matrices.  Square matrices are the
    main citizens; rectangular ones are accepted for target scaling.
    """

    __slots__ = ("values",)

    def __init__(self, values):
        try:
            arr = np.asarray(values, dtype=float)
        except (ValueError, TypeError) as exc:
            raise InputError(f"not a rectangular numeric matrix: {exc}") from None
        if arr.ndim != 2 or arr.size == 0:
            raise InputError("matrix must be a non-empty 2-d array")
        if not np.all(np.isfinite(arr)):
            i, j = _first_offender(~np.isfinite(arr))
            raise InputError(f"entry ({i + 1},{j + 1}) is not finite")
        if not np.all(arr > 0.0):
            i, j = _first_offender(arr <= 0.0)
            raise InputError(f"entry ({i + 1},{j + 1}) not positive")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    def __setattr__(self, name, value):
        raise AttributeError("PositiveMatrix is immutable")

    @property
    def shape(self):
        return self.values.shape

    @property
    def n(self):
        """Dimension of a square matrix."""
        m, n = self.values.shape
        if m != n:
            raise InputError(f"matrix is {m}x{n}, not square")
        return n

    @property
    def is_square(self):
        m, n = self.values.shape
        return m == n

    def is_symmetric(self, rtol=1e-13):
        if not self.is_square:
            return False
        a = self.values
        return np.max(np.abs(a - a.T)) <= rtol * np.max(np.abs(a))

    def to_lists(self):
        return [[float(v) for v in row] for row in self.values]

    def __repr__(self):
        return f"PositiveMatrix({self.to_lists()!r})"


def _first_offender(mask):
    idx = np.argwhere(mask)[0]
    return int(idx[0]), int(idx[1])


class DiagScaling:
    """A positive vector standing for a diagonal scaling matrix."""

    __slots__ = ("values",)

    def __init__(self, values):
        arr = np.asarray(values, dtype=float).reshape(-1)
        if arr.size == 0:
            raise InputError("scaling vector must be non-empty")
        if not np.all(np.isfinite(arr)) or not np.all(arr > 0.0):
            raise InputError("scaling values must be finite and positive")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    def __setattr__(self, name, value):
        raise AttributeError("DiagScaling is immutable")

    def __len__(self):
        return self.values.size

    def to_list(self):
        return [float(v) for v in self.values]

    def __repr__(self):
        return f"DiagScaling({self.to_list()!r})"


class Permutation:
    """A permutation of {0, ..., n-1}, stored as its mapping i -> sigma(i).

    The associated matrix P has P[i][j] = 1 iff j = sigma(i), so that
    (P A)[i][j] = A[sigma(i)][j]: left multiplication reorders rows.
    """

    __slots__ = ("mapping",)

    def __init__(self, mapping):
        m = tuple(int(v) for v in mapping)
        if sorted(m) != list(range(len(m))):
            raise InputError(f"not a bijection of 0..{len(m) - 1}: {m}")
        object.__setattr__(self, "mapping", m)

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    @classmethod
    def identity(cls, n):
        return cls(range(n))

    def __len__(self):
        return len(self.mapping)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.mapping == other.mapping

    def __hash__(self):
        return hash(self.mapping)

    def inverse(self):
        inv = [0] * len(self.mapping)
        for i, s in enumerate(self.mapping):
            inv[s] = i
        return Permutation(inv)

    def transpose(self):
        """The permutation whose matrix is the transpose (= the inverse)."""
        return self.inverse()

    def matrix(self):
        n = len(self.mapping)
        p = np.zeros((n, n))
        p[np.arange(n), self.mapping] = 1.0
        return p

    def compose(self, other):
        """Permutation whose matrix equals self.matrix() @ other.matrix()."""
        return Permutation(tuple(other.mapping[s] for s in self.mapping))

    def __repr__(self):
        return f"Permutation({list(self.mapping)!r})"


def row_sums(A: PositiveMatrix):
    """Vector of row sums of A."""
    return A.values.sum(axis=1)


def col_sums(A: PositiveMatrix):
    """Vector of column sums of A."""
    return A.values.sum(axis=0)


def is_doubly_stochastic(A: PositiveMatrix, tol: float) -> bool:
    """True iff every row and column sum is within ``tol`` of 1."""
    if tol < 0:
        raise InputError("tol must be nonnegative")
    return (
        np.max(np.abs(row_sums(A) - 1.0)) <= tol
        and np.max(np.abs(col_sums(A) - 1.0)) <= tol
    )


def apply_scaling(X: DiagScaling, A: PositiveMatrix, Y: DiagScaling) -> PositiveMatrix:
    """The product X A Y for diagonal X and Y: entry (i,j) is x_i a_ij y_j."""
    m, n = A.values.shape
    if len(X) != m or len(Y) != n:
        raise InputError(
            f"scaling dimensions ({len(X)},{len(Y)}) do not match matrix {m}x{n}"
        )
    return PositiveMatrix(X.values[:, None] * A.values * Y.values[None, :])


def permute_dilate(
    A: PositiveMatrix, P: Permutation, Q: Permutation, lam: float
) -> PositiveMatrix:
    """The matrix lam * P @ A @ Q (literal products with permutation matrices).

    Row i of the result is row P.mapping[i] of A; column j of the result is
    column Q.inverse().mapping[j] of the row-permuted matrix.
    """
    if lam <= 0:
        raise InputError("dilation factor must be positive")
    m, n = A.values.shape
    if len(P) != m or len(Q) != n:
        raise InputError("permutation sizes do not match matrix")
    rows = A.values[list(P.mapping), :]
    out = rows[:, list(Q.inverse().mapping)]
    return PositiveMatrix(lam * out)


def conjugate(A: PositiveMatrix, P: Permutation) -> PositiveMatrix:
    """P A P^T: entry (i,j) of the result is A[sigma(i)][sigma(j)]."""
    idx = list(P.mapping)
    return PositiveMatrix(A.values[np.ix_(idx, idx)])


def parse_matrix(text: str) -> PositiveMatrix:
    """Parse a matrix from JSON: either bare ``[[...],...]`` rows or the
    object form ``{"n": 3, "rows": [[...],...]}``."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"matrix is not valid JSON: {exc}") from None
    return matrix_from_obj(data)


def matrix_from_obj(data) -> PositiveMatrix:
    """Build a PositiveMatrix from already-decoded JSON data."""
    if isinstance(data, dict):
        if "rows" not in data:
            raise InputError('matrix object must have a "rows" field')
        rows = data["rows"]
        if "n" in data and len(rows) != data["n"]:
            raise InputError(f'"n" is {data["n"]} but {len(rows)} rows given')
    else:
        rows = data
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InputError("matrix rows must be a list of lists")
    width = {len(r) for r in rows}
    if len(width) != 1:
        raise InputError("matrix rows have unequal lengths")
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise InputError(f"entry ({i + 1},{j + 1}) is not a number")
    return PositiveMatrix(rows)


def parse_matrix_csv(text: str) -> PositiveMatrix:
    """Parse a matrix from CSV: one row per line, comma-separated decimals."""
    rows = []
    for i, line in enumerate(filter(None, (ln.strip() for ln in text.splitlines()))):
        row = []
        for j, field in enumerate(line.split(",")):
            try:
                row.append(float(field))
            except ValueError:
                raise InputError(
                    f"entry ({i + 1},{j + 1}) is not a decimal value: {field!r}"
                ) from None
        rows.append(row)
    if not rows:
        raise InputError("CSV matrix is empty")
    if len({len(r) for r in rows}) != 1:
        raise InputError("CSV rows have unequal lengths")
    return PositiveMatrix(rows)
