"""Exact closed-form scaling limits: the MBN two-block family and the
canonical two-value classes A1..A6.

Every formula here is written in a rationalized, singularity-free form.
The textbook displays ((2K+1-sqrt(8K+1))/(2(K-1)) and friends) all carry a
removable singularity at K=1 and lose half their digits to cancellation
near it; multiplying through by the radical conjugate gives expressions
that are exact at K=1 and stable everywhere.  Equality with the display
forms is asserted in tests, away from K=1, not re-derived here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, NumericError
from .matrix import DiagScaling, PositiveMatrix

__all__ = [
    "MbnParams",
    "MbnLimit",
    "CanonicalLimit",
    "mbn_limit",
    "mbn_matrix",
    "mbn_limit_matrix",
    "mbn_asymptote",
    "canonical_matrix",
    "canonical_limit",
    "canonical_asymptote",
    "CANONICAL_LABELS",
]

CANONICAL_LABELS = ("A1", "A2", "A3", "A4", "A5", "A6", "A7")

# If |K - 1| is at or below this, the two entry values are numerically
# indistinguishable and the limit is the flat matrix.
_DEGENERATE_EPS = 1e-12


@dataclass(frozen=True)
class MbnParams:
    """The two-block family: value M on the k x k block, N on the ell x ell
    block, B on the two off-diagonal blocks; n = k + ell."""

    M: float
    B: float
    N: float
    k: int
    ell: int

    def __post_init__(self):
        if self.M <= 0 or self.B <= 0 or self.N <= 0:
            raise InputError("M, B, N must be positive")
        if self.k < 1 or self.ell < 1:
            raise InputError("k and ell must be positive integers")

    @property
    def n(self):
        return self.k + self.ell

    @property
    def ratio(self):
        """L = MN/B^2; the limit depends on the parameters only through L."""
        return self.M * self.N / (self.B * self.B)


@dataclass(frozen=True)
class MbnLimit:
    """Distinct values of the limit (a on the M block, b off-diagonal,
    c on the N block) plus the two scaling values."""

    a: float
    b: float
    c: float
    x: float
    y: float


def mbn_limit(p: MbnParams) -> MbnLimit:
    """Closed-form scaling limit of the MBN matrix.

    With L = MN/B^2 and D = sqrt((k-ell)^2 + 4*k*ell*L) the minus-branch
    quadratic solution is

        a = (k - ell + D) / (k*(n + D)),   b = 2/(n + D),

    and c is a with the blocks' roles swapped.  The radicand is a sum of
    nonnegative terms, so D is real for every positive L; when the signed
    part of a numerator cancels as L -> 0 (k < ell for a, k > ell for c)
    the equivalent rationalized form 4*ell*L / ((n+D)(D+ell-k)) is used
    instead, keeping every coordinate fully accurate out to extreme L.
    At L = 1 all forms collapse to the flat 1/n.
    """
    k, ell, n = p.k, p.ell, p.n
    L = p.ratio
    if abs(L - 1.0) <= 1e-14 * max(L, 1.0):
        a = b = c = 1.0 / n
    else:
        D = math.sqrt((k - ell) ** 2 + 4.0 * k * ell * L)
        if k >= ell:
            a = (k - ell + D) / (k * (n + D))
        else:
            a = 4.0 * ell * L / ((n + D) * (D + ell - k))
        b = 2.0 / (n + D)
        if ell >= k:
            c = (ell - k + D) / (ell * (n + D))
        else:
            c = 4.0 * k * L / ((n + D) * (D + k - ell))
    if not 0.0 < a < 1.0 / k:
        raise NumericError(f"a = {a!r} outside (0, 1/k); bad branch or input")
    return MbnLimit(a=a, b=b, c=c, x=math.sqrt(a / p.M), y=math.sqrt(c / p.N))


def mbn_matrix(p: MbnParams) -> PositiveMatrix:
    """Materialize the n x n input matrix of the family."""
    return PositiveMatrix(_block(p.M, p.B, p.N, p.k, p.ell))


def mbn_limit_matrix(p: MbnParams) -> PositiveMatrix:
    """Materialize the n x n limit matrix (block pattern of a, b, c)."""
    lim = mbn_limit(p)
    return PositiveMatrix(_block(lim.a, lim.b, lim.c, p.k, p.ell))


def _block(top, off, bottom, k, ell):
    n = k + ell
    out = np.empty((n, n))
    out[:k, :k] = top
    out[:k, k:] = off
    out[k:, :k] = off
    out[k:, k:] = bottom
    return out


def mbn_asymptote(k: int, ell: int, direction: str):
    """Limiting (a, b, c) as L -> infinity or L -> 0.

    L -> infinity: (1/k, 0, 1/ell).
    L -> 0: the mass piles onto the off-diagonal blocks as far as it can;
    which diagonal block keeps a remainder depends on the sign of k - ell.
    """
    if k < 1 or ell < 1:
        raise InputError("k and ell must be positive integers")
    if direction == "L_to_infinity":
        return (1.0 / k, 0.0, 1.0 / ell)
    if direction == "L_to_zero":
        if k <= ell:
            return (0.0, 1.0 / ell, (ell - k) / ell**2)
        return ((k - ell) / k**2, 1.0 / k, 0.0)
    raise InputError(f"unknown direction {direction!r}")


# ---------------------------------------------------------------------------
# Canonical two-value classes
# ---------------------------------------------------------------------------

def _canonical_rows(label: str, K: float):
    if label == "A1":
        return [[K, 1, 1], [1, K, 1], [1, 1, K]]
    if label == "A2":
        return [[K, 1, 1], [1, 1, 1], [1, 1, 1]]
    if label == "A3":
        return [[1, 1, 1], [1, K, K], [1, K, K]]
    if label == "A4":
        return [[1, K, K], [K, 1, 1], [K, 1, 1]]
    if label == "A5":
        return [[K, 1, 1], [1, K, 1], [1, 1, 1]]
    if label == "A6":
        return [[K, K, 1], [K, 1, 1], [1, 1, 1]]
    if label == "A7":
        return [[K, K, 1], [K, 1, 1], [1, 1, K]]
    raise InputError(f"unknown canonical label {label!r}")


def canonical_matrix(label: str, K: float) -> PositiveMatrix:
    """The representative matrix of the class, entries 1 and K."""
    if K <= 0:
        raise InputError("K must be positive")
    if K == 1:
        raise InputError("K = 1 is the degenerate all-ones matrix")
    return PositiveMatrix(_canonical_rows(label, K))


@dataclass(frozen=True)
class CanonicalLimit:
    """Scaling limit S and symmetric scaler X of a canonical matrix."""

    label: str
    K: float
    S: PositiveMatrix
    X: DiagScaling


# MBN parameterizations of the three block-shaped classes.
_MBN_CANONICAL = {
    "A2": lambda K: MbnParams(M=K, B=1.0, N=1.0, k=1, ell=2),
    "A3": lambda K: MbnParams(M=1.0, B=1.0, N=K, k=1, ell=2),
    "A4": lambda K: MbnParams(M=1.0, B=K, N=1.0, k=1, ell=2),
}


def canonical_limit(label: str, K: float) -> CanonicalLimit:
    """Closed-form scaling limit for labels A1..A6.

    A7 has no radical closed form; see the a7 module.  For
    |K - 1| <= 1e-12 the flat 1/3 matrix is returned outright (the two
    entry values are numerically equal); exact K = 1 is rejected like
    canonical_matrix does.
    """
    if K <= 0:
        raise InputError("K must be positive")
    if K == 1:
        raise InputError("K = 1 is the degenerate all-ones matrix")
    if label == "A7":
        raise InputError("A7 has no closed form here; use the a7 module")
    if label not in CANONICAL_LABELS:
        raise InputError(f"unknown canonical label {label!r}")

    if label == "A1":
        a = K / (K + 2.0)
        b = 1.0 / (K + 2.0)
        S = [[a, b, b], [b, a, b], [b, b, a]]
        x = math.sqrt(b)
        X = (x, x, x)
    elif label in _MBN_CANONICAL:
        lim = mbn_limit(_MBN_CANONICAL[label](K))
        a, b, c = lim.a, lim.b, lim.c
        S = [[a, b, b], [b, c, c], [b, c, c]]
        X = (lim.x, lim.y, lim.y)
    elif label == "A5":
        s = math.sqrt(4.0 * K + 5.0)
        x_sq = 2.0 / (2.0 * K + 1.0 + s)
        z_sq = (K + 1.0) / (K + 2.0 + s)
        x = math.sqrt(x_sq)
        z = math.sqrt(z_sq)
        a, b, c, d = K * x_sq, x_sq, x * z, z_sq
        S = [[a, b, c], [b, a, c], [c, c, d]]
        X = (x, x, z)
    else:  # A6
        t = np.cbrt(K)
        c = 1.0 / (1.0 + t + t * t)
        a, b = t * c, t * t * c
        y = math.sqrt(c)
        S = [[a, b, c], [b, c, a], [c, a, b]]
        X = (y / t, y, t * y)

    if abs(K - 1.0) <= _DEGENERATE_EPS:
        S = [[1.0 / 3.0] * 3 for _ in range(3)]
    return CanonicalLimit(label=label, K=K, S=PositiveMatrix(S), X=DiagScaling(X))


_GOLD_B = (math.sqrt(5.0) - 1.0) / 2.0
_GOLD_C = (3.0 - math.sqrt(5.0)) / 2.0
_GOLD_D = math.sqrt(5.0) - 2.0

_ASYMPTOTES = {
    ("A1", "K_to_infinity"): [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    ("A1", "K_to_zero"): [[0, 0.5, 0.5], [0.5, 0, 0.5], [0.5, 0.5, 0]],
    ("A2", "K_to_infinity"): [[1, 0, 0], [0, 0.5, 0.5], [0, 0.5, 0.5]],
    ("A2", "K_to_zero"): [[0, 0.5, 0.5], [0.5, 0.25, 0.25], [0.5, 0.25, 0.25]],
    ("A4", "K_to_infinity"): [[0, 0.5, 0.5], [0.5, 0.25, 0.25], [0.5, 0.25, 0.25]],
    ("A4", "K_to_zero"): [[1, 0, 0], [0, 0.5, 0.5], [0, 0.5, 0.5]],
    ("A5", "K_to_infinity"): [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    ("A5", "K_to_zero"): [
        [0, _GOLD_B, _GOLD_C],
        [_GOLD_B, 0, _GOLD_C],
        [_GOLD_C, _GOLD_C, _GOLD_D],
    ],
    ("A6", "K_to_infinity"): [[0, 1, 0], [1, 0, 0], [0, 0, 1]],
    ("A6", "K_to_zero"): [[0, 0, 1], [0, 1, 0], [1, 0, 0]],
}
# A3 shares its limit with A2 for every K (both are MBN with L = K), hence
# also its asymptotes.
_ASYMPTOTES[("A3", "K_to_infinity")] = _ASYMPTOTES[("A2", "K_to_infinity")]
_ASYMPTOTES[("A3", "K_to_zero")] = _ASYMPTOTES[("A2", "K_to_zero")]


def canonical_asymptote(label: str, direction: str) -> np.ndarray:
    """The K -> infinity / K -> 0 limit matrix of S(A_label).

    Entries may be zero, so the result is a plain array, not a
    PositiveMatrix.
    """
    if direction not in ("K_to_infinity", "K_to_zero"):
        raise InputError(f"unknown direction {direction!r}")
    try:
        rows = _ASYMPTOTES[(label, direction)]
    except KeyError:
        raise InputError(f"no asymptote table for label {label!r}") from None
    return np.array(rows, dtype=float)
