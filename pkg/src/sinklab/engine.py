"""The alternate scaling (Sinkhorn) iteration and its variants.

One *iteration* here is one one-sided pass: a row normalization OR a column
normalization.  The residual after a pass is the largest deviation of any
row or column sum from its target, so a matrix like [[K,1,1],[1,K,1],[1,1,K]]
converges after exactly one pass.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InputError, NumericError
from .matrix import DiagScaling, PositiveMatrix, apply_scaling

__all__ = [
    "SinkhornOptions",
    "SinkhornResult",
    "row_normalize",
    "col_normalize",
    "sinkhorn",
    "symmetric_scaling",
    "target_sinkhorn",
]

# Accumulated scaling values outside this range trigger a gauge-invariant
# renormalization of the (x, y) pair; see sinkhorn() below.
_OVERFLOW_LO = 1e-150
_OVERFLOW_HI = 1e150


@dataclass(frozen=True)
class SinkhornOptions:
    """Stopping and bookkeeping knobs for the iteration."""

    tol: float = 1e-13
    max_iters: int = 100_000
    record_trace: bool = False
    order: str = "row_first"

    def __post_init__(self):
        if self.tol <= 0:
            raise InputError("tol must be positive")
        if self.max_iters < 1:
            raise InputError("max_iters must be at least 1")
        if self.order not in ("row_first", "col_first"):
            raise InputError(f"unknown order {self.order!r}")


@dataclass(frozen=True)
class SinkhornResult:
    """Outcome of a scaling run.

    ``limit`` is the last iterate; ``x`` and ``y`` are the accumulated
    row-side and column-side scalings, so apply_scaling(x, A_input, y)
    reproduces ``limit`` up to rounding.  ``trace``, when recorded, holds
    (iteration, residual) pairs -- never full matrices.
    """

    limit: PositiveMatrix
    x: DiagScaling
    y: DiagScaling
    iterations: int
    residual: float
    converged: bool
    provenance: str = "iterated"
    trace: Optional[list] = None
    warnings: tuple = field(default_factory=tuple)


def row_normalize(A: PositiveMatrix):
    """Divide each row by its sum.  Returns (R(A), the applied scaling)."""
    rs = A.values.sum(axis=1)
    return PositiveMatrix(A.values / rs[:, None]), DiagScaling(1.0 / rs)


def col_normalize(A: PositiveMatrix):
    """Divide each column by its sum.  Returns (C(A), the applied scaling)."""
    cs = A.values.sum(axis=0)
    return PositiveMatrix(A.values / cs[None, :]), DiagScaling(1.0 / cs)


def sinkhorn(A: PositiveMatrix, opts: SinkhornOptions = None) -> SinkhornResult:
    """Alternately row- and column-normalize A until doubly stochastic.

    Stops when the residual (max |row or column sum - 1|) drops to
    opts.tol, or after opts.max_iters passes with converged=False.
    NaN or overflow mid-iteration raises NumericError.
    """
    opts = opts or SinkhornOptions()
    m, n = A.values.shape
    if m != n:
        raise InputError(
            "doubly stochastic scaling needs a square matrix; "
            "use target_sinkhorn for rectangular targets"
        )
    return _alternate_scale(A, np.ones(m), np.ones(n), opts)


def target_sinkhorn(
    A: PositiveMatrix, r, c, opts: SinkhornOptions = None
) -> SinkhornResult:
    """Scale A so row sums hit r and column sums hit c.

    The row pass multiplies row i by r_i/rowsum_i, the column pass mirrors
    it; with r = c = ones this is exactly sinkhorn().  Rectangular A is
    fine.  The target sums must balance: sum(r) = sum(c) within 1e-12
    relative, else no such scaling exists.
    """
    opts = opts or SinkhornOptions()
    m, n = A.values.shape
    r = np.asarray(r, dtype=float).reshape(-1)
    c = np.asarray(c, dtype=float).reshape(-1)
    if r.size != m or c.size != n:
        raise InputError(f"target lengths ({r.size},{c.size}) do not match {m}x{n}")
    if np.any(r <= 0) or np.any(c <= 0):
        raise InputError("target sums must be positive")
    total_r, total_c = r.sum(), c.sum()
    if abs(total_r - total_c) > 1e-12 * max(total_r, total_c):
        raise InputError(
            f"target sums do not balance: sum(r)={total_r!r}, sum(c)={total_c!r}"
        )
    return _alternate_scale(A, np.ones(m), np.ones(n), opts, r=r, c=c)


def _alternate_scale(A, x, y, opts, r=None, c=None):
    """Shared engine body: unit targets when r/c are None."""
    W = A.values.copy()
    m, n = W.shape
    rt = np.ones(m) if r is None else r
    ct = np.ones(n) if c is None else c
    warnings = []
    trace = [] if opts.record_trace else None

    def residual_of(M):
        return max(
            float(np.max(np.abs(M.sum(axis=1) - rt))),
            float(np.max(np.abs(M.sum(axis=0) - ct))),
        )

    res = residual_of(W)
    iterations = 0
    converged = res <= opts.tol
    row_turn = opts.order == "row_first"
    while not converged and iterations < opts.max_iters:
        if row_turn:
            s = W.sum(axis=1)
            f = rt / s
            W *= f[:, None]
            x *= f
        else:
            s = W.sum(axis=0)
            f = ct / s
            W *= f[None, :]
            y *= f
        row_turn = not row_turn
        iterations += 1
        if not np.all(np.isfinite(W)):
            raise NumericError(f"iterate became non-finite at pass {iterations}")
        res = residual_of(W)
        if trace is not None:
            trace.append((iterations, res))
        converged = res <= opts.tol
        # Gauge renormalization: multiplying x by alpha and y by 1/alpha
        # leaves diag(x) A diag(y) unchanged, so pull runaway accumulators
        # back into range without touching the limit.
        for vec, other in ((x, y), (y, x)):
            hi, lo = vec.max(), vec.min()
            if hi > _OVERFLOW_HI or lo < _OVERFLOW_LO:
                alpha = 1.0 / np.sqrt(hi * lo)
                vec *= alpha
                other /= alpha
                warnings.append(
                    f"gauge renormalization by {alpha:.3e} at pass {iterations}"
                )

    return SinkhornResult(
        limit=PositiveMatrix(W),
        x=DiagScaling(x),
        y=DiagScaling(y),
        iterations=iterations,
        residual=res,
        converged=bool(converged),
        provenance="iterated",
        trace=trace,
        warnings=tuple(warnings),
    )


def symmetric_scaling(A: PositiveMatrix, opts: SinkhornOptions = None) -> DiagScaling:
    """The unique positive diagonal X with X A X doubly stochastic.

    A must be symmetric.  The asymmetric run yields some (x, y) with
    diag(x) A diag(y) doubly stochastic; the pair is only determined up to
    the gauge (lam*x, y/lam), and the geometric mean sqrt(x_i * y_i)
    removes exactly that freedom, landing on the symmetric scaler.
    """
    if not A.is_square or not A.is_symmetric():
        raise InputError("symmetric_scaling requires a symmetric matrix")
    result = sinkhorn(A, opts)
    if not result.converged:
        raise NumericError(
            f"did not converge in {result.iterations} passes "
            f"(residual {result.residual:.3e})",
            partial=result,
        )
    return DiagScaling(np.sqrt(result.x.values * result.y.values))
