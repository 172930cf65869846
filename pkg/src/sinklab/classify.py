"""Recognition of two-value symmetric 3x3 matrices.

A symmetric positive 3x3 matrix whose entries take exactly two distinct
values M (majority, at least five of the nine entries) and N can be reduced
to one of the canonical representatives A1..A7: divide by M so the majority
value becomes 1, set K = N/M, and conjugate by a permutation.  The class
label, with the permutation and dilation, transports the canonical scaling
limit back to the original matrix.

Not every symmetric two-value matrix reduces this way: a matrix whose
minority value occupies a single off-diagonal pair and no diagonal (e.g.
[[1,1,1],[1,1,K],[1,K,1]]) needs an asymmetric row/column permutation
to reach a representative.  classify() reports failure on those, and
limit_of() falls back to iteration.
"""

from __future__ import annotations

import itertools
from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from .a7 import a7_limit
from .closed_forms import CANONICAL_LABELS, canonical_limit, canonical_matrix
from .engine import SinkhornOptions, SinkhornResult, sinkhorn
from .errors import ClassificationError, InputError
from .matrix import (
    DiagScaling,
    Permutation,
    PositiveMatrix,
    col_sums,
    conjugate,
    permute_dilate,
    row_sums,
)

__all__ = ["TwoValueProfile", "ClassLabel", "two_value_profile", "classify", "limit_of"]

_REL_TOL = 1e-12

TwoValueProfile = namedtuple("TwoValueProfile", ["M", "N", "count_M"])


def two_value_profile(A: PositiveMatrix):
    """Entry census of a 3x3 matrix.

    Returns TwoValueProfile(M, N, count_M) when A is symmetric with exactly
    two distinct entry values -- M the one occurring at least five times --
    and None otherwise.  Values are compared exactly first; if that yields
    more than two, entries within 1e-12 relative are merged (noisy floats).
    """
    if A.shape != (3, 3):
        raise InputError("two_value_profile requires a 3x3 matrix")
    if not A.is_symmetric():
        return None
    entries = np.sort(A.values.ravel())
    distinct = np.unique(entries)
    if distinct.size == 2:
        m_val, n_val = distinct
        count_m = int(np.count_nonzero(entries == m_val))
    else:
        # Merge near-equal entries; a discrete decision, so clusters must be
        # unambiguous -- anything other than exactly two is a non-answer.
        breaks = np.nonzero(np.diff(entries) > _REL_TOL * entries[1:])[0]
        if breaks.size != 1:
            return None
        split = breaks[0] + 1
        m_val = float(entries[:split].mean())
        n_val = float(entries[split:].mean())
        count_m = int(split)
    if count_m < 5:
        m_val, n_val = n_val, m_val
        count_m = 9 - count_m
    return TwoValueProfile(M=float(m_val), N=float(n_val), count_M=count_m)


@dataclass(frozen=True)
class ClassLabel:
    """Reduction of a two-value symmetric matrix to a canonical class.

    The stored dilation ``lam`` rebuilds the input from the representative:
    input = lam * P * canonical_matrix(label, K) * Q, with Q = P^T.  (lam is
    the majority value M; dividing the input by it is what sends the
    majority entries to 1 and the minority ones to K = N/M.)
    """

    label: str
    K: float
    P: Permutation
    Q: Permutation
    lam: float

    def reconstruct(self) -> PositiveMatrix:
        return permute_dilate(canonical_matrix(self.label, self.K), self.P, self.Q, self.lam)


def _conjugation_matches(norm, C, exact):
    if exact:
        return np.array_equal(norm, C)
    return bool(np.all(np.abs(norm - C) <= _REL_TOL * C))


def classify(A: PositiveMatrix) -> ClassLabel:
    """Find (label, K, P, Q, lam) with A = lam * P * canonical * Q, Q = P^T.

    The search runs labels A1..A7 in order and, within a label, candidate
    permutations P in lexicographic order of their mapping, returning the
    first match; exact entry comparison is tried over the whole space
    before falling back to 1e-12 relative.  A symmetric two-value matrix
    that matches no conjugated representative raises ClassificationError.
    """
    profile = two_value_profile(A)
    if profile is None:
        raise InputError("matrix is not symmetric with exactly two distinct values")
    K = profile.N / profile.M
    if K == 1.0:
        raise ClassificationError(
            "entry values are too close to separate from the all-equal matrix"
        )
    norm = PositiveMatrix(A.values / profile.M)
    canon = [(label, canonical_matrix(label, K).values) for label in CANONICAL_LABELS]
    perms = [Permutation(p) for p in itertools.permutations(range(3))]
    for exact in (True, False):
        for label, C in canon:
            for P in perms:
                # A = lam*P*C*P^T elementwise says norm[i][j] = C at the
                # sigma-inverse images, i.e. conjugating norm by P^{-1}
                # recovers C.
                if _conjugation_matches(conjugate(norm, P.inverse()).values, C, exact):
                    return ClassLabel(
                        label=label, K=K, P=P, Q=P.transpose(), lam=profile.M
                    )
    raise ClassificationError(
        "no symmetric conjugation of a canonical representative matches; "
        "the matrix is two-value but not conjugation-equivalent to A1..A7"
    )


def _canonical_solution(label: str, K: float):
    """(S, X, provenance) for a canonical matrix, via closed forms where
    they exist and root solving for A7."""
    if label == "A7":
        sol = a7_limit(K)
        if sol.provenance != "root_solved":
            return None
        return sol.S, np.array([sol.x, sol.y, sol.z]), "closed_form"
    lim = canonical_limit(label, K)
    return lim.S, lim.X.values, "closed_form"


def limit_of(A: PositiveMatrix, tol: float = 1e-12) -> SinkhornResult:
    """Scaling limit of a positive 3x3 matrix, by classification when the
    matrix is two-value symmetric (provenance "closed_form") and by plain
    iteration otherwise.

    For A = lam * P * C * P^T the limit transports as S(A) = P * S(C) * P^T
    and the symmetric scaler as x_i = X[sigma(i)] / sqrt(lam); the dilation
    drops out of the limit itself.
    """
    if A.shape != (3, 3):
        raise InputError("limit_of requires a 3x3 matrix")
    label = None
    if two_value_profile(A) is not None:
        try:
            label = classify(A)
        except ClassificationError:
            label = None
    solved = None
    if label is not None:
        solved = _canonical_solution(label.label, label.K)
    if solved is None:
        return sinkhorn(A, SinkhornOptions(tol=tol))

    S_can, X_can, provenance = solved
    S = conjugate(S_can, label.P)
    xs = X_can[list(label.P.mapping)] / np.sqrt(label.lam)
    residual = max(
        float(np.max(np.abs(row_sums(S) - 1.0))),
        float(np.max(np.abs(col_sums(S) - 1.0))),
    )
    return SinkhornResult(
        limit=S,
        x=DiagScaling(xs),
        y=DiagScaling(xs),
        iterations=0,
        residual=residual,
        converged=True,
        provenance=provenance,
    )
