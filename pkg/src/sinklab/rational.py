"""Exact-rational scaling traces and rationality results.

Row and column normalization preserve rationality, so the alternate scaling
iterates of a rational matrix live in Q forever; only the limit can be
irrational.  This module runs those traces exactly (fractions.Fraction),
probes for finite termination, implements the triangular-number criterion
for a rational A2 limit, and extracts rational convergents to the cube
root of 2 from the A6(2) trace.

Denominators can grow fast -- roughly doubling in bit length per step for
A6(2) -- so traces carry a configurable denominator bit bound and abort
with a resource-limit error (partial trace attached) when it is exceeded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .closed_forms import canonical_matrix
from .errors import InputError, ResourceLimitError

__all__ = [
    "RationalMatrix",
    "TerminationReport",
    "A2RationalLimit",
    "parse_rational",
    "exact_scaling_trace",
    "triangular_parameter",
    "a2_rational_limit",
    "cube_root_convergents",
    "DEFAULT_BIT_BOUND",
]

DEFAULT_BIT_BOUND = 1_000_000

ONE = Fraction(1)


def parse_rational(text: str) -> Fraction:
    """Parse a decimal integer or "p/q" string into an exact rational.

    Floats are deliberately rejected: converting a decimal like 0.1 to a
    rational would fabricate a denominator the user never wrote.
    """
    s = text.strip()
    parts = s.split("/")
    try:
        if len(parts) == 1:
            return Fraction(int(parts[0]))
        if len(parts) == 2:
            return Fraction(int(parts[0]), int(parts[1]))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational: {text!r} ({exc})") from None
    raise InputError(f"not a rational: {text!r} (expected an integer or p/q)")


class RationalMatrix:
    """Square matrix of positive exact rationals."""

    __slots__ = ("entries", "n")

    def __init__(self, entries):
        rows = tuple(tuple(Fraction(v) for v in row) for row in entries)
        n = len(rows)
        if n == 0 or any(len(row) != n for row in rows):
            raise InputError("rational matrix must be square and nonempty")
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                if v <= 0:
                    raise InputError(f"entry ({i + 1},{j + 1}) is not positive")
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "n", n)

    def __setattr__(self, name, value):
        raise AttributeError("RationalMatrix is immutable")

    @classmethod
    def from_canonical(cls, label: str, K) -> "RationalMatrix":
        """Canonical two-value matrix with an exact rational K."""
        Kf = Fraction(K)
        pattern = canonical_matrix(label, 2.0).values
        return cls(
            [[Kf if pattern[i][j] == 2.0 else ONE for j in range(3)] for i in range(3)]
        )

    def row_sums(self):
        return tuple(sum(row) for row in self.entries)

    def col_sums(self):
        return tuple(sum(col) for col in zip(*self.entries))

    def is_doubly_stochastic(self) -> bool:
        """Exact test: every row and column sum equals 1."""
        return all(s == ONE for s in self.row_sums()) and all(
            s == ONE for s in self.col_sums()
        )

    def deviation(self) -> Fraction:
        """max |sum - 1| over all row and column sums, exactly."""
        return max(abs(s - ONE) for s in self.row_sums() + self.col_sums())

    def max_denominator_bits(self) -> int:
        return max(v.denominator.bit_length() for row in self.entries for v in row)

    def scale_rows(self) -> "RationalMatrix":
        return RationalMatrix(
            [[v / s for v in row] for row, s in zip(self.entries, self.row_sums())]
        )

    def scale_cols(self) -> "RationalMatrix":
        cs = self.col_sums()
        return RationalMatrix([[v / s for v, s in zip(row, cs)] for row in self.entries])

    def to_floats(self):
        return [[float(v) for v in row] for row in self.entries]

    def __eq__(self, other):
        return isinstance(other, RationalMatrix) and self.entries == other.entries

    def __repr__(self):
        return f"RationalMatrix({[[str(v) for v in row] for row in self.entries]!r})"


@dataclass(frozen=True)
class TerminationReport:
    """Outcome of a finite-termination probe.

    One step is one one-sided normalization pass; `terminated` means the
    iterate at `terminating_step` has every row and column sum exactly 1.
    `final_deviation` is the exact max |sum - 1| at the last recorded step.
    """

    steps_run: int
    terminated: bool
    terminating_step: Optional[int]
    final_deviation: Fraction


def exact_scaling_trace(
    A: RationalMatrix, max_steps: int, bit_bound: int = DEFAULT_BIT_BOUND
):
    """Alternate row/column normalization in exact arithmetic.

    Returns (trace, report) where trace[0] is the input and trace[s] the
    iterate after step s (row pass first).  Stops early as soon as an
    iterate is exactly doubly stochastic.  Exhausting max_steps is a normal
    outcome (terminated=False); a denominator exceeding bit_bound bits is
    not, and raises ResourceLimitError with the partial trace and report
    attached.
    """
    if max_steps < 1:
        raise InputError("max_steps must be at least 1")
    if bit_bound < 1:
        raise InputError("bit_bound must be at least 1")

    trace = [A]
    current = A

    def report(terminating_step):
        return TerminationReport(
            steps_run=len(trace) - 1,
            terminated=terminating_step is not None,
            terminating_step=terminating_step,
            final_deviation=current.deviation(),
        )

    if current.is_doubly_stochastic():
        return trace, report(0)
    for step in range(1, max_steps + 1):
        current = current.scale_rows() if step % 2 == 1 else current.scale_cols()
        trace.append(current)
        if current.is_doubly_stochastic():
            return trace, report(step)
        if current.max_denominator_bits() > bit_bound:
            raise ResourceLimitError(
                f"denominator exceeded {bit_bound} bits at step {step}",
                trace=trace,
                report=report(None),
            )
    return trace, report(None)


def triangular_parameter(K: int) -> Optional[int]:
    """r such that K = r(r+1)/2, i.e. 8K+1 = (2r+1)^2, or None.

    Exactly the triangular K give the A2(K) scaling limit rational
    coordinates.
    """
    if not isinstance(K, int) or isinstance(K, bool) or K < 2:
        raise InputError("K must be an integer >= 2")
    m = 8 * K + 1
    s = math.isqrt(m)
    if s * s != m:
        return None
    return (s - 1) // 2


@dataclass(frozen=True)
class A2RationalLimit:
    """Exact limit coordinates of A2(K) for triangular K = r(r+1)/2:
    S = [[a,b,b],[b,c,c],[b,c,c]] with symmetric scaler (x, y, y)."""

    a: Fraction
    b: Fraction
    c: Fraction
    x_sq: Fraction
    y_sq: Fraction


def a2_rational_limit(r: int) -> A2RationalLimit:
    if not isinstance(r, int) or isinstance(r, bool) or r < 1:
        raise InputError("r must be an integer >= 1")
    a = Fraction(r, r + 2)
    b = Fraction(1, r + 2)
    c = Fraction(r + 1, 2 * (r + 2))
    x_sq = Fraction(2, (r + 1) * (r + 2))
    y_sq = c
    return A2RationalLimit(a=a, b=b, c=c, x_sq=x_sq, y_sq=y_sq)


def cube_root_convergents(
    max_steps: int, bit_bound: int = DEFAULT_BIT_BOUND
) -> list:
    """Rational approximations to 2^(1/3) - 1 from the exact A6(2) trace.

    The (3,1) entry of each iterate (the c-position of the circulant limit,
    whose value is (K^(1/3)-1)/(K-1) = cbrt(2)-1 at K=2) is returned for
    steps 1..max_steps.  Denominator bit lengths double roughly once per
    step, so hitting the bit bound just truncates the sequence -- the
    convergents produced so far are still exact.
    """
    if max_steps < 1:
        raise InputError("max_steps must be at least 1")
    A = RationalMatrix.from_canonical("A6", 2)
    try:
        trace, _ = exact_scaling_trace(A, max_steps, bit_bound=bit_bound)
    except ResourceLimitError as exc:
        trace = exc.trace
    return [it.entries[2][0] for it in trace[1:]]
