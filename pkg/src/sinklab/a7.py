"""The A7 class: octic polynomial, positive-root isolation, and
back-substitution through triangularized basis polynomials.

The scaling equations for A7(K) = [[K,K,1],[K,1,1],[1,1,K]] are

    K x^2 + K xy + xz = 1
    K xy  + y^2 + yz  = 1
    xz    + yz  + Kz^2 = 1

Eliminating x and z leaves an even octic in y,

    (K-1)^3 y^8 + 3(K-1)^2 y^6 - (K-1)(2K-3) y^4 - (4K-1) y^2 + K = 0,

whose positive roots are isolated here via its quartic in t = y^2.  Given
y, the triangularized system recovers x and z linearly:

    K(K+1) x = 2K y + (K-1)(2K-1) y^3 - 2(K-1)^2 y^5 - (K-1)^3 y^7
    K(K+1) z = (K^2+2K-1) y - 3(K-1) y^3 - (K-1)^2 (K+3) y^5 - (K-1)^3 y^7

(The z relation is restated from scratch: eliminating x from the first two
quadratics gives z = (1 - (K-1)y^4 - 2y^2) / (y((K-1)y^2 + 1)), and
clearing the denominator with the octic reduces it to the polynomial
above.  It reproduces the K=2 basis h3 exactly and matches iteration for
all K tested; commonly circulated variants with a (K-1)^2 y coefficient do
not solve the system.)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .closed_forms import canonical_matrix
from .engine import SinkhornOptions, sinkhorn, symmetric_scaling
from .errors import InputError, NumericError
from .matrix import DiagScaling, PositiveMatrix, apply_scaling

__all__ = [
    "Polynomial",
    "A7Solution",
    "a7_octic",
    "descartes_positive_count",
    "positive_roots",
    "a7_back_substitute",
    "a7_limit",
    "a7_asymptote",
    "groebner_residuals_k2",
]


class Polynomial:
    """Real polynomial, coefficients in ascending degree order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [float(c) for c in coeffs]
        while len(cs) > 1 and cs[-1] == 0.0:
            cs.pop()
        if not cs:
            raise InputError("empty coefficient list")
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def scale(self):
        return max(abs(c) for c in self.coeffs)

    def __call__(self, x):
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self):
        if self.degree == 0:
            return Polynomial((0.0,))
        return Polynomial(tuple(i * c for i, c in enumerate(self.coeffs))[1:])

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)!r})"


def a7_octic(K: float) -> Polynomial:
    """The degree-8 polynomial in y determining the A7 scaling."""
    if K <= 0:
        raise InputError("K must be positive")
    if K == 1:
        raise InputError("K = 1 is degenerate (zero leading coefficient)")
    u = K - 1.0
    return Polynomial(
        (K, 0.0, -(4.0 * K - 1.0), 0.0, -u * (2.0 * K - 3.0), 0.0, 3.0 * u * u, 0.0, u**3)
    )


def _octic_quartic(K: float) -> Polynomial:
    """The octic viewed as a quartic in t = y^2."""
    u = K - 1.0
    return Polynomial((K, -(4.0 * K - 1.0), -u * (2.0 * K - 3.0), 3.0 * u * u, u**3))


def descartes_positive_count(p: Polynomial) -> int:
    """Number of sign changes among nonzero coefficients: an upper bound on
    the count of positive roots, exact modulo 2."""
    signs = [c > 0 for c in p.coeffs if c != 0.0]
    if not signs:
        raise InputError("zero polynomial")
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def positive_roots(p: Polynomial, tol: float = 1e-12) -> list:
    """All positive real roots of p, ascending.

    Sign changes are sampled on a geometric grid spanning the classical
    root bounds, refined by bisection to ~1e-15 relative width and polished
    with Newton steps.  Roots of even multiplicity, or distinct roots
    closer together than the grid resolution, will be missed; the
    polynomials used here are square-free away from K = 1.
    """
    if tol <= 0:
        raise InputError("tol must be positive")
    if p.degree == 0:
        return []
    # Factor out x^k (the origin is never a *positive* root), then bracket:
    # every positive root lies in [c0/(c0 + max rest), 1 + Cauchy bound].
    k = 0
    while p.coeffs[k] == 0.0:
        k += 1
    tail = [abs(c) for c in p.coeffs[k + 1 :]]
    if not tail or max(tail) == 0.0:
        return []
    c0 = abs(p.coeffs[k])
    lo = 0.5 * c0 / (c0 + max(tail))
    hi = 2.0 + max(abs(c) for c in p.coeffs[:-1]) / abs(p.coeffs[-1])
    npts = 512
    ratio = (hi / lo) ** (1.0 / (npts - 1))
    grid = [lo * ratio**i for i in range(npts)]
    grid[-1] = hi

    dp = p.derivative()
    roots = []
    fa = p(grid[0])
    # A root below the bottom of the grid would need |p(x)| to have dived
    # through zero already; the constant term dominates there, so treat the
    # origin side by its sign.
    for i in range(1, npts):
        fb = p(grid[i])
        if fa == 0.0:
            roots.append(grid[i - 1])
        elif fa * fb < 0.0:
            roots.append(_refine(p, dp, grid[i - 1], grid[i], fa))
        fa = fb
    if p(hi) == 0.0:
        roots.append(hi)

    good = []
    for r in sorted(roots):
        if good and abs(r - good[-1]) <= 1e-12 * max(1.0, abs(r)):
            continue
        if abs(p(r)) > tol * p.scale * max(1.0, abs(r)) ** p.degree:
            raise NumericError(f"root candidate {r!r} failed residual check")
        good.append(r)
    return good


def _refine(p, dp, a, b, fa):
    """Bisect [a,b] down to ~1e-15 relative width, then Newton-polish."""
    for _ in range(200):
        mid = 0.5 * (a + b)
        if mid == a or mid == b or (b - a) <= 1e-15 * max(1.0, abs(b)):
            break
        fm = p(mid)
        if fm == 0.0:
            return mid
        if (fa < 0.0) == (fm < 0.0):
            a, fa = mid, fm
        else:
            b = mid
    x = 0.5 * (a + b)
    for _ in range(4):
        d = dp(x)
        if d == 0.0:
            break
        step = p(x) / d
        nxt = x - step
        if not (a <= nxt <= b) and not (b <= nxt <= a):
            break
        x = nxt
        if abs(step) <= 1e-17 * max(1.0, abs(x)):
            break
    return x


def a7_back_substitute(K: float, y: float):
    """Recover (x, z) from a root y of the octic; both relations are linear
    in the unknown, so this is exact up to rounding."""
    if K <= 0 or K == 1:
        raise InputError("K must be positive and != 1")
    if y <= 0:
        raise InputError("y must be positive")
    u = K - 1.0
    y3 = y**3
    y5 = y**5
    y7 = y**7
    den = K * (K + 1.0)
    x = (2.0 * K * y + u * (2.0 * K - 1.0) * y3 - 2.0 * u * u * y5 - u**3 * y7) / den
    z = (
        (K * K + 2.0 * K - 1.0) * y
        - 3.0 * u * y3
        - u * u * (K + 3.0) * y5
        - u**3 * y7
    ) / den
    return x, z


@dataclass(frozen=True)
class A7Solution:
    """The solved scaling of A7(K): the triple (x, y, z), the limit S,
    residuals of the three quadratics, and how many positive roots the
    octic had."""

    K: float
    x: float
    y: float
    z: float
    S: PositiveMatrix
    residuals: tuple
    positive_root_count: int
    provenance: str = "root_solved"


def _system_residuals(K, x, y, z):
    return (
        abs(K * x * x + K * x * y + x * z - 1.0),
        abs(K * x * y + y * y + y * z - 1.0),
        abs(x * z + y * z + K * z * z - 1.0),
    )


def _polish_triple(K, x, y, z):
    """A couple of Newton steps on the full 3x3 quadratic system to push
    residuals from root-isolation level (~1e-13) to machine level."""
    v = np.array([x, y, z])
    for _ in range(3):
        x, y, z = v
        F = np.array(
            [
                K * x * x + K * x * y + x * z - 1.0,
                K * x * y + y * y + y * z - 1.0,
                x * z + y * z + K * z * z - 1.0,
            ]
        )
        J = np.array(
            [
                [2.0 * K * x + K * y + z, K * x, x],
                [K * y, K * x + 2.0 * y + z, y],
                [z, z, x + y + 2.0 * K * z],
            ]
        )
        try:
            step = np.linalg.solve(J, F)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(step)):
            break
        v = v - step
        if np.any(v <= 0):
            return x, y, z
        if np.max(np.abs(step)) <= 1e-16 * np.max(np.abs(v)):
            break
    return float(v[0]), float(v[1]), float(v[2])


def _iterated_solution(K, tol):
    A = canonical_matrix("A7", K)
    X = symmetric_scaling(A, SinkhornOptions(tol=min(tol, 1e-13)))
    x, y, z = (float(v) for v in X.values)
    x, y, z = _polish_triple(K, x, y, z)
    S = apply_scaling(DiagScaling((x, y, z)), A, DiagScaling((x, y, z)))
    quartic_roots = positive_roots(_octic_quartic(K)) if K != 1 else []
    return A7Solution(
        K=K,
        x=x,
        y=y,
        z=z,
        S=S,
        residuals=_system_residuals(K, x, y, z),
        positive_root_count=len(quartic_roots),
        provenance="iterated",
    )


def a7_limit(K: float, tol: float = 1e-11) -> A7Solution:
    """Scaling limit of A7(K) by root isolation and back-substitution.

    Every positive root y of the octic yields a candidate triple; exactly
    one is positive with all three quadratic residuals at solver level.
    Near K = 1 the octic's leading coefficient (K-1)^3 collapses, so the
    solver falls back to plain iteration (provenance "iterated").
    """
    if K <= 0:
        raise InputError("K must be positive")
    if K == 1:
        raise InputError("K = 1 is the degenerate all-ones matrix")
    if abs(K - 1.0) < 1e-6:
        return _iterated_solution(K, tol)

    t_roots = positive_roots(_octic_quartic(K), tol=1e-13)
    candidates = []
    for t in t_roots:
        y = math.sqrt(t)
        x, z = a7_back_substitute(K, y)
        if x <= 0.0 or z <= 0.0:
            continue
        x, y, z = _polish_triple(K, x, y, z)
        res = _system_residuals(K, x, y, z)
        if max(res) <= tol:
            candidates.append((x, y, z, res))

    if len(candidates) > 1:
        raise NumericError(
            f"{len(candidates)} positive valid triples at K={K!r}; "
            "uniqueness violated (bug)"
        )
    if not candidates:
        return _iterated_solution(K, tol)

    x, y, z, res = candidates[0]
    A = canonical_matrix("A7", K)
    S = apply_scaling(DiagScaling((x, y, z)), A, DiagScaling((x, y, z)))
    return A7Solution(
        K=K,
        x=x,
        y=y,
        z=z,
        S=S,
        residuals=res,
        positive_root_count=len(t_roots),
        provenance="root_solved",
    )


def a7_asymptote(direction: str) -> np.ndarray:
    """Observed limiting permutation matrices of S(A7) for extreme K."""
    if direction == "K_to_infinity":
        return np.array([[0.0, 1, 0], [1, 0, 0], [0, 0, 1]])
    if direction == "K_to_zero":
        return np.array([[0.0, 0, 1], [0, 1, 0], [1, 0, 0]])
    raise InputError(f"unknown direction {direction!r}")


# The three triangularized bases of the K=2 system, one per variable
# ordering; stored verbatim as verification constants.  f eliminates to z,
# g to x, h to y.
_K2_F1 = Polynomial((4, 0, -28, 0, 62, 0, -57, 0, 18))
_K2_G1 = Polynomial((2, 0, -17, 0, 22, 0, 48, 0, 36))
_K2_H1 = Polynomial((2, 0, -7, 0, -1, 0, 3, 0, 1))


def groebner_residuals_k2(x: float, y: float, z: float):
    """Absolute values of the nine K=2 basis polynomials at (x, y, z).

    All nine vanish simultaneously exactly on the solution variety of the
    K=2 system, so these are independent witnesses that a triple solves it.
    """
    f1 = _K2_F1(z)
    f2 = -17 * z**3 + 39 * z**5 - 18 * z**7 + 2 * y
    f3 = -20 * z + 96 * z**3 - 135 * z**5 + 54 * z**7 + 4 * x
    g1 = _K2_G1(x)
    g2 = -103 * x + 378 * x**3 + 624 * x**5 + 396 * x**7 + 14 * z
    g3 = 3 * x - 56 * x**3 - 72 * x**5 - 36 * x**7 + 7 * y
    h1 = _K2_H1(y)
    h2 = -4 * y - 3 * y**3 + 2 * y**5 + y**7 + 6 * x
    h3 = -7 * y + 3 * y**3 + 5 * y**5 + y**7 + 6 * z
    return tuple(abs(v) for v in (f1, f2, f3, g1, g2, g3, h1, h2, h3))
