"""The A7 pipeline: octic, root isolation, back-substitution, verification."""

import numpy as np
import pytest

from sinklab import (
    InputError,
    NumericError,
    Polynomial,
    SinkhornOptions,
    a7_back_substitute,
    a7_limit,
    a7_octic,
    canonical_matrix,
    descartes_positive_count,
    groebner_residuals_k2,
    positive_roots,
    sinkhorn,
)
from sinklab.a7 import a7_asymptote

K_GRID = [0.1, 0.5, 2.0, 3.0, 10.0]


def test_polynomial_evaluation_and_derivative():
    p = Polynomial([1, -3, 2])  # (2x-1)(x-1)
    assert p(1.0) == 0.0
    assert p(0.5) == 0.0
    assert p.derivative().coeffs == (-3.0, 4.0)
    assert Polynomial([5, 0, 0]).degree == 0
    with pytest.raises(InputError):
        Polynomial([])


def test_octic_coefficients_at_k2():
    p = a7_octic(2.0)
    assert p.coeffs == (2.0, 0.0, -7.0, 0.0, -1.0, 0.0, 3.0, 0.0, 1.0)
    with pytest.raises(InputError):
        a7_octic(1.0)
    with pytest.raises(InputError):
        a7_octic(-1.0)


def test_descartes_counts():
    # K > 1: two sign changes, hence exactly two positive roots (each is
    # realized); K < 1: three changes.
    for K in (1.5, 2.0, 3.0, 10.0, 500.0):
        assert descartes_positive_count(a7_octic(K)) == 2
    for K in (0.1, 0.5, 0.9):
        assert descartes_positive_count(a7_octic(K)) == 3


def test_positive_roots_on_known_polynomials():
    roots = positive_roots(Polynomial([2, -3, 1]))  # (x-1)(x-2)
    assert len(roots) == 2
    assert abs(roots[0] - 1.0) < 1e-12 and abs(roots[1] - 2.0) < 1e-12
    assert positive_roots(Polynomial([1, 1])) == []  # root at -1
    # widely separated magnitudes
    roots = positive_roots(Polynomial([1e-6, -1.000001, 1]))  # roots 1e-6, 1
    assert len(roots) == 2 and abs(roots[0] - 1e-6) < 1e-18


def test_octic_roots_match_back_substitution():
    for K in K_GRID:
        ys = positive_roots(a7_octic(K))
        # two positive roots for K > 1 (Descartes is tight), one for K < 1
        assert len(ys) == (2 if K > 1 else 1)
        valid = []
        for y in ys:
            x, z = a7_back_substitute(K, y)
            if x > 0 and z > 0:
                res = (
                    abs(K * x * x + K * x * y + x * z - 1),
                    abs(K * x * y + y * y + y * z - 1),
                    abs(x * z + y * z + K * z * z - 1),
                )
                if max(res) <= 1e-9:
                    valid.append((x, y, z))
        assert len(valid) == 1


@pytest.mark.parametrize("K", K_GRID)
def test_a7_limit_residuals_and_iteration_agreement(K):
    sol = a7_limit(K)
    assert sol.provenance == "root_solved"
    assert max(sol.residuals) <= 1e-11
    it = sinkhorn(canonical_matrix("A7", K), SinkhornOptions(tol=1e-14))
    assert np.abs(sol.S.values - it.limit.values).max() < 1e-11
    assert min(sol.x, sol.y, sol.z) > 0


def test_a7_limit_k2_frozen_triple():
    sol = a7_limit(2.0)
    assert abs(sol.x - 0.41543968702803835) < 1e-12
    assert abs(sol.y - 0.53382890592353920) < 1e-12
    assert abs(sol.z - 0.50855109002390930) < 1e-12
    assert sol.positive_root_count == 2


def test_groebner_residuals_vanish_at_the_solution():
    sol = a7_limit(2.0)
    res = groebner_residuals_k2(sol.x, sol.y, sol.z)
    assert len(res) == 9
    assert max(res) <= 1e-10
    # and do NOT vanish elsewhere
    off = groebner_residuals_k2(sol.x + 1e-3, sol.y, sol.z)
    assert max(off) > 1e-5


def test_back_substitution_rejects_bad_input():
    with pytest.raises(InputError):
        a7_back_substitute(2.0, -0.5)
    with pytest.raises(InputError):
        a7_back_substitute(1.0, 0.5)


def test_near_degenerate_falls_back_to_iteration():
    sol = a7_limit(1.0 + 1e-8)
    assert sol.provenance == "iterated"
    assert max(sol.residuals) <= 1e-11
    assert np.abs(sol.S.values - 1.0 / 3.0).max() < 1e-7
    with pytest.raises(InputError):
        a7_limit(1.0)


def test_a7_asymptotes_are_approached():
    hi = a7_limit(1e4)
    assert np.abs(hi.S.values - a7_asymptote("K_to_infinity")).max() < 5e-2
    lo = a7_limit(1e-4)
    assert np.abs(lo.S.values - a7_asymptote("K_to_zero")).max() < 5e-2
    with pytest.raises(InputError):
        a7_asymptote("K_to_one")


def test_duplicate_valid_triples_would_be_a_bug():
    # uniqueness of the Sinkhorn limit means the solver should never find
    # two valid triples; make sure the guard path exists by feeding the
    # solver every K on a modest grid.
    for K in np.geomspace(0.05, 20, 25):
        if abs(K - 1.0) < 1e-6:
            continue
        sol = a7_limit(float(K))
        assert max(sol.residuals) <= 1e-11


def test_polynomial_residual_guard():
    # positive_roots sanity-checks its candidates; force a failure with an
    # absurd tolerance to confirm NumericError (not a wrong answer) comes out
    with pytest.raises((NumericError, InputError)):
        positive_roots(Polynomial([2, -3, 1]), tol=-1)
