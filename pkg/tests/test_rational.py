"""Exact-rational traces, termination probes, and rationality results."""

from fractions import Fraction

import pytest

from sinklab import (
    InputError,
    RationalMatrix,
    ResourceLimitError,
    a2_rational_limit,
    canonical_limit,
    cube_root_convergents,
    exact_scaling_trace,
    parse_rational,
    triangular_parameter,
)

CBRT2 = 2.0 ** (1.0 / 3.0)


def test_parse_rational():
    assert parse_rational("3") == 3
    assert parse_rational(" 3/4 ") == Fraction(3, 4)
    assert parse_rational("-2/6") == Fraction(-1, 3)
    for bad in ("0.5", "1e3", "3/4/5", "x", "1/0", ""):
        with pytest.raises(InputError):
            parse_rational(bad)


def test_rational_matrix_validation():
    with pytest.raises(InputError, match="square"):
        RationalMatrix([[1, 2, 3], [1, 2, 3]])
    with pytest.raises(InputError, match=r"\(1,2\)"):
        RationalMatrix([[1, 0], [1, 1]])
    with pytest.raises(InputError, match=r"\(2,1\)"):
        RationalMatrix([[1, 1], [Fraction(-1, 2), 1]])
    A = RationalMatrix([[Fraction(1, 2), Fraction(1, 2)], [Fraction(1, 2), Fraction(1, 2)]])
    with pytest.raises(AttributeError):
        A.n = 5
    assert A.is_doubly_stochastic()
    assert A.deviation() == 0


def test_from_canonical_pattern():
    A = RationalMatrix.from_canonical("A6", Fraction(7, 3))
    K = Fraction(7, 3)
    assert A.entries == ((K, K, 1), (K, 1, 1), (1, 1, 1))
    assert A.row_sums()[2] == 3


def test_a1_terminates_in_one_step():
    A = RationalMatrix.from_canonical("A1", 2)
    trace, report = exact_scaling_trace(A, 10)
    assert report.terminated and report.terminating_step == 1
    assert report.steps_run == 1 and report.final_deviation == 0
    half, quarter = Fraction(1, 2), Fraction(1, 4)
    assert trace[1].entries == (
        (half, quarter, quarter),
        (quarter, half, quarter),
        (quarter, quarter, half),
    )


def test_doubly_stochastic_input_is_step_zero():
    A = RationalMatrix([[Fraction(1, 3)] * 3] * 3)
    trace, report = exact_scaling_trace(A, 10)
    assert report.terminating_step == 0 and report.steps_run == 0
    assert len(trace) == 1 and trace[0] == A


def test_a2_trace_first_step_and_row_invariant():
    A = RationalMatrix.from_canonical("A2", 3)
    trace, report = exact_scaling_trace(A, 7)
    assert trace[1].entries[0] == (Fraction(3, 5), Fraction(1, 5), Fraction(1, 5))
    # every odd step is a row pass, so its row sums are exactly 1
    for s in (1, 3, 5, 7):
        assert trace[s].row_sums() == (1, 1, 1)
    assert not report.terminated


def test_a2_never_terminates_but_converges():
    A = RationalMatrix.from_canonical("A2", 3)
    trace, report = exact_scaling_trace(A, 50)
    assert not report.terminated and report.steps_run == 50
    assert 0 < report.final_deviation < Fraction(1, 10**20)
    # push on to 200 steps: the floats of the exact iterate land on the
    # rational closed form
    trace, _ = exact_scaling_trace(A, 200)
    lim = a2_rational_limit(2)
    want = [[lim.a, lim.b, lim.b], [lim.b, lim.c, lim.c], [lim.b, lim.c, lim.c]]
    got = trace[-1].to_floats()
    dev = max(
        abs(got[i][j] - float(want[i][j])) for i in range(3) for j in range(3)
    )
    assert dev < 1e-14


def test_bit_guard_carries_partial_work():
    A = RationalMatrix.from_canonical("A6", 2)
    with pytest.raises(ResourceLimitError) as ei:
        exact_scaling_trace(A, 100, bit_bound=64)
    exc = ei.value
    assert exc.exit_code == 3
    assert exc.report.terminated is False
    assert exc.report.steps_run == len(exc.trace) - 1
    assert 2 < exc.report.steps_run < 20
    assert exc.trace[-1].max_denominator_bits() > 64
    with pytest.raises(InputError):
        exact_scaling_trace(A, 0)
    with pytest.raises(InputError):
        exact_scaling_trace(A, 5, bit_bound=0)


def test_triangular_parameter():
    assert [triangular_parameter(k) for k in (3, 6, 10, 15, 21, 55)] == [2, 3, 4, 5, 6, 10]
    assert triangular_parameter(500500) == 1000
    for k in (2, 4, 5, 7, 8, 9, 11, 100):
        assert triangular_parameter(k) is None
    for bad in (1, 0, -3, 3.0, True):
        with pytest.raises(InputError):
            triangular_parameter(bad)


def test_a2_rational_limit_identities():
    for r in range(1, 51):
        lim = a2_rational_limit(r)
        K = Fraction(r * (r + 1), 2)
        assert lim.a + 2 * lim.b == 1
        assert lim.b + 2 * lim.c == 1
        assert K * lim.x_sq == lim.a  # a = K x^2
        assert lim.x_sq * lim.y_sq == lim.b**2  # b = x y
        assert lim.y_sq == lim.c  # c = y^2
    with pytest.raises(InputError):
        a2_rational_limit(0)
    with pytest.raises(InputError):
        a2_rational_limit(2.0)


def test_a2_rational_limit_matches_float_closed_form():
    for r in range(2, 11):
        K = r * (r + 1) // 2
        lim = a2_rational_limit(r)
        S = canonical_limit("A2", float(K)).S.values
        assert abs(S[0][0] - float(lim.a)) < 1e-13
        assert abs(S[0][1] - float(lim.b)) < 1e-13
        assert abs(S[1][1] - float(lim.c)) < 1e-13


def test_cube_root_convergents():
    conv = cube_root_convergents(12, bit_bound=2**15)
    assert conv[0] == Fraction(1, 3)
    assert all(isinstance(c, Fraction) for c in conv)
    devs = [abs(float(c) - (CBRT2 - 1.0)) for c in conv]
    assert devs[-1] < 1e-10
    assert devs[-1] < devs[0]


def test_cube_root_convergents_truncate_at_bit_bound():
    conv = cube_root_convergents(200, bit_bound=2**10)
    assert 3 < len(conv) < 200
    # whatever was produced is still exact and already accurate
    assert abs(float(conv[-1]) - (CBRT2 - 1.0)) < 1e-3
    with pytest.raises(InputError):
        cube_root_convergents(0)
