"""Shared command layer: one function per user-facing command.

The CLI and the HTTP service are both thin wrappers around these handlers.
Each takes already-parsed, typed inputs and returns an OutputEnvelope dict
(run_sweep returns CSV text) ready for deterministic serialization; all
failures are SinklabError subclasses for the callers to map onto exit
codes or HTTP statuses.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .a7 import a7_limit, groebner_residuals_k2
from .classify import classify
from .closed_forms import (
    CANONICAL_LABELS,
    MbnParams,
    canonical_limit,
    mbn_limit,
)
from .engine import SinkhornOptions, sinkhorn, target_sinkhorn
from .envelope import format_float, make_envelope
from .errors import InputError, NumericError
from .matrix import PositiveMatrix, col_sums, conjugate, row_sums
from .rational import (
    DEFAULT_BIT_BOUND,
    RationalMatrix,
    a2_rational_limit,
    cube_root_convergents,
    exact_scaling_trace,
    triangular_parameter,
)

__all__ = [
    "run_scale",
    "run_limit",
    "run_mbn",
    "run_sweep",
    "run_rational_probe",
    "run_rational_cube_root",
    "run_rational_trace",
    "run_target",
    "SWEEP_LETTERS",
]

_CBRT2_MINUS_1 = 2.0 ** (1.0 / 3.0) - 1.0


def _matrix_payload(result):
    return {
        "limit": result.limit.to_lists(),
        "x": result.x.to_list(),
        "y": result.y.to_list(),
    }


def _diagnostics(result, trace=False):
    diag = {
        "iterations": result.iterations,
        "residual": result.residual,
        "converged": result.converged,
        "warnings": list(result.warnings),
    }
    if trace and result.trace is not None:
        diag["trace"] = [[it, res] for it, res in result.trace]
    return diag


def _require_converged(result, command):
    if not result.converged:
        raise NumericError(
            f"{command}: no convergence in {result.iterations} passes "
            f"(residual {result.residual:.3e})",
            partial=result,
        )


def run_scale(A: PositiveMatrix, tol=1e-13, max_iters=100_000, order="row_first", trace=False):
    opts = SinkhornOptions(tol=tol, max_iters=max_iters, record_trace=trace, order=order)
    result = sinkhorn(A, opts)
    _require_converged(result, "scale")
    echo = {"matrix": A.to_lists(), "tol": tol, "max_iters": max_iters, "order": order}
    return make_envelope(
        "scale", echo, _matrix_payload(result), result.provenance, _diagnostics(result, trace)
    )


def run_limit(A: PositiveMatrix, tol=1e-12):
    """Classification-aware limit: closed form for A1..A6 images,
    root-solved for A7 images, iteration for everything else."""
    echo = {"matrix": A.to_lists(), "tol": tol}
    label = None
    if A.shape == (3, 3):
        try:
            label = classify(A)
        except InputError:
            label = None
        except NumericError:
            label = None

    if label is None:
        result = sinkhorn(A, SinkhornOptions(tol=tol))
        _require_converged(result, "limit")
        payload = _matrix_payload(result)
        payload["class"] = None
        return make_envelope(
            "limit", echo, payload, result.provenance, _diagnostics(result)
        )

    a7_payload = None
    if label.label == "A7":
        sol = a7_limit(label.K)
        S_can, X_can = sol.S, np.array([sol.x, sol.y, sol.z])
        provenance = sol.provenance
        a7_payload = {
            "x": sol.x,
            "y": sol.y,
            "z": sol.z,
            "residuals": list(sol.residuals),
            "positive_root_count": sol.positive_root_count,
        }
        if label.K == 2.0:
            a7_payload["groebner_residuals"] = list(
                groebner_residuals_k2(sol.x, sol.y, sol.z)
            )
    else:
        lim = canonical_limit(label.label, label.K)
        S_can, X_can = lim.S, lim.X.values
        provenance = "closed_form"

    S = conjugate(S_can, label.P)
    xs = X_can[list(label.P.mapping)] / math.sqrt(label.lam)
    residual = max(
        float(np.max(np.abs(row_sums(S) - 1.0))),
        float(np.max(np.abs(col_sums(S) - 1.0))),
    )
    payload = {
        "limit": S.to_lists(),
        "x": list(xs),
        "y": list(xs),
        "class": {
            "label": label.label,
            "K": label.K,
            "P": list(label.P.mapping),
            "Q": list(label.Q.mapping),
            "lambda": label.lam,
        },
    }
    if a7_payload is not None:
        payload["a7"] = a7_payload
    diagnostics = {
        "iterations": 0,
        "residual": residual,
        "converged": True,
        "warnings": [],
    }
    return make_envelope("limit", echo, payload, provenance, diagnostics)


def run_mbn(M, B, N, k, ell):
    params = MbnParams(M=M, B=B, N=N, k=k, ell=ell)
    lim = mbn_limit(params)
    echo = {"M": M, "B": B, "N": N, "k": k, "ell": ell}
    residual = max(
        abs(k * lim.a + ell * lim.b - 1.0), abs(k * lim.b + ell * lim.c - 1.0)
    )
    payload = {
        "n": params.n,
        "L": params.ratio,
        "a": lim.a,
        "b": lim.b,
        "c": lim.c,
        "x": lim.x,
        "y": lim.y,
    }
    diagnostics = {"iterations": 0, "residual": residual, "converged": True, "warnings": []}
    return make_envelope("mbn", echo, payload, "closed_form", diagnostics)


# Distinct entry values of each canonical limit shape, as (name, row, col)
# positions in S.
SWEEP_LETTERS = {
    "A1": (("a", 0, 0), ("b", 0, 1)),
    "A2": (("a", 0, 0), ("b", 0, 1), ("c", 1, 1)),
    "A3": (("a", 0, 0), ("b", 0, 1), ("c", 1, 1)),
    "A4": (("a", 0, 0), ("b", 0, 1), ("c", 1, 1)),
    "A5": (("a", 0, 0), ("b", 0, 1), ("c", 0, 2), ("d", 2, 2)),
    "A6": (("a", 0, 0), ("b", 0, 1), ("c", 0, 2)),
    "A7": (
        ("a", 0, 0),
        ("b", 0, 1),
        ("c", 0, 2),
        ("d", 1, 1),
        ("e", 1, 2),
        ("f", 2, 2),
    ),
}


def _sweep_row(label, K):
    if K == 1.0:
        # All-ones matrix: the limit is flat 1/3 and every letter collapses.
        return [1.0 / 3.0] * len(SWEEP_LETTERS[label]), "closed_form"
    if label == "A7":
        sol = a7_limit(K)
        S = sol.S.values
        return [float(S[i][j]) for _, i, j in SWEEP_LETTERS[label]], sol.provenance
    S = canonical_limit(label, K).S.values
    return [float(S[i][j]) for _, i, j in SWEEP_LETTERS[label]], "closed_form"


def run_sweep(label, k_min, k_max, points):
    """CSV text: canonical limit coordinates at geometrically spaced K."""
    if label not in CANONICAL_LABELS:
        raise InputError(f"unknown canonical label {label!r}")
    if not (k_min > 0 and k_max > 0):
        raise InputError("K range must be positive")
    if k_max < k_min:
        raise InputError("k_max must be >= k_min")
    if points < 1 or (points == 1 and k_max != k_min):
        raise InputError("points must be >= 2 for a nontrivial range")
    if points > 100_000:
        raise InputError("points capped at 100000")

    if points == 1:
        ks = [k_min]
    else:
        step = (math.log(k_max) - math.log(k_min)) / (points - 1)
        ks = [math.exp(math.log(k_min) + i * step) for i in range(points)]
        ks[0], ks[-1] = k_min, k_max

    header = "K," + ",".join(name for name, _, _ in SWEEP_LETTERS[label]) + ",provenance"
    lines = [header]
    for K in ks:
        values, provenance = _sweep_row(label, K)
        lines.append(
            ",".join([format_float(K)] + [format_float(v) for v in values] + [provenance])
        )
    return "\n".join(lines) + "\n"


def _termination_payload(report):
    return {
        "steps_run": report.steps_run,
        "terminated": report.terminated,
        "terminating_step": report.terminating_step,
        "final_deviation": report.final_deviation,
    }


def _rational_rows(R: RationalMatrix):
    return [[Fraction(v) for v in row] for row in R.entries]


def run_rational_probe(K: int, steps=50, bit_bound=DEFAULT_BIT_BOUND):
    """The A2 rationality probe: triangular test, exact limit when rational,
    and an exact finite-termination trace either way."""
    r = triangular_parameter(K)
    echo = {"probe": "A2", "K": K, "steps": steps, "bit_bound": bit_bound}
    A = RationalMatrix.from_canonical("A2", K)
    trace, report = exact_scaling_trace(A, steps, bit_bound=bit_bound)
    payload = {"K": K, "triangular": r is not None, "r": r}
    if r is None:
        payload["note"] = (
            f"limit irrational: 8K+1={8 * K + 1} not a perfect square; "
            "finite termination impossible"
        )
        payload["limit"] = None
    else:
        payload["note"] = f"limit rational: K = r(r+1)/2 with r={r}"
        lim = a2_rational_limit(r)
        payload["limit"] = {
            "a": lim.a,
            "b": lim.b,
            "c": lim.c,
            "x_sq": lim.x_sq,
            "y_sq": lim.y_sq,
        }
    payload["termination"] = _termination_payload(report)
    payload["final_iterate"] = _rational_rows(trace[-1])
    diagnostics = {
        "iterations": report.steps_run,
        "residual": float(report.final_deviation),
        "converged": report.terminated,
        "warnings": [],
    }
    return make_envelope("rational", echo, payload, "exact", diagnostics)


def run_rational_cube_root(steps: int, bit_bound=DEFAULT_BIT_BOUND):
    echo = {"cube_root": True, "steps": steps, "bit_bound": bit_bound}
    convergents = cube_root_convergents(steps, bit_bound=bit_bound)
    deviations = [abs(float(c) - _CBRT2_MINUS_1) for c in convergents]
    payload = {
        "target": _CBRT2_MINUS_1,
        "steps_returned": len(convergents),
        "convergents": convergents,
        "deviations": deviations,
    }
    diagnostics = {
        "iterations": len(convergents),
        "residual": deviations[-1] if deviations else float("nan"),
        "converged": bool(deviations and deviations[-1] < 1e-8),
        "warnings": []
        if len(convergents) == steps
        else [f"trace truncated by the {bit_bound}-bit denominator bound"],
    }
    return make_envelope("rational", echo, payload, "exact", diagnostics)


def run_rational_trace(A: RationalMatrix, steps: int, bit_bound=DEFAULT_BIT_BOUND):
    echo = {"matrix": _rational_rows(A), "steps": steps, "bit_bound": bit_bound}
    trace, report = exact_scaling_trace(A, steps, bit_bound=bit_bound)
    payload = {
        "termination": _termination_payload(report),
        "deviations": [float(it.deviation()) for it in trace[1:]],
        "final_iterate": _rational_rows(trace[-1]),
    }
    diagnostics = {
        "iterations": report.steps_run,
        "residual": float(report.final_deviation),
        "converged": report.terminated,
        "warnings": [],
    }
    return make_envelope("rational", echo, payload, "exact", diagnostics)


def run_target(A: PositiveMatrix, r, c, tol=1e-13, max_iters=100_000):
    opts = SinkhornOptions(tol=tol, max_iters=max_iters)
    result = target_sinkhorn(A, r, c, opts)
    _require_converged(result, "target")
    echo = {
        "matrix": A.to_lists(),
        "row_sums": [float(v) for v in np.asarray(r).reshape(-1)],
        "col_sums": [float(v) for v in np.asarray(c).reshape(-1)],
        "tol": tol,
        "max_iters": max_iters,
    }
    return make_envelope(
        "target", echo, _matrix_payload(result), result.provenance, _diagnostics(result)
    )
