"""Deterministic JSON envelopes for the CLI and service.

Every command answers with the same shape -- command, inputs_echo, result,
provenance, diagnostics -- serialized with a fixed key order (insertion
order of the dicts built here), floats at 17 significant digits, and exact
rationals as "p/q" strings.  Identical inputs must produce byte-identical
output, which is why this module hand-rolls the number formatting instead
of trusting whatever repr a json library picks.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction

import numpy as np

__all__ = ["to_json", "format_float", "format_fraction", "make_envelope", "error_envelope"]


def format_float(x: float) -> str:
    if not np.isfinite(x):
        raise ValueError(f"non-finite float in output: {x!r}")
    return format(float(x), ".17g")


def _int_str(n: int) -> str:
    # CPython (3.10.7+) refuses int -> str conversions past
    # sys.get_int_max_str_digits() as a guard against hostile *inputs*.
    # Exact-rational iterates are bounded by the trace bit guard instead
    # and routinely blow well past the default 4300 digits, so lift the
    # cap for the duration of the conversion.
    try:
        return str(n)
    except ValueError:
        limit = sys.get_int_max_str_digits()
        sys.set_int_max_str_digits(0)
        try:
            return str(n)
        finally:
            sys.set_int_max_str_digits(limit)


def format_fraction(q: Fraction) -> str:
    if q.denominator == 1:
        return _int_str(q.numerator)
    return f"{_int_str(q.numerator)}/{_int_str(q.denominator)}"


def _write(obj, out, indent, level):
    pad = "" if indent is None else "\n" + " " * (indent * (level + 1))
    endpad = "" if indent is None else "\n" + " " * (indent * level)
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool) or isinstance(obj, np.bool_):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(obj))
    elif isinstance(obj, Fraction):
        out.append(json.dumps(format_fraction(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if not isinstance(k, str):
                raise ValueError(f"non-string key in output: {k!r}")
            if i:
                out.append("," if indent is None else ",")
            out.append(pad + json.dumps(k) + (":" if indent is None else ": "))
            _write(v, out, indent, level + 1)
        out.append(endpad + "}")
    elif isinstance(obj, (list, tuple)) or isinstance(obj, np.ndarray):
        items = obj.tolist() if isinstance(obj, np.ndarray) else obj
        if isinstance(items, (float, int)):  # 0-d array
            _write(items, out, indent, level)
            return
        if not items:
            out.append("[]")
            return
        out.append("[")
        for i, v in enumerate(items):
            if i:
                out.append(",")
            out.append(pad)
            _write(v, out, indent, level + 1)
        out.append(endpad + "]")
    else:
        raise ValueError(f"cannot serialize {type(obj).__name__} deterministically")


def to_json(obj, pretty: bool = False) -> str:
    """Serialize to a deterministic JSON string (trailing newline included)."""
    out = []
    _write(obj, out, 2 if pretty else None, 0)
    return "".join(out) + "\n"


def make_envelope(command, inputs_echo, result, provenance, diagnostics) -> dict:
    return {
        "command": command,
        "inputs_echo": inputs_echo,
        "result": result,
        "provenance": provenance,
        "diagnostics": diagnostics,
    }


def error_envelope(command, inputs_echo, error_type, message, details=None) -> dict:
    env = {
        "command": command,
        "inputs_echo": inputs_echo,
        "error": {"type": error_type, "message": message},
    }
    if details is not None:
        env["error"]["details"] = details
    return env
