"""Request models for the HTTP service.

Pydantic validates shapes and ranges; domain validation (positivity,
squareness, balance) stays in the core types so the CLI and service cannot
drift apart.
"""

from __future__ import annotations

from typing import List, Literal, Optional, Union

from pydantic import BaseModel, Field

from ..rational import DEFAULT_BIT_BOUND

Rows = List[List[float]]


class ScaleRequest(BaseModel):
    matrix: Rows
    tol: float = 1e-13
    max_iters: int = Field(default=100_000, ge=1)
    order: Literal["row_first", "col_first"] = "row_first"
    trace: bool = False


class LimitRequest(BaseModel):
    matrix: Rows
    tol: float = 1e-12


class MbnRequest(BaseModel):
    M: float
    B: float
    N: float
    k: int = Field(ge=1)
    ell: int = Field(ge=1)


class SweepRequest(BaseModel):
    label: str
    k_min: float
    k_max: float
    points: int = Field(ge=1)


class RationalRequest(BaseModel):
    mode: Literal["probe", "cube_root", "trace"]
    K: Optional[int] = None
    steps: int = Field(default=50, ge=1)
    bit_bound: int = Field(default=DEFAULT_BIT_BOUND, ge=1)
    matrix: Optional[List[List[Union[int, str]]]] = None


class TargetRequest(BaseModel):
    matrix: Rows
    row_sums: List[float]
    col_sums: List[float]
    tol: float = 1e-13
    max_iters: int = Field(default=100_000, ge=1)
