"""Pydantic request/response models for the HTTP service.

Exact rational parameters (gamma, tolerances, exponents) travel as
strings like "1/3" so nothing is lost to binary floats on the wire.
"""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field

DEFAULT_TOL = "1/1073741824"  # 2**-30


class Interval(BaseModel):
    lo: float
    hi: float


class ExpandRequest(BaseModel):
    alpha: str
    count: int = Field(ge=1)


class ConvergentRow(BaseModel):
    k: int
    a: int
    p: int
    q: int
    error: float  # signed approximation error q_k*alpha - p_k


class ExpandResponse(BaseModel):
    alpha: str
    rows: list[ConvergentRow]


class GapsRequest(BaseModel):
    alpha: str
    N: int = Field(ge=1)


class GapLength(BaseModel):
    u: str
    v: str
    approx: float


class GapsResponse(BaseModel):
    N: int
    k: int
    r: int
    s: int
    delta: dict[str, GapLength]
    counts: dict[str, int]


class PermRequest(BaseModel):
    alpha: str
    N: int = Field(ge=1)


class PermResponse(BaseModel):
    alpha: str
    N: int
    order: list[int]


class SumRequest(BaseModel):
    alpha: str
    gamma: str = "rat:0"
    N: int = Field(ge=1)
    a: Optional[str] = None
    b: Optional[str] = None
    dist: bool = False
    exclude_residue: bool = False
    tol: str = DEFAULT_TOL


class SumResponse(BaseModel):
    alpha: str
    gamma: str
    N: int
    a: Optional[str] = None
    b: Optional[str] = None
    kind: str
    excluded: list[int]
    exact_hit: bool
    value: Interval
    term_count: int


class VerifyRequest(BaseModel):
    alpha: str
    gamma: str = "rat:0"
    N: int = Field(ge=1)
    b: Optional[str] = None
    dist: bool = False
    exclude_residue: bool = False
    tol: str = DEFAULT_TOL


class VerifyResponse(BaseModel):
    kind: str
    K: int
    bound: Interval
    sum: Interval
    verdict: str
    tightness: float


class SweepRequest(BaseModel):
    alphas: list[str]
    gammas: list[str] = ["rat:0"]
    Ns: list[int] = []
    kinds: list[str] = ["e1"]
    bs: list[str] = []
    tol: str = DEFAULT_TOL
    jobs: int = Field(default=1, ge=1, le=64)


class OraclePointsRequest(BaseModel):
    alpha: str
    N: int = Field(ge=1)
    precision_bits: int = Field(default=256, ge=128)


class OraclePoint(BaseModel):
    n: int
    value: Interval


class OraclePointsResponse(BaseModel):
    alpha: str
    N: int
    points: list[OraclePoint]


class OracleGap(BaseModel):
    length: Interval
    count: int


class OracleGapsResponse(BaseModel):
    alpha: str
    N: int
    gaps: list[OracleGap]


class OracleSumRequest(BaseModel):
    alpha: str
    gamma: str = "rat:0"
    N: int = Field(ge=1)
    a: str = "0"
    b: str = "1"
    dist: bool = False
    exclude_residue: bool = False
    precision_bits: int = Field(default=256, ge=128)


class OracleSumResponse(BaseModel):
    alpha: str
    gamma: str
    N: int
    value: Interval


class ErrorResponse(BaseModel):
    error: str
    detail: str
