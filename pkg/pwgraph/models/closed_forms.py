from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, Field


class SymbolSpec(BaseModel):
    """Spectral symbol of a model graph family and the interval it sweeps."""

    family: Literal["line", "lattice", "tree"]
    dimension: int = Field(1, ge=1)
    q: Optional[int] = None
    spectrum_interval: Tuple[float, float]


class BernsteinReport(BaseModel):
    s: float
    omega: float
    lhs: float
    rhs: float
    holds: bool


class RectThresholdReport(BaseModel):
    dims: Tuple[int, ...]
    host_dims: Tuple[int, ...]
    paper_value: float
    oracle_value: float
    exact_value: float
    disagreement: bool


class TreeSpectrumReport(BaseModel):
    q: int
    depth: int
    interval: Tuple[float, float]
    eigenvalue_count: int
    inside_fraction: float
    outliers: List[float] = []
