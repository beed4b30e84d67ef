import math
from typing import List, Literal, Optional

from pydantic import BaseModel, Field

from .graph import VertexSet

BoundMethod = Literal[
    "gamma_eigen",
    "cheeger",
    "diamvol",
    "closure_diamvol",
    "single_vertex",
    "successive_1d",
    "tree_level",
    "sparse_lemma",
    "witness_lemma",
    "union",
]


class BoundEntry(BaseModel):
    method: BoundMethod
    value: float
    valid: bool = True
    note: Optional[str] = None


class LambdaCertificate(BaseModel):
    """A vertex set with its exact Poincare constant and the upper bounds certified for it."""

    vertices: VertexSet
    lambda_exact: float = Field(..., gt=0)
    bounds: List[BoundEntry] = []

    @property
    def omega_star(self) -> float:
        return 1.0 / self.lambda_exact

    def valid_bounds(self) -> List[BoundEntry]:
        return [b for b in self.bounds if b.valid and math.isfinite(b.value)]

    def best_bound(self) -> Optional[BoundEntry]:
        candidates = self.valid_bounds()
        return min(candidates, key=lambda b: b.value) if candidates else None

    def bound(self, method: str) -> Optional[BoundEntry]:
        for entry in self.bounds:
            if entry.method == method:
                return entry
        return None


class GammaBound(BaseModel):
    value: float
    lambda1: float
    gamma_vertices: int
    norm_identity_holds: bool
    laplacian_inequality_holds: bool


class PowerInequalityReport(BaseModel):
    lam: float
    t: float
    k: int
    samples: int
    worst_ratio: float
    holds: bool


class EigenCountReport(BaseModel):
    omega: float
    count_below: int
    count_at_or_above: int
    certificate: Optional[LambdaCertificate] = None
    max_below_from_certificate: Optional[int] = None
    certificate_consistent: Optional[bool] = None


class LowerBoundReport(BaseModel):
    k: int
    bound: float
    best_set: VertexSet
    lambda_k: float
    holds: bool
    subsets_examined: int


class NyquistReport(BaseModel):
    omega: float
    strict: int
    boundary: int
    threshold: float
    asymptote: float
