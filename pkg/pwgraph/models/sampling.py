from typing import List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from .graph import VertexSet

FrameNormalization = Literal["plain_delta", "degree_normalized"]


class SamplingFrame(BaseModel):
    """Sample evaluations at ``sample_set`` viewed as a frame for PW_omega.

    ``analysis`` is the m x k matrix whose row i holds the PW_omega eigencoordinates
    of the analysis vector of the i-th sample vertex; ``basis`` is the n x k matrix
    of the PW_omega eigenvectors used to lift coordinates back to vertex space.
    ``dual`` (when filled) is m x n with row i the dual vector of the i-th sample
    vertex, scaled so that f = sum_i f(u_i) dual[i] for f in PW_omega.
    """

    omega: float
    sample_set: VertexSet
    host: str
    normalization: FrameNormalization = "plain_delta"
    band: Tuple[int, ...]
    band_eigenvalues: np.ndarray
    analysis: np.ndarray
    basis: np.ndarray
    weights: np.ndarray
    A: float
    B: float
    rank: int
    is_frame: bool
    dual: Optional[np.ndarray] = None
    reproduction_error: Optional[float] = None

    model_config = {"frozen": True, "arbitrary_types_allowed": True}

    @property
    def dim(self) -> int:
        return len(self.band)

    @property
    def C_omega(self) -> Optional[float]:
        return 1.0 / np.sqrt(self.A) if self.is_frame else None

    @property
    def tightness(self) -> float:
        return self.A / self.B if self.B > 0 else 0.0

    @property
    def frame_operator(self) -> np.ndarray:
        return self.analysis.T @ self.analysis


class ReconstructionReport(BaseModel):
    method: Literal["neumann", "direct", "derivative"]
    iterations: int = 0
    residual_history: List[float] = []
    error_bounds: List[float] = []
    contraction: Optional[float] = None
    final_error: Optional[float] = None
    converged: bool = False
    condition_number: Optional[float] = None


class UniquenessReport(BaseModel):
    omega: float
    unique: bool
    omega_star: float
    sample_set: VertexSet
    removed: VertexSet


class PartDetail(BaseModel):
    part: VertexSet
    gamma_lambda1: float
    passes: bool


class PartitionReport(BaseModel):
    omega: float
    unique: bool
    sample_set: VertexSet
    details: List[PartDetail] = []


class RestrictionReport(BaseModel):
    rank: int
    set_size: int
    dim: int
    surjective_onto_L2S: bool


class LinePartition(BaseModel):
    n: int
    omega: float
    cyclic: bool
    block_size: int
    gap: int = Field(2, ge=2)
    blocks: List[VertexSet]
    sample_set: VertexSet
    omega_star: float


class SampleConsistency(BaseModel):
    distance: float
    relative: float
    consistent: bool
