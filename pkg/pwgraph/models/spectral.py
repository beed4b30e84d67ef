from typing import Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator


class Signal(BaseModel):
    """Real-valued function on the vertices of a host graph."""

    values: np.ndarray
    host: str

    model_config = {"frozen": True, "arbitrary_types_allowed": True}

    @field_validator("values", mode="before")
    @classmethod
    def _as_float_vector(cls, value):
        array = np.array(value, dtype=float).reshape(-1)
        array.setflags(write=False)
        return array

    def __len__(self) -> int:
        return self.values.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def with_values(self, values: np.ndarray) -> "Signal":
        return Signal(values=values, host=self.host)


class PWSpace(BaseModel):
    omega: float = Field(..., ge=0)
    indices: Tuple[int, ...]

    model_config = {"frozen": True}

    @property
    def dim(self) -> int:
        return len(self.indices)


class SpectralDecomposition(BaseModel):
    """Ascending eigenvalues and orthonormal eigenvectors of the normalized Laplacian.

    Column j of ``eigenvectors`` is paired with ``eigenvalues[j]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residual: float
    host: str
    eps_eig: float = 1e-9

    model_config = {"frozen": True, "arbitrary_types_allowed": True}

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1])

    def band_indices(self, omega: float) -> np.ndarray:
        return np.flatnonzero(self.eigenvalues <= omega + self.eps_eig)

    def pw_space(self, omega: float) -> PWSpace:
        return PWSpace(omega=omega, indices=tuple(int(j) for j in self.band_indices(omega)))

    def pw_basis(self, omega: float) -> np.ndarray:
        """n x dim(PW_omega) matrix whose columns span PW_omega."""
        return self.eigenvectors[:, self.band_indices(omega)]

    def coefficients(self, values: np.ndarray) -> np.ndarray:
        return self.eigenvectors.T @ values

    def synthesize(self, coefficients: np.ndarray) -> np.ndarray:
        return self.eigenvectors @ coefficients
