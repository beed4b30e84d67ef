import logging
from typing import Optional

import numpy as np
from scipy.linalg import LinAlgError, eigh, svdvals

from pwgraph.config import RunConfig, config
from pwgraph.models.closed_forms import BernsteinReport
from pwgraph.models.graph import Graph
from pwgraph.models.spectral import Signal, SpectralDecomposition

from .error_handler import (
    ConvergenceFailure,
    Disconnected,
    EmptyGraph,
    HostMismatch,
    InvalidParameter,
    SingularPower,
    ZeroSignal,
)

logger = logging.getLogger(__name__)


def _inverse_sqrt_degrees(graph: Graph) -> np.ndarray:
    deg = graph.deg.astype(float)
    return np.divide(1.0, np.sqrt(deg), out=np.zeros_like(deg), where=deg > 0)


def _fix_signs(vectors: np.ndarray, tol: float) -> np.ndarray:
    """Flip columns so that the first coordinate above ``tol`` in magnitude is positive."""
    fixed = vectors.copy()
    for j in range(fixed.shape[1]):
        column = fixed[:, j]
        nonzero = np.flatnonzero(np.abs(column) > tol)
        if nonzero.size and column[nonzero[0]] < 0:
            fixed[:, j] = -column
    return fixed


class SpectralService:
    def __init__(self, cfg: Optional[RunConfig] = None):
        self.cfg = cfg or config

    def signal(self, graph: Graph, values) -> Signal:
        signal = Signal(values=values, host=graph.fingerprint)
        if len(signal) != graph.n:
            raise InvalidParameter(f"signal has {len(signal)} values for a graph on {graph.n} vertices")
        return signal

    def laplacian_matrix(self, graph: Graph) -> np.ndarray:
        """Dense normalized Laplacian: 1 on the diagonal, -1/sqrt(d(u)d(v)) on edges."""
        inv_sqrt = _inverse_sqrt_degrees(graph)
        matrix = -(inv_sqrt[:, None] * graph.adjacency_matrix.toarray() * inv_sqrt[None, :])
        matrix[np.diag_indices(graph.n)] = (graph.deg > 0).astype(float)
        return matrix

    def laplacian_apply(self, graph: Graph, f: Signal) -> Signal:
        if f.host != graph.fingerprint:
            raise HostMismatch(f"signal host {f.host} does not match graph {graph.fingerprint}")
        inv_sqrt = _inverse_sqrt_degrees(graph)
        scaled = f.values * inv_sqrt
        # (Lf)(v) = d(v)^{-1/2} * sum_{u~v} (f(v)/sqrt(d(v)) - f(u)/sqrt(d(u)))
        neighbor_sum = graph.adjacency_matrix @ scaled
        values = inv_sqrt * (graph.deg * scaled - neighbor_sum)
        return f.with_values(values)

    def eigendecompose(self, graph: Graph, require_connected: bool = True) -> SpectralDecomposition:
        if graph.n == 0:
            raise EmptyGraph("graph has no vertices")
        if require_connected and not graph.is_connected:
            raise Disconnected(f"graph has {graph.component_count} connected components")

        tol = self.cfg.tolerances
        matrix = self.laplacian_matrix(graph)
        try:
            eigenvalues, eigenvectors = eigh(matrix)
        except LinAlgError as e:
            raise ConvergenceFailure(f"dense eigensolver failed on n={graph.n}: {e}") from e

        eigenvectors = _fix_signs(eigenvectors, tol.rank_tol)
        residual = float(np.abs(matrix @ eigenvectors - eigenvectors * eigenvalues).max(initial=0.0))
        if residual > tol.eig_residual * max(graph.n, 1):
            raise ConvergenceFailure(f"eigen residual {residual:.3e} exceeds {tol.eig_residual:.1e}*n", residual=residual)

        eigenvalues.setflags(write=False)
        eigenvectors.setflags(write=False)
        logger.info(
            f"Eigendecomposed n={graph.n}: lambda_1={eigenvalues[min(1, graph.n - 1)]:.6g}, "
            f"lambda_max={eigenvalues[-1]:.6g}, residual={residual:.2e}"
        )
        return SpectralDecomposition(
            eigenvalues=eigenvalues,
            eigenvectors=eigenvectors,
            residual=residual,
            host=graph.fingerprint,
            eps_eig=tol.eps_eig,
        )

    def _check_host(self, dec: SpectralDecomposition, f: Signal) -> None:
        if f.host != dec.host:
            raise HostMismatch(f"signal host {f.host} does not match decomposition {dec.host}")

    def pw_project(self, dec: SpectralDecomposition, omega: float, f: Signal) -> Signal:
        if omega < 0:
            raise InvalidParameter(f"bandwidth must be nonnegative, got {omega}")
        self._check_host(dec, f)
        basis = dec.pw_basis(omega)
        return f.with_values(basis @ (basis.T @ f.values))

    def apply_power(self, dec: SpectralDecomposition, s: float, f: Signal, shift: float = 0.0) -> Signal:
        """sum_j (shift + lambda_j)^s <f, q_j> q_j."""
        if shift < 0:
            raise InvalidParameter(f"shift must be nonnegative, got {shift}")
        self._check_host(dec, f)
        coefficients = dec.coefficients(f.values)
        base = np.clip(shift + dec.eigenvalues, 0.0, None)

        if s < 0:
            singular = base <= self.cfg.tolerances.eps_eig
            support = np.abs(coefficients) > self.cfg.tolerances.rank_tol * max(f.norm(), 1.0)
            if np.any(singular & support):
                raise SingularPower(f"power s={s} with shift={shift} touches the kernel of L")
            multipliers = np.zeros_like(base)
            multipliers[~singular] = base[~singular] ** s
        else:
            multipliers = base ** s

        return f.with_values(dec.synthesize(multipliers * coefficients))

    def bernstein_check(self, dec: SpectralDecomposition, omega: float, f: Signal, s: float) -> BernsteinReport:
        norm = f.norm()
        if norm == 0.0:
            raise ZeroSignal("Bernstein check needs a nonzero signal")
        lhs = self.apply_power(dec, s, f).norm()
        rhs = omega ** s * norm
        holds = lhs <= rhs + self.cfg.tolerances.guard
        if not holds:
            logger.warning(f"Bernstein inequality fails at s={s}, omega={omega}: {lhs:.6g} > {rhs:.6g}")
        return BernsteinReport(s=s, omega=omega, lhs=lhs, rhs=rhs, holds=holds)

    def pw_operator_norm(self, dec: SpectralDecomposition, omega: float) -> float:
        """Spectral norm of L restricted to PW_omega."""
        indices = dec.band_indices(omega)
        if indices.size == 0:
            return 0.0
        image = dec.eigenvectors[:, indices] * dec.eigenvalues[indices]
        return float(svdvals(image).max())

    def random_pw_signal(self, dec: SpectralDecomposition, omega: float, rng: np.random.Generator) -> Signal:
        basis = dec.pw_basis(omega)
        return Signal(values=basis @ rng.standard_normal(basis.shape[1]), host=dec.host)


spectral_service = SpectralService()
