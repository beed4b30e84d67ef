import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from pwgraph.config import RunConfig, config
from pwgraph.models.closed_forms import RectThresholdReport, SymbolSpec, TreeSpectrumReport
from pwgraph.models.factories import GraphFactory

from .error_handler import InvalidParameter
from .graph_service import GraphService
from .poincare_service import PoincareService
from .spectral_service import SpectralService

logger = logging.getLogger(__name__)

# Rectangular blocks sit this far from the wrap-around of their host torus.
RECT_MARGIN = 3


def eta(q: int) -> float:
    return 2.0 * math.sqrt(q) / (q + 1)


def line_symbol(xi: np.ndarray) -> np.ndarray:
    return 2.0 * np.sin(np.asarray(xi) / 2.0) ** 2


def lattice_symbol(*xis: np.ndarray) -> np.ndarray:
    """Normalized-Laplacian symbol of Z^n: (2/n) * sum_i sin^2(xi_i / 2)."""
    return (2.0 / len(xis)) * sum(np.sin(np.asarray(xi) / 2.0) ** 2 for xi in xis)


def tree_symbol(q: int, xi: np.ndarray) -> np.ndarray:
    return 1.0 - eta(q) * np.cos(np.asarray(xi) * math.log(q))


class ClosedFormService:
    """Analytic spectra and thresholds of lines, lattices, cycles and homogeneous trees."""

    def __init__(self, cfg: Optional[RunConfig] = None):
        self.cfg = cfg or config
        self.graphs = GraphService(self.cfg)
        self.spectral = SpectralService(self.cfg)
        self.poincare = PoincareService(self.cfg)

    def symbol_spec(self, family: str, dimension: int = 1, q: Optional[int] = None) -> SymbolSpec:
        if family in ("line", "lattice"):
            return SymbolSpec(family=family, dimension=dimension, spectrum_interval=(0.0, 2.0))
        if family == "tree":
            if q is None or q < 2:
                raise InvalidParameter(f"tree symbol needs q >= 2, got {q}")
            return SymbolSpec(family="tree", q=q, spectrum_interval=self.tree_spectrum_endpoints(q))
        raise InvalidParameter(f"unknown symbol family '{family}'")

    def cycle_eigenpairs(self, m: int) -> List[Tuple[float, np.ndarray]]:
        """lambda_k = 1 - cos(2 pi k / m) with real cosine/sine eigenvectors, k = 0..m-1."""
        if m < 3:
            raise InvalidParameter(f"cycle length must be >= 3, got {m}")
        v = np.arange(m)
        pairs = []
        for k in range(m):
            eigenvalue = 1.0 - math.cos(2.0 * math.pi * k / m)
            angle = 2.0 * math.pi * k * v / m
            if k == 0 or 2 * k == m:
                vector = np.cos(angle) / math.sqrt(m)
            elif 2 * k < m:
                vector = np.cos(angle) * math.sqrt(2.0 / m)
            else:
                vector = np.sin(angle) * math.sqrt(2.0 / m)
            pairs.append((eigenvalue, vector))
        return pairs

    def torus_spectrum(self, dims: Sequence[int]) -> np.ndarray:
        """Sorted eigenvalues of torus(dims) sampled from the lattice symbol."""
        grids = np.meshgrid(*(2.0 * np.pi * np.arange(d) / d for d in dims), indexing="ij")
        return np.sort(lattice_symbol(*grids).ravel())

    def tree_spectrum_endpoints(self, q: int) -> Tuple[float, float]:
        if q < 2:
            raise InvalidParameter(f"tree order parameter q must be >= 2, got {q}")
        return 1.0 - eta(q), 1.0 + eta(q)

    def rect_threshold(self, dims: Sequence[int]) -> RectThresholdReport:
        """Product-formula constant for a rectangular block next to the doubled-graph and exact thresholds."""
        dims = tuple(int(d) for d in dims)
        if not dims or any(d < 1 for d in dims):
            raise InvalidParameter(f"block dimensions must be positive, got {dims}")

        host_dims = tuple(d + 2 * RECT_MARGIN for d in dims)
        host = GraphFactory.torus(host_dims)
        block = GraphFactory.block_on_torus(host_dims, (2,) * len(dims), dims)

        paper_value = 4.0 * min(math.sin(math.pi / (2 * d + 2)) for d in dims)
        oracle_value = self.poincare.gamma_bound(host, block).lambda1
        exact_value = 1.0 / self.poincare.lambda_exact(host, None, block)
        disagreement = abs(paper_value - oracle_value) > self.cfg.tolerances.guard * max(oracle_value, 1.0)
        if disagreement:
            logger.warning(
                f"Block {dims}: product-formula threshold {paper_value:.6g} "
                f"differs from doubled-graph threshold {oracle_value:.6g}"
            )
        return RectThresholdReport(
            dims=dims,
            host_dims=host_dims,
            paper_value=paper_value,
            oracle_value=oracle_value,
            exact_value=exact_value,
            disagreement=disagreement,
        )

    def tree_spectrum_report(self, q: int, depth: int) -> TreeSpectrumReport:
        """How much of the spectrum of tree(q, depth) falls inside the homogeneous-tree interval."""
        low, high = self.tree_spectrum_endpoints(q)
        graph = self.graphs.generate("tree", [q, depth])
        eigenvalues = self.spectral.eigendecompose(graph).eigenvalues
        slack = self.cfg.tolerances.eps_eig
        inside = (eigenvalues >= low - slack) & (eigenvalues <= high + slack)
        outliers = sorted({round(float(x), 12) for x in eigenvalues[~inside]})
        report = TreeSpectrumReport(
            q=q,
            depth=depth,
            interval=(low, high),
            eigenvalue_count=int(eigenvalues.size),
            inside_fraction=float(inside.mean()),
            outliers=outliers,
        )
        logger.info(f"tree({q},{depth}): {report.inside_fraction:.3f} of {graph.n} eigenvalues inside [{low:.4f}, {high:.4f}]")
        return report


closed_form_service = ClosedFormService()
