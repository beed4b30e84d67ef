import logging
import math
from itertools import combinations
from typing import Any, Dict, Optional, Sequence

import numpy as np
from scipy.linalg import eigvalsh

from pwgraph.config import RunConfig, config
from pwgraph.models.certificates import EigenCountReport, LambdaCertificate, LowerBoundReport
from pwgraph.models.graph import Graph, VertexSet
from pwgraph.models.spectral import SpectralDecomposition

from .error_handler import (
    EmptyBoundary,
    InvalidParameter,
    NoFeasibleSubset,
    OutOfRange,
    SingularRestriction,
    TooLarge,
)
from .graph_service import GraphService
from .poincare_service import PoincareService
from .spectral_service import SpectralService

logger = logging.getLogger(__name__)


class EigenBoundsService:
    def __init__(self, cfg: Optional[RunConfig] = None):
        self.cfg = cfg or config
        self.graphs = GraphService(self.cfg)
        self.spectral = SpectralService(self.cfg)
        self.poincare = PoincareService(self.cfg)

    def dirichlet_lambda(self, graph: Graph, vertices: VertexSet, rng: Optional[np.random.Generator] = None) -> float:
        """Smallest eigenvalue of the Laplacian block on signals supported on ``vertices``."""
        if vertices.is_empty:
            raise InvalidParameter("dirichlet_lambda needs a nonempty vertex set")
        if self.graphs.boundary(graph, vertices).is_empty:
            raise EmptyBoundary(f"set of size {len(vertices)} has empty vertex boundary")

        laplacian = self.spectral.laplacian_matrix(graph)
        members = list(vertices.members)
        value = float(eigvalsh(laplacian[np.ix_(members, members)])[0])

        rng = rng or np.random.default_rng(self.cfg.sampling.seed)
        for _ in range(self.cfg.sampling.check_samples):
            phi = np.zeros(graph.n)
            phi[members] = rng.standard_normal(len(members))
            if np.linalg.norm(phi) > np.linalg.norm(laplacian @ phi) / value * (1.0 + self.cfg.tolerances.guard):
                logger.warning(f"Dirichlet inequality failed on a set of size {len(vertices)}")
                break

        logger.info(f"Dirichlet eigenvalue of a set of size {len(vertices)}: {value:.6g}")
        return value

    def count_eigs(
        self,
        dec: SpectralDecomposition,
        omega: float,
        cert: Optional[LambdaCertificate] = None,
    ) -> EigenCountReport:
        """Eigenvalues in [0, omega) and [omega, lambda_max], with the bound a Lambda-set certificate implies."""
        below = int(np.sum(dec.eigenvalues < omega - dec.eps_eig))
        report = EigenCountReport(omega=omega, count_below=below, count_at_or_above=dec.n - below)
        if cert is None:
            return report

        omega_star = cert.omega_star
        below_star = int(np.sum(dec.eigenvalues < omega_star - dec.eps_eig))
        allowed = dec.n - len(cert.vertices)
        consistent = below_star <= allowed
        if not consistent:
            logger.warning(f"{below_star} eigenvalues below 1/Lambda={omega_star:.6g} exceed the certified {allowed}")
        return report.model_copy(
            update={
                "certificate": cert,
                "max_below_from_certificate": allowed,
                "certificate_consistent": consistent,
            }
        )

    def lambda_k_lower_bound(
        self,
        graph: Graph,
        dec: SpectralDecomposition,
        k: int,
        subsets: Optional[Sequence[VertexSet]] = None,
    ) -> LowerBoundReport:
        """lambda_k >= max over (n-k)-subsets S with nonempty boundary of 1/Lambda(S)."""
        n = graph.n
        if not 1 <= k <= n - 1:
            raise OutOfRange(f"k must lie in 1..{n - 1}, got {k}")
        size = n - k

        if subsets is None:
            limit = self.cfg.limits.exhaustive_max_n
            if n > limit:
                raise TooLarge(f"exhaustive subset search is limited to n <= {limit}; supply candidate subsets")
            candidates = (VertexSet(members=c) for c in combinations(range(n), size))
        else:
            wrong = [s for s in subsets if len(s) != size]
            if wrong:
                raise InvalidParameter(f"candidate subsets must have {size} vertices")
            candidates = iter(subsets)

        laplacian = self.spectral.laplacian_matrix(graph)
        best_value, best_set, examined = -math.inf, None, 0
        for candidate in candidates:
            if self.graphs.boundary(graph, candidate).is_empty:
                continue
            try:
                value = 1.0 / self.poincare.lambda_from_matrix(laplacian, candidate)
            except SingularRestriction:
                continue
            examined += 1
            if value > best_value:
                best_value, best_set = value, candidate

        if best_set is None:
            raise NoFeasibleSubset(f"no {size}-subset with nonempty boundary")

        lambda_k = float(dec.eigenvalues[k])
        holds = lambda_k >= best_value - self.cfg.tolerances.guard
        if not holds:
            logger.warning(f"lambda_{k}={lambda_k:.6g} is below the certified lower bound {best_value:.6g}")
        return LowerBoundReport(
            k=k, bound=best_value, best_set=best_set, lambda_k=lambda_k, holds=holds, subsets_examined=examined
        )

    def planar_bound(self, n: int, d_max: int) -> float:
        """12 d_max / (sqrt(n/2) - 6); planarity of the graph is taken on trust."""
        if n <= 72:
            raise OutOfRange(f"planar bound needs n > 72, got {n}")
        if d_max < 1:
            raise InvalidParameter(f"maximum degree must be positive, got {d_max}")
        return 12.0 * d_max / (math.sqrt(n / 2.0) - 6.0)

    def isoperimetric_statement(self, graph: Graph, vertices: VertexSet) -> Dict[str, Any]:
        volume = self.graphs.volume(graph, vertices)
        return {
            "vol_S": volume,
            "dirichlet": "lambda_D(S) > C_delta * (1/vol S)^(2/delta)",
            "removable_if": "omega < C_delta * (1/vol S)^(2/delta)",
            "C_delta": None,
        }


eigbounds_service = EigenBoundsService()
