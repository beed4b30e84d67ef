import logging
import math
from itertools import combinations
from typing import Iterable, List, Literal, Optional, Sequence

import numpy as np
from scipy.linalg import svdvals

from pwgraph.config import RunConfig, config
from pwgraph.models.certificates import (
    BoundEntry,
    GammaBound,
    LambdaCertificate,
    NyquistReport,
    PowerInequalityReport,
)
from pwgraph.models.factories import GraphFactory
from pwgraph.models.graph import Graph, VertexSet
from pwgraph.models.spectral import Signal, SpectralDecomposition
from pwgraph.models.validators import ModelValidator

from .error_handler import (
    Disconnected,
    InvalidParameter,
    OutOfRange,
    OverlappingClosures,
    SingularRestriction,
    TooLarge,
)
from .graph_service import GraphService
from .spectral_service import SpectralService

logger = logging.getLogger(__name__)


class PoincareService:
    """Poincare constants of vertex sets and the upper bounds that certify them."""

    def __init__(self, cfg: Optional[RunConfig] = None):
        self.cfg = cfg or config
        self.graphs = GraphService(self.cfg)
        self.spectral = SpectralService(self.cfg)

    # ------------------------------------------------------------------ exact value

    def lambda_exact(self, graph: Graph, dec: Optional[SpectralDecomposition], vertices: VertexSet) -> float:
        """1 / sigma_min of the Laplacian restricted to signals supported on ``vertices``."""
        self.graphs.check_vertex_set(graph, vertices)
        if vertices.is_empty:
            raise InvalidParameter("lambda_exact needs a nonempty vertex set")
        if dec is not None and dec.host != graph.fingerprint:
            logger.warning("Decomposition host does not match graph; computing from the graph")
        return self.lambda_from_matrix(self.spectral.laplacian_matrix(graph), vertices)

    def lambda_from_matrix(self, laplacian: np.ndarray, vertices: VertexSet) -> float:
        sigma_min = float(svdvals(laplacian[:, list(vertices.members)]).min())
        if sigma_min < self.cfg.tolerances.sigma_floor:
            raise SingularRestriction(
                f"restricted Laplacian is singular on a set of size {len(vertices)} (sigma_min={sigma_min:.2e})"
            )
        return 1.0 / sigma_min

    # ------------------------------------------------------------------ closed forms

    def lambda_single_vertex(self, graph: Graph, v: int) -> float:
        if not ModelValidator.validate_vertex(graph, v):
            raise OutOfRange(f"vertex {v} out of range for n={graph.n}")
        self.graphs.require_connected(graph)
        if graph.deg[v] == 0:
            raise Disconnected(f"vertex {v} is isolated")
        inverse_sum = sum(1.0 / graph.deg[w] for w in graph.adj[v])
        return (1.0 + inverse_sum / graph.deg[v]) ** -0.5

    def omega_star_global(self, graph: Graph) -> float:
        self.graphs.require_connected(graph)
        return math.sqrt(1.0 + 1.0 / graph.max_degree)

    def lambda_closed_form_1d(self, block_size: int) -> float:
        """Poincare constant certified for N successive vertices of a line."""
        if block_size < 1:
            raise InvalidParameter(f"block size must be positive, got {block_size}")
        return 0.5 / math.sin(math.pi / (2 * block_size + 2)) ** 2

    def nyquist_size_1d(self, omega: float) -> NyquistReport:
        """Largest block length N with N < pi / (2 arcsin sqrt(omega/2)) - 1, with both readings of the bound."""
        if not ModelValidator.validate_open_bandwidth(omega):
            raise OutOfRange(f"nyquist_size_1d needs 0 < omega < 2, got {omega}")
        threshold = math.pi / (2.0 * math.asin(math.sqrt(omega / 2.0))) - 1.0
        guard = self.cfg.tolerances.guard
        strict = max(math.ceil(threshold - guard) - 1, 0)
        boundary = max(math.floor(threshold + guard), 0)
        return NyquistReport(
            omega=omega,
            strict=strict,
            boundary=boundary,
            threshold=threshold,
            asymptote=math.pi / math.sqrt(2.0 * omega),
        )

    def lambda_tree_level(self, q: int) -> float:
        if q < 2:
            raise InvalidParameter(f"tree order parameter q must be >= 2, got {q}")
        return (1.0 + q / (q + 1) ** 2) ** -0.5

    # ------------------------------------------------------------------ doubled graph

    def gamma_bound(self, graph: Graph, vertices: VertexSet, rng: Optional[np.random.Generator] = None) -> GammaBound:
        """1/lambda_1 of the doubled graph, with the two lifting identities checked on random signals."""
        gamma = self.graphs.gamma_double(graph, vertices)
        dec = self.spectral.eigendecompose(gamma.graph, require_connected=False)
        eps = self.cfg.tolerances.eps_eig
        positive = dec.eigenvalues[dec.eigenvalues > eps]
        lambda1 = float(positive[0])

        rng = rng or np.random.default_rng(self.cfg.sampling.seed)
        guard = self.cfg.tolerances.guard
        norms_ok = True
        laplacians_ok = True
        laplacian_gamma = self.spectral.laplacian_matrix(gamma.graph)
        laplacian_g = self.spectral.laplacian_matrix(graph)
        members = list(vertices.members)
        for _ in range(self.cfg.sampling.check_samples):
            phi = np.zeros(graph.n)
            phi[members] = rng.standard_normal(len(members))
            lifted = gamma.lift(phi)
            scale = max(np.linalg.norm(phi), 1.0)
            norms_ok &= abs(np.linalg.norm(lifted) - math.sqrt(2.0) * np.linalg.norm(phi)) <= guard * scale
            laplacians_ok &= (
                np.linalg.norm(laplacian_gamma @ lifted)
                <= math.sqrt(2.0) * np.linalg.norm(laplacian_g @ phi) + guard * scale
            )

        if not (norms_ok and laplacians_ok):
            logger.warning(f"Doubled-graph lifting identities failed for a set of size {len(vertices)}")
        return GammaBound(
            value=1.0 / lambda1,
            lambda1=lambda1,
            gamma_vertices=gamma.graph.n,
            norm_identity_holds=bool(norms_ok),
            laplacian_inequality_holds=bool(laplacians_ok),
        )

    def lambda_via_gamma(self, graph: Graph, vertices: VertexSet) -> float:
        return self.gamma_bound(graph, vertices).value

    def lambda_bounds(self, graph: Graph, vertices: VertexSet) -> List[BoundEntry]:
        """Cheeger, diameter-volume and closure diameter-volume bounds."""
        gamma = self.graphs.gamma_double(graph, vertices)
        bounds: List[BoundEntry] = []

        try:
            h = self.graphs.cheeger_constant(gamma.graph)
            bounds.append(BoundEntry(method="cheeger", value=2.0 / h ** 2))
        except TooLarge:
            bounds.append(BoundEntry(method="cheeger", value=math.inf, valid=False, note="doubled graph too large"))
        except Disconnected:
            bounds.append(BoundEntry(method="cheeger", value=math.inf, valid=False, note="doubled graph disconnected"))

        try:
            diameter = self.graphs.diameter(gamma.graph)
            volume = int(gamma.graph.deg.sum())
            bounds.append(BoundEntry(method="diamvol", value=float(diameter * volume)))
        except Disconnected:
            bounds.append(BoundEntry(method="diamvol", value=math.inf, valid=False, note="doubled graph disconnected"))

        closure = vertices.union(gamma.boundary)
        induced, _ = self.graphs.induced_subgraph(graph, closure)
        try:
            closure_diameter = self.graphs.diameter(induced)
            closure_volume = self.graphs.volume(graph, vertices) + self.graphs.volume_in_induced(
                graph, closure, gamma.boundary
            )
            bounds.append(BoundEntry(method="closure_diamvol", value=2.0 * closure_diameter * closure_volume))
        except Disconnected:
            bounds.append(
                BoundEntry(method="closure_diamvol", value=math.inf, valid=False, note="closure disconnected")
            )
        return bounds

    # ------------------------------------------------------------------ structural lemmas

    def _sparse_lemma(self, graph: Graph, vertices: VertexSet) -> Optional[BoundEntry]:
        for v in vertices.members:
            if any(u in vertices for u in graph.adj[v]):
                return None
        return BoundEntry(method="sparse_lemma", value=1.0)

    def _witness_lemma(self, graph: Graph, vertices: VertexSet) -> Optional[BoundEntry]:
        # Each v needs a boundary neighbor u whose only neighbor in the set is v.
        worst = 0.0
        for v in vertices.members:
            witnesses = [
                u
                for u in graph.adj[v]
                if u not in vertices and all(w == v or w not in vertices for w in graph.adj[u])
            ]
            if not witnesses:
                return None
            worst = max(worst, graph.deg[v] * min(graph.deg[u] for u in witnesses))
        return BoundEntry(
            method="witness_lemma",
            value=math.sqrt(worst),
            note=f"degree form gives {graph.deg[list(vertices.members)].max()}",
        )

    def lambda_structural(self, graph: Graph, vertices: VertexSet) -> Optional[BoundEntry]:
        self.graphs.check_vertex_set(graph, vertices)
        if vertices.is_empty:
            return None
        entries = [e for e in (self._sparse_lemma(graph, vertices), self._witness_lemma(graph, vertices)) if e]
        return min(entries, key=lambda e: e.value) if entries else None

    def _successive_1d(self, graph: Graph, vertices: VertexSet) -> Optional[BoundEntry]:
        """Closed form when the closure induces a path whose two ends form the boundary."""
        closure = self.graphs.closure(graph, vertices)
        boundary = closure.difference(vertices)
        if len(boundary) != 2:
            return None
        induced, index = self.graphs.induced_subgraph(graph, closure)
        if induced.num_edges != induced.n - 1 or not induced.is_connected or induced.max_degree > 2:
            return None
        if any(induced.deg[index[b]] != 1 for b in boundary.members):
            return None
        return BoundEntry(method="successive_1d", value=self.lambda_closed_form_1d(len(vertices)))

    # ------------------------------------------------------------------ certificates

    def certify(self, graph: Graph, dec: Optional[SpectralDecomposition], vertices: VertexSet) -> LambdaCertificate:
        """Exact constant plus every applicable bound, each tagged by method."""
        lambda_exact = self.lambda_exact(graph, dec, vertices)
        bounds: List[BoundEntry] = []

        gamma = self.gamma_bound(graph, vertices)
        bounds.append(
            BoundEntry(
                method="gamma_eigen",
                value=gamma.value,
                valid=gamma.norm_identity_holds and gamma.laplacian_inequality_holds,
            )
        )
        bounds.extend(self.lambda_bounds(graph, vertices))
        if len(vertices) == 1:
            bounds.append(BoundEntry(method="single_vertex", value=self.lambda_single_vertex(graph, vertices.members[0])))
        for entry in (
            self._successive_1d(graph, vertices),
            self._sparse_lemma(graph, vertices),
            self._witness_lemma(graph, vertices),
        ):
            if entry is not None:
                bounds.append(entry)

        cert = LambdaCertificate(vertices=vertices, lambda_exact=lambda_exact, bounds=bounds)
        self._check_dominance(cert)
        logger.info(
            f"Certified set of size {len(vertices)}: lambda_exact={lambda_exact:.6g}, "
            f"best bound {cert.best_bound().method}={cert.best_bound().value:.6g}"
        )
        return cert

    def _check_dominance(self, cert: LambdaCertificate) -> None:
        slack = self.cfg.tolerances.guard * max(cert.lambda_exact, 1.0)
        for entry in cert.valid_bounds():
            if entry.value < cert.lambda_exact - slack:
                logger.warning(
                    f"Bound {entry.method}={entry.value:.6g} is below the exact constant {cert.lambda_exact:.6g}"
                )

    def lambda_union(self, certs: Sequence[LambdaCertificate], graph: Graph) -> LambdaCertificate:
        """Certificate for a union of sets whose closures are pairwise disjoint."""
        if not certs:
            raise InvalidParameter("lambda_union needs at least one certificate")
        closures = [self.graphs.closure(graph, cert.vertices) for cert in certs]
        for i, j in combinations(range(len(closures)), 2):
            if not closures[i].isdisjoint(closures[j]):
                raise OverlappingClosures(f"closures of parts {i} and {j} intersect", parts=[i, j])

        union = certs[0].vertices
        for cert in certs[1:]:
            union = union.union(cert.vertices)
        lambda_exact = self.lambda_exact(graph, None, union)

        per_part = [cert.best_bound().value if cert.best_bound() else cert.lambda_exact for cert in certs]
        bounds = [BoundEntry(method="union", value=max(per_part), note="max of per-part certified bounds")]
        logger.info(f"Union of {len(certs)} parts: lambda_exact={lambda_exact:.6g}, certified {max(per_part):.6g}")
        return LambdaCertificate(vertices=union, lambda_exact=lambda_exact, bounds=bounds)

    def lambda_tree_levels(
        self,
        graph: Graph,
        q: int,
        levels: Iterable[int],
        method: Literal["auto", "tree_level", "sparse_lemma"] = "auto",
    ) -> LambdaCertificate:
        """Certificate for a union of levels of a generated tree(q, depth)."""
        levels = sorted(set(int(m) for m in levels))
        if not levels:
            raise InvalidParameter("no tree levels given")
        depth = self._tree_depth(graph, q)
        if levels[0] < 0 or levels[-1] > depth:
            raise OutOfRange(f"levels {levels} outside 0..{depth}")

        spacing = min((b - a for a, b in zip(levels, levels[1:])), default=math.inf)
        interior = levels[0] >= 1 and levels[-1] <= depth - 2
        if method == "auto":
            method = "tree_level" if spacing >= 3 and interior else "sparse_lemma"

        sets = [GraphFactory.tree_level(q, depth, m) for m in levels]
        if method == "tree_level":
            if spacing < 3:
                raise OverlappingClosures(f"tree levels {levels} are closer than 3 apart")
            if not interior:
                raise OutOfRange(f"tree-level constant needs levels in 1..{depth - 2}")
            bound = self.lambda_tree_level(q)
            laplacian = self.spectral.laplacian_matrix(graph)
            certs = [
                LambdaCertificate(
                    vertices=s,
                    lambda_exact=self.lambda_from_matrix(laplacian, s),
                    bounds=[BoundEntry(method="tree_level", value=bound)],
                )
                for s in sets
            ]
            cert = self.lambda_union(certs, graph)
            return cert.model_copy(update={"bounds": cert.bounds + [BoundEntry(method="tree_level", value=bound)]})

        if spacing < 2:
            raise OverlappingClosures(f"tree levels {levels} are adjacent")
        union = sets[0]
        for s in sets[1:]:
            union = union.union(s)
        return LambdaCertificate(
            vertices=union,
            lambda_exact=self.lambda_exact(graph, None, union),
            bounds=[BoundEntry(method="sparse_lemma", value=1.0)],
        )

    def _tree_depth(self, graph: Graph, q: int) -> int:
        if q < 2:
            raise InvalidParameter(f"tree order parameter q must be >= 2, got {q}")
        depth, total = 0, 1
        while total < graph.n:
            depth += 1
            total += (q + 1) * q ** (depth - 1)
        if total != graph.n or depth == 0:
            raise InvalidParameter(f"graph with n={graph.n} is not a generated tree({q}, depth)")
        return depth

    # ------------------------------------------------------------------ powers

    def power_inequality_check(
        self,
        dec: SpectralDecomposition,
        vertices: VertexSet,
        lam: float,
        t: float,
        k: int,
        samples: int = 100,
        rng: Optional[np.random.Generator] = None,
    ) -> PowerInequalityReport:
        """Checks ||L^t phi|| <= lam^k ||L^(k+t) phi|| on random phi supported on the set."""
        if not ModelValidator.validate_power_of_two(k):
            raise InvalidParameter(f"k must be a power of two, got {k}")
        if t < 0:
            raise InvalidParameter(f"t must be nonnegative, got {t}")
        if vertices.is_empty:
            raise InvalidParameter("power_inequality_check needs a nonempty vertex set")

        rng = rng or np.random.default_rng(self.cfg.sampling.seed)
        members = list(vertices.members)
        worst = 0.0
        for _ in range(samples):
            values = np.zeros(dec.n)
            values[members] = rng.standard_normal(len(members))
            phi = Signal(values=values, host=dec.host)
            lhs = self.spectral.apply_power(dec, t, phi).norm()
            rhs = lam ** k * self.spectral.apply_power(dec, k + t, phi).norm()
            worst = max(worst, lhs / rhs)

        holds = worst <= 1.0 + self.cfg.tolerances.guard
        if not holds:
            logger.warning(f"Power inequality fails for k={k}, t={t}: worst ratio {worst:.6g}")
        return PowerInequalityReport(lam=lam, t=t, k=k, samples=samples, worst_ratio=worst, holds=holds)


poincare_service = PoincareService()
