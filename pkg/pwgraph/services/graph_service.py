import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse.csgraph import shortest_path

from pwgraph.config import RunConfig, config
from pwgraph.models.factories import GraphFactory
from pwgraph.models.graph import GammaGraph, Graph, VertexSet
from pwgraph.models.validators import ModelValidator

from .error_handler import (
    Disconnected,
    EmptyBoundary,
    EmptyGraph,
    InvalidParameter,
    OutOfRange,
    ParseError,
    SelfLoop,
    TooLarge,
)

logger = logging.getLogger(__name__)

GENERATOR_KINDS = ("path", "cycle", "grid", "torus", "tree")

# Subsets enumerated per vectorized Cheeger batch.
_CHEEGER_BATCH = 1 << 16


class GraphService:
    def __init__(self, cfg: Optional[RunConfig] = None):
        self.cfg = cfg or config

    # ------------------------------------------------------------------ ingestion

    def from_edge_list(self, text: str) -> Graph:
        """Parse "u v" lines into a Graph; ids are compacted onto 0..n-1 in increasing order."""
        pairs: List[Tuple[int, int]] = []
        for line_no, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if len(tokens) != 2:
                raise ParseError(f"line {line_no}: expected 'u v', got {line!r}", line=line_no)
            try:
                u, v = int(tokens[0]), int(tokens[1])
            except ValueError as e:
                raise ParseError(f"line {line_no}: non-integer vertex id in {line!r}", line=line_no) from e
            if u < 0 or v < 0:
                raise ParseError(f"line {line_no}: negative vertex id in {line!r}", line=line_no)
            if u == v:
                raise SelfLoop(u)
            pairs.append((u, v))

        if not pairs:
            raise EmptyGraph("edge list contains no edges")

        ids = sorted({x for pair in pairs for x in pair})
        index = {vertex: i for i, vertex in enumerate(ids)}
        if ids[-1] != len(ids) - 1:
            logger.info(f"Compacted {len(ids)} vertex ids (max id {ids[-1]}) onto 0..{len(ids) - 1}")

        graph = GraphFactory.from_edges(len(ids), ((index[u], index[v]) for u, v in pairs))
        logger.info(f"Ingested graph with {graph.n} vertices and {graph.num_edges} edges")
        return graph

    def load(self, path: str) -> Graph:
        try:
            text = Path(path).read_text()
        except OSError as e:
            raise ParseError(f"cannot read graph file {path}: {e}") from e
        return self.from_edge_list(text)

    def generate(self, kind: str, params: Sequence[int]) -> Graph:
        params = [int(p) for p in params]
        if kind not in GENERATOR_KINDS:
            raise InvalidParameter(f"unknown graph kind '{kind}'; expected one of {', '.join(GENERATOR_KINDS)}")
        if not ModelValidator.validate_generator(kind, params):
            raise InvalidParameter(f"invalid parameters {params} for {kind}")

        if kind == "path":
            graph = GraphFactory.path(params[0])
        elif kind == "cycle":
            graph = GraphFactory.cycle(params[0])
        elif kind == "grid":
            graph = GraphFactory.grid(params)
        elif kind == "torus":
            graph = GraphFactory.torus(params)
        else:
            graph = GraphFactory.tree(params[0], params[1])

        logger.info(f"Generated {kind}{tuple(params)}: n={graph.n}, edges={graph.num_edges}")
        return graph

    # ------------------------------------------------------------------ checks

    def require_connected(self, graph: Graph) -> None:
        if graph.n == 0:
            raise EmptyGraph("graph has no vertices")
        if not graph.is_connected:
            raise Disconnected(f"graph has {graph.component_count} connected components")

    def check_vertex_set(self, graph: Graph, vertices: VertexSet) -> None:
        if not ModelValidator.validate_vertex_set(graph, vertices):
            raise OutOfRange(f"vertex {vertices.members[-1]} out of range for n={graph.n}")

    # ------------------------------------------------------------------ combinatorics

    def boundary(self, graph: Graph, vertices: VertexSet) -> VertexSet:
        self.check_vertex_set(graph, vertices)
        outside = set()
        for v in vertices.members:
            outside.update(u for u in graph.adj[v] if u not in vertices)
        return VertexSet(members=outside)

    def closure(self, graph: Graph, vertices: VertexSet) -> VertexSet:
        return vertices.union(self.boundary(graph, vertices))

    def induced_subgraph(self, graph: Graph, vertices: VertexSet) -> Tuple[Graph, Dict[int, int]]:
        """Subgraph on ``vertices`` with every edge of G between them; returns it with the id map."""
        self.check_vertex_set(graph, vertices)
        index = {v: i for i, v in enumerate(vertices.members)}
        edges = (
            (index[v], index[u])
            for v in vertices.members
            for u in graph.adj[v]
            if u in index and v < u
        )
        return GraphFactory.from_edges(len(index), edges), index

    def gamma_double(self, graph: Graph, vertices: VertexSet) -> GammaGraph:
        """Two copies of the induced closure glued along the boundary.

        Ids: copy 1 of S is 0..|S|-1, copy 2 is |S|..2|S|-1, boundary vertices follow.
        Edges between two boundary vertices appear once, so a boundary vertex b has
        degree 2*d_closure(b) - d_boundary(b) in the doubled graph rather than
        2*d_closure(b). Dropping the duplicate copy only removes edges from the
        boundary, so the lift identities and the lambda_1 bound still hold.
        """
        if vertices.is_empty:
            raise InvalidParameter("gamma_double needs a nonempty vertex set")
        bnd = self.boundary(graph, vertices)
        if bnd.is_empty:
            raise EmptyBoundary(f"set of size {len(vertices)} has empty vertex boundary")

        size = len(vertices)
        copy1 = {v: i for i, v in enumerate(vertices.members)}
        copy2 = {v: size + i for i, v in enumerate(vertices.members)}
        shared = {b: 2 * size + i for i, b in enumerate(bnd.members)}
        map1 = {**copy1, **shared}
        map2 = {**copy2, **shared}

        edges = []
        closure = vertices.union(bnd)
        for v in closure.members:
            for u in graph.adj[v]:
                if u not in closure or u < v:
                    continue
                if v in shared and u in shared:
                    edges.append((shared[v], shared[u]))
                else:
                    edges.append((map1[v], map1[u]))
                    edges.append((map2[v], map2[u]))

        doubled = GraphFactory.from_edges(2 * size + len(bnd), edges)
        logger.info(f"Built doubled graph: |S|={size}, |bS|={len(bnd)}, n={doubled.n}, edges={doubled.num_edges}")
        return GammaGraph(graph=doubled, interior=vertices, boundary=bnd, map_copy1=map1, map_copy2=map2)

    def volume(self, graph: Graph, vertices: VertexSet) -> int:
        self.check_vertex_set(graph, vertices)
        return int(graph.deg[list(vertices.members)].sum()) if vertices.members else 0

    def volume_in_induced(self, graph: Graph, closure: VertexSet, vertices: VertexSet) -> int:
        """Sum of degrees of ``vertices`` measured inside the subgraph induced on ``closure``."""
        self.check_vertex_set(graph, closure)
        return sum(
            sum(1 for u in graph.adj[v] if u in closure)
            for v in vertices.members
            if v in closure
        )

    def diameter(self, graph: Graph) -> int:
        self.require_connected(graph)
        if graph.n == 1:
            return 0
        distances = shortest_path(graph.adjacency_matrix, directed=False, unweighted=True)
        return int(distances.max())

    def cheeger_constant(self, graph: Graph) -> float:
        """Exhaustive min over nonempty proper W of |E(W, W')| / min(vol W, vol W')."""
        self.require_connected(graph)
        limit = self.cfg.limits.cheeger_max_n
        if graph.n > limit:
            raise TooLarge(f"cheeger_constant is exhaustive; n={graph.n} exceeds limit {limit}", n=graph.n)
        if graph.n < 2:
            raise InvalidParameter("cheeger_constant needs at least two vertices")

        n = graph.n
        deg = graph.deg.astype(float)
        total = deg.sum()
        edges = np.array(graph.edges, dtype=np.int64)
        shifts = np.arange(n, dtype=np.int64)
        best = np.inf

        # W never contains vertex n-1, so each cut is visited once.
        stop = 1 << (n - 1)
        for start in range(1, stop, _CHEEGER_BATCH):
            masks = np.arange(start, min(start + _CHEEGER_BATCH, stop), dtype=np.int64)
            bits = ((masks[:, None] >> shifts) & 1).astype(bool)
            vol_w = bits.astype(float) @ deg
            cut = (bits[:, edges[:, 0]] != bits[:, edges[:, 1]]).sum(axis=1)
            ratios = cut / np.minimum(vol_w, total - vol_w)
            best = min(best, float(ratios.min()))

        logger.info(f"Cheeger constant over {stop - 1} cuts of n={n}: h={best:.6g}")
        return best


graph_service = GraphService()
