import itertools
from typing import Dict, Iterable, List, Sequence, Set, Tuple

import numpy as np

from .graph import Graph, VertexSet


def _graph_from_neighbor_sets(neighbors: List[Set[int]]) -> Graph:
    return Graph(n=len(neighbors), adj=tuple(tuple(sorted(nb)) for nb in neighbors))


def _graph_from_edges(n: int, edges: Iterable[Tuple[int, int]]) -> Graph:
    neighbors: List[Set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        neighbors[u].add(v)
        neighbors[v].add(u)
    return _graph_from_neighbor_sets(neighbors)


class GraphFactory:
    """Generators for the model graphs. Callers validate parameters first."""

    @staticmethod
    def from_edges(n: int, edges: Iterable[Tuple[int, int]]) -> Graph:
        return _graph_from_edges(n, edges)

    @staticmethod
    def path(n: int) -> Graph:
        return _graph_from_edges(n, ((v, v + 1) for v in range(n - 1)))

    @staticmethod
    def cycle(n: int) -> Graph:
        return _graph_from_edges(n, ((v, (v + 1) % n) for v in range(n)))

    @staticmethod
    def grid(dims: Sequence[int]) -> Graph:
        return GraphFactory._box_product(dims, periodic=False)

    @staticmethod
    def torus(dims: Sequence[int]) -> Graph:
        return GraphFactory._box_product(dims, periodic=True)

    @staticmethod
    def _box_product(dims: Sequence[int], periodic: bool) -> Graph:
        # Vertex ids follow numpy C order over the coordinate tuple.
        dims = tuple(int(d) for d in dims)
        n = int(np.prod(dims))
        edges = []
        for coords in itertools.product(*(range(d) for d in dims)):
            v = int(np.ravel_multi_index(coords, dims))
            for axis, size in enumerate(dims):
                step = coords[axis] + 1
                if step == size:
                    if not periodic:
                        continue
                    step = 0
                neighbor = coords[:axis] + (step,) + coords[axis + 1:]
                edges.append((v, int(np.ravel_multi_index(neighbor, dims))))
        return _graph_from_edges(n, edges)

    @staticmethod
    def tree(q: int, depth: int) -> Graph:
        """Truncated homogeneous tree of order q+1 with vertex ids in breadth-first order."""
        edges = []
        frontier = [0]
        next_id = 1
        for level in range(depth):
            children_per_vertex = q + 1 if level == 0 else q
            new_frontier = []
            for parent in frontier:
                for _ in range(children_per_vertex):
                    edges.append((parent, next_id))
                    new_frontier.append(next_id)
                    next_id += 1
            frontier = new_frontier
        return _graph_from_edges(next_id, edges)

    @staticmethod
    def tree_level_sizes(q: int, depth: int) -> List[int]:
        return [1] + [(q + 1) * q ** (m - 1) for m in range(1, depth + 1)]

    @staticmethod
    def tree_level(q: int, depth: int, m: int) -> VertexSet:
        sizes = GraphFactory.tree_level_sizes(q, depth)
        start = sum(sizes[:m])
        return VertexSet(members=range(start, start + sizes[m]))

    @staticmethod
    def from_networkx(nx_graph) -> Tuple[Graph, Dict[object, int]]:
        """Compact an arbitrary networkx graph onto ids 0..n-1 (sorted node order when sortable)."""
        try:
            nodes = sorted(nx_graph.nodes())
        except TypeError:
            nodes = list(nx_graph.nodes())
        index = {node: i for i, node in enumerate(nodes)}
        edges = ((index[u], index[v]) for u, v in nx_graph.edges())
        return _graph_from_edges(len(nodes), edges), index

    @staticmethod
    def block_on_torus(dims: Sequence[int], offset: Sequence[int], block: Sequence[int]) -> VertexSet:
        """Vertex ids of the axis-aligned box ``offset + [0, block)`` inside torus(dims)."""
        ranges = [range(o, o + b) for o, b in zip(offset, block)]
        members = (
            int(np.ravel_multi_index(tuple(c % d for c, d in zip(coords, dims)), tuple(dims)))
            for coords in itertools.product(*ranges)
        )
        return VertexSet(members=members)
