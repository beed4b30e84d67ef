"""Reproducible graph and vertex-set corpora shared by the property tests."""
from typing import Iterator, List, Tuple

import networkx as nx
import numpy as np

from pwgraph.models import Graph, GraphFactory, VertexSet


def random_connected_graph(rng: np.random.Generator, n_min: int = 5, n_max: int = 9, p: float = 0.4) -> Graph:
    while True:
        n = int(rng.integers(n_min, n_max + 1))
        candidate = nx.gnp_random_graph(n, p, seed=int(rng.integers(1 << 30)))
        if candidate.number_of_edges() and nx.is_connected(candidate):
            return GraphFactory.from_networkx(candidate)[0]


def random_proper_subset(rng: np.random.Generator, n: int, max_size: int = None) -> VertexSet:
    max_size = min(max_size or n - 1, n - 1)
    size = int(rng.integers(1, max_size + 1))
    return VertexSet(members=rng.choice(n, size=size, replace=False).tolist())


def random_graph_and_set(
    count: int, seed: int, n_min: int = 5, n_max: int = 9, max_fraction: float = 1.0
) -> Iterator[Tuple[Graph, VertexSet]]:
    rng = np.random.default_rng(seed)
    for _ in range(count):
        graph = random_connected_graph(rng, n_min, n_max)
        max_size = max(1, int(max_fraction * (graph.n - 1)))
        yield graph, random_proper_subset(rng, graph.n, max_size)


def small_test_graphs() -> List[Tuple[str, Graph]]:
    """Named graphs with at most 12 vertices."""
    graphs = [(f"path{n}", GraphFactory.path(n)) for n in range(2, 13)]
    graphs += [(f"cycle{n}", GraphFactory.cycle(n)) for n in range(3, 13)]
    graphs += [
        ("grid3x3", GraphFactory.grid([3, 3])),
        ("grid2x5", GraphFactory.grid([2, 5])),
        ("torus3x3", GraphFactory.torus([3, 3])),
        ("torus3x4", GraphFactory.torus([3, 4])),
        ("tree2_2", GraphFactory.tree(2, 2)),
        ("tree3_1", GraphFactory.tree(3, 1)),
        ("star5", GraphFactory.from_networkx(nx.star_graph(5))[0]),
        ("k5", GraphFactory.from_networkx(nx.complete_graph(5))[0]),
        ("petersen", GraphFactory.from_networkx(nx.petersen_graph())[0]),
    ]
    rng = np.random.default_rng(8)
    graphs += [(f"gnp{i}", random_connected_graph(rng, 8, 12, 0.35)) for i in range(6)]
    return graphs


def atlas_corpus() -> List[Graph]:
    """All connected graphs on 2..5 vertices plus every 20th graph on 6 and 7 vertices."""
    corpus = []
    for index, candidate in enumerate(nx.graph_atlas_g()):
        n = candidate.number_of_nodes()
        if n < 2 or not nx.is_connected(candidate):
            continue
        if n <= 5 or index % 20 == 0:
            corpus.append(GraphFactory.from_networkx(candidate)[0])
    return corpus
