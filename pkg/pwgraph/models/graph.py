import hashlib
from functools import cached_property
from typing import Dict, List, Tuple

import numpy as np
import scipy.sparse as sp
from pydantic import BaseModel, field_validator, model_validator
from scipy.sparse.csgraph import connected_components


class Graph(BaseModel):
    """Finite simple undirected unweighted graph on vertices 0..n-1."""

    n: int
    adj: Tuple[Tuple[int, ...], ...]

    model_config = {"frozen": True}

    @field_validator("adj", mode="before")
    @classmethod
    def _sort_neighbors(cls, value):
        return tuple(tuple(sorted(neighbors)) for neighbors in value)

    @model_validator(mode="after")
    def _check_simple_and_symmetric(self) -> "Graph":
        if len(self.adj) != self.n:
            raise ValueError(f"adjacency has {len(self.adj)} rows for n={self.n}")
        for v, neighbors in enumerate(self.adj):
            if len(set(neighbors)) != len(neighbors):
                raise ValueError(f"duplicate neighbor at vertex {v}")
            for u in neighbors:
                if u == v:
                    raise ValueError(f"self-loop at vertex {v}")
                if not 0 <= u < self.n:
                    raise ValueError(f"neighbor {u} of vertex {v} out of range")
        for v, neighbors in enumerate(self.adj):
            for u in neighbors:
                if v not in self.neighbor_sets[u]:
                    raise ValueError(f"edge {v}-{u} is not symmetric")
        return self

    @cached_property
    def neighbor_sets(self) -> List[frozenset]:
        return [frozenset(neighbors) for neighbors in self.adj]

    @cached_property
    def deg(self) -> np.ndarray:
        degrees = np.array([len(neighbors) for neighbors in self.adj], dtype=np.int64)
        degrees.setflags(write=False)
        return degrees

    @property
    def max_degree(self) -> int:
        return int(self.deg.max()) if self.n else 0

    @cached_property
    def edges(self) -> Tuple[Tuple[int, int], ...]:
        return tuple((v, u) for v, neighbors in enumerate(self.adj) for u in neighbors if v < u)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency_matrix(self) -> sp.csr_matrix:
        rows = [v for v, neighbors in enumerate(self.adj) for _ in neighbors]
        cols = [u for neighbors in self.adj for u in neighbors]
        data = np.ones(len(rows), dtype=float)
        return sp.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    @cached_property
    def component_count(self) -> int:
        if self.n == 0:
            return 0
        count, _ = connected_components(self.adjacency_matrix, directed=False)
        return int(count)

    @property
    def is_connected(self) -> bool:
        return self.component_count == 1

    @cached_property
    def fingerprint(self) -> str:
        digest = hashlib.sha1(f"{self.n}:{self.edges}".encode())
        return digest.hexdigest()[:16]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.neighbor_sets[u]

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self.adj[v]

    def to_networkx(self):
        import networkx as nx

        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges)
        return graph


class VertexSet(BaseModel):
    members: Tuple[int, ...] = ()

    model_config = {"frozen": True}

    @field_validator("members", mode="before")
    @classmethod
    def _normalize(cls, value):
        members = sorted(set(int(v) for v in value))
        if members and members[0] < 0:
            raise ValueError(f"negative vertex id {members[0]}")
        return tuple(members)

    @classmethod
    def of(cls, members) -> "VertexSet":
        return cls(members=members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, v: int) -> bool:
        return v in self.member_set

    @cached_property
    def member_set(self) -> frozenset:
        return frozenset(self.members)

    @property
    def is_empty(self) -> bool:
        return not self.members

    def union(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(members=self.members + other.members)

    def difference(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(members=[v for v in self.members if v not in other])

    def isdisjoint(self, other: "VertexSet") -> bool:
        return self.member_set.isdisjoint(other.member_set)


class GammaGraph(BaseModel):
    """The doubled graph of a vertex set: two copies of its closure glued along the boundary."""

    graph: Graph
    interior: VertexSet
    boundary: VertexSet
    map_copy1: Dict[int, int]
    map_copy2: Dict[int, int]

    model_config = {"frozen": True}

    def lift(self, phi: np.ndarray) -> np.ndarray:
        """Odd extension of a signal supported on the interior: +phi on copy 1, -phi on copy 2."""
        lifted = np.zeros(self.graph.n)
        for v in self.interior.members:
            lifted[self.map_copy1[v]] = phi[v]
            lifted[self.map_copy2[v]] = -phi[v]
        return lifted
