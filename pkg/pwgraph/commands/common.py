import json
import sys
from pathlib import Path
from typing import Any, Optional

from pwgraph.config import RunConfig
from pwgraph.models import Graph, ModelSerializer, VertexSet
from pwgraph.services.error_handler import InvalidParameter
from pwgraph.services.graph_service import GraphService


def emit_json(data: Any, output: Optional[str] = None) -> None:
    text = json.dumps(data, indent=2, default=_json_default) + "\n"
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _json_default(value: Any) -> Any:
    if hasattr(value, "tolist"):
        return value.tolist()
    if hasattr(value, "model_dump"):
        return value.model_dump()
    raise TypeError(f"cannot serialize {type(value).__name__}")


def load_graph(path: str, cfg: RunConfig) -> Graph:
    return GraphService(cfg).load(path)


def read_vertex_argument(value: str) -> VertexSet:
    """A vertex set given inline ("3,4,5") or as a path to a file holding one."""
    try:
        is_file = Path(value).is_file()
    except OSError:
        # long inline lists overflow the file-name limit
        is_file = False
    if is_file:
        return ModelSerializer.parse_vertex_set(Path(value).read_text())
    return ModelSerializer.parse_vertex_set(value)


def parse_sizes(value: str) -> list:
    try:
        sizes = [int(token) for token in value.split(",") if token.strip()]
    except ValueError as e:
        raise InvalidParameter(f"malformed block sizes {value!r}") from e
    if not sizes or any(s < 1 for s in sizes):
        raise InvalidParameter(f"block sizes must be positive integers, got {value!r}")
    return sizes


def looks_cyclic(graph: Graph) -> bool:
    return graph.n >= 3 and graph.num_edges == graph.n and graph.max_degree == 2 and graph.is_connected


def looks_like_path(graph: Graph) -> bool:
    return graph.n >= 2 and graph.num_edges == graph.n - 1 and graph.max_degree <= 2 and graph.is_connected
