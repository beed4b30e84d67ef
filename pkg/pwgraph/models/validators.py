import json
import math
import re
from typing import Any, Dict, Iterable, List, Optional

import numpy as np

from pwgraph.services.error_handler import ParseError

from .certificates import LambdaCertificate
from .graph import Graph, VertexSet
from .sampling import ReconstructionReport, SamplingFrame

_SEPARATORS = re.compile(r"[\s,]+")


class ModelValidator:
    @staticmethod
    def validate_bandwidth(omega: float) -> bool:
        return math.isfinite(omega) and omega >= 0.0

    @staticmethod
    def validate_open_bandwidth(omega: float) -> bool:
        return math.isfinite(omega) and 0.0 < omega < 2.0

    @staticmethod
    def validate_vertex_set(graph: Graph, vertices: VertexSet) -> bool:
        return not vertices.members or vertices.members[-1] < graph.n

    @staticmethod
    def validate_vertex(graph: Graph, v: int) -> bool:
        return 0 <= v < graph.n

    @staticmethod
    def validate_generator(kind: str, params: List[int]) -> bool:
        if kind == "path":
            return len(params) == 1 and params[0] >= 2
        if kind == "cycle":
            return len(params) == 1 and params[0] >= 3
        if kind == "grid":
            return len(params) >= 1 and all(p >= 2 for p in params)
        if kind == "torus":
            return len(params) >= 1 and all(p >= 3 for p in params)
        if kind == "tree":
            return len(params) == 2 and params[0] >= 2 and params[1] >= 1
        return False

    @staticmethod
    def validate_power_of_two(k: int) -> bool:
        return k >= 1 and k & (k - 1) == 0


class ModelSerializer:
    @staticmethod
    def serialize_edge_list(graph: Graph) -> str:
        return "".join(f"{u} {v}\n" for u, v in graph.edges)

    @staticmethod
    def serialize_vertex_set(vertices: VertexSet) -> List[int]:
        return list(vertices.members)

    @staticmethod
    def parse_vertex_set(text: str) -> VertexSet:
        """Accept a JSON array or ids separated by commas/whitespace."""
        text = text.strip()
        try:
            if text.startswith("["):
                members = json.loads(text)
            else:
                members = [int(token) for token in _SEPARATORS.split(text) if token]
            return VertexSet(members=members)
        except (ValueError, TypeError) as e:
            raise ParseError(f"malformed vertex set: {text[:40]!r}") from e

    @staticmethod
    def serialize_signal(values: Iterable[float], as_json: bool = True) -> str:
        formatted = ["%.17g" % float(x) for x in values]
        if as_json:
            return "[" + ", ".join(formatted) + "]\n"
        return "".join(f"{x}\n" for x in formatted)

    @staticmethod
    def parse_signal(text: str) -> np.ndarray:
        text = text.strip()
        try:
            if text.startswith("["):
                return np.array(json.loads(text), dtype=float)
            return np.array([float(line) for line in text.splitlines() if line.strip()], dtype=float)
        except (ValueError, TypeError) as e:
            raise ParseError("malformed signal file") from e

    @staticmethod
    def parse_samples(text: str) -> Dict[int, float]:
        try:
            raw = json.loads(text)
            if not isinstance(raw, dict):
                raise ValueError("samples must be a JSON object")
            return {int(u): float(value) for u, value in raw.items()}
        except (ValueError, TypeError) as e:
            raise ParseError(f"malformed sample file: {e}") from e

    @staticmethod
    def serialize_samples(samples: Dict[int, float]) -> str:
        return json.dumps({str(u): samples[u] for u in sorted(samples)})

    @staticmethod
    def serialize_certificate(cert: LambdaCertificate) -> Dict[str, Any]:
        return {
            "set": ModelSerializer.serialize_vertex_set(cert.vertices),
            "lambda_exact": cert.lambda_exact,
            "omega_star": cert.omega_star,
            "bounds": [
                {"method": b.method, "value": _finite_or_none(b.value), "valid": b.valid}
                for b in cert.bounds
            ],
        }

    @staticmethod
    def serialize_frame(
        frame: SamplingFrame,
        unique: Optional[bool] = None,
        report: Optional[ReconstructionReport] = None,
    ) -> Dict[str, Any]:
        return {
            "omega": frame.omega,
            "U": ModelSerializer.serialize_vertex_set(frame.sample_set),
            "A": frame.A,
            "B": frame.B,
            "C_omega": frame.C_omega,
            "tightness": frame.tightness,
            "dim": frame.dim,
            "normalization": frame.normalization,
            "unique": frame.is_frame if unique is None else unique,
            "report": ModelSerializer.serialize_reconstruction(report) if report else None,
        }

    @staticmethod
    def serialize_reconstruction(report: ReconstructionReport) -> Dict[str, Any]:
        data = report.model_dump()
        # Histories can run to many thousands of entries.
        if len(report.residual_history) > 10:
            data["residual_history"] = report.residual_history[:5] + report.residual_history[-5:]
            data["error_bounds"] = report.error_bounds[-1:]
        return data


def _finite_or_none(value: float) -> Optional[float]:
    return value if math.isfinite(value) else None
