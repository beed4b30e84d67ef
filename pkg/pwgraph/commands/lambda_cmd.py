import logging
from typing import List

from pwgraph.config import RunConfig
from pwgraph.models import Graph, ModelSerializer, VertexSet
from pwgraph.services.error_handler import InvalidParameter, OutOfRange, with_error_handling
from pwgraph.services.poincare_service import PoincareService
from pwgraph.services.sampling_service import SamplingService

from .common import emit_json, load_graph, looks_cyclic, looks_like_path, parse_sizes, read_vertex_argument

logger = logging.getLogger(__name__)

NAME = "lambda"

BLOCK_GAP = 2


def register(subparsers) -> None:
    parser = subparsers.add_parser(NAME, help="Poincare constants and certificates of vertex sets")
    parser.add_argument("graph", help="edge-list file")
    target = parser.add_mutually_exclusive_group(required=True)
    target.add_argument("--set", dest="vertex_set", help="vertex ids ('3,4,5', JSON array, or a file)")
    target.add_argument("--singletons", action="store_true", help="certify every single vertex")
    target.add_argument(
        "--blocks",
        help="'auto', block sizes laid out along the line ('48,48'), or inclusive ranges ('2-49,52-99')",
    )
    target.add_argument("--levels", help="tree levels ('1,4') of a generated tree; needs --q")
    parser.add_argument("--q", type=int, help="branching parameter for --levels")
    parser.add_argument("--omega", type=float, help="bandwidth to certify uniqueness for")
    parser.add_argument("-o", "--output", help="write the JSON report here instead of stdout")


def _block_layout(graph: Graph, layout: str) -> List[VertexSet]:
    """Blocks from inclusive ranges, or from sizes each preceded by a gap of two vertices."""
    tokens = [t.strip() for t in layout.split(",") if t.strip()]
    if tokens and all("-" in t for t in tokens):
        blocks = []
        for token in tokens:
            try:
                first, last = (int(x) for x in token.split("-", 1))
            except ValueError as e:
                raise InvalidParameter(f"malformed block range {token!r}") from e
            if not 0 <= first <= last < graph.n:
                raise OutOfRange(f"block range {token} outside 0..{graph.n - 1}")
            blocks.append(VertexSet(members=range(first, last + 1)))
        return blocks

    blocks, start = [], BLOCK_GAP
    for size in parse_sizes(layout):
        if start + size > graph.n:
            raise OutOfRange(f"blocks {layout} do not fit on {graph.n} vertices")
        blocks.append(VertexSet(members=range(start, start + size)))
        start += size + BLOCK_GAP
    return blocks


def _parse_levels(value: str) -> List[int]:
    try:
        return [int(token) for token in value.split(",") if token.strip()]
    except ValueError as e:
        raise InvalidParameter(f"malformed level list {value!r}") from e


@with_error_handling("cli", NAME)
def run(args, cfg: RunConfig) -> int:
    graph = load_graph(args.graph, cfg)
    poincare = PoincareService(cfg)
    sampling = SamplingService(cfg)
    poincare.graphs.require_connected(graph)
    report = {"n": graph.n}

    if args.singletons:
        certs = [poincare.certify(graph, None, VertexSet(members=[v])) for v in range(graph.n)]
        report["mode"] = "singletons"
        report["certificates"] = [ModelSerializer.serialize_certificate(c) for c in certs]
        report["omega_star_global"] = poincare.omega_star_global(graph)
        emit_json(report, args.output)
        return 0

    if args.vertex_set is not None:
        report["mode"] = "set"
        vertices = read_vertex_argument(args.vertex_set)
        poincare.graphs.check_vertex_set(graph, vertices)
        cert = poincare.certify(graph, None, vertices)
        report["certificates"] = [ModelSerializer.serialize_certificate(cert)]
    elif args.levels is not None:
        if args.q is None:
            raise InvalidParameter("--levels needs --q")
        report["mode"] = "levels"
        cert = poincare.lambda_tree_levels(graph, args.q, _parse_levels(args.levels))
        report["certificates"] = [ModelSerializer.serialize_certificate(cert)]
    else:
        report["mode"] = "blocks"
        if args.blocks == "auto":
            if args.omega is None:
                raise InvalidParameter("--blocks auto needs --omega")
            if not (looks_cyclic(graph) or looks_like_path(graph)):
                raise InvalidParameter("--blocks auto needs a path or cycle whose ids run along the line")
            layout = sampling.line_partition(graph.n, args.omega, cyclic=looks_cyclic(graph))
            blocks = layout.blocks
            report["block_size"] = layout.block_size
        else:
            blocks = _block_layout(graph, args.blocks)
        parts = [poincare.certify(graph, None, block) for block in blocks]
        cert = poincare.lambda_union(parts, graph)
        report["certificates"] = [ModelSerializer.serialize_certificate(c) for c in parts]
        report["union"] = ModelSerializer.serialize_certificate(cert)

    best = cert.best_bound()
    report["certified_lambda"] = best.value if best else cert.lambda_exact
    report["certified_omega_star"] = 1.0 / report["certified_lambda"]

    if args.omega is not None:
        uniqueness = sampling.certify_uniqueness_by_lambda(graph, None, args.omega, cert=cert)
        report["uniqueness"] = {
            "omega": uniqueness.omega,
            "unique": uniqueness.unique,
            "omega_star": uniqueness.omega_star,
            "U": ModelSerializer.serialize_vertex_set(uniqueness.sample_set),
        }

    emit_json(report, args.output)
    return 0
