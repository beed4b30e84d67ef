import logging
import sys

from pwgraph.config import RunConfig
from pwgraph.models import ModelSerializer
from pwgraph.services.error_handler import with_error_handling
from pwgraph.services.graph_service import GENERATOR_KINDS, GraphService

logger = logging.getLogger(__name__)

NAME = "gen"


def register(subparsers) -> None:
    parser = subparsers.add_parser(NAME, help="generate a model graph as an edge list")
    parser.add_argument("kind", choices=GENERATOR_KINDS)
    parser.add_argument("params", nargs="+", type=int, help="path N | cycle N | grid N1 N2.. | torus N1 N2.. | tree Q DEPTH")
    parser.add_argument("-o", "--output", help="write the edge list here instead of stdout")


@with_error_handling("cli", NAME)
def run(args, cfg: RunConfig) -> int:
    graph = GraphService(cfg).generate(args.kind, args.params)
    text = ModelSerializer.serialize_edge_list(graph)
    if args.output:
        with open(args.output, "w") as handle:
            handle.write(text)
        logger.info(f"Wrote {graph.num_edges} edges to {args.output}")
    else:
        sys.stdout.write(text)
    return 0
