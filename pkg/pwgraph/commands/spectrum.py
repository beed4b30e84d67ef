import sys

from pwgraph.config import RunConfig
from pwgraph.services.error_handler import with_error_handling
from pwgraph.services.spectral_service import SpectralService

from .common import emit_json, load_graph

NAME = "spectrum"


def register(subparsers) -> None:
    parser = subparsers.add_parser(NAME, help="eigenvalues of the normalized Laplacian")
    parser.add_argument("graph", help="edge-list file")
    fmt = parser.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON output (default)")
    fmt.add_argument("--csv", action="store_true", help="CSV output with columns index,eigenvalue")
    parser.add_argument("--vectors", action="store_true", help="include eigenvectors in JSON output")


@with_error_handling("cli", NAME)
def run(args, cfg: RunConfig) -> int:
    graph = load_graph(args.graph, cfg)
    dec = SpectralService(cfg).eigendecompose(graph)

    if args.csv:
        sys.stdout.write("index,eigenvalue\n")
        for j, value in enumerate(dec.eigenvalues):
            sys.stdout.write(f"{j},{value:.17g}\n")
        return 0

    data = {
        "n": graph.n,
        "eigenvalues": dec.eigenvalues.tolist(),
        "residual": dec.residual,
    }
    if args.vectors:
        data["eigenvectors"] = dec.eigenvectors.T.tolist()
    emit_json(data)
    return 0
