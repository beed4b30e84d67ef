from pwgraph.config import RunConfig
from pwgraph.services.eigbounds_service import EigenBoundsService
from pwgraph.services.error_handler import InvalidParameter, NoFeasibleSubset, with_error_handling
from pwgraph.services.poincare_service import PoincareService
from pwgraph.services.sampling_service import SamplingService
from pwgraph.services.spectral_service import SpectralService

from .common import emit_json, load_graph, looks_cyclic, looks_like_path

NAME = "report"


def register(subparsers) -> None:
    parser = subparsers.add_parser(NAME, help="spectrum summary, thresholds and eigenvalue counts")
    parser.add_argument("graph", help="edge-list file")
    parser.add_argument("--omega", type=float, required=True)
    parser.add_argument("-o", "--output", help="write the JSON report here instead of stdout")


@with_error_handling("cli", NAME)
def run(args, cfg: RunConfig) -> int:
    if args.omega < 0:
        raise InvalidParameter(f"--omega must be nonnegative, got {args.omega}")
    graph = load_graph(args.graph, cfg)
    spectral = SpectralService(cfg)
    poincare = PoincareService(cfg)
    eigbounds = EigenBoundsService(cfg)

    dec = spectral.eigendecompose(graph)
    counts = eigbounds.count_eigs(dec, args.omega)
    pw = dec.pw_space(args.omega)

    bundle = {
        "graph": {
            "n": graph.n,
            "edges": graph.num_edges,
            "max_degree": graph.max_degree,
            "fingerprint": graph.fingerprint,
        },
        "spectrum": {
            "lambda_1": float(dec.eigenvalues[1]) if graph.n > 1 else 0.0,
            "lambda_max": dec.lambda_max,
            "residual": dec.residual,
        },
        "omega": args.omega,
        "omega_star_global": poincare.omega_star_global(graph),
        "counts": {"below": counts.count_below, "at_or_above": counts.count_at_or_above},
        "pw_dim": pw.dim,
        "pw_operator_norm": spectral.pw_operator_norm(dec, args.omega),
    }

    if graph.n > 72:
        bundle["planar_bound"] = eigbounds.planar_bound(graph.n, graph.max_degree)

    on_line = looks_cyclic(graph) or looks_like_path(graph)
    if on_line and 0 < args.omega < 2:
        nyquist = poincare.nyquist_size_1d(args.omega)
        bundle["nyquist"] = nyquist.model_dump()
        try:
            layout = SamplingService(cfg).line_partition(graph.n, args.omega, cyclic=looks_cyclic(graph))
            bundle["suggested_samples"] = list(layout.sample_set.members)
        except NoFeasibleSubset:
            bundle["suggested_samples"] = None

    emit_json(bundle, args.output)
    return 0
