import logging
from pathlib import Path

import numpy as np

from pwgraph.config import RunConfig
from pwgraph.models import ModelSerializer, VertexSet
from pwgraph.services.error_handler import InvalidParameter, ParseError, with_error_handling
from pwgraph.services.sampling_service import SamplingService
from pwgraph.services.spectral_service import SpectralService

from .common import emit_json, load_graph, read_vertex_argument

logger = logging.getLogger(__name__)

NAME = "reconstruct"


def register(subparsers) -> None:
    parser = subparsers.add_parser(NAME, help="recover a PW_omega signal from its samples")
    parser.add_argument("graph", help="edge-list file")
    parser.add_argument("--omega", type=float, required=True)
    parser.add_argument("--samples", required=True, help="JSON object mapping vertex id to sampled value")
    where = parser.add_mutually_exclusive_group()
    where.add_argument("--u", dest="sample_set", help="sample vertices (ids or file); defaults to the sample file keys")
    where.add_argument("--set", dest="removed_set", help="removed vertices S; samples are taken on V \\ S")
    parser.add_argument("--method", choices=("neumann", "direct", "derivative"), default="neumann")
    parser.add_argument("--s", type=float, default=0.0, help="power for derivative sampling")
    parser.add_argument("--cross-check", action="store_true", help="compare Neumann and direct reconstructions")
    parser.add_argument("-o", "--output", help="write the reconstructed signal here")
    parser.add_argument(
        "--signal-format",
        choices=("json", "text"),
        default="json",
        help="signal file layout: JSON array or one value per line",
    )


@with_error_handling("cli", NAME)
def run(args, cfg: RunConfig) -> int:
    if args.omega < 0:
        raise InvalidParameter(f"--omega must be nonnegative, got {args.omega}")
    graph = load_graph(args.graph, cfg)
    spectral = SpectralService(cfg)
    sampling = SamplingService(cfg)

    try:
        samples = ModelSerializer.parse_samples(Path(args.samples).read_text())
    except OSError as e:
        raise ParseError(f"cannot read sample file {args.samples}: {e}") from e

    if args.sample_set:
        sample_set = read_vertex_argument(args.sample_set)
    elif args.removed_set:
        removed = read_vertex_argument(args.removed_set)
        sample_set = VertexSet(members=range(graph.n)).difference(removed)
    else:
        sample_set = VertexSet(members=samples.keys())
    sampling.graphs.check_vertex_set(graph, sample_set)

    dec = spectral.eigendecompose(graph)
    frame = sampling.frame_bounds(dec, args.omega, sample_set, graph=graph)

    if args.method == "neumann":
        signal, report = sampling.reconstruct_neumann(frame, samples)
    elif args.method == "direct":
        frame = sampling.dual_frame(frame)
        signal, report = sampling.reconstruct_direct(frame, samples)
    else:
        signal, report = sampling.reconstruct_derivative(frame, args.s, samples)

    result = ModelSerializer.serialize_frame(frame, report=report)
    result["consistency"] = sampling.sample_consistency(frame, samples).model_dump()

    if args.cross_check:
        other_frame = sampling.dual_frame(frame) if frame.dual is None else frame
        direct, _ = sampling.reconstruct_direct(other_frame, samples)
        neumann = signal if args.method == "neumann" else sampling.reconstruct_neumann(frame, samples)[0]
        gap = float(np.abs(direct.values - neumann.values).max())
        result["cross_check"] = {"max_abs_difference": gap, "agree": gap <= cfg.tolerances.recon_tol}
        if gap > cfg.tolerances.recon_tol:
            logger.warning(f"Neumann and direct reconstructions differ by {gap:.3e}")

    if args.output:
        text = ModelSerializer.serialize_signal(signal.values, as_json=args.signal_format == "json")
        Path(args.output).write_text(text)
        result["signal_file"] = args.output
    else:
        result["signal"] = signal.values.tolist()

    emit_json(result)
    return 0
