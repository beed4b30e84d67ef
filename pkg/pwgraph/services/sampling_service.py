import logging
from itertools import combinations
from typing import Dict, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import eigvalsh, lstsq, solve, svdvals

from pwgraph.config import RunConfig, config
from pwgraph.models.certificates import LambdaCertificate
from pwgraph.models.graph import Graph, VertexSet
from pwgraph.models.sampling import (
    FrameNormalization,
    LinePartition,
    PartDetail,
    PartitionReport,
    ReconstructionReport,
    RestrictionReport,
    SampleConsistency,
    SamplingFrame,
    UniquenessReport,
)
from pwgraph.models.spectral import Signal, SpectralDecomposition

from .error_handler import (
    InvalidParameter,
    NoConvergence,
    NoFeasibleSubset,
    NotAFrame,
    OverlappingClosures,
)
from .graph_service import GraphService
from .poincare_service import PoincareService

logger = logging.getLogger(__name__)

Samples = Union[Mapping[int, float], Sequence[float], np.ndarray]


class SamplingService:
    def __init__(self, cfg: Optional[RunConfig] = None):
        self.cfg = cfg or config
        self.graphs = GraphService(self.cfg)
        self.poincare = PoincareService(self.cfg)

    # ------------------------------------------------------------------ certification

    def certify_uniqueness_by_lambda(
        self,
        graph: Graph,
        dec: Optional[SpectralDecomposition],
        omega: float,
        vertices: Optional[VertexSet] = None,
        cert: Optional[LambdaCertificate] = None,
    ) -> UniquenessReport:
        """V \\ S is a uniqueness set for PW_omega whenever omega < 1/Lambda(S)."""
        if cert is None:
            if vertices is None:
                raise InvalidParameter("certify_uniqueness_by_lambda needs a vertex set or a certificate")
            lam = self.poincare.lambda_exact(graph, dec, vertices)
        else:
            vertices = cert.vertices
            lam = cert.lambda_exact

        omega_star = 1.0 / lam
        unique = omega < omega_star - self.cfg.tolerances.guard
        sample_set = VertexSet(members=range(graph.n)).difference(vertices)
        if unique:
            logger.info(f"Removing {len(vertices)} vertices leaves a uniqueness set for omega={omega} < {omega_star:.6g}")
        else:
            logger.warning(f"omega={omega} is not below 1/Lambda={omega_star:.6g}; no uniqueness claim")
        return UniquenessReport(
            omega=omega, unique=unique, omega_star=omega_star, sample_set=sample_set, removed=vertices
        )

    def certify_partition(
        self, graph: Graph, dec: Optional[SpectralDecomposition], omega: float, parts: Sequence[VertexSet]
    ) -> PartitionReport:
        if not parts:
            raise InvalidParameter("certify_partition needs at least one part")
        closures = [self.graphs.closure(graph, part) for part in parts]
        for i, j in combinations(range(len(parts)), 2):
            if not closures[i].isdisjoint(closures[j]):
                raise OverlappingClosures(f"closures of parts {i} and {j} intersect", parts=[i, j])

        guard = self.cfg.tolerances.guard
        details = []
        for part in parts:
            lambda1 = self.poincare.gamma_bound(graph, part).lambda1
            details.append(PartDetail(part=part, gamma_lambda1=lambda1, passes=lambda1 > omega + guard))

        removed = parts[0]
        for part in parts[1:]:
            removed = removed.union(part)
        unique = all(d.passes for d in details)
        logger.info(f"Partition of {len(parts)} parts at omega={omega}: unique={unique}")
        return PartitionReport(
            omega=omega,
            unique=unique,
            sample_set=VertexSet(members=range(graph.n)).difference(removed),
            details=details,
        )

    # ------------------------------------------------------------------ frames

    def frame_bounds(
        self,
        dec: SpectralDecomposition,
        omega: float,
        sample_set: VertexSet,
        graph: Optional[Graph] = None,
        normalization: Optional[FrameNormalization] = None,
    ) -> SamplingFrame:
        """Frame bounds of the sample evaluations at ``sample_set`` on PW_omega."""
        if sample_set.is_empty:
            raise InvalidParameter("frame_bounds needs a nonempty sample set")
        if sample_set.members[-1] >= dec.n:
            raise InvalidParameter(f"sample vertex {sample_set.members[-1]} out of range for n={dec.n}")
        normalization = normalization or self.cfg.sampling.frame_normalization

        members = list(sample_set.members)
        if normalization == "degree_normalized":
            if graph is None:
                raise InvalidParameter("degree_normalized frames need the host graph")
            weights = 1.0 / np.sqrt(graph.deg[members].astype(float))
        else:
            weights = np.ones(len(members))

        band = dec.band_indices(omega)
        basis = dec.eigenvectors[:, band]
        analysis = basis[members, :] * weights[:, None]
        operator_eigs = eigvalsh(analysis.T @ analysis)
        A, B = float(operator_eigs[0]), float(operator_eigs[-1])
        rank_tol = self.cfg.tolerances.rank_tol
        singular_values = svdvals(analysis)
        rank = int(np.sum(singular_values > rank_tol * max(singular_values[0], rank_tol)))
        is_frame = rank == band.size and A > rank_tol * B
        if not is_frame:
            A = 0.0
            logger.warning(f"{len(members)} samples do not determine PW_omega (dim {band.size}, rank {rank})")
        else:
            logger.info(f"Frame on PW_{omega}: dim={band.size}, |U|={len(members)}, A={A:.6g}, B={B:.6g}")

        return SamplingFrame(
            omega=omega,
            sample_set=sample_set,
            host=dec.host,
            normalization=normalization,
            band=tuple(int(j) for j in band),
            band_eigenvalues=dec.eigenvalues[band],
            analysis=analysis,
            basis=basis,
            weights=weights,
            A=A,
            B=B,
            rank=rank,
            is_frame=is_frame,
        )

    def dual_frame(self, frame: SamplingFrame, rng: Optional[np.random.Generator] = None) -> SamplingFrame:
        """Fill in the dual vectors and check the reconstruction identity on random PW_omega signals."""
        if not frame.is_frame:
            raise NotAFrame(f"sample set of size {len(frame.sample_set)} is not a frame for PW_{frame.omega}")

        coords = solve(frame.frame_operator, frame.analysis.T, assume_a="pos")
        dual = (frame.basis @ coords * frame.weights[None, :]).T

        rng = rng or np.random.default_rng(self.cfg.sampling.seed)
        members = list(frame.sample_set.members)
        signals = frame.basis @ rng.standard_normal((frame.dim, frame.dim))
        rebuilt = dual.T @ signals[members, :]
        scale = np.maximum(np.linalg.norm(signals, axis=0), 1e-300)
        error = float((np.abs(rebuilt - signals).max(axis=0) / scale).max())
        if error > self.cfg.tolerances.recon_tol:
            logger.warning(f"Dual frame reproduces PW_{frame.omega} only to {error:.2e}")
        return frame.model_copy(update={"dual": dual, "reproduction_error": error})

    def _sample_vector(self, frame: SamplingFrame, samples: Samples) -> np.ndarray:
        members = frame.sample_set.members
        if isinstance(samples, Mapping):
            missing = [u for u in members if u not in samples]
            extra = sorted(set(samples) - frame.sample_set.member_set)
            if missing or extra:
                raise InvalidParameter(f"samples do not match the sample set (missing {missing[:5]}, extra {extra[:5]})")
            return np.array([samples[u] for u in members], dtype=float)
        values = np.asarray(samples, dtype=float).reshape(-1)
        if values.shape[0] != len(members):
            raise InvalidParameter(f"got {values.shape[0]} samples for {len(members)} sample vertices")
        return values

    def _final_error(self, values: np.ndarray, truth: Optional[Signal]) -> Optional[float]:
        return float(np.linalg.norm(values - truth.values)) if truth is not None else None

    def reconstruct_direct(
        self, frame: SamplingFrame, samples: Samples, truth: Optional[Signal] = None
    ) -> Tuple[Signal, ReconstructionReport]:
        """f = sum_u f(u) Theta_u with the dual frame."""
        if frame.dual is None:
            frame = self.dual_frame(frame)
        values = frame.dual.T @ self._sample_vector(frame, samples)
        report = ReconstructionReport(
            method="direct", iterations=1, final_error=self._final_error(values, truth), converged=True
        )
        return Signal(values=values, host=frame.host), report

    def reconstruct_neumann(
        self,
        frame: SamplingFrame,
        samples: Samples,
        tol: Optional[float] = None,
        max_iter: Optional[int] = None,
        b_upper: Optional[float] = None,
        truth: Optional[Signal] = None,
    ) -> Tuple[Signal, ReconstructionReport]:
        """Neumann series for the inverse frame operator: x <- x + (g - F x) / B_upper."""
        if not frame.is_frame:
            raise NotAFrame(f"sample set of size {len(frame.sample_set)} is not a frame for PW_{frame.omega}")
        tol = self.cfg.tolerances.recon_tol if tol is None else tol
        max_iter = self.cfg.limits.neumann_max_iter if max_iter is None else max_iter
        b_upper = frame.B if b_upper is None else b_upper
        if tol < 0:
            raise InvalidParameter(f"tolerance must be nonnegative, got {tol}")
        if max_iter < 1:
            raise InvalidParameter(f"max_iter must be positive, got {max_iter}")
        if b_upper < frame.B:
            raise InvalidParameter(f"upper frame bound {b_upper} is below the measured B={frame.B}")

        operator = frame.frame_operator
        target = frame.analysis.T @ (frame.weights * self._sample_vector(frame, samples))
        step_size = 1.0 / b_upper
        contraction = 1.0 - frame.A / b_upper
        tail = contraction / (1.0 - contraction)

        x = np.zeros(frame.dim)
        history, bounds = [], []
        converged = False
        for _ in range(max_iter):
            step = step_size * (target - operator @ x)
            x = x + step
            step_norm = float(np.linalg.norm(step))
            history.append(step_norm)
            bounds.append(tail * step_norm)
            if bounds[-1] <= tol * max(float(np.linalg.norm(x)), 1.0):
                converged = True
                break

        values = frame.basis @ x
        report = ReconstructionReport(
            method="neumann",
            iterations=len(history),
            residual_history=history,
            error_bounds=bounds,
            contraction=contraction,
            final_error=self._final_error(values, truth),
            converged=converged,
        )
        if not converged:
            raise NoConvergence(
                f"Neumann series did not reach tol={tol} in {max_iter} iterations (ratio {contraction:.6f})",
                iterations=max_iter,
            )
        logger.info(f"Neumann reconstruction converged in {len(history)} iterations (ratio {contraction:.6f})")
        return Signal(values=values, host=frame.host), report

    def reconstruct_derivative(
        self, frame: SamplingFrame, s: float, samples: Samples, truth: Optional[Signal] = None
    ) -> Tuple[Signal, ReconstructionReport]:
        """Recover f in PW_omega from samples of (I + L)^s f on the sample set."""
        if not frame.is_frame:
            raise NotAFrame(f"sample set of size {len(frame.sample_set)} is not a frame for PW_{frame.omega}")
        multipliers = (1.0 + frame.band_eigenvalues) ** s
        analysis = frame.analysis * multipliers[None, :]
        target = analysis.T @ (frame.weights * self._sample_vector(frame, samples))
        coefficients = solve(analysis.T @ analysis, target, assume_a="pos")
        values = frame.basis @ coefficients
        condition = float(multipliers.max() / multipliers.min())
        report = ReconstructionReport(
            method="derivative",
            iterations=1,
            final_error=self._final_error(values, truth),
            converged=True,
            condition_number=condition,
        )
        logger.info(f"Derivative sampling with s={s}: condition number {condition:.6g}")
        return Signal(values=values, host=frame.host), report

    def sample_consistency(self, frame: SamplingFrame, samples: Samples) -> SampleConsistency:
        """Distance of a sample vector from the samples of PW_omega signals."""
        weighted = frame.weights * self._sample_vector(frame, samples)
        coefficients, *_ = lstsq(frame.analysis, weighted)
        distance = float(np.linalg.norm(weighted - frame.analysis @ coefficients))
        relative = distance / max(float(np.linalg.norm(weighted)), 1e-300)
        return SampleConsistency(
            distance=distance, relative=relative, consistent=relative <= self.cfg.tolerances.recon_tol
        )

    def restriction_rank(self, dec: SpectralDecomposition, omega: float, vertices: VertexSet) -> RestrictionReport:
        band = dec.band_indices(omega)
        if vertices.is_empty:
            return RestrictionReport(rank=0, set_size=0, dim=int(band.size), surjective_onto_L2S=True)
        rows = dec.eigenvectors[np.ix_(list(vertices.members), band)]
        singular_values = svdvals(rows)
        rank = int(np.sum(singular_values > self.cfg.tolerances.rank_tol))
        return RestrictionReport(
            rank=rank, set_size=len(vertices), dim=int(band.size), surjective_onto_L2S=rank == len(vertices)
        )

    # ------------------------------------------------------------------ 1-D layouts

    def line_partition(self, n: int, omega: float, cyclic: bool = True) -> LinePartition:
        """Blocks of the largest removable length laid along a path or cycle, two sample vertices apart."""
        size = self.poincare.nyquist_size_1d(omega).strict
        if size < 1:
            raise NoFeasibleSubset(f"no removable block exists for omega={omega}")
        gap = 2
        blocks = []
        start = gap
        # On a path the last block still needs a boundary vertex after it.
        limit = n if cyclic else n - 1
        while start + size <= limit:
            blocks.append(VertexSet(members=range(start, start + size)))
            start += size + gap
        if not blocks:
            raise NoFeasibleSubset(f"{'cycle' if cyclic else 'path'} of {n} vertices cannot hold a block of {size}")

        removed = blocks[0]
        for block in blocks[1:]:
            removed = removed.union(block)
        omega_star = 1.0 / self.poincare.lambda_closed_form_1d(size)
        logger.info(f"Laid {len(blocks)} blocks of {size} on n={n}; {n - len(removed)} samples remain")
        return LinePartition(
            n=n,
            omega=omega,
            cyclic=cyclic,
            block_size=size,
            gap=gap,
            blocks=blocks,
            sample_set=VertexSet(members=range(n)).difference(removed),
            omega_star=omega_star,
        )

    def samples_of(self, frame: SamplingFrame, f: Signal) -> Dict[int, float]:
        return {u: float(f.values[u]) for u in frame.sample_set.members}


sampling_service = SamplingService()
