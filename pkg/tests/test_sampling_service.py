import unittest

import numpy as np
import pytest

from pwgraph.models import GraphFactory, VertexSet
from pwgraph.services.error_handler import (
    InvalidParameter,
    NoConvergence,
    NoFeasibleSubset,
    NotAFrame,
    OverlappingClosures,
)
from pwgraph.services.sampling_service import SamplingService
from tests.graph_corpus import random_graph_and_set


def relative_error(estimate, truth):
    return np.linalg.norm(estimate - truth) / np.linalg.norm(truth)


class TestLinePartition:
    def setup_method(self):
        self.service = SamplingService()

    def test_hundred_cycle_layout(self):
        layout = self.service.line_partition(100, 0.002, cyclic=True)
        assert layout.block_size == 48
        assert [b.members for b in layout.blocks] == [tuple(range(2, 50)), tuple(range(52, 100))]
        assert layout.sample_set.members == (0, 1, 50, 51)
        assert layout.omega_star == pytest.approx(0.0020546, abs=1e-6)

    def test_path_keeps_a_trailing_boundary(self):
        layout = self.service.line_partition(100, 0.002, cyclic=False)
        assert len(layout.blocks) == 1
        assert 99 in layout.sample_set

    def test_no_feasible_block(self):
        with pytest.raises(NoFeasibleSubset):
            self.service.line_partition(20, 1.2)
        with pytest.raises(NoFeasibleSubset):
            self.service.line_partition(10, 0.002)


class TestUniqueness(unittest.TestCase):
    def setUp(self):
        self.service = SamplingService()
        self.graph = GraphFactory.cycle(100)
        self.dec = self.service.poincare.spectral.eigendecompose(self.graph)
        self.blocks = [VertexSet.of(range(2, 50)), VertexSet.of(range(52, 100))]

    def test_single_block_certificate(self):
        report = self.service.certify_uniqueness_by_lambda(self.graph, self.dec, 0.002, vertices=self.blocks[0])
        self.assertTrue(report.unique)
        self.assertGreater(report.omega_star, 0.002)
        self.assertEqual(len(report.sample_set), 52)

    def test_bandwidth_above_threshold_is_not_certified(self):
        report = self.service.certify_uniqueness_by_lambda(self.graph, self.dec, 0.5, vertices=self.blocks[0])
        self.assertFalse(report.unique)

    def test_requires_set_or_certificate(self):
        with self.assertRaises(InvalidParameter):
            self.service.certify_uniqueness_by_lambda(self.graph, self.dec, 0.002)

    def test_partition_of_cycle(self):
        report = self.service.certify_partition(self.graph, self.dec, 0.002, self.blocks)
        self.assertTrue(report.unique)
        self.assertEqual(report.sample_set.members, (0, 1, 50, 51))
        for detail in report.details:
            self.assertAlmostEqual(detail.gamma_lambda1, 0.0020546, places=6)
        self.assertFalse(self.service.certify_partition(self.graph, self.dec, 0.0021, self.blocks).unique)

    def test_partition_rejects_touching_blocks(self):
        with self.assertRaises(OverlappingClosures):
            self.service.certify_partition(
                self.graph, self.dec, 0.002, [VertexSet.of(range(2, 10)), VertexSet.of(range(11, 20))]
            )

    def test_certified_samples_determine_band_limited_signals(self):
        frame = self.service.frame_bounds(self.dec, 0.002, VertexSet.of([0, 1, 50, 51]))
        self.assertTrue(frame.is_frame)
        self.assertEqual(frame.dim, 3)
        self.assertEqual(frame.rank, 3)
        rank = self.service.restriction_rank(self.dec, 0.002, VertexSet.of([0, 1, 50, 51]))
        self.assertEqual(rank.rank, 3)


class TestFrames:
    def setup_method(self):
        self.service = SamplingService()
        self.graph = GraphFactory.cycle(6)
        self.dec = self.service.poincare.spectral.eigendecompose(self.graph)

    def test_all_vertices_give_a_tight_frame(self):
        frame = self.service.frame_bounds(self.dec, 0.6, VertexSet.of(range(6)))
        assert frame.dim == 3
        assert frame.A == pytest.approx(1.0)
        assert frame.B == pytest.approx(1.0)
        assert frame.C_omega == pytest.approx(1.0)
        assert frame.tightness == pytest.approx(1.0)

    def test_too_few_samples(self):
        frame = self.service.frame_bounds(self.dec, 0.6, VertexSet.of([0]))
        assert not frame.is_frame
        assert frame.A == 0.0
        assert frame.C_omega is None
        with pytest.raises(NotAFrame):
            self.service.dual_frame(frame)
        with pytest.raises(NotAFrame):
            self.service.reconstruct_neumann(frame, [1.0])

    def test_frame_bounds_bracket_sample_energy(self):
        rng = np.random.default_rng(6)
        frame = self.service.frame_bounds(self.dec, 0.6, VertexSet.of([0, 2, 3, 5]))
        for _ in range(20):
            f = self.service.poincare.spectral.random_pw_signal(self.dec, 0.6, rng)
            energy = float(np.sum(f.values[[0, 2, 3, 5]] ** 2))
            norm_sq = f.norm() ** 2
            assert frame.A * norm_sq <= energy * (1 + 1e-9)
            assert energy <= frame.B * norm_sq * (1 + 1e-9)

    def test_dual_frame_reproduces(self):
        frame = self.service.dual_frame(self.service.frame_bounds(self.dec, 0.6, VertexSet.of([0, 2, 3, 5])))
        assert frame.dual.shape == (4, 6)
        assert frame.reproduction_error <= 1e-8

    def test_degree_normalized_frame_consumes_raw_samples(self):
        rng = np.random.default_rng(7)
        graph = GraphFactory.path(12)
        dec = self.service.poincare.spectral.eigendecompose(graph)
        frame = self.service.frame_bounds(dec, 0.3, VertexSet.of([0, 3, 6, 9, 11]), graph, "degree_normalized")
        assert frame.weights[0] == pytest.approx(1.0)
        assert frame.weights[1] == pytest.approx(1 / np.sqrt(2))
        f = self.service.poincare.spectral.random_pw_signal(dec, 0.3, rng)
        rebuilt, _ = self.service.reconstruct_direct(frame, self.service.samples_of(frame, f))
        assert relative_error(rebuilt.values, f.values) <= 1e-8

    def test_degree_normalized_needs_graph(self):
        with pytest.raises(InvalidParameter):
            self.service.frame_bounds(self.dec, 0.6, VertexSet.of(range(6)), normalization="degree_normalized")

    def test_restriction_rank(self):
        full = self.service.restriction_rank(self.dec, 2.0, VertexSet.of([1, 4]))
        assert full.surjective_onto_L2S
        assert full.rank == 2
        narrow = self.service.restriction_rank(self.dec, 0.0, VertexSet.of([1, 4]))
        assert narrow.rank == 1
        assert not narrow.surjective_onto_L2S


class TestReconstruction(unittest.TestCase):
    def setUp(self):
        self.service = SamplingService()
        self.spectral = self.service.poincare.spectral
        self.graph = GraphFactory.cycle(100)
        self.dec = self.spectral.eigendecompose(self.graph)
        self.frame = self.service.frame_bounds(self.dec, 0.002, VertexSet.of([0, 1, 50, 51]))
        self.truth = self.spectral.random_pw_signal(self.dec, 0.002, np.random.default_rng(12))
        self.samples = self.service.samples_of(self.frame, self.truth)

    def test_neumann_recovers_hundred_cycle_signal(self):
        rebuilt, report = self.service.reconstruct_neumann(self.frame, self.samples, tol=1e-10, truth=self.truth)
        self.assertTrue(report.converged)
        self.assertLessEqual(relative_error(rebuilt.values, self.truth.values), 1e-8)
        self.assertEqual(len(report.residual_history), report.iterations)
        self.assertEqual(len(report.error_bounds), report.iterations)
        self.assertLess(report.contraction, 1.0)

    def test_direct_recovers_hundred_cycle_signal(self):
        rebuilt, report = self.service.reconstruct_direct(self.frame, self.samples, truth=self.truth)
        self.assertEqual(report.method, "direct")
        self.assertLessEqual(relative_error(rebuilt.values, self.truth.values), 1e-8)

    def test_samples_as_sequence(self):
        ordered = [self.samples[u] for u in self.frame.sample_set.members]
        rebuilt, _ = self.service.reconstruct_direct(self.frame, ordered)
        self.assertLessEqual(relative_error(rebuilt.values, self.truth.values), 1e-8)

    def test_mismatched_samples(self):
        with self.assertRaises(InvalidParameter):
            self.service.reconstruct_direct(self.frame, {0: 1.0, 1: 2.0})
        with self.assertRaises(InvalidParameter):
            self.service.reconstruct_direct(self.frame, [1.0, 2.0])

    def test_neumann_limits(self):
        with self.assertRaises(NoConvergence):
            self.service.reconstruct_neumann(self.frame, self.samples, tol=1e-10, max_iter=3)
        with self.assertRaises(InvalidParameter):
            self.service.reconstruct_neumann(self.frame, self.samples, b_upper=self.frame.B / 2)

    def test_explicit_zero_settings_are_not_defaults(self):
        for kwargs in ({"max_iter": 0}, {"b_upper": 0.0}, {"tol": -1.0}):
            with self.subTest(**kwargs):
                with self.assertRaises(InvalidParameter):
                    self.service.reconstruct_neumann(self.frame, self.samples, **kwargs)
        with self.assertRaises(NoConvergence):
            self.service.reconstruct_neumann(self.frame, self.samples, tol=0.0, max_iter=3)

    def test_larger_upper_bound_still_converges(self):
        rebuilt, report = self.service.reconstruct_neumann(
            self.frame, self.samples, tol=1e-10, b_upper=self.frame.B * 1.5
        )
        self.assertTrue(report.converged)
        self.assertLessEqual(relative_error(rebuilt.values, self.truth.values), 1e-7)

    def test_neumann_step_decay_follows_contraction(self):
        _, report = self.service.reconstruct_neumann(self.frame, self.samples, tol=1e-10)
        history = report.residual_history
        ratios = [later / earlier for earlier, later in zip(history[:-1], history[1:]) if earlier > 0]
        self.assertLessEqual(max(ratios), report.contraction + 0.05)
        self.assertAlmostEqual(report.contraction, 1 - self.frame.A / self.frame.B, places=12)

    def test_certified_sample_sets_are_frames(self):
        rng = np.random.default_rng(82)
        for graph, removed in random_graph_and_set(200, seed=81, max_fraction=0.5):
            dec = self.spectral.eigendecompose(graph)
            omega_star = 1.0 / self.service.poincare.lambda_exact(graph, dec, removed)
            omega = max(omega_star - 1e-9, 0.0) * float(rng.uniform(0.0, 1.0))
            report = self.service.certify_uniqueness_by_lambda(graph, dec, omega, vertices=removed)
            self.assertTrue(report.unique)
            frame = self.service.frame_bounds(dec, omega, report.sample_set)
            with self.subTest(n=graph.n, removed=removed.members, omega=omega):
                self.assertTrue(frame.is_frame)
                self.assertGreater(frame.A, 1e-10 * frame.B)

    def test_restriction_onto_small_sets_of_hundred_cycle(self):
        dec = self.spectral.eigendecompose(self.graph)
        dim = dec.pw_space(0.02).dim
        self.assertEqual(dim, 7)
        rng = np.random.default_rng(15)
        for _ in range(50):
            size = int(rng.integers(1, dim + 1))
            vertices = VertexSet(members=rng.choice(100, size=size, replace=False).tolist())
            self.assertTrue(self.service.restriction_rank(dec, 0.02, vertices).surjective_onto_L2S)

    def test_neumann_matches_direct_on_random_graphs(self):
        checked = 0
        for graph, removed in random_graph_and_set(100, seed=61, max_fraction=0.4):
            dec = self.spectral.eigendecompose(graph)
            uniqueness = self.service.certify_uniqueness_by_lambda(graph, dec, 0.0, vertices=removed)
            omega = 0.5 * uniqueness.omega_star
            frame = self.service.frame_bounds(dec, omega, uniqueness.sample_set)
            self.assertTrue(frame.is_frame)
            truth = self.spectral.random_pw_signal(dec, omega, np.random.default_rng(checked))
            samples = self.service.samples_of(frame, truth)
            neumann, _ = self.service.reconstruct_neumann(frame, samples, tol=1e-12)
            direct, _ = self.service.reconstruct_direct(frame, samples)
            with self.subTest(n=graph.n, removed=removed.members):
                self.assertLessEqual(relative_error(neumann.values, direct.values), 1e-8)
                self.assertLessEqual(relative_error(direct.values, truth.values), 1e-8)
            checked += 1
        self.assertEqual(checked, 100)

    def test_consistency(self):
        consistent = self.service.sample_consistency(self.frame, self.samples)
        self.assertTrue(consistent.consistent)
        noisy = {u: value + (0.5 if u == 50 else 0.0) for u, value in self.samples.items()}
        self.assertFalse(self.service.sample_consistency(self.frame, noisy).consistent)


class TestDerivativeSampling:
    def test_cycle_six_with_inverse_power(self):
        service = SamplingService()
        spectral = service.poincare.spectral
        graph = GraphFactory.cycle(6)
        dec = spectral.eigendecompose(graph)
        frame = service.frame_bounds(dec, 0.6, VertexSet.of([0, 2, 4]))
        truth = spectral.random_pw_signal(dec, 0.6, np.random.default_rng(9))
        smoothed = spectral.apply_power(dec, -1, truth, shift=1.0)
        rebuilt, report = service.reconstruct_derivative(frame, -1, service.samples_of(frame, smoothed), truth=truth)
        assert report.condition_number == pytest.approx(1.5)
        assert report.final_error <= 1e-8 * truth.norm()
        assert relative_error(rebuilt.values, truth.values) <= 1e-8
