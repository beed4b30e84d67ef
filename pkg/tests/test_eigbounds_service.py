import math
import unittest

import numpy as np
import pytest

from pwgraph.models import GraphFactory, LambdaCertificate, VertexSet
from pwgraph.services.eigbounds_service import EigenBoundsService
from pwgraph.services.error_handler import EmptyBoundary, InvalidParameter, OutOfRange, TooLarge
from tests.graph_corpus import atlas_corpus, random_graph_and_set


class TestDirichlet(unittest.TestCase):
    def setUp(self):
        self.service = EigenBoundsService()

    def test_cycle_arc(self):
        value = self.service.dirichlet_lambda(GraphFactory.cycle(6), VertexSet.of([0, 1, 2]))
        self.assertAlmostEqual(value, 1 - math.cos(math.pi / 4), places=12)

    def test_dirichlet_below_poincare_threshold(self):
        for graph, vertices in random_graph_and_set(40, seed=71):
            with self.subTest(n=graph.n, vertices=vertices.members):
                value = self.service.dirichlet_lambda(graph, vertices)
                exact = self.service.poincare.lambda_exact(graph, None, vertices)
                self.assertLessEqual(value, 1.0 / exact * (1 + 1e-9))
                self.assertGreater(value, 0.0)

    def test_errors(self):
        with self.assertRaises(InvalidParameter):
            self.service.dirichlet_lambda(GraphFactory.path(3), VertexSet())
        with self.assertRaises(EmptyBoundary):
            self.service.dirichlet_lambda(GraphFactory.path(3), VertexSet.of(range(3)))


class TestCounting:
    def setup_method(self):
        self.service = EigenBoundsService()
        self.dec = self.service.spectral.eigendecompose(GraphFactory.cycle(100))

    def test_hundred_cycle_counts(self):
        report = self.service.count_eigs(self.dec, 0.002)
        assert (report.count_below, report.count_at_or_above) == (3, 97)
        assert self.service.count_eigs(self.dec, 0.008).count_below == 5
        assert self.service.count_eigs(self.dec, 0.0).count_below == 0

    def test_hundred_cycle_low_eigenvalues(self):
        assert abs(self.dec.eigenvalues[1] - 0.00197327157) <= 1e-9
        assert abs(self.dec.eigenvalues[3] - (1 - math.cos(4 * math.pi / 100))) <= 1e-9
        assert self.dec.eigenvalues[1] == pytest.approx(1 - math.cos(2 * math.pi / 100), abs=1e-12)

    def test_certificate_caps_low_eigenvalues(self):
        graph = GraphFactory.cycle(100)
        cert = self.service.poincare.certify(graph, self.dec, VertexSet.of(range(2, 50)))
        report = self.service.count_eigs(self.dec, 0.002, cert=cert)
        assert report.max_below_from_certificate == 52
        assert report.certificate_consistent

    def test_certificate_caps_counts_on_random_sets(self):
        for graph, vertices in random_graph_and_set(60, seed=91):
            dec = self.service.spectral.eigendecompose(graph)
            cert = LambdaCertificate(
                vertices=vertices, lambda_exact=self.service.poincare.lambda_exact(graph, dec, vertices)
            )
            for omega in (0.5 * cert.omega_star, cert.omega_star):
                report = self.service.count_eigs(dec, omega, cert=cert)
                below_star = int(np.sum(dec.eigenvalues < cert.omega_star - 1e-9))
                assert report.certificate_consistent
                assert report.max_below_from_certificate == graph.n - len(vertices)
                assert report.max_below_from_certificate >= below_star
                assert report.max_below_from_certificate >= report.count_below


class TestLowerBounds(unittest.TestCase):
    def setUp(self):
        self.service = EigenBoundsService()

    def test_path_three(self):
        graph = GraphFactory.path(3)
        dec = self.service.spectral.eigendecompose(graph)
        report = self.service.lambda_k_lower_bound(graph, dec, 2)
        self.assertAlmostEqual(report.bound, math.sqrt(2.0), places=12)
        self.assertEqual(report.best_set.members, (1,))
        self.assertAlmostEqual(report.lambda_k, 2.0, places=12)
        self.assertTrue(report.holds)
        self.assertEqual(report.subsets_examined, 3)

    def test_bound_holds_on_small_graph_atlas(self):
        for graph in atlas_corpus():
            dec = self.service.spectral.eigendecompose(graph)
            for k in range(1, graph.n):
                with self.subTest(n=graph.n, edges=graph.edges, k=k):
                    report = self.service.lambda_k_lower_bound(graph, dec, k)
                    self.assertTrue(report.holds)
                    self.assertLessEqual(report.bound, report.lambda_k + 1e-9)

    def test_candidate_subsets(self):
        graph = GraphFactory.cycle(20)
        dec = self.service.spectral.eigendecompose(graph)
        with self.assertRaises(TooLarge):
            self.service.lambda_k_lower_bound(graph, dec, 10)
        candidates = [VertexSet.of(range(10)), VertexSet.of(range(0, 20, 2))]
        report = self.service.lambda_k_lower_bound(graph, dec, 10, subsets=candidates)
        self.assertEqual(report.subsets_examined, 2)
        self.assertTrue(report.holds)
        with self.assertRaises(InvalidParameter):
            self.service.lambda_k_lower_bound(graph, dec, 10, subsets=[VertexSet.of([1, 2])])

    def test_k_out_of_range(self):
        graph = GraphFactory.path(4)
        dec = self.service.spectral.eigendecompose(graph)
        for k in (0, 4):
            with self.subTest(k=k):
                with self.assertRaises(OutOfRange):
                    self.service.lambda_k_lower_bound(graph, dec, k)


class TestPlanarBound:
    def test_value(self):
        assert EigenBoundsService().planar_bound(200, 4) == pytest.approx(12.0)

    def test_grid_lambda_one_below_planar_bound(self):
        service = EigenBoundsService()
        graph = GraphFactory.grid([15, 15])
        lambda1 = service.spectral.eigendecompose(graph).eigenvalues[1]
        bound = service.planar_bound(graph.n, graph.max_degree)
        assert bound == pytest.approx(48.0 / (math.sqrt(112.5) - 6.0))
        assert lambda1 <= bound

    def test_small_graphs_rejected(self):
        with pytest.raises(OutOfRange):
            EigenBoundsService().planar_bound(72, 4)

    def test_isoperimetric_statement(self):
        statement = EigenBoundsService().isoperimetric_statement(GraphFactory.path(5), VertexSet.of([1, 2]))
        assert statement["vol_S"] == 4
        assert statement["C_delta"] is None
