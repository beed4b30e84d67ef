import json
import math
import unittest

import networkx as nx
import numpy as np
import pytest
from pydantic import ValidationError

from pwgraph.models import (
    BoundEntry,
    Graph,
    GraphFactory,
    LambdaCertificate,
    ModelSerializer,
    ModelValidator,
    ReconstructionReport,
    Signal,
    VertexSet,
)
from pwgraph.services.error_handler import ParseError


class TestGraphModel(unittest.TestCase):
    def test_rejects_asymmetric_adjacency(self):
        with self.assertRaises(ValidationError):
            Graph(n=2, adj=((1,), ()))

    def test_rejects_self_loop(self):
        with self.assertRaises(ValidationError):
            Graph(n=2, adj=((0, 1), (0,)))

    def test_rejects_out_of_range_neighbor(self):
        with self.assertRaises(ValidationError):
            Graph(n=2, adj=((2,), ()))

    def test_derived_properties(self):
        graph = GraphFactory.grid([3, 3])
        self.assertEqual(graph.max_degree, 4)
        self.assertEqual(graph.num_edges, 12)
        self.assertTrue(graph.is_connected)
        self.assertTrue(graph.has_edge(4, 1))
        self.assertFalse(graph.has_edge(0, 4))
        self.assertEqual(graph.neighbors(4), (1, 3, 5, 7))

    def test_fingerprint_identifies_edge_set(self):
        self.assertEqual(GraphFactory.cycle(5).fingerprint, GraphFactory.cycle(5).fingerprint)
        self.assertNotEqual(GraphFactory.cycle(5).fingerprint, GraphFactory.path(5).fingerprint)

    def test_component_count(self):
        graph = GraphFactory.from_edges(5, [(0, 1), (2, 3)])
        self.assertEqual(graph.component_count, 3)
        self.assertFalse(graph.is_connected)

    def test_networkx_interop(self):
        original = nx.petersen_graph()
        graph, index = GraphFactory.from_networkx(original)
        self.assertEqual(len(index), 10)
        self.assertTrue(nx.is_isomorphic(graph.to_networkx(), original))

    def test_relabels_sparse_node_names(self):
        graph, index = GraphFactory.from_networkx(nx.Graph([(10, 20), (20, 35)]))
        self.assertEqual(index, {10: 0, 20: 1, 35: 2})
        self.assertEqual(graph.edges, ((0, 1), (1, 2)))

    def test_torus_ids_follow_row_major_order(self):
        torus = GraphFactory.torus([3, 4])
        self.assertEqual(torus.neighbors(0), (1, 3, 4, 8))

    def test_block_on_torus_wraps(self):
        block = GraphFactory.block_on_torus([4, 4], [3, 3], [2, 2])
        self.assertEqual(block.members, (0, 3, 12, 15))


class TestVertexSet:
    def test_normalizes_members(self):
        assert VertexSet.of([5, 1, 5, 3]).members == (1, 3, 5)

    def test_negative_ids_rejected(self):
        with pytest.raises(ValidationError):
            VertexSet.of([-1, 2])

    def test_set_operations(self):
        a, b = VertexSet.of([1, 2, 3]), VertexSet.of([3, 4])
        assert a.union(b).members == (1, 2, 3, 4)
        assert a.difference(b).members == (1, 2)
        assert not a.isdisjoint(b)
        assert 2 in a and 4 not in a
        assert len(a) == 3
        assert VertexSet().is_empty


class TestSignal:
    def test_values_are_read_only_floats(self):
        signal = Signal(values=[1, 2, 2], host="abc")
        assert signal.values.dtype == np.float64
        assert signal.norm() == pytest.approx(3.0)
        with pytest.raises(ValueError):
            signal.values[0] = 5.0

    def test_with_values_keeps_host(self):
        assert Signal(values=[1.0], host="h").with_values(np.array([2.0])).host == "h"


class TestCertificateModel:
    def test_best_bound_skips_invalid_and_infinite(self):
        cert = LambdaCertificate(
            vertices=VertexSet.of([1]),
            lambda_exact=0.8,
            bounds=[
                BoundEntry(method="cheeger", value=math.inf, valid=False),
                BoundEntry(method="diamvol", value=16.0),
                BoundEntry(method="gamma_eigen", value=1.0),
                BoundEntry(method="witness_lemma", value=0.5, valid=False),
            ],
        )
        assert cert.best_bound().method == "gamma_eigen"
        assert [b.method for b in cert.valid_bounds()] == ["diamvol", "gamma_eigen"]
        assert cert.bound("cheeger").valid is False
        assert cert.bound("union") is None
        assert cert.omega_star == pytest.approx(1.25)

    def test_exact_constant_must_be_positive(self):
        with pytest.raises(ValidationError):
            LambdaCertificate(vertices=VertexSet.of([1]), lambda_exact=0.0)

    def test_unknown_method_rejected(self):
        with pytest.raises(ValidationError):
            BoundEntry(method="guesswork", value=1.0)


class TestValidators(unittest.TestCase):
    def test_generator_rules(self):
        accepted = [("path", [2]), ("cycle", [3]), ("grid", [2, 5]), ("torus", [3, 3, 3]), ("tree", [2, 1])]
        rejected = [("path", [1]), ("cycle", [2]), ("grid", [1, 4]), ("torus", [2]), ("tree", [1, 3]), ("tree", [2])]
        for kind, params in accepted:
            with self.subTest(kind=kind, params=params):
                self.assertTrue(ModelValidator.validate_generator(kind, params))
        for kind, params in rejected:
            with self.subTest(kind=kind, params=params):
                self.assertFalse(ModelValidator.validate_generator(kind, params))

    def test_bandwidths(self):
        self.assertTrue(ModelValidator.validate_bandwidth(0.0))
        self.assertFalse(ModelValidator.validate_bandwidth(float("nan")))
        self.assertFalse(ModelValidator.validate_open_bandwidth(2.0))
        self.assertTrue(ModelValidator.validate_open_bandwidth(1.999))

    def test_powers_of_two(self):
        self.assertEqual([k for k in range(10) if ModelValidator.validate_power_of_two(k)], [1, 2, 4, 8])

    def test_vertex_checks(self):
        graph = GraphFactory.path(3)
        self.assertTrue(ModelValidator.validate_vertex_set(graph, VertexSet()))
        self.assertFalse(ModelValidator.validate_vertex_set(graph, VertexSet.of([3])))
        self.assertFalse(ModelValidator.validate_vertex(graph, -1))


class TestSerializer:
    def test_vertex_set_formats(self):
        assert ModelSerializer.parse_vertex_set("[3, 1]").members == (1, 3)
        assert ModelSerializer.parse_vertex_set("4, 5 6\n7").members == (4, 5, 6, 7)
        with pytest.raises(ParseError):
            ModelSerializer.parse_vertex_set("1, two")

    def test_signal_text_keeps_full_precision(self):
        values = np.array([1 / 3, -2.5e-17, 7.0])
        for as_json in (True, False):
            parsed = ModelSerializer.parse_signal(ModelSerializer.serialize_signal(values, as_json=as_json))
            assert np.array_equal(parsed, values)

    def test_samples(self):
        text = ModelSerializer.serialize_samples({3: 0.5, 1: -1.0})
        assert json.loads(text) == {"1": -1.0, "3": 0.5}
        assert ModelSerializer.parse_samples(text) == {1: -1.0, 3: 0.5}
        with pytest.raises(ParseError):
            ModelSerializer.parse_samples("[0.5]")

    def test_certificate_drops_infinite_values(self):
        cert = LambdaCertificate(
            vertices=VertexSet.of([2]),
            lambda_exact=0.5,
            bounds=[BoundEntry(method="cheeger", value=math.inf, valid=False)],
        )
        data = ModelSerializer.serialize_certificate(cert)
        assert data["set"] == [2]
        assert data["omega_star"] == pytest.approx(2.0)
        assert data["bounds"] == [{"method": "cheeger", "value": None, "valid": False}]
        json.dumps(data)

    def test_long_histories_are_truncated(self):
        report = ReconstructionReport(
            method="neumann",
            iterations=100,
            residual_history=[float(i) for i in range(100)],
            error_bounds=[float(i) for i in range(100)],
            converged=True,
        )
        data = ModelSerializer.serialize_reconstruction(report)
        assert data["residual_history"] == [0.0, 1.0, 2.0, 3.0, 4.0, 95.0, 96.0, 97.0, 98.0, 99.0]
        assert data["error_bounds"] == [99.0]

    def test_edge_list(self):
        assert ModelSerializer.serialize_edge_list(GraphFactory.path(3)) == "0 1\n1 2\n"
