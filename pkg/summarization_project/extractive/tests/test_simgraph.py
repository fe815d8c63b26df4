import io

import numpy as np
from django.test import SimpleTestCase

from extractive.exceptions import DimensionMismatch, OutOfRange, TooFewSentences
from extractive.simgraph import (SimilarityGraph, ThresholdSpec, apply_threshold, array_cache,
                                 build_similarity_matrix, compute_threshold, dump_matrix_tsv, threshold_graph)


def three_pairs():
    return SimilarityGraph.from_matrix([[0, 0.1, 0.5], [0, 0, 0.9], [0, 0, 0]])


def random_graph(rng, n):
    return SimilarityGraph.from_matrix(rng.normal(size=(n, n)))


class BuildSimilarityMatrixTests(SimpleTestCase):
    def test_orthogonal_and_unit_vectors(self):
        graph = build_similarity_matrix([[1, 0], [0, 1], [1, 1]])
        self.assertEqual(graph.edge(0, 1), 0.0)
        self.assertEqual(graph.edge(0, 2), 1.0)
        self.assertEqual(graph.edge(1, 2), 1.0)
        self.assertEqual((graph.s_min, graph.s_max), (0.0, 1.0))

    def test_repeated_vector(self):
        graph = build_similarity_matrix([[0.5, 2.0]] * 4)
        np.testing.assert_allclose(graph.upper(), 4.25)

    def test_hand_inner_product(self):
        graph = build_similarity_matrix([[0.5, 0.5], [0.2, 0.4]])
        self.assertAlmostEqual(graph.edge(0, 1), 0.30, places=12)
        self.assertAlmostEqual(graph.edge(1, 0), 0.30, places=12)

    def test_only_upper_triangle_is_stored(self):
        rng = np.random.default_rng(7)
        graph = build_similarity_matrix(rng.normal(size=(6, 3)))
        np.testing.assert_array_equal(np.tril(graph.sim), 0.0)
        self.assertFalse(graph.sim.flags.writeable)

    def test_too_few_sentences(self):
        with self.assertRaises(TooFewSentences):
            build_similarity_matrix([[1.0, 2.0]])

    def test_ragged_vectors(self):
        with self.assertRaises(DimensionMismatch):
            build_similarity_matrix([[1.0, 2.0], [1.0]])

    def test_cosine_metric(self):
        graph = build_similarity_matrix([[2, 0], [3, 0], [0, 5]], metric='cosine')
        self.assertAlmostEqual(graph.edge(0, 1), 1.0, places=12)
        self.assertEqual(graph.edge(0, 2), 0.0)
        with self.assertRaises(OutOfRange):
            build_similarity_matrix([[1.0], [2.0]], metric='euclid')


class ThresholdTests(SimpleTestCase):
    def test_midpoint(self):
        spec = compute_threshold(three_pairs(), 0.5)
        self.assertAlmostEqual(spec.th, 0.5, places=12)

    def test_endpoints(self):
        graph = three_pairs()
        self.assertEqual(compute_threshold(graph, 0.0).th, 0.1)
        self.assertEqual(compute_threshold(graph, 1.0).th, 0.9)
        with self.assertRaises(OutOfRange):
            compute_threshold(graph, 1.5)

    def test_values_at_threshold_survive(self):
        thresholded = apply_threshold(three_pairs(), ThresholdSpec(a=0.5, th=0.5))
        np.testing.assert_array_equal(thresholded.upper(), [0.0, 0.5, 0.9])
        self.assertTrue(thresholded.is_thresholded)
        self.assertEqual((thresholded.s_min, thresholded.s_max), (0.1, 0.9))

    def test_boundaries_on_random_matrices(self):
        rng = np.random.default_rng(2024)
        for _ in range(100):
            graph = random_graph(rng, int(rng.integers(2, 15)))
            np.testing.assert_array_equal(threshold_graph(graph, 0.0).sim, graph.sim)
            top = threshold_graph(graph, 1.0).upper()
            upper = graph.upper()
            np.testing.assert_array_equal(top[upper < graph.s_max], 0.0)
            np.testing.assert_array_equal(top[upper == graph.s_max], graph.s_max)

    def test_idempotent_and_monotone(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            graph = random_graph(rng, int(rng.integers(2, 15)))
            a_low, a_high = np.sort(rng.uniform(0, 1, size=2))
            once = threshold_graph(graph, a_low)
            twice = threshold_graph(once, a_low)
            np.testing.assert_array_equal(once.sim, twice.sim)

            spec_low = compute_threshold(graph, a_low)
            spec_high = compute_threshold(graph, a_high)
            survivors_low = graph.sim >= spec_low.th
            survivors_high = graph.sim >= spec_high.th
            self.assertTrue(np.all(survivors_low[survivors_high]))


class DumpAndCacheTests(SimpleTestCase):
    def test_dump_matrix_tsv(self):
        stream = io.StringIO()
        dump_matrix_tsv(three_pairs(), stream)
        self.assertEqual(stream.getvalue(), "i\tj\tvalue\n0\t1\t0.1\n0\t2\t0.5\n1\t2\t0.9\n")

    def test_array_cache_hits_on_equal_arrays(self):
        calls = []

        @array_cache(maxsize=2)
        def total(array, scale):
            calls.append(scale)
            return float(array.sum()) * scale

        self.assertEqual(total(np.ones(3), 2), 6.0)
        self.assertEqual(total(np.ones(3), 2), 6.0)
        self.assertEqual(total(np.ones(3), 3), 9.0)
        self.assertEqual(calls, [2, 3])
        self.assertEqual(total.cache_info()['hits'], 1)
        total.cache_clear()
        self.assertEqual(total.cache_info()['currsize'], 0)

    def test_single_sentence_graph(self):
        graph = SimilarityGraph.from_matrix([[1.0]])
        self.assertEqual(graph.n, 1)
        self.assertEqual((graph.s_min, graph.s_max), (0.0, 0.0))
