import numpy as np
from django.conf import settings
from django.test import SimpleTestCase

from extractive.corpus import Document, load_dataset
from extractive.encoder import TfIdfEncoder
from extractive.exceptions import AlreadyDampened, ConfigError, OutOfRange
from extractive.simgraph import SimilarityGraph, build_similarity_matrix, threshold_graph
from extractive.summarizer import (Method, SelectionState, SummarizerConfig, base_importance, dampen_selected,
                                   naive_multi_round, rank_pacsum, round_importance, run_multi_round,
                                   select_lead, select_multi_round, select_pacsum, select_textrank,
                                   textrank_scores, to_networkx)

WORKED = [
    [0, 0.9, 0.7, 0.1],
    [0, 0, 0.6, 0.3],
    [0, 0, 0, 0.2],
    [0, 0, 0, 0],
]


def worked_graph():
    return threshold_graph(SimilarityGraph.from_matrix(WORKED), 0.0)


def random_thresholded(rng):
    n = int(rng.integers(2, 31))
    graph = SimilarityGraph.from_matrix(rng.uniform(0, 1, size=(n, n)))
    return threshold_graph(graph, float(rng.uniform(0, 1)))


class ConfigTests(SimpleTestCase):
    def test_defaults(self):
        config = SummarizerConfig()
        self.assertEqual((config.k, config.a, config.beta1, config.beta2), (3, 0.2, 1.0, 0.0))
        self.assertIs(config.method, Method.MULTIROUND)

    def test_validation(self):
        with self.assertRaises(OutOfRange):
            SummarizerConfig(k=0)
        with self.assertRaises(OutOfRange):
            SummarizerConfig(a=1.2)
        with self.assertRaises(ConfigError):
            SummarizerConfig(method='bogus')
        with self.assertRaises(ConfigError):
            SummarizerConfig.from_dict({'gamma': 1.0})

    def test_negative_alphas_allowed(self):
        config = SummarizerConfig(alpha1=-1.5, alpha2=-0.5)
        self.assertEqual(config.alpha1, -1.5)

    def test_lead_alias(self):
        self.assertIs(SummarizerConfig(method='lead').method, Method.LEAD)


class BaseImportanceTests(SimpleTestCase):
    def test_hand_example(self):
        graph = SimilarityGraph.from_matrix([[0, 0.5, 0.2], [0, 0, 0.4], [0, 0, 0]])
        importance = base_importance(graph, 1.0, 0.3, range(3))
        np.testing.assert_allclose(importance.scores, [0.70, 0.55, 0.18], atol=1e-12)

    def test_zero_weights(self):
        importance = base_importance(worked_graph(), 0.0, 0.0, range(4))
        np.testing.assert_array_equal(importance.scores, 0.0)

    def test_singleton_set(self):
        importance = base_importance(worked_graph(), 1.0, 1.0, {2})
        self.assertEqual(importance.scores[2], 0.0)
        self.assertEqual(importance.candidates(), [2])


class DampenTests(SimpleTestCase):
    def test_identity_scaling(self):
        state = SelectionState.start(worked_graph())
        dampen_selected(state, 1, 1.0, 1.0)
        np.testing.assert_array_equal(state.working_sim, worked_graph().sim)

    def test_annihilation(self):
        state = SelectionState.start(worked_graph())
        dampen_selected(state, 1, 0.0, 0.0)
        self.assertEqual(state.working_sim[0, 1], 0.0)
        np.testing.assert_array_equal(state.working_sim[1, 2:], 0.0)
        self.assertEqual(state.working_sim[0, 2], 0.7)

    def test_forward_scaling(self):
        state = SelectionState.start(worked_graph())
        dampen_selected(state, 1, 0.5, 1.0)
        self.assertAlmostEqual(state.working_sim[1, 2], 0.30, places=12)

    def test_twice_is_an_error(self):
        state = SelectionState.start(worked_graph())
        dampen_selected(state, 2, 0.5, 0.5)
        with self.assertRaises(AlreadyDampened):
            dampen_selected(state, 2, 0.5, 0.5)


class WorkedExampleTests(SimpleTestCase):
    def test_full_exclusion(self):
        config = SummarizerConfig(k=2, beta1=1.0, beta2=1.0, alpha1=0.0, alpha2=0.0)
        state = run_multi_round(worked_graph(), config)
        first, second = state.trace
        np.testing.assert_allclose(first.scores, [1.7, 1.8, 1.5, 0.6], atol=1e-12)
        self.assertEqual(first.argmax, 1)
        self.assertEqual(second.candidates(), [0, 2, 3])
        np.testing.assert_allclose(second.scores[[0, 2, 3]], [0.8, 0.9, 0.3], atol=1e-12)
        self.assertEqual(state.summary(), [1, 2])
        self.assertEqual(state.selected, [1, 2])

    def test_reduction_point_matches_pacsum(self):
        config = SummarizerConfig(k=2, beta1=1.0, beta2=1.0, alpha1=1.0, alpha2=1.0)
        state = run_multi_round(worked_graph(), config)
        np.testing.assert_allclose(state.trace[1].scores[[0, 2, 3]], [1.7, 1.5, 0.6], atol=1e-12)
        self.assertEqual(state.summary(), [0, 1])
        self.assertEqual(select_pacsum(worked_graph(), config), [0, 1])

    def test_round_scores_agree_with_oracle(self):
        for alphas in ((0.0, 0.0), (1.0, 1.0), (0.3, -0.7)):
            config = SummarizerConfig(k=3, beta1=1.0, beta2=1.0, alpha1=alphas[0], alpha2=alphas[1])
            state = run_multi_round(worked_graph(), config)
            for importance, (best, scores) in zip(state.trace, naive_multi_round(worked_graph(), config)):
                self.assertEqual(importance.argmax, best)
                for index, score in scores.items():
                    self.assertAlmostEqual(importance.scores[index], score, places=12)

    def test_single_sentence(self):
        graph = SimilarityGraph.from_matrix([[0.0]])
        self.assertEqual(select_multi_round(graph, SummarizerConfig(k=3)), [0])

    def test_last_candidate_scores_only_dampened_edges(self):
        config = SummarizerConfig(k=4, beta1=1.0, beta2=1.0, alpha1=0.5, alpha2=0.25)
        state = run_multi_round(worked_graph(), config)
        last = state.trace[-1]
        (candidate,) = last.candidates()
        _, naive_scores = naive_multi_round(worked_graph(), config)[-1]
        self.assertAlmostEqual(last.scores[candidate], naive_scores[candidate], places=12)


class RandomGraphPropertyTests(SimpleTestCase):
    def test_reduction_to_single_round_ranking(self):
        rng = np.random.default_rng(20240517)
        for _ in range(1000):
            graph = random_thresholded(rng)
            beta1, beta2 = (float(x) for x in rng.uniform(0, 2, size=2))
            k = int(rng.integers(1, 6))
            config = SummarizerConfig(k=k, beta1=beta1, beta2=beta2, alpha1=beta2, alpha2=beta1)
            self.assertTrue(config.is_reduction_point)
            state = run_multi_round(graph, config)
            ranking, _ = rank_pacsum(graph, config)
            self.assertEqual(state.selected, ranking[:min(k, graph.n)])
            self.assertEqual(state.summary(), select_pacsum(graph, config))

    def test_incremental_matches_naive_oracle(self):
        rng = np.random.default_rng(77)
        for _ in range(1000):
            graph = random_thresholded(rng)
            beta1, beta2 = (float(x) for x in rng.uniform(0, 2, size=2))
            alpha1, alpha2 = (float(x) for x in rng.uniform(-2, 2, size=2))
            config = SummarizerConfig(k=int(rng.integers(1, 6)), beta1=beta1, beta2=beta2,
                                      alpha1=alpha1, alpha2=alpha2)
            state = run_multi_round(graph, config)
            rounds = naive_multi_round(graph, config)
            self.assertEqual(state.selected, [best for best, _ in rounds])
            for importance, (_, scores) in zip(state.trace, rounds):
                indices = sorted(scores)
                self.assertEqual(importance.candidates(), indices)
                np.testing.assert_allclose(importance.scores[indices], [scores[i] for i in indices],
                                           rtol=0, atol=1e-9)

    def test_exclusion_ignores_candidate_selected_edges(self):
        rng = np.random.default_rng(5)
        config = SummarizerConfig(beta1=1.0, beta2=0.5, alpha1=0.0, alpha2=0.0)
        for _ in range(200):
            n = int(rng.integers(3, 12))
            values = rng.uniform(0, 1, size=(n, n))
            s = int(rng.integers(0, n))
            perturbed = values.copy()
            perturbed[s, :] = rng.uniform(0, 1, size=n)
            perturbed[:, s] = rng.uniform(0, 1, size=n)
            scores = []
            for matrix in (values, perturbed):
                state = SelectionState.start(SimilarityGraph.from_matrix(matrix))
                state.pick(s)
                dampen_selected(state, s, config.alpha1, config.alpha2)
                scores.append(round_importance(state, config).scores)
            np.testing.assert_allclose(scores[0], scores[1], rtol=0, atol=1e-12)

    def test_lower_alpha_never_raises_scores(self):
        rng = np.random.default_rng(99)
        for _ in range(200):
            n = int(rng.integers(3, 12))
            graph = threshold_graph(SimilarityGraph.from_matrix(rng.uniform(0, 1, size=(n, n))), 0.3)
            s = int(rng.integers(0, n))
            high_alpha, low_alpha = sorted(rng.uniform(-2, 2, size=2), reverse=True)
            scores = {}
            for label, alpha1, alpha2 in (('high', high_alpha, 0.5), ('low', low_alpha, 0.5),
                                          ('high2', 0.5, high_alpha), ('low2', 0.5, low_alpha)):
                config = SummarizerConfig(beta1=1.0, beta2=0.5, alpha1=float(alpha1), alpha2=float(alpha2))
                state = SelectionState.start(graph)
                state.pick(s)
                dampen_selected(state, s, config.alpha1, config.alpha2)
                scores[label] = round_importance(state, config).scores
            mask = ~np.isnan(scores['high'])
            self.assertTrue(np.all(scores['low'][mask] <= scores['high'][mask] + 1e-12))
            self.assertTrue(np.all(scores['low2'][mask] <= scores['high2'][mask] + 1e-12))


class BaselineTests(SimpleTestCase):
    def test_lead(self):
        doc = Document.from_sentences("d", ["One.", "Two.", "Three.", "Four.", "Five."])
        self.assertEqual(select_lead(doc, 3), [0, 1, 2])
        self.assertEqual(select_lead(Document.from_sentences("d", ["One.", "Two."]), 3), [0, 1])
        self.assertEqual(select_lead(doc, 0), [])

    def test_lead_on_bundled_corpus(self):
        for doc in load_dataset(settings.DATA_DIR / 'mini_validation.jsonl'):
            self.assertEqual(select_lead(doc, 3), list(range(min(3, len(doc)))))

    def test_pacsum_degenerate_cases(self):
        graph = worked_graph()
        self.assertEqual(select_pacsum(graph, SummarizerConfig(k=10)), [0, 1, 2, 3])
        zero = SimilarityGraph.from_matrix(np.zeros((5, 5)))
        self.assertEqual(select_pacsum(zero, SummarizerConfig(k=2)), [0, 1])
        self.assertEqual(select_pacsum(graph, SummarizerConfig(k=2, beta1=1.0, beta2=1.0)), [0, 1])

    def test_textrank_uniform_complete_graph(self):
        graph = SimilarityGraph.from_matrix(np.full((4, 4), 0.5))
        result = textrank_scores(graph)
        np.testing.assert_allclose(result.ranks, 0.25, atol=1e-9)
        self.assertTrue(result.converged)
        self.assertEqual(select_textrank(graph, 0.85, 100, 1e-6, 2), [0, 1])

    def test_textrank_all_zero_graph(self):
        graph = SimilarityGraph.from_matrix(np.zeros((5, 5)))
        np.testing.assert_allclose(textrank_scores(graph).ranks, 0.2, atol=1e-12)
        self.assertEqual(select_textrank(graph, 0.85, 100, 1e-6, 3), [0, 1, 2])

    def test_textrank_star_graph(self):
        values = np.zeros((6, 6))
        values[0, 1:] = 1.0
        ranks = textrank_scores(SimilarityGraph.from_matrix(values)).ranks
        self.assertTrue(np.all(ranks[0] > ranks[1:]))
        self.assertAlmostEqual(float(ranks.sum()), 1.0, places=9)

    def test_textrank_converges_on_bundled_corpus(self):
        encoder = TfIdfEncoder()
        for doc in load_dataset(settings.DATA_DIR / 'mini_validation.jsonl'):
            graph = threshold_graph(build_similarity_matrix(encoder.encode(doc)), 0.2)
            result = textrank_scores(graph, 0.85, 100, 1e-6)
            self.assertTrue(result.converged, doc.id)

    def test_textrank_damping_range(self):
        with self.assertRaises(OutOfRange):
            textrank_scores(worked_graph(), damping=1.0)

    def test_only_positive_similarities_become_edges(self):
        values = np.array([[0.0, 0.4, -0.2], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
        nx_graph = to_networkx(SimilarityGraph.from_matrix(values))
        self.assertEqual(sorted(nx_graph.nodes), [0, 1, 2])
        self.assertEqual(list(nx_graph.edges(data='weight')), [(0, 1, 0.4)])
