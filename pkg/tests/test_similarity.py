"""Pooling, cosine, matrix construction, aggregation, decontext rescoring."""

import math

import numpy as np
import pytest

from spanalign.errors import InputValidationError, MissingPhrasesError
from spanalign.similarity import (
    EncodedSentence,
    TokenEmbeddings,
    align_and_score,
    build_similarity_matrix,
    cosine,
    pool_span,
    represent_spans,
    rescore_decontextualized,
    vanilla_score,
)
from spanalign.spans import build_pas_spans, build_spans, build_token_spans

from test_spans import cheese_record, simple_record


def oracle_cosine(u, v):
    """Independent recomputation with plain Python arithmetic."""
    dot = math.fsum(x * y for x, y in zip(u, v))
    nu = math.sqrt(math.fsum(x * x for x in u))
    nv = math.sqrt(math.fsum(y * y for y in v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return dot / (nu * nv)


def random_encoded(record, rng, with_sentence=True):
    tokens = TokenEmbeddings(rng.normal(size=(record.token_count, record.embedding_dim)))
    sentence = rng.normal(size=record.embedding_dim) if with_sentence else None
    return EncodedSentence(record=record, tokens=tokens, sentence_embedding=sentence)


class TestPoolSpan:
    def test_single_subtoken_unchanged(self):
        emb = TokenEmbeddings([[1.0, 2.0], [3.0, 4.0]])
        np.testing.assert_array_equal(pool_span(emb, [1]), [3.0, 4.0])

    def test_two_vector_mean(self):
        emb = TokenEmbeddings([[1.0, 0.0], [0.0, 1.0]])
        np.testing.assert_allclose(pool_span(emb, [0, 1]), [0.5, 0.5])

    def test_matches_independent_summation(self):
        rng = np.random.default_rng(0)
        emb = TokenEmbeddings(rng.normal(size=(12, 8)))
        indices = [2, 3, 5, 8, 11]
        pooled = pool_span(emb, indices)
        expected = [
            math.fsum(emb.vectors[i][d] for i in indices) / len(indices)
            for d in range(8)
        ]
        np.testing.assert_allclose(pooled, expected, atol=1e-12)

    def test_empty_rejected(self):
        emb = TokenEmbeddings([[1.0]])
        with pytest.raises(InputValidationError):
            pool_span(emb, [])

    def test_out_of_range_rejected(self):
        emb = TokenEmbeddings([[1.0]])
        with pytest.raises(InputValidationError):
            pool_span(emb, [1])


class TestCosine:
    def test_self_similarity_is_one(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            x = rng.normal(size=6)
            assert cosine(x, x) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_is_zero(self):
        assert cosine([1.0, 0.0], [0.0, 1.0]) == 0.0

    def test_hand_computed_value(self):
        # 32 / (sqrt(14) * sqrt(77))
        assert cosine([1.0, 2.0, 3.0], [4.0, 5.0, 6.0]) == pytest.approx(
            0.974631846, abs=1e-9
        )

    def test_zero_norm_convention(self):
        assert cosine([0.0, 0.0], [1.0, 2.0]) == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(InputValidationError):
            cosine([1.0], [1.0, 2.0])

    def test_clamped_to_unit_interval(self):
        x = np.full(4, 1e-180)
        assert -1.0 <= cosine(x, x) <= 1.0


class TestSimilarityMatrix:
    def test_identical_vectors_give_one(self):
        spans = build_token_spans(simple_record(["a"]))
        emb = TokenEmbeddings([[0.3, 0.4]])
        reps = represent_spans(spans, emb)
        matrix = build_similarity_matrix(reps, reps)
        np.testing.assert_allclose(matrix.entries, [[1.0]])

    def test_orthonormal_basis_pattern(self):
        spans = build_token_spans(simple_record(["a", "b"]))
        emb = TokenEmbeddings([[1.0, 0.0], [0.0, 1.0]])
        reps = represent_spans(spans, emb)
        matrix = build_similarity_matrix(reps, reps)
        np.testing.assert_allclose(matrix.entries, [[1.0, 0.0], [0.0, 1.0]])

    def test_matches_entrywise_oracle(self):
        rng = np.random.default_rng(2)
        rec_a = simple_record(list("abc"), rec_id="a", dim=8)
        rec_b = simple_record(list("de"), rec_id="b", dim=8)
        emb_a = TokenEmbeddings(rng.normal(size=(3, 8)))
        emb_b = TokenEmbeddings(rng.normal(size=(2, 8)))
        reps_a = represent_spans(build_token_spans(rec_a), emb_a)
        reps_b = represent_spans(build_token_spans(rec_b), emb_b)
        matrix = build_similarity_matrix(reps_a, reps_b)
        for m in range(3):
            for n in range(2):
                assert matrix.entries[m, n] == pytest.approx(
                    oracle_cosine(reps_a[m].vector, reps_b[n].vector), abs=1e-12
                )


class TestAlignAndScore:
    def test_self_pair_scores_one(self):
        record = cheese_record()
        rng = np.random.default_rng(3)
        emb = TokenEmbeddings(rng.normal(size=(record.token_count, 4)))
        spans = build_pas_spans(record)
        result = align_and_score(spans, emb, spans, emb)
        assert result.score == pytest.approx(1.0, abs=1e-6)

    def test_single_span_picks_best(self):
        rec_a = simple_record(["a"], rec_id="a")
        rec_b = simple_record(["x", "y", "z"], rec_id="b")
        emb_a = TokenEmbeddings([[1.0, 0.0, 0.0, 0.0]])
        emb_b = TokenEmbeddings(
            [[0.0, 1.0, 0.0, 0.0], [1.0, 1.0, 0.0, 0.0], [1.0, 0.1, 0.0, 0.0]]
        )
        result = align_and_score(
            build_token_spans(rec_a), emb_a, build_token_spans(rec_b), emb_b
        )
        assert len(result.aligned) == 1
        best = max(
            cosine(emb_a.vectors[0], emb_b.vectors[n]) for n in range(3)
        )
        assert result.score == pytest.approx(best, abs=1e-12)

    def test_score_is_mean_of_aligned(self):
        rng = np.random.default_rng(4)
        rec_a = simple_record(list("abcd"), rec_id="a", dim=6)
        rec_b = simple_record(list("wxyz"), rec_id="b", dim=6)
        emb_a = TokenEmbeddings(rng.normal(size=(4, 6)))
        emb_b = TokenEmbeddings(rng.normal(size=(4, 6)))
        result = align_and_score(
            build_token_spans(rec_a), emb_a, build_token_spans(rec_b), emb_b
        )
        values = [s for _, _, s in result.aligned]
        assert result.score == pytest.approx(sum(values) / len(values), abs=1e-9)
        assert min(values) <= result.score <= max(values)


class TestInvarianceProperties:
    def _random_pair(self, rng):
        rec_a = cheese_record()
        words_b = ["The", "play", "was", "being", "considered", "by", "James", "."]
        rec_b = simple_record(words_b, rec_id="b", dim=4)
        emb_a = TokenEmbeddings(rng.normal(size=(rec_a.token_count, 4)))
        emb_b = TokenEmbeddings(rng.normal(size=(rec_b.token_count, 4)))
        return rec_a, emb_a, rec_b, emb_b

    def test_symmetry(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            rec_a, emb_a, rec_b, emb_b = self._random_pair(rng)
            ab = align_and_score(
                build_pas_spans(rec_a), emb_a, build_pas_spans(rec_b), emb_b
            )
            ba = align_and_score(
                build_pas_spans(rec_b), emb_b, build_pas_spans(rec_a), emb_a
            )
            assert ab.score == pytest.approx(ba.score, abs=1e-9)

    def test_positive_scaling_invariance(self):
        rng = np.random.default_rng(6)
        rec_a, emb_a, rec_b, emb_b = self._random_pair(rng)
        scale = float(rng.uniform(0.1, 50.0))
        base = align_and_score(
            build_pas_spans(rec_a), emb_a, build_pas_spans(rec_b), emb_b
        )
        scaled = align_and_score(
            build_pas_spans(rec_a),
            TokenEmbeddings(emb_a.vectors * scale),
            build_pas_spans(rec_b),
            emb_b,
        )
        np.testing.assert_allclose(
            scaled.matrix.entries, base.matrix.entries, atol=1e-9
        )
        assert scaled.score == pytest.approx(base.score, abs=1e-9)

    def test_span_order_invariance(self):
        rng = np.random.default_rng(7)
        rec_a, emb_a, rec_b, emb_b = self._random_pair(rng)
        spans_a = build_pas_spans(rec_a)
        perm = rng.permutation(len(spans_a))
        shuffled = type(spans_a)(
            record_id=spans_a.record_id,
            spans=tuple(spans_a.spans[i] for i in perm),
            strategy=spans_a.strategy,
        )
        base = align_and_score(spans_a, emb_a, build_pas_spans(rec_b), emb_b)
        moved = align_and_score(shuffled, emb_a, build_pas_spans(rec_b), emb_b)
        assert moved.score == pytest.approx(base.score, abs=1e-9)


class TestVanilla:
    def test_self_is_one(self):
        record = simple_record(["hi"], rec_id="v")
        rng = np.random.default_rng(8)
        enc = random_encoded(record, rng)
        assert vanilla_score(enc, enc).score == pytest.approx(1.0, abs=1e-12)

    def test_zero_embedding_scores_zero(self):
        record = simple_record(["hi"], rec_id="v")
        emb = TokenEmbeddings(np.ones((1, 4)))
        zero = EncodedSentence(
            record=record, tokens=emb, sentence_embedding=np.zeros(4)
        )
        other = EncodedSentence(
            record=record, tokens=emb, sentence_embedding=np.ones(4)
        )
        assert vanilla_score(zero, other).score == 0.0

    def test_matches_oracle(self):
        rng = np.random.default_rng(9)
        record = simple_record(["hi"], rec_id="v")
        a = random_encoded(record, rng)
        b = random_encoded(record, rng)
        assert vanilla_score(a, b).score == pytest.approx(
            oracle_cosine(a.sentence_embedding, b.sentence_embedding), abs=1e-12
        )

    def test_missing_embedding_rejected(self):
        rng = np.random.default_rng(10)
        record = simple_record(["hi"], rec_id="v")
        enc = random_encoded(record, rng, with_sentence=False)
        with pytest.raises(InputValidationError, match="sentence embedding"):
            vanilla_score(enc, enc)


class TestDecontext:
    def _aligned_fixture(self, rng):
        rec_a = simple_record(["alpha", "beta"], rec_id="a", dim=4)
        rec_b = simple_record(["gamma", "delta"], rec_id="b", dim=4)
        emb_a = TokenEmbeddings(rng.normal(size=(2, 4)))
        emb_b = TokenEmbeddings(rng.normal(size=(2, 4)))
        spans_a = build_token_spans(rec_a)
        spans_b = build_token_spans(rec_b)
        result = align_and_score(spans_a, emb_a, spans_b, emb_b)
        return result, spans_a, spans_b

    def test_constant_store_scores_one(self):
        rng = np.random.default_rng(11)
        result, spans_a, spans_b = self._aligned_fixture(rng)
        store = {s: np.ones(3) for s in ("alpha", "beta", "gamma", "delta")}
        rescored = rescore_decontextualized(result, spans_a, spans_b, store)
        assert rescored.score == pytest.approx(1.0, abs=1e-12)

    def test_self_alignment_scores_one(self):
        rng = np.random.default_rng(12)
        record = cheese_record()
        emb = TokenEmbeddings(rng.normal(size=(record.token_count, 4)))
        spans = build_pas_spans(record)
        result = align_and_score(spans, emb, spans, emb)
        store = {s: rng.normal(size=5) for s in spans.surfaces()}
        rescored = rescore_decontextualized(result, spans, spans, store)
        assert rescored.score == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_pair_gives_half(self):
        # Two aligned pairs: one identical (cosine 1), one orthogonal
        # (cosine 0); the rescored mean is 0.5 by hand.
        rng = np.random.default_rng(13)
        result, spans_a, spans_b = self._aligned_fixture(rng)
        assert len(result.aligned) == 2
        (m0, n0, _), (m1, n1, _) = result.aligned
        store = {}
        shared = np.array([1.0, 1.0, 0.0])
        store[spans_a.spans[m0].surface] = shared
        store[spans_b.spans[n0].surface] = shared
        store[spans_a.spans[m1].surface] = np.array([1.0, 0.0, 0.0])
        store[spans_b.spans[n1].surface] = np.array([0.0, 1.0, 0.0])
        rescored = rescore_decontextualized(result, spans_a, spans_b, store)
        assert rescored.score == pytest.approx(0.5, abs=1e-12)

    def test_alignment_pairs_unchanged(self):
        rng = np.random.default_rng(14)
        result, spans_a, spans_b = self._aligned_fixture(rng)
        store = {s: rng.normal(size=3)
                 for s in spans_a.surfaces() + spans_b.surfaces()}
        rescored = rescore_decontextualized(result, spans_a, spans_b, store)
        assert [(m, n) for m, n, _ in rescored.alignment.aligned] == [
            (m, n) for m, n, _ in result.aligned
        ]
        np.testing.assert_array_equal(
            rescored.alignment.matrix.entries, result.matrix.entries
        )

    def test_missing_phrases_all_listed(self):
        rng = np.random.default_rng(15)
        result, spans_a, spans_b = self._aligned_fixture(rng)
        with pytest.raises(MissingPhrasesError) as info:
            rescore_decontextualized(result, spans_a, spans_b, {})
        assert set(info.value.surfaces) == set(
            spans_a.surfaces() + spans_b.surfaces()
        )
