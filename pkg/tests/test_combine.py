import numpy as np
import pytest

from metaemb import (
    EmbeddingSet,
    MetaRecipe,
    average,
    combine_k,
    concatenate,
    intersect,
    multiscale_unit_set,
    random_unit_set,
    spearman,
)
from conftest import draw_pairs, pair_distances


class TestConcatenate:
    def test_stacking_order(self):
        left = EmbeddingSet("L", ["u"], np.array([[1.0, 2.0]]))
        right = EmbeddingSet("R", ["u"], np.array([[3.0]]))
        out = concatenate(intersect(left, right))
        np.testing.assert_array_equal(out.row("u"), [3.0, 1.0, 2.0])
        assert out.dim == 3
        assert out.name == "L+R"

    def test_dims_add(self, make_set):
        a = make_set("a", 50, 30, seed=0)
        b = make_set("b", 50, 10, seed=1)
        assert concatenate(intersect(a, b)).dim == 40

    def test_distance_identity_on_random_pairs(self, make_set):
        a = make_set("a", 200, 25, seed=2)
        b = make_set("b", 200, 9, seed=3)
        pair = intersect(a, b)
        out = concatenate(pair)
        rng = np.random.default_rng(4)
        first, second = draw_pairs(rng, len(pair), 100)
        dist_out = pair_distances(out.vectors, first, second)
        dist_left = pair_distances(pair.left.vectors, first, second)
        dist_right = pair_distances(pair.right.vectors, first, second)
        np.testing.assert_allclose(dist_out, np.sqrt(dist_left**2 + dist_right**2), rtol=1e-10)

    def test_empty_pair_rejected(self):
        a = EmbeddingSet("a", ["x"], np.ones((1, 2)))
        b = EmbeddingSet("b", ["y"], np.ones((1, 2)))
        with pytest.raises(ValueError, match="empty"):
            concatenate(intersect(a, b))


class TestAverage:
    def test_self_average_is_identity(self, make_set):
        es = make_set("s", 30, 8, seed=5)
        out = average(intersect(es, es))
        np.testing.assert_array_equal(out.vectors, es.vectors)

    def test_simple_mean(self):
        left = EmbeddingSet("L", ["u"], np.array([[1.0, 0.0]]))
        right = EmbeddingSet("R", ["u"], np.array([[0.0, 1.0]]))
        out = average(intersect(left, right))
        np.testing.assert_array_equal(out.row("u"), [0.5, 0.5])

    def test_dimension_mismatch_needs_padding(self, make_set):
        a = make_set("a", 10, 5, seed=6)
        b = make_set("b", 10, 3, seed=7)
        with pytest.raises(ValueError, match="pad_to_common_dim"):
            average(intersect(a, b))

    def test_padded_average_divides_by_two(self):
        left = EmbeddingSet("L", ["u"], np.array([[2.0, 4.0]]))
        right = EmbeddingSet("R", ["u"], np.array([[6.0]]))
        out = average(intersect(left, right), pad_to_common_dim=True)
        np.testing.assert_array_equal(out.row("u"), [4.0, 2.0])
        assert out.dim == 2

    def test_pad_side_honoured(self):
        left = EmbeddingSet("L", ["u"], np.array([[2.0, 4.0]]))
        right = EmbeddingSet("R", ["u"], np.array([[6.0]]))
        out = average(intersect(left, right), pad_to_common_dim=True, pad_sides=("rear", "front"))
        np.testing.assert_array_equal(out.row("u"), [1.0, 5.0])

    def test_cosine_law_identity_on_random_pairs(self, make_set):
        a = make_set("a", 200, 25, seed=8)
        b = make_set("b", 200, 9, seed=9)
        pair = intersect(a, b)
        out = average(pair, pad_to_common_dim=True)
        rng = np.random.default_rng(10)
        first, second = draw_pairs(rng, len(pair), 100)

        left = pair.left.vectors
        right = np.hstack([pair.right.vectors, np.zeros((len(pair), 25 - 9))])
        diff_left = left[first] - left[second]
        diff_right = right[second] - right[first]
        e1 = np.linalg.norm(diff_left, axis=1)
        e2 = np.linalg.norm(diff_right, axis=1)
        cos_theta = np.einsum("ij,ij->i", diff_left, diff_right) / (e1 * e2)
        predicted = 0.5 * np.sqrt(e1**2 + e2**2 - 2 * e1 * e2 * cos_theta)

        dist_out = pair_distances(out.vectors, first, second)
        np.testing.assert_allclose(dist_out, predicted, rtol=1e-10)

    def test_post_normalize(self, make_set):
        a = make_set("a", 12, 6, seed=11)
        b = make_set("b", 12, 6, seed=12)
        out = average(intersect(a, b), post_normalize=True)
        np.testing.assert_allclose(np.linalg.norm(out.vectors, axis=1), 1.0, atol=1e-12)


class TestMetaRecipe:
    def test_requires_two_sources(self):
        with pytest.raises(ValueError, match="two sources"):
            MetaRecipe("average", ("only",))

    def test_rejects_duplicates(self):
        with pytest.raises(ValueError, match="distinct"):
            MetaRecipe("average", ("a", "a"))

    def test_rejects_unknown_method(self):
        with pytest.raises(ValueError, match="method"):
            MetaRecipe("subtract", ("a", "b"))

    def test_aliases(self):
        assert MetaRecipe("avg", ("a", "b")).method == "average"
        assert MetaRecipe("concat", ("a", "b")).method == "concatenate"

    def test_pad_sides_length(self):
        with pytest.raises(ValueError, match="per source"):
            MetaRecipe("avg", ("a", "b"), pad_sides=("rear",))


class TestCombineK:
    def test_k2_matches_pairwise(self, make_set):
        a = make_set("a", 40, 6, seed=13)
        b = make_set("b", 40, 4, seed=14)
        pair = intersect(a, b)
        conc = combine_k([a, b], MetaRecipe("concat", ("a", "b")))
        np.testing.assert_array_equal(conc.vectors, concatenate(pair).vectors)
        avg = combine_k([a, b], MetaRecipe("avg", ("a", "b"), pad_to_common_dim=True))
        np.testing.assert_array_equal(
            avg.vectors, average(pair, pad_to_common_dim=True).vectors
        )

    def test_k3_average_of_identical_sets(self, make_set):
        base = make_set("x", 20, 5, seed=15)
        copies = [EmbeddingSet(n, base.vocab, base.vectors) for n in ("x", "y", "z")]
        out = combine_k(copies, MetaRecipe("avg", ("x", "y", "z")))
        np.testing.assert_allclose(out.vectors, base.vectors, atol=1e-15)

    def test_k3_concat_dims(self):
        sets = [
            EmbeddingSet(n, ["t"], np.ones((1, d)) * i)
            for i, (n, d) in enumerate([("a", 2), ("b", 3), ("c", 4)])
        ]
        out = combine_k(sets, MetaRecipe("concat", ("a", "b", "c")))
        assert out.dim == 9
        # blocks stack last recipe source first
        np.testing.assert_array_equal(out.row("t"), [2, 2, 2, 2, 1, 1, 1, 0, 0])

    def test_k3_average_divides_by_k(self):
        sets = [
            EmbeddingSet("a", ["t"], np.array([[3.0, 0.0]])),
            EmbeddingSet("b", ["t"], np.array([[0.0, 3.0]])),
            EmbeddingSet("c", ["t"], np.array([[3.0, 3.0]])),
        ]
        out = combine_k(sets, MetaRecipe("avg", ("a", "b", "c")))
        np.testing.assert_array_equal(out.row("t"), [2.0, 2.0])

    def test_vocabulary_is_global_intersection(self):
        a = EmbeddingSet("a", ["p", "q", "r"], np.ones((3, 2)))
        b = EmbeddingSet("b", ["q", "r", "s"], np.ones((3, 2)))
        c = EmbeddingSet("c", ["r", "q"], np.ones((2, 2)))
        out = combine_k([a, b, c], MetaRecipe("avg", ("a", "b", "c")))
        assert out.vocab == ["q", "r"]

    def test_unknown_source_rejected(self, make_set):
        a = make_set("a", 5, 2, seed=0)
        with pytest.raises(ValueError, match="unknown"):
            combine_k([a], MetaRecipe("avg", ("a", "missing")))

    def test_empty_global_intersection_rejected(self):
        a = EmbeddingSet("a", ["p"], np.ones((1, 2)))
        b = EmbeddingSet("b", ["q"], np.ones((1, 2)))
        with pytest.raises(ValueError, match="no vocabulary"):
            combine_k([a, b], MetaRecipe("avg", ("a", "b")))


class TestStatisticalProperties:
    def test_average_to_concat_ratio_near_half(self):
        # independent isotropic unit-vector sets: difference-vector angles
        # concentrate at pi/2, so averaged distances track half the
        # concatenated ones on average
        left = random_unit_set("L", 2000, 300, seed=16)
        right = random_unit_set("R", 2000, 300, seed=17)
        pair = intersect(left, right)
        avg = average(pair)
        conc = concatenate(pair)
        rng = np.random.default_rng(18)
        first, second = draw_pairs(rng, len(pair), 20_000)
        ratio = pair_distances(avg.vectors, first, second) / pair_distances(
            conc.vectors, first, second
        )
        assert abs(ratio.mean() - 0.5) < 0.01

    def test_rank_correlation_on_multiscale_pair(self):
        # heterogeneous pair distances: ranking survives the combination
        left = multiscale_unit_set("L", 4000, 300, seed=19)
        right = multiscale_unit_set("R", 4000, 300, seed=20)
        pair = intersect(left, right)
        avg = average(pair)
        conc = concatenate(pair)
        rng = np.random.default_rng(21)
        first, second = draw_pairs(rng, len(pair), 10_000)
        rho = spearman(
            pair_distances(avg.vectors, first, second),
            pair_distances(conc.vectors, first, second),
        )
        assert rho > 0.99
