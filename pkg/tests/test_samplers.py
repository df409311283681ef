"""Unit tests for the tree and spine-functional samplers.

Monte Carlo comparisons run at fixed seeds with generous chi-square
thresholds, so they are deterministic; the exact laws they compare against
come from the enumeration module, which has its own independent oracles.
"""

import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arbor.enumeration import (enumerate_trees, enumerate_trees_of_size,
                               exact_stopping_index_distribution,
                               exact_threshold_sampler_distribution)
from arbor.errors import (AttemptsExhausted, InvalidDistribution,
                          InvalidStatistics, ZeroPartition)
from arbor.rng import RngStream
from arbor.samplers import (OffspringDistribution, conditional_sum_table,
                            rotate_to_valid_word, sample_conditioned_bienayme,
                            sample_conditioned_bienayme_sequential,
                            sample_mark_height, sample_mark_height_batch,
                            sample_size_biased_order, sample_stopping_index,
                            sample_stopping_index_batch,
                            sample_stopping_index_poissonized,
                            sample_stopping_index_poissonized_batch,
                            sample_uniform_marked_tree, sample_uniform_tree)
from arbor.stats import chi_square_gof, chi_square_two_sample
from arbor.trees import DegreeStatistics, build_tree

STATS = DegreeStatistics({0: 3, 1: 1, 2: 2})  # n = 6, ten trees
P_FLOOR = 1e-3


def float_pmf(law):
    return {k: float(v) for k, v in law.pmf().items()}


class TestSizeBiasedOrder:
    def test_is_a_permutation_of_the_multiset(self):
        rng = RngStream(0, 0)
        for _ in range(20):
            order = sample_size_biased_order(STATS, rng)
            assert Counter(order) == Counter({0: 3, 1: 1, 2: 2})

    def test_first_draw_law(self):
        # P(first = d) = d n(d) / p1; here p1 = 5
        rng = RngStream(1, 0)
        firsts = [sample_size_biased_order(STATS, rng)[0] for _ in range(4000)]
        assert chi_square_gof(firsts, {1: 0.2, 2: 0.8}) > P_FLOOR

    def test_zeroes_fill_the_tail(self):
        rng = RngStream(2, 0)
        order = sample_size_biased_order(DegreeStatistics({0: 4, 3: 1}), rng)
        assert order == (3, 0, 0, 0, 0)


class TestMarkHeightSampler:
    def test_sequential_matches_exact_law(self):
        rng = RngStream(3, 0)
        draws = [sample_mark_height(STATS, rng) for _ in range(4000)]
        exact = float_pmf(exact_threshold_sampler_distribution(STATS))
        assert chi_square_gof(draws, exact) > P_FLOOR

    def test_batch_matches_exact_law(self):
        draws = sample_mark_height_batch(STATS, RngStream(4, 0), 30_000)
        exact = float_pmf(exact_threshold_sampler_distribution(STATS))
        assert chi_square_gof(draws, exact) > P_FLOOR

    def test_batch_chunking_is_seamless(self):
        # force several internal chunks and check the law still holds
        stats = DegreeStatistics({0: 2, 2: 1})
        draws = sample_mark_height_batch(stats, RngStream(5, 0), 10_000)
        exact = float_pmf(exact_threshold_sampler_distribution(stats))
        assert chi_square_gof(draws, exact) > P_FLOOR

    def test_single_node(self):
        assert sample_mark_height(DegreeStatistics({0: 1}), RngStream(0, 0)) == 0

    def test_rejects_forests(self):
        with pytest.raises(InvalidStatistics):
            sample_mark_height(DegreeStatistics({0: 2}), RngStream(0, 0))


class TestStoppingIndexSampler:
    def test_sequential_matches_exact_law(self):
        rng = RngStream(6, 0)
        draws = [sample_stopping_index(STATS, rng) for _ in range(4000)]
        exact = float_pmf(exact_stopping_index_distribution(STATS))
        assert chi_square_gof(draws, exact) > P_FLOOR

    def test_batch_matches_exact_law(self):
        draws = sample_stopping_index_batch(STATS, RngStream(7, 0), 30_000)
        exact = float_pmf(exact_stopping_index_distribution(STATS))
        assert chi_square_gof(draws, exact) > P_FLOOR

    def test_path_returns_sentinel(self):
        stats = DegreeStatistics({0: 1, 1: 4})
        assert sample_stopping_index(stats, RngStream(8, 0)) == 5
        batch = sample_stopping_index_batch(stats, RngStream(8, 1), 50)
        assert np.all(batch == 5)


class TestPoissonized:
    def test_run_transcript_invariants(self):
        for seed in range(30):
            run = sample_stopping_index_poissonized(STATS, RngStream(seed, 0))
            times = [t for t, _ in run.arrivals]
            assert times == sorted(times)
            assert all(1 <= j <= STATS.n for j in run.interval_ids)
            assert list(run.records) == sorted(set(run.records))
            assert run.records[0] == 1  # the first arrival is always a record
            assert run.sigma == 1 + len(run.records)
            if run.tau is not None:
                assert run.tau not in run.records
                assert run.sigma <= run.tau

    def test_path_statistics_have_no_repeat(self):
        stats = DegreeStatistics({0: 1, 1: 4})
        run = sample_stopping_index_poissonized(stats, RngStream(1, 0))
        assert run.tau is None
        assert run.sigma == 5

    def test_sigma_matches_exact_law(self):
        rng = RngStream(9, 0)
        draws = [sample_stopping_index_poissonized(STATS, rng).sigma
                 for _ in range(3000)]
        exact = float_pmf(exact_stopping_index_distribution(STATS))
        assert chi_square_gof(draws, exact) > P_FLOOR

    def test_batch_sigma_matches_exact_law(self):
        sigmas, taus = sample_stopping_index_poissonized_batch(
            STATS, RngStream(10, 0), 20_000)
        exact = float_pmf(exact_stopping_index_distribution(STATS))
        assert chi_square_gof(sigmas, exact) > P_FLOOR
        assert np.all(taus >= sigmas)

    def test_batch_path_taus_are_infinite(self):
        stats = DegreeStatistics({0: 1, 1: 3})
        sigmas, taus = sample_stopping_index_poissonized_batch(
            stats, RngStream(11, 0), 100)
        assert np.all(sigmas == 4)
        assert np.all(np.isinf(taus))

    def test_batch_agrees_with_interval_route(self):
        a = sample_stopping_index_batch(STATS, RngStream(12, 0), 20_000)
        b, _ = sample_stopping_index_poissonized_batch(STATS, RngStream(12, 1),
                                                       20_000)
        assert chi_square_two_sample(a, b) > P_FLOOR


internal_parts = st.lists(st.integers(1, 4), min_size=0, max_size=5)


@st.composite
def degree_arrangements(draw):
    parts = draw(internal_parts)
    degrees = list(parts) + [0] * (sum(parts) + 1 - len(parts))
    return draw(st.permutations(degrees))


class TestCycleRotation:
    @given(degree_arrangements())
    def test_rotation_is_valid_and_preserves_multiset(self, arrangement):
        word = rotate_to_valid_word(arrangement)
        assert Counter(word) == Counter(arrangement)
        assert build_tree(word).n == len(arrangement)

    @given(degree_arrangements())
    def test_valid_words_are_fixed_points(self, arrangement):
        word = rotate_to_valid_word(arrangement)
        assert rotate_to_valid_word(word) == word


class TestUniformTree:
    def test_uniform_over_the_class(self):
        words = [t.luka for t in enumerate_trees(STATS)]
        assert len(words) == 10
        rng = RngStream(13, 0)
        draws = []
        index = {w: i for i, w in enumerate(words)}
        for _ in range(4000):
            draws.append(index[sample_uniform_tree(STATS, rng).luka])
        assert chi_square_gof(draws, {i: 0.1 for i in range(10)}) > P_FLOOR

    def test_statistics_preserved(self):
        rng = RngStream(14, 0)
        for _ in range(25):
            tree = sample_uniform_tree(STATS, rng)
            assert tree.degree_statistics() == STATS

    def test_marked_variant(self):
        rng = RngStream(15, 0)
        marks = Counter()
        for _ in range(400):
            mt = sample_uniform_marked_tree(STATS, rng)
            assert 0 <= mt.mark < mt.tree.n
            marks[mt.mark] += 1
        assert len(marks) == STATS.n

    def test_deterministic_under_seed(self):
        a = [sample_uniform_tree(STATS, RngStream(16, i)).luka for i in range(5)]
        b = [sample_uniform_tree(STATS, RngStream(16, i)).luka for i in range(5)]
        assert a == b


class TestOffspringDistribution:
    def test_from_masses_validation(self):
        with pytest.raises(InvalidDistribution):
            OffspringDistribution.from_masses([0.5, -0.1, 0.6])
        with pytest.raises(InvalidDistribution):
            OffspringDistribution.from_masses([0.5, 0.4])
        with pytest.raises(InvalidDistribution):
            OffspringDistribution.from_masses([0.0, 1.0])
        with pytest.raises(InvalidDistribution):
            OffspringDistribution.from_masses({1: 2.0}, renormalize=True)

    def test_renormalize(self):
        mu = OffspringDistribution.from_masses({0: 2, 2: 2}, renormalize=True)
        assert mu.mass(0) == 0.5 and mu.mass(2) == 0.5

    def test_geometric(self):
        mu = OffspringDistribution.geometric(0.5)
        assert mu.mean() == pytest.approx(1.0)
        m = mu.masses_upto(60)
        assert m[0] == 0.5 and m[3] == pytest.approx(0.0625)
        assert m.sum() == pytest.approx(1.0)

    def test_parametric_families_are_proper(self):
        laws = [
            OffspringDistribution.power_law(2.5, 0.95),
            OffspringDistribution.stretched_exp(0.95),
            OffspringDistribution.anchored_heavy(18, 0.05, 40, 0.1),
            OffspringDistribution.near_path(0.2),
        ]
        for mu in laws:
            m = mu.masses_upto(30_000)
            assert np.all(m >= 0)
            assert m.sum() == pytest.approx(1.0, abs=1e-6)
            grid = np.arange(len(m), dtype=float)
            assert float(grid @ m) == pytest.approx(mu.mean(), abs=1e-2)
            assert mu.mean() <= 1.0 + 1e-12

    def test_power_law_needs_finite_mean(self):
        with pytest.raises(InvalidDistribution):
            OffspringDistribution.power_law(2.0, 0.5)

    def test_jsonable_round_trip(self):
        laws = [
            OffspringDistribution.from_masses({0: 0.25, 1: 0.5, 3: 0.25}),
            OffspringDistribution.geometric(0.6),
            OffspringDistribution.power_law(2.5, 0.95, start=2),
            OffspringDistribution.stretched_exp(0.9),
            OffspringDistribution.anchored_heavy(12, 0.04, 30, 0.2, alpha=2.7),
        ]
        for mu in laws:
            back = OffspringDistribution.from_jsonable(mu.to_jsonable())
            np.testing.assert_allclose(back.masses_upto(200),
                                       mu.masses_upto(200), atol=1e-12)
            assert back.mean() == pytest.approx(mu.mean())

    def test_from_jsonable_rejects_unknown(self):
        with pytest.raises(InvalidDistribution):
            OffspringDistribution.from_jsonable({"family": "zeta", "params": []})
        with pytest.raises(InvalidDistribution):
            OffspringDistribution.from_jsonable([1, 2])


class TestConditionedBienayme:
    def test_geometric_offspring_gives_uniform_trees(self):
        """prod mu(d_i) = p^n (1-p)^(n-1) for every n-node tree, so the
        conditioned law is uniform over all plane trees of that size."""
        mu = OffspringDistribution.geometric(0.5)
        words = [t.luka for t in enumerate_trees_of_size(5)]
        assert len(words) == 14
        index = {w: i for i, w in enumerate(words)}
        rng = RngStream(17, 0)
        draws = [index[sample_conditioned_bienayme(mu, 5, rng).luka]
                 for _ in range(5000)]
        assert chi_square_gof(draws, {i: 1 / 14 for i in range(14)}) > P_FLOOR

    def test_sequential_route_same_uniform_law(self):
        mu = OffspringDistribution.geometric(0.5)
        words = [t.luka for t in enumerate_trees_of_size(5)]
        index = {w: i for i, w in enumerate(words)}
        table = conditional_sum_table(mu, 5)
        rng = RngStream(18, 0)
        draws = [
            index[sample_conditioned_bienayme_sequential(mu, 5, rng, table).luka]
            for _ in range(5000)]
        assert chi_square_gof(draws, {i: 1 / 14 for i in range(14)}) > P_FLOOR

    def test_sequential_vs_rejection_two_sample(self):
        mu = OffspringDistribution.from_masses({0: 0.5, 1: 0.2, 3: 0.3})
        words = [t.luka for t in enumerate_trees_of_size(7)]
        index = {w: i for i, w in enumerate(words)}
        rng_a, rng_b = RngStream(19, 0), RngStream(19, 1)
        a = [index[sample_conditioned_bienayme(mu, 7, rng_a).luka]
             for _ in range(3000)]
        b = [index[sample_conditioned_bienayme_sequential(mu, 7, rng_b).luka]
             for _ in range(3000)]
        assert chi_square_two_sample(a, b) > P_FLOOR

    def test_size_is_exact(self):
        mu = OffspringDistribution.power_law(2.5, 0.95)
        rng = RngStream(20, 0)
        for n in (1, 2, 17):
            assert sample_conditioned_bienayme(mu, n, rng).n == n
            assert sample_conditioned_bienayme_sequential(mu, n, rng).n == n

    def test_unreachable_size_raises(self):
        # support {0, 2}: degree sums are even, but a 4-node tree needs 3
        mu = OffspringDistribution.from_masses({0: 0.5, 2: 0.5})
        with pytest.raises(ZeroPartition):
            sample_conditioned_bienayme_sequential(mu, 4, RngStream(0, 0))
        with pytest.raises(AttemptsExhausted):
            sample_conditioned_bienayme(mu, 4, RngStream(0, 0),
                                        max_attempts=500)

    def test_single_node(self):
        mu = OffspringDistribution.geometric(0.9)
        assert sample_conditioned_bienayme_sequential(mu, 1,
                                                      RngStream(0, 0)).luka == (0,)


class TestConditionalSumTable:
    def test_matches_exact_convolution(self):
        """Float table rows equal the exact truncated convolution, computed
        in rationals: clipping cannot leak mass back below the cut because
        degree draws are nonnegative."""
        mu = OffspringDistribution.from_masses({0: 0.5, 1: 0.25, 2: 0.25})
        n = 9
        table = conditional_sum_table(mu, n)
        base = [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)]
        row = [Fraction(1)] + [Fraction(0)] * (n - 1)
        for m in range(1, n):
            nxt = [Fraction(0)] * n
            for s, mass in enumerate(row):
                if mass == 0:
                    continue
                for d, q in enumerate(base):
                    if s + d < n:
                        nxt[s + d] += mass * q
            row = nxt
            total = sum(row)
            expect = [float(x / total) for x in row]
            np.testing.assert_allclose(table[m], expect, atol=1e-13)

    def test_truncation_drops_unreachable_degrees(self):
        # degrees >= n cannot occur in an n-node tree; after truncation the
        # remaining law here is the point mass at zero
        mu = OffspringDistribution.from_masses({0: 0.01, 60: 0.99})
        table = conditional_sum_table(mu, 5)
        assert table[1][0] == 1.0
        assert table[4][0] == 1.0
