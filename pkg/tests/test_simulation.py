"""Dataset generation, splits, p-values, and e-values."""

import itertools
import math

import numpy as np
import pytest
from scipy.stats import chisquare, kstest

from coxsplit import (
    Dataset,
    ExperimentConfig,
    InfeasibilityError,
    SplitAssignment,
    ValidationError,
    average_evalues,
    data_split_pvalue,
    enumerate_all_splits,
    evaluate_split,
    evalue,
    exact_pvalue,
    generate_dataset,
    normal_cdf,
    random_split,
)


def config(**kwargs):
    defaults = dict(m=2, r=100, split_fraction=0.4, delta=2.0, seed=2)
    defaults.update(kwargs)
    return ExperimentConfig(**defaults)


class TestExperimentConfig:
    def test_derived_quantities(self):
        cfg = config(delta=1.0)
        assert cfg.mu == pytest.approx(0.1, abs=1e-15)
        assert cfg.first_portion_size == 40
        assert cfg.second_portion_size == 60
        assert cfg.sigma == 1.0 / math.sqrt(0.6 * 100)

    def test_fractional_portion_rejected(self):
        with pytest.raises(ValidationError, match="whole number"):
            config(split_fraction=0.375)

    def test_basic_validation(self):
        with pytest.raises(ValidationError):
            config(m=0)
        with pytest.raises(ValidationError):
            config(delta=-1.0)
        with pytest.raises(ValidationError):
            config(sigma0=0.0)
        with pytest.raises(ValidationError):
            config(seed=-1)
        with pytest.raises(ValidationError):
            config(n_splits=0)


class TestGenerateDataset:
    def test_shape_and_metadata(self):
        cfg = config()
        ds = generate_dataset(cfg, 0)
        assert ds.samples.shape == (2, 100)
        assert ds.true_mean_index == 0

    def test_deterministic(self):
        cfg = config()
        a = generate_dataset(cfg, 3)
        b = generate_dataset(cfg, 3)
        np.testing.assert_array_equal(a.samples, b.samples)

    def test_distinct_across_indices(self):
        cfg = config()
        a = generate_dataset(cfg, 0)
        b = generate_dataset(cfg, 1)
        assert not np.array_equal(a.samples, b.samples)

    def test_null_grand_mean_large_r(self):
        cfg = config(delta=0.0, r=1_000_000, split_fraction=0.4)
        ds = generate_dataset(cfg, 0)
        assert abs(ds.samples.mean()) < 5e-3

    def test_signal_row_mean_monte_carlo(self):
        # mu = 0.1; averaging the signal row over 1000 datasets has
        # standard error 0.1/sqrt(1000*...) well inside +-0.01
        cfg = config(delta=1.0)
        means = [generate_dataset(cfg, i).samples[0].mean() for i in range(1000)]
        assert np.mean(means) == pytest.approx(0.1, abs=0.01)

    def test_sigma0_scales_noise(self):
        base = generate_dataset(config(delta=0.0), 0)
        scaled = generate_dataset(config(delta=0.0, sigma0=2.0), 0)
        np.testing.assert_allclose(scaled.samples, 2.0 * base.samples, rtol=1e-15)


class TestRandomSplit:
    def test_subset_size(self):
        cfg = config()
        split = random_split(cfg, 0, 0)
        assert split.first_portion.shape == (2, 40)
        for row in split.first_portion:
            assert len(set(row.tolist())) == 40
            assert row.min() >= 0 and row.max() < 100

    def test_deterministic(self):
        cfg = config()
        a = random_split(cfg, 1, 7)
        b = random_split(cfg, 1, 7)
        np.testing.assert_array_equal(a.first_portion, b.first_portion)

    def test_small_r_subsets_uniform(self):
        # r=5, p=0.4: all C(5,2)=10 subsets at frequency 0.1 +- 0.02
        cfg = config(r=5, split_fraction=0.4)
        counts = {c: 0 for c in itertools.combinations(range(5), 2)}
        n = 10_000
        for s in range(n):
            split = random_split(cfg, 0, s)
            counts[tuple(sorted(split.first_portion[0].tolist()))] += 1
        for c, k in counts.items():
            assert k / n == pytest.approx(0.1, abs=0.02), c

    def test_chi_square_uniformity(self):
        # r=10, p=0.5: 252 subsets, 1e5 draws
        cfg = config(r=10, split_fraction=0.5)
        subsets = {c: i for i, c in enumerate(itertools.combinations(range(10), 5))}
        counts = np.zeros(len(subsets))
        n = 100_000
        for s in range(n):
            split = random_split(cfg, 0, s)
            counts[subsets[tuple(sorted(split.first_portion[0].tolist()))]] += 1
        assert chisquare(counts).pvalue > 0.001

    def test_independent_across_populations(self):
        cfg = config(r=5, split_fraction=0.4)
        rows = [tuple(random_split(cfg, 0, s).first_portion[1].tolist()) for s in range(200)]
        assert len(set(rows)) > 1


def handmade_dataset(rows):
    return Dataset(samples=np.asarray(rows, dtype=float), true_mean_index=0)


class TestDataSplitPvalue:
    def test_zero_second_portion_mean(self):
        # second portion of the winner averages to 0 -> p = Phi(0) = 0.5
        cfg = config(r=5, split_fraction=0.4, delta=0.0)
        ds = handmade_dataset([[5.0, 5.0, 0.0, 0.0, 0.0],
                               [-1.0, -1.0, 1.0, -1.0, 1.0]])
        split = SplitAssignment(first_portion=np.array([[0, 1], [0, 1]]))
        out = data_split_pvalue(ds, split, cfg)
        assert out.selected == 0
        assert out.a == 5.0
        assert out.b == 0.0
        assert out.p_value == 0.5
        assert out.e_value is None

    def test_two_sigma_second_portion(self):
        cfg = config(r=5, split_fraction=0.4, delta=0.0)
        sigma = cfg.sigma
        ds = handmade_dataset([[3.0, 3.0, 2 * sigma, 2 * sigma, 2 * sigma],
                               [0.0, 0.0, 0.0, 0.0, 0.0]])
        split = SplitAssignment(first_portion=np.array([[0, 1], [0, 1]]))
        out = data_split_pvalue(ds, split, cfg)
        assert out.p_value == pytest.approx(normal_cdf(-2.0), rel=1e-12)
        assert out.sigma == sigma

    def test_selection_is_argmax_with_index_tiebreak(self):
        cfg = config(r=5, split_fraction=0.4, delta=0.0)
        ds = handmade_dataset([[1.0, 1.0, 0.0, 0.0, 0.0],
                               [1.0, 1.0, 9.0, 9.0, 9.0]])
        split = SplitAssignment(first_portion=np.array([[0, 1], [0, 1]]))
        assert data_split_pvalue(ds, split, cfg).selected == 0

    def test_argmax_invariant_under_positive_scaling(self):
        cfg = config()
        ds = generate_dataset(cfg, 0)
        split = random_split(cfg, 0, 0)
        base = data_split_pvalue(ds, split, cfg)
        scaled = Dataset(samples=ds.samples * 7.5, true_mean_index=0)
        assert data_split_pvalue(scaled, split, cfg).selected == base.selected

    def test_null_pvalues_uniform(self):
        cfg = config(delta=0.0)
        n = 10_000
        pvals = np.empty(n)
        for i in range(n):
            ds = generate_dataset(cfg, i)
            pvals[i] = data_split_pvalue(ds, random_split(cfg, i, 0), cfg).p_value
        assert kstest(pvals, "uniform").statistic < 0.02


class TestExactPvalue:
    def test_single_population_at_zero(self):
        cfg = config(m=1, r=4, split_fraction=0.5, delta=0.0)
        ds = handmade_dataset([[1.0, -1.0, 2.0, -2.0]])
        assert exact_pvalue(ds, cfg) == pytest.approx(0.5, abs=1e-15)

    def test_null_pvalues_uniform(self):
        cfg = config(delta=0.0)
        n = 10_000
        pvals = np.array([exact_pvalue(generate_dataset(cfg, i), cfg) for i in range(n)])
        assert kstest(pvals, "uniform").statistic < 0.02

    def test_alternative_rejection_rate(self):
        # published Monte Carlo reference: fraction below 0.1 is 0.670 +- 0.015
        cfg = config(delta=2.0)
        n = 10_000
        pvals = np.array([exact_pvalue(generate_dataset(cfg, i), cfg) for i in range(n)])
        assert np.mean(pvals <= 0.1) == pytest.approx(0.670, abs=0.015)


class TestEvalue:
    def test_zero_first_portion_mean(self):
        assert evalue(0.0, 1.7, 0.5) == 1.0

    def test_half_a_crossing(self):
        a = 0.8
        assert evalue(a, a / 2, 0.3) == pytest.approx(1.0, rel=1e-12)

    def test_direct_arithmetic(self):
        sigma = math.sqrt(1.0 / 60.0)  # r=100, p=0.4
        assert evalue(0.5, 0.4, sigma) == pytest.approx(math.exp(4.5), rel=1e-12)

    def test_saturation_flag(self):
        cfg = config(r=5, split_fraction=0.4, delta=0.0)
        huge = 1e6
        ds = handmade_dataset([[huge, huge, huge, huge, huge],
                               [0.0, 0.0, 0.0, 0.0, 0.0]])
        split = SplitAssignment(first_portion=np.array([[0, 1], [0, 1]]))
        out = evaluate_split(ds, split, cfg)
        assert out.saturated
        assert out.e_value == math.exp(700.0)
        assert math.isfinite(out.e_value)

    def test_domain(self):
        with pytest.raises(ValidationError):
            evalue(0.5, 0.4, 0.0)
        with pytest.raises(ValidationError):
            evalue(float("nan"), 0.4, 1.0)


class TestAverageEvalues:
    def test_constant(self):
        assert average_evalues([1.0, 1.0, 1.0]) == 1.0

    def test_mean(self):
        assert average_evalues([0.0, 2.0]) == 1.0

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            average_evalues([])

    def test_negative_rejected(self):
        with pytest.raises(ValidationError):
            average_evalues([1.0, -0.1])

    def test_null_mean_is_one(self):
        # E[e] = 1 under the null; 1e5 independent datasets, one split each
        cfg = config(delta=0.0)
        n = 100_000
        es = np.empty(n)
        for i in range(n):
            ds = generate_dataset(cfg, i)
            es[i] = evaluate_split(ds, random_split(cfg, i, 0), cfg).e_value
        assert es.mean() == pytest.approx(1.0, abs=0.05)

    def test_null_mean_of_averaged_evalues_is_one(self):
        # averaging over splits keeps the null mean at 1
        cfg = config(delta=0.0, n_splits=10)
        n = 2000
        avgs = np.empty(n)
        for i in range(n):
            ds = generate_dataset(cfg, i)
            avgs[i] = average_evalues(
                evaluate_split(ds, random_split(cfg, i, s), cfg).e_value
                for s in range(cfg.n_splits))
        se = avgs.std(ddof=1) / math.sqrt(n)
        assert abs(avgs.mean() - 1.0) <= 3 * se


class TestEnumerateAllSplits:
    def test_small_case_reproducible(self):
        cfg = config(r=5, split_fraction=0.4)
        ds = generate_dataset(cfg, 0)
        a = enumerate_all_splits(ds, cfg)
        b = enumerate_all_splits(ds, cfg)
        assert a == b
        assert a > 0.0

    def test_budget_exceeded(self):
        cfg = config()  # r=100: ~1e28 pairs of subsets, far over budget
        ds = generate_dataset(cfg, 0)
        with pytest.raises(InfeasibilityError, match="combinations"):
            enumerate_all_splits(ds, cfg)

    def test_matches_direct_enumeration(self):
        # independent oracle: iterate the 100 split pairs in pure python
        cfg = config(r=5, split_fraction=0.4)
        ds = generate_dataset(cfg, 0)
        sigma = cfg.sigma
        combos = list(itertools.combinations(range(5), 2))
        total = 0.0
        for c0 in combos:
            for c1 in combos:
                f0 = ds.samples[0, list(c0)].mean()
                f1 = ds.samples[1, list(c1)].mean()
                if f0 >= f1:
                    a = f0
                    b = (ds.samples[0].sum() - ds.samples[0, list(c0)].sum()) / 3
                else:
                    a = f1
                    b = (ds.samples[1].sum() - ds.samples[1, list(c1)].sum()) / 3
                total += math.exp((a * b - 0.5 * a * a) / (sigma * sigma))
        oracle = total / 100
        assert enumerate_all_splits(ds, cfg) == pytest.approx(oracle, rel=1e-12)

    def test_monte_carlo_agrees(self):
        cfg = config(r=5, split_fraction=0.4)
        ds = generate_dataset(cfg, 0)
        exhaustive = enumerate_all_splits(ds, cfg)
        n = 100_000
        es = np.empty(n)
        for s in range(n):
            es[s] = evaluate_split(ds, random_split(cfg, 0, s), cfg).e_value
        se = es.std(ddof=1) / math.sqrt(n)
        assert abs(es.mean() - exhaustive) <= 3 * se
