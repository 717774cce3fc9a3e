"""Distribution estimators, KS statistic, and ranking behavior."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from commnet.cover import IntegerHistogram
from commnet.distfit import (
    FAMILIES,
    Family,
    FitError,
    WeightedSample,
    fit,
    fit_all,
    ks_statistic,
    powerlaw_xmin_scan,
)


def rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


class TestWeightedSample:
    def test_from_values_collapses_ties(self):
        s = WeightedSample.from_values([1, 1, 2])
        assert s.values.tolist() == [1, 2]
        assert s.weights.tolist() == [2, 1]
        assert s.total == 3

    def test_from_counts_equivalent(self):
        a = WeightedSample.from_values([1, 1, 2, 3, 3, 3])
        b = WeightedSample.from_counts([1, 2, 3], [2, 1, 3])
        assert a.values.tolist() == b.values.tolist()
        assert a.weights.tolist() == b.weights.tolist()
        assert a.mean() == pytest.approx(b.mean())

    def test_moments(self):
        s = WeightedSample.from_values([1, 2, 3])
        assert s.mean() == pytest.approx(2.0)
        assert s.std() == pytest.approx(math.sqrt(2 / 3))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            WeightedSample.from_values([])

    def test_histogram_duck_typing(self):
        hist = IntegerHistogram({1: 2, 4: 3})
        results = fit_all(hist)
        assert results[0].sample_size == 5


class TestEstimators:
    def test_power_law_closed_form(self):
        e = math.e
        params = fit(Family.POWER_LAW, [e, e, e], xmin=1.0)
        assert params["alpha"] == pytest.approx(2.0)
        assert params["xmin"] == pytest.approx(1.0)

    def test_power_law_default_xmin(self):
        params = fit(Family.POWER_LAW, [2.0, 4.0, 8.0])
        assert params["xmin"] == pytest.approx(2.0)

    def test_exponential_rate(self):
        params = fit(Family.EXPONENTIAL, [1, 2, 3])
        assert params["rate"] == pytest.approx(0.5)

    def test_normal(self):
        params = fit(Family.NORMAL, [1, 2, 3])
        assert params["mu"] == pytest.approx(2.0)
        assert params["sigma"] == pytest.approx(math.sqrt(2 / 3))

    def test_uniform(self):
        params = fit(Family.UNIFORM, [2, 5, 9])
        assert params["a"] == pytest.approx(2.0)
        assert params["b"] == pytest.approx(9.0)

    def test_logistic_closed_form(self):
        sample = [1.0, 2.0, 4.0, 7.0]
        params = fit(Family.LOGISTIC, sample)
        s = WeightedSample.from_values(sample)
        assert params["location"] == pytest.approx(s.mean())
        assert params["scale"] == pytest.approx(
            s.std() * math.sqrt(3) / math.pi)

    def test_cauchy_median_iqr(self):
        params = fit(Family.CAUCHY, [1, 2, 3, 4, 100])
        assert params["location"] == pytest.approx(3.0)
        assert params["scale"] == pytest.approx(1.0)

    def test_log_normal_matches_log_moments(self):
        sample = [1.0, 2.0, 4.0, 8.0]
        params = fit(Family.LOG_NORMAL, sample)
        logs = np.log(sample)
        assert params["mu"] == pytest.approx(logs.mean())
        assert params["sigma"] == pytest.approx(logs.std())

    def test_weibull_recovery(self):
        x = 2.5 * rng(4).weibull(1.7, size=20_000)
        params = fit(Family.WEIBULL, x)
        assert params["shape"] == pytest.approx(1.7, abs=0.05)
        assert params["scale"] == pytest.approx(2.5, abs=0.05)

    def test_gamma_recovery(self):
        x = rng(6).gamma(2.5, 1.8, size=20_000)
        params = fit(Family.GAMMA, x)
        assert params["shape"] == pytest.approx(2.5, abs=0.1)
        assert params["scale"] == pytest.approx(1.8, abs=0.1)

    def test_beta_recovery(self):
        x = rng(8).beta(2.0, 5.0, size=20_000)
        params = fit(Family.BETA, x)
        # moment-matching on the affinely rescaled sample: coarse check
        assert 1.0 < params["alpha"] < 3.5
        assert 3.0 < params["beta"] < 8.0

    def test_positive_only_families_reject(self):
        for family in (Family.POWER_LAW, Family.LOG_NORMAL,
                       Family.WEIBULL, Family.GAMMA):
            with pytest.raises(FitError):
                fit(family, [-1.0, 1.0, 2.0, 3.0])

    def test_xmin_only_for_power_law(self):
        with pytest.raises(ValueError):
            fit(Family.NORMAL, [1, 2, 3], xmin=1.0)


class TestKS:
    def test_uniform_hand_value(self):
        s = [0.25, 0.5, 0.75]
        d = ks_statistic(s, Family.UNIFORM, {"a": 0.0, "b": 1.0})
        assert d == pytest.approx(0.25)

    def test_two_point_hand_value(self):
        d = ks_statistic([1, 2], Family.UNIFORM, {"a": 0.5, "b": 2.5})
        assert d == pytest.approx(0.25)

    def test_bounded(self):
        x = rng(3).normal(5.0, 2.0, size=500)
        for family in FAMILIES:
            try:
                params = fit(family, x)
            except FitError:
                continue
            d = ks_statistic(x, family, params)
            assert 0.0 <= d <= 1.0

    @given(st.lists(st.floats(0.1, 50.0), min_size=5, max_size=40))
    @settings(max_examples=40)
    def test_bounded_random_samples(self, sample):
        for family in FAMILIES:
            try:
                params = fit(family, sample)
                d = ks_statistic(sample, family, params)
            except FitError:
                continue
            assert 0.0 <= d <= 1.0

    def test_weighted_equals_expanded(self):
        expanded = [1.0] * 3 + [2.0] * 5 + [4.0] * 2
        weighted = WeightedSample.from_counts([1.0, 2.0, 4.0], [3, 5, 2])
        params = fit(Family.NORMAL, expanded)
        assert ks_statistic(expanded, Family.NORMAL, params) == \
            pytest.approx(ks_statistic(weighted, Family.NORMAL, params))


class TestFitAll:
    def test_requires_five_samples(self):
        with pytest.raises(ValueError):
            fit_all([1.0, 2.0, 3.0, 4.0])

    def test_sorted_by_ks(self):
        x = rng(0).normal(0.0, 1.0, size=2_000)
        results = fit_all(x)
        ks = [r.ks for r in results if r.ks is not None]
        assert ks == sorted(ks)

    def test_failures_ranked_last_with_message(self):
        results = fit_all([-3.0, -2.0, -1.0, 0.5, 1.0])
        tail = [r for r in results if r.ks is None]
        assert tail
        assert all(r.error for r in tail)
        assert {r.family for r in tail} >= {Family.POWER_LAW,
                                            Family.LOG_NORMAL}

    def test_constant_sample_flags(self):
        results = fit_all([4.0] * 6)
        by_family = {r.family: r for r in results}
        assert by_family[Family.UNIFORM].error is not None
        assert by_family[Family.POWER_LAW].error is not None

    @pytest.mark.parametrize("family,seed,draw", [
        (Family.NORMAL, 0, lambda r, n: r.normal(3.0, 1.5, n)),
        (Family.EXPONENTIAL, 3, lambda r, n: r.exponential(2.0, n)),
        (Family.UNIFORM, 7, lambda r, n: r.uniform(-1.0, 4.0, n)),
        (Family.LOG_NORMAL, 0, lambda r, n: r.lognormal(0.5, 0.75, n)),
    ])
    def test_synthetic_family_ranks_first(self, family, seed, draw):
        x = draw(rng(seed), 10_000)
        assert fit_all(x)[0].family is family


class TestEquivariance:
    @pytest.mark.parametrize("family,loc_key,scale_key", [
        (Family.NORMAL, "mu", "sigma"),
        (Family.LOGISTIC, "location", "scale"),
        (Family.CAUCHY, "location", "scale"),
    ])
    def test_location_scale(self, family, loc_key, scale_key):
        x = rng(12).normal(2.0, 1.0, size=400)
        a, b = 2.5, -7.0
        base = fit(family, x)
        moved = fit(family, a * x + b)
        assert moved[loc_key] == pytest.approx(a * base[loc_key] + b)
        assert moved[scale_key] == pytest.approx(a * base[scale_key])
        d0 = ks_statistic(x, family, base)
        d1 = ks_statistic(a * x + b, family, moved)
        assert d1 == pytest.approx(d0, abs=1e-9)

    def test_uniform_affine(self):
        x = rng(13).uniform(0.0, 1.0, size=300)
        a, b = 3.0, 4.0
        base = fit(Family.UNIFORM, x)
        moved = fit(Family.UNIFORM, a * x + b)
        assert moved["a"] == pytest.approx(a * base["a"] + b)
        assert moved["b"] == pytest.approx(a * base["b"] + b)
        assert ks_statistic(a * x + b, Family.UNIFORM, moved) == \
            pytest.approx(ks_statistic(x, Family.UNIFORM, base), abs=1e-9)

    def test_power_law_scale_free(self):
        x = (rng(14).pareto(1.8, size=4_000) + 1.0)
        base = fit(Family.POWER_LAW, x)
        scaled = fit(Family.POWER_LAW, 5.0 * x)
        assert scaled["alpha"] == pytest.approx(base["alpha"])
        assert scaled["xmin"] == pytest.approx(5.0 * base["xmin"])


class TestScan:
    def test_recovers_exponent(self):
        # inverse-CDF draws from a pure power law with alpha 2.5, xmin 1
        u = rng(42).random(100_000)
        x = u ** (-1.0 / 1.5)
        scan = powerlaw_xmin_scan(x)
        assert scan.alpha == pytest.approx(2.5, abs=0.05)
        assert scan.ks <= 0.05

    def test_constant_sample_rejected(self):
        with pytest.raises(ValueError):
            powerlaw_xmin_scan([3.0] * 50)

    def test_few_distinct_values_rejected(self):
        with pytest.raises(ValueError):
            powerlaw_xmin_scan([1, 2, 3, 4, 5] * 10)

    def test_integer_data_scanned_exhaustively(self):
        degrees = np.concatenate([np.repeat(k, 200 // k)
                                  for k in range(1, 40)])
        scan = powerlaw_xmin_scan(degrees)
        assert scan.candidates_tried == 38  # one per distinct value bar top
        assert scan.xmin >= 1


class TestResultShape:
    def test_to_dict(self):
        results = fit_all([1.0, 2.0, 3.0, 4.0, 5.0])
        d = results[0].to_dict()
        assert set(d) == {"family", "params", "ks", "sample_size", "error"}
        assert d["sample_size"] == 5

    def test_family_order_is_table_order(self):
        abbrevs = [f.abbreviation for f in FAMILIES]
        assert abbrevs == ["PL", "BET", "CAU", "E", "GM", "LOG", "LN",
                           "N", "U", "WB"]
