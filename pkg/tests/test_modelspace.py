"""Tests for model enumeration, scoring, and posterior summaries."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from jpepselect.baselines import LogScore
from jpepselect.errors import CapacityError, DegenerateDataError, InvalidModelError
from jpepselect.kernel import BfInputs, log_bf_jpep
from jpepselect.modelspace import (
    enumerate_models,
    fit_all,
    posterior_probs,
    score_all,
    score_from_fits,
)
from jpepselect.regression import Dataset, ModelSpec, fit_rss

from oracles import accumulate_inclusion


def make_dataset(n=40, p=4, seed=0, coef=None):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, p))
    if coef is None:
        coef = np.zeros(p)
        coef[1] = 1.0
    y = X @ np.asarray(coef) + rng.standard_normal(n)
    return Dataset(y=y, X=X, names=tuple(f"x{j}" for j in range(1, p + 1)))


class TestEnumerateModels:
    def test_p2_order(self):
        models = list(enumerate_models(2))
        assert models == [
            ModelSpec(()),
            ModelSpec((1,)),
            ModelSpec((2,)),
            ModelSpec((1, 2)),
        ]

    def test_p10_count(self):
        assert sum(1 for _ in enumerate_models(10)) == 1024

    def test_max_dim(self):
        models = list(enumerate_models(3, max_dim=1))
        assert models == [ModelSpec(()), ModelSpec((1,)), ModelSpec((2,)), ModelSpec((3,))]

    def test_capacity_error(self):
        with pytest.raises(CapacityError, match="max_dim"):
            list(enumerate_models(26))


class TestScoreAll:
    def test_reference_scores_zero(self):
        data = make_dataset()
        for method in ("jpep_exact", "jpep_asymptotic", "gprior"):
            res = score_all(data, method)
            by_model = {s.model: s.value for s in res.scores}
            assert by_model[ModelSpec(())] == 0.0

    def test_order_stable_and_complete(self):
        data = make_dataset()
        res1 = score_all(data, "bic")
        res2 = score_all(data, "bic")
        assert [s.model for s in res1.scores] == [s.model for s in res2.scores]
        assert len(res1.scores) == 16
        assert not res1.excluded

    def test_matches_one_at_a_time_kernel_calls(self):
        data = make_dataset(n=35, p=4, seed=3)
        res = score_all(data, "jpep_exact")
        fit0 = fit_rss(data, ModelSpec(()))
        for score in res.scores:
            if not score.model.included:
                continue
            fit = fit_rss(data, score.model)
            want = log_bf_jpep(
                BfInputs(n=fit.n, d0=1, dl=fit.d, rss0=fit0.rss, rssl=fit.rss)
            )
            assert_allclose(score.value, want, rtol=1e-12)

    def test_singular_model_excluded_not_fatal(self):
        rng = np.random.default_rng(5)
        x1 = rng.standard_normal(30)
        x3 = rng.standard_normal(30)
        X = np.column_stack([x1, 2.0 * x1, x3])
        y = x1 + rng.standard_normal(30)
        data = Dataset(y=y, X=X, names=("a", "b", "c"))
        res = score_all(data, "jpep_exact")
        excluded_models = {m for m, _ in res.excluded}
        assert ModelSpec((1, 2)) in excluded_models
        assert ModelSpec((1, 2, 3)) in excluded_models
        scored = {s.model for s in res.scores}
        assert ModelSpec((1, 3)) in scored
        assert scored.isdisjoint(excluded_models)

    def test_zero_response_is_fatal(self):
        # y of all zeros projects to itself exactly, so the reference RSS is
        # an exact 0.0 (a merely constant y leaves float-noise RSS instead)
        X = np.random.default_rng(6).standard_normal((10, 2))
        data = Dataset(y=np.zeros(10), X=X, names=("a", "b"))
        with pytest.raises(DegenerateDataError, match="zero RSS"):
            score_all(data, "jpep_exact")

    def test_missing_reference_rejected(self):
        data = make_dataset()
        fits, _ = fit_all(data, [ModelSpec((1,))])
        with pytest.raises(InvalidModelError, match="reference"):
            score_from_fits(fits, "bic")


class TestPosteriorProbs:
    def test_two_equal_scores_split_evenly(self):
        scores = [
            LogScore("jpep_exact", 0.0, ModelSpec(())),
            LogScore("jpep_exact", 0.0, ModelSpec((1,))),
        ]
        summary = posterior_probs(scores, p=1)
        assert_allclose(list(summary.probs.values()), [0.5, 0.5])

    def test_certain_model_gives_inclusion_one(self):
        scores = [
            LogScore("jpep_exact", 0.0, ModelSpec(())),
            LogScore("jpep_exact", 500.0, ModelSpec((2,))),
        ]
        summary = posterior_probs(scores, p=3)
        assert_allclose(summary.inclusion, [0.0, 1.0, 0.0], atol=1e-200)

    def test_log2_normalization(self):
        scores = [
            LogScore("jpep_exact", 0.0, ModelSpec(())),
            LogScore("jpep_exact", math.log(2.0), ModelSpec((1,))),
            LogScore("jpep_exact", math.log(2.0), ModelSpec((2,))),
        ]
        summary = posterior_probs(scores, p=2)
        assert_allclose(list(summary.probs.values()), [0.2, 0.4, 0.4], rtol=1e-14)

    def test_probs_sum_to_one_every_method(self):
        data = make_dataset(n=50, p=5, seed=8)
        for method in ("jpep_exact", "jpep_asymptotic", "bic", "gprior"):
            res = score_all(data, method)
            summary = posterior_probs(res.scores, data.p)
            assert abs(sum(summary.probs.values()) - 1.0) < 1e-12

    def test_inclusion_matches_brute_force(self):
        data = make_dataset(n=45, p=5, seed=9)
        res = score_all(data, "gprior")
        summary = posterior_probs(res.scores, data.p)
        models = list(summary.probs.keys())
        probs = list(summary.probs.values())
        brute = accumulate_inclusion(models, probs, data.p)
        assert_allclose(summary.inclusion, brute, atol=1e-14)

    def test_response_scaling_invariance(self):
        data = make_dataset(n=40, p=4, seed=10)
        scaled = Dataset(y=1000.0 * data.y, X=data.X, names=data.names)
        for method in ("jpep_exact", "bic", "gprior"):
            a = posterior_probs(score_all(data, method).scores, data.p)
            b = posterior_probs(score_all(scaled, method).scores, data.p)
            assert a.map_model == b.map_model
            assert_allclose(
                list(a.probs.values()), list(b.probs.values()), rtol=1e-9, atol=1e-10
            )

    def test_map_tie_break_is_deterministic(self):
        # exact ties: fewest covariates wins, then lexicographic order
        scores = [
            LogScore("jpep_exact", 0.0, ModelSpec(())),
            LogScore("jpep_exact", 0.7, ModelSpec((2,))),
            LogScore("jpep_exact", 0.7, ModelSpec((1, 2))),
            LogScore("jpep_exact", 0.7, ModelSpec((1,))),
        ]
        for _ in range(5):
            summary = posterior_probs(scores, p=2)
            assert summary.map_model == ModelSpec((1,))

    def test_bic_conversion(self):
        # prob ratio between two BIC scores is exp(-(bic_a - bic_b)/2)
        scores = [
            LogScore("bic", 10.0, ModelSpec(())),
            LogScore("bic", 12.0, ModelSpec((1,))),
        ]
        summary = posterior_probs(scores, p=1)
        probs = list(summary.probs.values())
        assert_allclose(probs[0] / probs[1], math.exp(1.0), rtol=1e-13)

    def test_beta_binomial_prior_penalizes_size(self):
        scores = [
            LogScore("jpep_exact", 0.0, ModelSpec(())),
            LogScore("jpep_exact", 0.0, ModelSpec((1, 2, 3))),
        ]
        uniform = posterior_probs(scores, p=6)
        bb = posterior_probs(scores, p=6, model_prior=("beta_binomial", 1.0, 1.0))
        assert_allclose(list(uniform.probs.values()), [0.5, 0.5])
        bb_probs = list(bb.probs.values())
        assert bb_probs[0] > bb_probs[1]

    def test_empty_scores_rejected(self):
        with pytest.raises(InvalidModelError):
            posterior_probs([], p=2)

    def test_mixed_methods_rejected(self):
        scores = [
            LogScore("bic", 1.0, ModelSpec(())),
            LogScore("gprior", 1.0, ModelSpec((1,))),
        ]
        with pytest.raises(InvalidModelError):
            posterior_probs(scores, p=1)
