"""Exhaustive model-space enumeration, scoring, and posterior summaries.

All 2^p covariate subsets are enumerated in ascending bitmask order, scored
with one of the registered methods against the intercept-only reference, and
normalized into posterior model probabilities, per-covariate inclusion
probabilities, and a MAP model. Models whose designs cannot be scored
(singular, saturated, too few rows) are excluded with a reason instead of
aborting the sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np
from scipy.special import betaln

from .baselines import BF_METHODS, METHODS, LogScore, bic_score, log_bf_gprior
from .errors import (
    CapacityError,
    DegenerateDataError,
    InsufficientDataError,
    InvalidModelError,
    SingularDesignError,
)
from .kernel import BfInputs, QuadratureGrid, log_bf_jpep, log_bf_jpep_asymptotic
from .regression import Dataset, ModelFit, ModelSpec, fit_rss

__all__ = [
    "ENUMERATION_CAP",
    "PosteriorSummary",
    "ScoreResult",
    "enumerate_models",
    "fit_all",
    "score_from_fits",
    "score_all",
    "posterior_probs",
]

# Hard cap on p for exhaustive enumeration (2^25 ~ 3.4e7 models).
ENUMERATION_CAP = 25

REFERENCE = ModelSpec(())


@dataclass(frozen=True)
class PosteriorSummary:
    """Normalized posterior over the scored model space.

    probs maps each scored model to its posterior probability (excluded
    models carry probability zero and are not listed); inclusion[j-1] is the
    total probability of models containing covariate j.
    """

    probs: dict
    inclusion: np.ndarray
    map_model: ModelSpec
    method: str


@dataclass(frozen=True)
class ScoreResult:
    """Scores for every scorable model plus exclusion diagnostics."""

    method: str
    scores: tuple
    excluded: tuple = field(default=())


def enumerate_models(p: int, max_dim: int | None = None) -> Iterator[ModelSpec]:
    """Yield all covariate subsets in ascending bitmask order.

    With ``max_dim`` set, subsets larger than max_dim covariates are skipped.
    Count is 2^p when uncapped.

    Raises
    ------
    CapacityError
        If p exceeds the exhaustive-enumeration cap; use max_dim with a
        smaller candidate pool instead.
    """
    if p < 0:
        raise InvalidModelError("p must be nonnegative")
    if p > ENUMERATION_CAP:
        raise CapacityError(
            f"p={p} exceeds the exhaustive enumeration cap of {ENUMERATION_CAP}; "
            "restrict the candidate pool or set max_dim"
        )
    for mask in range(1 << p):
        if max_dim is not None and mask.bit_count() > max_dim:
            continue
        included = tuple(j + 1 for j in range(p) if mask >> j & 1)
        yield ModelSpec(included)


def fit_all(dataset: Dataset, models) -> tuple:
    """Fit every model, collecting exclusions instead of raising.

    Returns (fits, excluded): fits maps ModelSpec to ModelFit in input
    order; excluded lists (ModelSpec, reason) pairs for models whose design
    was singular or had too few rows.
    """
    fits = {}
    excluded = []
    for model in models:
        try:
            fits[model] = fit_rss(dataset, model)
        except (SingularDesignError, InsufficientDataError) as exc:
            excluded.append((model, str(exc)))
    return fits, excluded


def score_from_fits(
    fits: dict,
    method: str,
    g: float | None = None,
    grid: QuadratureGrid | None = None,
    excluded=(),
) -> ScoreResult:
    """Score pre-computed fits with one method.

    The reference (intercept-only) fit must be present; Bayes-factor methods
    assign it exactly 0. Models with zero RSS are excluded with a reason
    (their log score is undefined). ``excluded`` carries forward fit-stage
    exclusions so the result's diagnostics are complete.
    """
    if method not in METHODS:
        raise InvalidModelError(f"unknown method {method!r}; expected one of {METHODS}")
    if REFERENCE not in fits:
        raise InvalidModelError("reference (intercept-only) fit is required")
    fit0 = fits[REFERENCE]
    if fit0.rss <= 0.0:
        raise DegenerateDataError(
            "reference model has zero RSS (response has no residual "
            "variation); no method can score this dataset"
        )
    scores = []
    dropped = list(excluded)
    for model, fit in fits.items():
        try:
            scores.append(LogScore(method=method, value=_score_one(method, fit0, fit, g, grid), model=model))
        except DegenerateDataError as exc:
            dropped.append((model, str(exc)))
    return ScoreResult(method=method, scores=tuple(scores), excluded=tuple(dropped))


def _score_one(method, fit0: ModelFit, fit: ModelFit, g, grid) -> float:
    if method == "bic":
        return bic_score(fit)
    if fit.d == fit0.d and fit.rss == fit0.rss:
        # reference vs. itself: exactly 0 by definition
        return 0.0
    if fit.rss <= 0.0:
        raise DegenerateDataError("model has zero RSS; log Bayes factor undefined")
    if method == "gprior":
        return log_bf_gprior(fit0, fit, g=fit.n if g is None else g)
    inp = BfInputs(n=fit.n, d0=fit0.d, dl=fit.d, rss0=fit0.rss, rssl=fit.rss)
    if method == "jpep_exact":
        return log_bf_jpep(inp, grid)
    return log_bf_jpep_asymptotic(inp)


def score_all(
    dataset: Dataset,
    method: str,
    g: float | None = None,
    grid: QuadratureGrid | None = None,
    max_dim: int | None = None,
) -> ScoreResult:
    """Enumerate, fit, and score every model of a dataset with one method."""
    models = enumerate_models(dataset.p, max_dim)
    fits, excluded = fit_all(dataset, models)
    return score_from_fits(fits, method, g=g, grid=grid, excluded=excluded)


def _log_prior(model: ModelSpec, p: int, model_prior) -> float:
    if model_prior == "uniform":
        return 0.0
    if isinstance(model_prior, (tuple, list)) and model_prior[0] == "beta_binomial":
        _, a, b = model_prior
        if a <= 0.0 or b <= 0.0:
            raise InvalidModelError("beta_binomial parameters must be positive")
        k = len(model.included)
        # B(a+k, b+p-k) up to the constant B(a,b), which normalization drops
        return float(betaln(a + k, b + p - k))
    raise InvalidModelError(
        f"unknown model prior {model_prior!r}; expected 'uniform' or "
        "('beta_binomial', a, b)"
    )


def posterior_probs(scores, p: int, model_prior="uniform") -> PosteriorSummary:
    """Normalize scores into posterior model probabilities.

    Bayes-factor scores enter as exp(logBF + log prior); BIC enters as
    exp(-BIC/2 + log prior). Normalization is log-sum-exp. The MAP model
    attains the maximum probability, ties broken toward fewer covariates and
    then lexicographically.

    Raises
    ------
    InvalidModelError
        On an empty score list or mixed methods.
    """
    scores = list(scores)
    if not scores:
        raise InvalidModelError("cannot form a posterior from zero scores")
    method = scores[0].method
    if any(s.method != method for s in scores):
        raise InvalidModelError("scores mix methods; normalize one method at a time")
    models = [s.model for s in scores]
    if any(m.included and m.included[-1] > p for m in models):
        raise InvalidModelError("a model references a covariate beyond p")
    raw = np.array(
        [
            (s.value if method in BF_METHODS else -0.5 * s.value)
            + _log_prior(s.model, p, model_prior)
            for s in scores
        ]
    )
    m = float(np.max(raw))
    w = np.exp(raw - m)
    probs_vec = w / float(np.sum(w))
    probs = {model: float(pr) for model, pr in zip(models, probs_vec)}
    inclusion = np.zeros(p)
    for model, pr in zip(models, probs_vec):
        for j in model.included:
            inclusion[j - 1] += pr
    best = max(probs.values())
    candidates = [mod for mod, pr in probs.items() if pr == best]
    map_model = min(candidates, key=lambda mod: (len(mod.included), mod.included))
    return PosteriorSummary(
        probs=probs, inclusion=inclusion, map_model=map_model, method=method
    )
