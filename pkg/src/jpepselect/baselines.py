"""Comparator scores: BIC and the Zellner g-prior Bayes factor.

BIC values are raw criteria (smaller is better) defined up to constants that
cancel in differences; g-prior values are log Bayes factors against the
intercept-only reference, like the exact J-PEP score.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateDataError, InvalidModelError
from .regression import ModelFit, ModelSpec

__all__ = ["METHODS", "BF_METHODS", "LogScore", "bic_score", "log_bf_gprior"]

# Scoring methods; all but "bic" are log Bayes factors vs. the reference.
METHODS = ("jpep_exact", "jpep_asymptotic", "bic", "gprior")
BF_METHODS = frozenset(m for m in METHODS if m != "bic")


@dataclass(frozen=True)
class LogScore:
    """A model's log-scale score under one method.

    For Bayes-factor methods the reference model scores exactly 0; for BIC
    the value is the raw criterion n*log(rss) + d*log(n).
    """

    method: str
    value: float
    model: ModelSpec

    def __post_init__(self):
        if self.method not in METHODS:
            raise InvalidModelError(
                f"unknown method {self.method!r}; expected one of {METHODS}"
            )


def bic_score(fit: ModelFit) -> float:
    """Schwarz criterion n*log(rss) + d*log(n), constants omitted.

    Only differences across models on the same data are meaningful.

    Raises
    ------
    DegenerateDataError
        If rss is zero (log undefined).
    """
    if fit.rss <= 0.0:
        raise DegenerateDataError("rss must be positive for a BIC score")
    return fit.n * math.log(fit.rss) + fit.d * math.log(fit.n)


def log_bf_gprior(fit0: ModelFit, fitl: ModelFit, g: float) -> float:
    """Log Bayes factor of a model vs. the nested reference under a g-prior.

    g = n gives the unit-information prior, the simulation default.
    """
    if fit0.n != fitl.n:
        raise InvalidModelError("fits must share the same n")
    if fitl.d < fit0.d:
        raise InvalidModelError("candidate dimension below reference dimension")
    if g <= 0.0:
        raise InvalidModelError("g must be positive")
    if fit0.rss <= 0.0 or fitl.rss <= 0.0:
        raise DegenerateDataError("rss must be positive for a g-prior score")
    n = fit0.n
    ratio = fitl.rss / fit0.rss
    return 0.5 * (n - fitl.d) * math.log1p(g) - 0.5 * (n - fit0.d) * math.log1p(
        g * ratio
    )
