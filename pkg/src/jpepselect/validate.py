"""Built-in identity checks runnable from the CLI.

Each check exercises a closed-form identity the implementation must satisfy
(analytic Beta integrals, self-comparison Bayes factor of 1, prior
normalization, power-parameter independence) and reports its measured error
against a fixed tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betaln

from .kernel import (
    BfInputs,
    PriorPoint,
    QuadratureGrid,
    default_grid,
    log_bf_jpep,
    log_conditional_jpep_density,
    log_power_marginal,
    log_quad,
)

__all__ = ["ValidationCheck", "run_validation"]


@dataclass(frozen=True)
class ValidationCheck:
    name: str
    error: float
    tol: float
    passed: bool


def _check(name, error, tol):
    return ValidationCheck(name=name, error=float(error), tol=tol, passed=bool(error <= tol))


def _beta_oracle(grid) -> float:
    # log integral of sin^a cos^b over (0, pi/2) is log[B((a+1)/2,(b+1)/2)/2]
    worst = 0.0
    for a in range(0, 41):
        for b in range(0, 41):
            truth = float(betaln(0.5 * (a + 1), 0.5 * (b + 1))) - math.log(2.0)
            got = log_quad(lambda phi: a * np.log(np.sin(phi)) + b * np.log(np.cos(phi)), grid)
            err = abs(got - truth)
            if abs(truth) > 1e-8:
                err /= abs(truth)
            worst = max(worst, err)
    return worst


def _self_comparison(grid) -> float:
    worst = 0.0
    for n in (10, 50, 200, 1000):
        for d in (1, 3):
            inp = BfInputs(n=n, d0=d, dl=d, rss0=1.0, rssl=1.0)
            worst = max(worst, abs(log_bf_jpep(inp, grid)))
    return worst


def _sigma_normalization() -> float:
    # Integrate the density's var_l factor over (0, inf) by substituting
    # var_l = var_0 * t / (1 - t); the Normal factor is divided out at its
    # mode, where its height is known in closed form.
    nstar, dl, delta = 6, 1, 1.0
    X = np.ones((nstar, dl))
    logdet_xtx = math.log(float((X * X).sum()))
    beta0 = np.array([0.7])
    worst = 0.0
    nodes, weights = np.polynomial.legendre.leggauss(400)
    for var0 in (0.5, 2.0):
        t = 0.5 * (nodes + 1.0)
        w = 0.5 * weights
        var_l = var0 * t / (1.0 - t)
        jac = var0 / (1.0 - t) ** 2
        total = 0.0
        for vl, jc, wt in zip(var_l, jac, w):
            scale = delta * (vl + var0)
            normal_mode = -0.5 * dl * math.log(2.0 * math.pi) - 0.5 * (
                dl * math.log(scale) - logdet_xtx
            )
            pt = PriorPoint(
                beta_l=beta0.copy(), var_l=float(vl), beta_0=beta0,
                var_0=var0, delta=delta, Xstar=X,
            )
            sigma_part = log_conditional_jpep_density(pt) - normal_mode
            total += math.exp(sigma_part) * jc * wt
        worst = max(worst, abs(total - 1.0))
    return worst


def _delta_independence() -> float:
    rng = np.random.default_rng(20260817)
    X = rng.standard_normal((15, 3))
    y = X @ np.array([1.0, -0.5, 0.2]) + rng.standard_normal(15)
    a = log_power_marginal(y, X, 3, delta=1.0)
    b = log_power_marginal(y, X, 3, delta=15.0)
    return 0.0 if a == b else abs(a - b) + 1.0


def run_validation(grid: QuadratureGrid | None = None) -> list:
    """Run every built-in identity check and return the results.

    A degraded quadrature grid (too few nodes) makes the Beta-integral and
    self-comparison checks fail, which is the intended canary.
    """
    if grid is None:
        grid = default_grid()
    return [
        _check("beta_integral_oracle", _beta_oracle(grid), 1e-10),
        _check("self_comparison_bf_is_one", _self_comparison(grid), 1e-8),
        _check("sigma_marginal_normalization", _sigma_normalization(), 1e-6),
        _check("delta_independence_bitwise", _delta_independence(), 0.0),
    ]
