"""Figure rendering for simulation and consistency outputs.

Renders the boxplot-style summaries that accompany the delimited outputs:
true-model posterior vs. sample size per method, per-covariate inclusion
probabilities, and consistency-scan trajectories. Uses the Agg backend so
rendering works headless; figures land next to the data files.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

__all__ = [
    "render_simulation_figures",
    "render_consistency_figure",
]


def _grouped(records):
    """records keyed by (method, n), preserving first-appearance order."""
    groups = {}
    methods = []
    ns = []
    for rec in records:
        groups.setdefault((rec.method, rec.n), []).append(rec)
        if rec.method not in methods:
            methods.append(rec.method)
        if rec.n not in ns:
            ns.append(rec.n)
    return groups, methods, sorted(ns)


def render_simulation_figures(records, p: int, out_stem) -> list:
    """Render the two simulation summary figures.

    Writes <out_stem>_posterior.png (boxplots of the true-model posterior
    across replicates, one panel per method, grouped by n) and
    <out_stem>_inclusion.png (per-covariate inclusion boxplots, method rows
    by sample-size columns). Returns the written paths.
    """
    groups, methods, ns = _grouped(records)
    out_stem = str(out_stem)
    paths = []

    fig, axes = plt.subplots(
        1, len(methods), figsize=(4.2 * len(methods), 3.6), sharey=True, squeeze=False
    )
    for ax, method in zip(axes[0], methods):
        data = [[r.true_model_posterior for r in groups[(method, n)]] for n in ns]
        ax.boxplot(data, tick_labels=[str(n) for n in ns])
        ax.set_title(method)
        ax.set_xlabel("n")
        ax.set_ylim(-0.02, 1.02)
    axes[0][0].set_ylabel("posterior prob. of true model")
    fig.tight_layout()
    path = out_stem + "_posterior.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    paths.append(path)

    fig, axes = plt.subplots(
        len(methods),
        len(ns),
        figsize=(3.4 * len(ns), 2.6 * len(methods)),
        sharey=True,
        squeeze=False,
    )
    for i, method in enumerate(methods):
        for k, n in enumerate(ns):
            ax = axes[i][k]
            recs = groups[(method, n)]
            data = [[r.inclusion[j] for r in recs] for j in range(p)]
            ax.boxplot(data, tick_labels=[str(j) for j in range(1, p + 1)])
            ax.set_ylim(-0.02, 1.02)
            if i == 0:
                ax.set_title(f"n = {n}")
            if i == len(methods) - 1:
                ax.set_xlabel("covariate")
            if k == 0:
                ax.set_ylabel(f"{method}\ninclusion prob.")
    fig.tight_layout()
    path = out_stem + "_inclusion.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    paths.append(path)
    return paths


def render_consistency_figure(trajectories: dict, out_path) -> str:
    """Plot log BF(rival vs true) trajectories against n.

    ``trajectories`` maps a rival label to its [(n, log_bf)] list. Returns
    the written path.
    """
    fig, ax = plt.subplots(figsize=(5.4, 3.8))
    for label, traj in trajectories.items():
        ns = [t[0] for t in traj]
        vals = [t[1] for t in traj]
        ax.plot(ns, vals, marker="o", label=label)
    ax.axhline(0.0, color="gray", lw=0.8, ls="--")
    ax.set_xlabel("n")
    ax.set_ylabel("log BF (rival vs true)")
    ax.set_xscale("log")
    ax.legend()
    fig.tight_layout()
    out_path = str(out_path)
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    return out_path
