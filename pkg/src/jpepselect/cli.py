"""Command-line interface.

Subcommands: select (score a CSV's model space), bf (one Bayes factor from
summary statistics), simulate (replicated sweep with CSV/JSON/figure
output), consistency (rival-vs-true Bayes factor trajectories), validate
(built-in identity checks). Every option has a documented default and all
outputs are deterministic given the flags, including the seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .baselines import METHODS
from .errors import JpepError
from .kernel import BfInputs, log_bf_jpep, log_bf_jpep_asymptotic, make_grid
from .modelspace import posterior_probs, score_all
from .regression import ModelSpec, load_csv
from .simulate import (
    DEFAULT_METHODS,
    SimConfig,
    consistency_scan,
    records_to_csv,
    run_simulation,
    summarize_records,
)
from .validate import run_validation

__all__ = ["main"]

SCHEMA_VERSION = 1


def _parse_methods(text: str) -> tuple:
    methods = tuple(m.strip() for m in text.split(",") if m.strip())
    for m in methods:
        if m not in METHODS:
            raise argparse.ArgumentTypeError(
                f"unknown method {m!r}; choose from {', '.join(METHODS)}"
            )
    if not methods:
        raise argparse.ArgumentTypeError("need at least one method")
    return methods


def _parse_model_prior(text: str):
    if text == "uniform":
        return "uniform"
    if text.startswith("beta_binomial:"):
        body = text.split(":", 1)[1]
        parts = body.split(",")
        if len(parts) != 2:
            raise argparse.ArgumentTypeError(
                "beta_binomial prior takes two parameters, e.g. beta_binomial:1,1"
            )
        try:
            a, b = float(parts[0]), float(parts[1])
        except ValueError:
            raise argparse.ArgumentTypeError(
                f"cannot parse beta_binomial parameters from {body!r}"
            ) from None
        if a <= 0 or b <= 0:
            raise argparse.ArgumentTypeError("beta_binomial parameters must be positive")
        return ("beta_binomial", a, b)
    raise argparse.ArgumentTypeError(
        f"unknown model prior {text!r}; use 'uniform' or 'beta_binomial:a,b'"
    )


def _parse_int_list(text: str) -> tuple:
    try:
        vals = tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse integer list from {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty integer list")
    return vals


def _parse_model(text: str) -> ModelSpec:
    text = text.strip()
    if text in ("", "0", "{}"):
        return ModelSpec(())
    try:
        return ModelSpec(tuple(int(v) for v in text.split(",")))
    except (ValueError, JpepError) as exc:
        raise argparse.ArgumentTypeError(f"bad model spec {text!r}: {exc}") from None


def _emit(text: str, out_path) -> None:
    if out_path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(out_path).write_text(text)


def _json_dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _model_prior_label(mp):
    if mp == "uniform":
        return "uniform"
    return f"beta_binomial:{mp[1]},{mp[2]}"


def _add_grid_flag(sub):
    sub.add_argument(
        "--panels", type=int, default=8,
        help="quadrature panels on (0, pi/2), 64 nodes each (default: 8)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jpepselect",
        description=(
            "Bayesian variable selection for Gaussian linear regression via "
            "the exact J-PEP Bayes factor, with BIC and g-prior baselines."
        ),
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sel = subs.add_parser(
        "select", help="score every covariate subset of a CSV dataset"
    )
    sel.add_argument("--input", required=True, help="input CSV path (header row required)")
    sel.add_argument("--response", required=True, help="name of the response column")
    sel.add_argument(
        "--methods", type=_parse_methods, default=DEFAULT_METHODS,
        help="comma-separated scoring methods (default: jpep_exact,bic,gprior)",
    )
    sel.add_argument(
        "--g", type=float, default=None,
        help="g-prior scale (default: n, the unit-information choice)",
    )
    sel.add_argument(
        "--model-prior", type=_parse_model_prior, default="uniform",
        help="model-space prior: 'uniform' or 'beta_binomial:a,b' (default: uniform)",
    )
    sel.add_argument(
        "--max-dim", type=int, default=None,
        help="cap on covariates per model (default: no cap)",
    )
    _add_grid_flag(sel)
    sel.add_argument("--out", default=None, help="output path (default: stdout)")
    sel.add_argument(
        "--format", choices=["json"], default="json",
        help="output format (default: json)",
    )

    bf = subs.add_parser(
        "bf", help="one exact and asymptotic log Bayes factor from summary statistics"
    )
    bf.add_argument("--n", type=int, required=True, help="sample size")
    bf.add_argument("--d0", type=int, default=1, help="reference dimension (default: 1)")
    bf.add_argument("--dl", type=int, required=True, help="candidate dimension")
    bf.add_argument("--rss0", type=float, required=True, help="reference RSS")
    bf.add_argument("--rssl", type=float, required=True, help="candidate RSS")
    _add_grid_flag(bf)
    bf.add_argument(
        "--format", choices=["text", "json"], default="text",
        help="output format (default: text)",
    )

    sim = subs.add_parser(
        "simulate", help="replicated simulation sweep with CSV + JSON summary output"
    )
    sim.add_argument("--seed", type=int, default=0, help="run seed (default: 0)")
    sim.add_argument(
        "--reps", type=int, default=25,
        help="replications per sample size (default: 25; the full-scale study used 100)",
    )
    sim.add_argument(
        "--n-grid", type=_parse_int_list, default=(30, 50, 100, 500),
        help="comma-separated sample sizes (default: 30,50,100,500; full scale adds 1000)",
    )
    sim.add_argument(
        "--methods", type=_parse_methods, default=DEFAULT_METHODS,
        help="comma-separated scoring methods (default: jpep_exact,bic,gprior)",
    )
    sim.add_argument("--g", type=float, default=None, help="g-prior scale (default: n)")
    sim.add_argument(
        "--model-prior", type=_parse_model_prior, default="uniform",
        help="model-space prior (default: uniform)",
    )
    sim.add_argument("--max-dim", type=int, default=None, help="cap on covariates per model")
    _add_grid_flag(sim)
    sim.add_argument(
        "--workers", type=int, default=1,
        help="worker threads; output is identical for any value (default: 1)",
    )
    sim.add_argument(
        "--out", default="simulation.csv",
        help="output CSV path (default: simulation.csv); the JSON summary and "
        "figures are written alongside it",
    )
    sim.add_argument(
        "--format", choices=["csv", "json"], default="csv",
        help="record format: csv (with separate JSON summary) or a single json file",
    )
    sim.add_argument(
        "--figures", action=argparse.BooleanOptionalAction, default=True,
        help="render boxplot figures next to the output (default: on)",
    )

    con = subs.add_parser(
        "consistency", help="log BF(rival vs true) trajectories along a sample-size grid"
    )
    con.add_argument("--seed", type=int, default=0, help="run seed (default: 0)")
    con.add_argument(
        "--n-grid", type=_parse_int_list, default=(100, 200, 500, 1000, 2000),
        help="comma-separated sample sizes (default: 100,200,500,1000,2000)",
    )
    con.add_argument(
        "--true-model", type=_parse_model, default=ModelSpec((3, 4, 5)),
        help="true model as comma-separated covariate indices (default: 3,4,5)",
    )
    con.add_argument(
        "--rival", type=_parse_model, action="append", default=None,
        help="rival model, repeatable (default: 3,4 and 1,3,4,5)",
    )
    _add_grid_flag(con)
    con.add_argument(
        "--out", default="consistency.csv",
        help="output CSV path (default: consistency.csv)",
    )
    con.add_argument(
        "--format", choices=["csv", "json"], default="csv",
        help="output format (default: csv)",
    )
    con.add_argument(
        "--figures", action=argparse.BooleanOptionalAction, default=True,
        help="render the trajectory figure next to the output (default: on)",
    )

    val = subs.add_parser("validate", help="run the built-in identity checks")
    _add_grid_flag(val)
    val.add_argument(
        "--nodes-per-panel", type=int, default=64,
        help="quadrature nodes per panel (default: 64)",
    )
    val.add_argument(
        "--format", choices=["text", "json"], default="text",
        help="output format (default: text)",
    )
    return parser


def _cmd_select(args) -> int:
    data = load_csv(args.input, args.response)
    grid = make_grid(panels=args.panels)
    results = {}
    excluded = []
    for method in args.methods:
        res = score_all(data, method, g=args.g, grid=grid, max_dim=args.max_dim)
        summary = posterior_probs(res.scores, data.p, args.model_prior)
        score_by_model = {s.model: s.value for s in res.scores}
        ranked = sorted(
            summary.probs.items(),
            key=lambda kv: (-kv[1], len(kv[0].included), kv[0].included),
        )
        results[method] = {
            "map_model": list(summary.map_model.included),
            "inclusion": {
                name: float(summary.inclusion[j])
                for j, name in enumerate(data.names)
            },
            "models": [
                {
                    "model": list(model.included),
                    "score": score_by_model[model],
                    "posterior": prob,
                }
                for model, prob in ranked
            ],
        }
        if not excluded:
            excluded = [
                {"model": list(model.included), "reason": reason}
                for model, reason in res.excluded
            ]
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": "select",
        "input": str(args.input),
        "response": args.response,
        "n": data.n,
        "p": data.p,
        "covariates": list(data.names),
        "methods": list(args.methods),
        "g": args.g,
        "model_prior": _model_prior_label(args.model_prior),
        "max_dim": args.max_dim,
        "panels": args.panels,
        "results": results,
        "diagnostics": {"excluded_models": excluded},
    }
    _emit(_json_dumps(doc), args.out)
    return 0


def _cmd_bf(args, parser) -> int:
    try:
        inp = BfInputs(n=args.n, d0=args.d0, dl=args.dl, rss0=args.rss0, rssl=args.rssl)
    except JpepError as exc:
        parser.error(str(exc))
    grid = make_grid(panels=args.panels)
    exact = log_bf_jpep(inp, grid)
    asym = log_bf_jpep_asymptotic(inp)
    if args.format == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "command": "bf",
            "n": args.n,
            "d0": args.d0,
            "dl": args.dl,
            "rss0": args.rss0,
            "rssl": args.rssl,
            "log_bf_exact": exact,
            "log_bf_asymptotic": asym,
            "difference": exact - asym,
        }
        sys.stdout.write(_json_dumps(doc))
    else:
        sys.stdout.write(f"log_bf_exact = {exact!r}\n")
        sys.stdout.write(f"log_bf_asymptotic = {asym!r}\n")
        sys.stdout.write(f"difference (exact - asymptotic) = {exact - asym!r}\n")
    return 0


def _cmd_simulate(args) -> int:
    config = SimConfig(
        n_grid=args.n_grid,
        replications=args.reps,
        seed=args.seed,
        methods=args.methods,
        g=args.g,
        model_prior=args.model_prior,
        max_dim=args.max_dim,
    )
    grid = make_grid(panels=args.panels)
    records = run_simulation(config, grid=grid, workers=args.workers)
    summary = summarize_records(records, config.p)
    out = Path(args.out)
    written = []
    if args.format == "csv":
        out.write_text(records_to_csv(records, config.p))
        written.append(out)
        summary_path = out.with_name(out.stem + "_summary.json")
        summary_path.write_text(_json_dumps(summary))
        written.append(summary_path)
    else:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "command": "simulate",
            "records": [
                {
                    "method": r.method,
                    "n": r.n,
                    "replicate": r.replicate_index,
                    "true_model_posterior": r.true_model_posterior,
                    "map_hit": bool(r.map_hit),
                    "map_size": r.map_size,
                    "inclusion": [float(v) for v in r.inclusion],
                }
                for r in records
            ],
            "summary": summary,
        }
        out.write_text(_json_dumps(doc))
        written.append(out)
    if args.figures:
        from .report import render_simulation_figures

        stem = out.with_suffix("")
        written.extend(Path(p) for p in render_simulation_figures(records, config.p, stem))
    sys.stdout.write("".join(f"wrote {p}\n" for p in written))
    return 0


def _cmd_consistency(args) -> int:
    rivals = args.rival if args.rival else [ModelSpec((3, 4)), ModelSpec((1, 3, 4, 5))]
    grid = make_grid(panels=args.panels)
    trajectories = {}
    for rival in rivals:
        traj = consistency_scan(args.true_model, rival, args.n_grid, args.seed, grid=grid)
        trajectories[str(rival)] = traj
    out = Path(args.out)
    written = []
    if args.format == "csv":
        lines = ["rival,n,log_bf_rival_vs_true"]
        for label, traj in trajectories.items():
            for n, val in traj:
                lines.append(f"\"{label}\",{n},{val!r}")
        out.write_text("\n".join(lines) + "\n")
        written.append(out)
    else:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "command": "consistency",
            "seed": args.seed,
            "true_model": list(args.true_model.included),
            "trajectories": {
                label: [{"n": n, "log_bf_rival_vs_true": val} for n, val in traj]
                for label, traj in trajectories.items()
            },
        }
        out.write_text(_json_dumps(doc))
        written.append(out)
    if args.figures:
        from .report import render_consistency_figure

        fig_path = out.with_suffix("").as_posix() + "_trajectories.png"
        written.append(Path(render_consistency_figure(trajectories, fig_path)))
    sys.stdout.write("".join(f"wrote {p}\n" for p in written))
    return 0


def _cmd_validate(args) -> int:
    grid = make_grid(nodes_per_panel=args.nodes_per_panel, panels=args.panels)
    checks = run_validation(grid)
    if args.format == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "command": "validate",
            "checks": [
                {
                    "name": c.name,
                    "measured_error": c.error,
                    "tolerance": c.tol,
                    "passed": c.passed,
                }
                for c in checks
            ],
            "all_passed": all(c.passed for c in checks),
        }
        sys.stdout.write(_json_dumps(doc))
    else:
        for c in checks:
            status = "PASS" if c.passed else "FAIL"
            sys.stdout.write(
                f"{status}  {c.name}: measured error {c.error:.3e} (tolerance {c.tol:.1e})\n"
            )
    return 0 if all(c.passed for c in checks) else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "select":
            return _cmd_select(args)
        if args.command == "bf":
            return _cmd_bf(args, parser)
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "consistency":
            return _cmd_consistency(args)
        return _cmd_validate(args)
    except JpepError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
