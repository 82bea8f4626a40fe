"""Command-line front end.

Subcommands: generate (edge list), sample (greedy sequence JSON), w1 (exact
distance between measure files), bound (spectral / combined bound report),
table (greedy-vs-random tables), figure (potential-profile and tightness
data). Exit codes: 0 success, 2 input error, 3 infeasible transport (mass
mismatch), 4 internal numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .bench import (
    BenchConfig,
    figure_potential_profile,
    figure_tightness,
    render_table_csv,
    render_table_json,
    table_report,
)
from .errors import GraphSpreadError, InputError, MassMismatchError, NumericalError
from .graphs import parse_graph_spec
from .sampler import run_sequence
from .spectral import decompose, spectrum_from_json, spectrum_to_json
from .transport import combined_bound, eigvec_bound, wasserstein1


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_measure(path: str, n: int) -> np.ndarray:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read measure file {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"measure file {path} is not valid JSON: {exc}") from None
    arr = np.asarray(data, dtype=float)
    if arr.shape != (n,):
        raise InputError(
            f"measure in {path} has {arr.shape} entries, graph needs exactly {n}"
        )
    return arr


def _get_spectrum(g, cache_path: str | None):
    if cache_path and os.path.exists(cache_path):
        with open(cache_path, encoding="utf-8") as fh:
            return spectrum_from_json(json.load(fh), g)
    s = decompose(g)
    if cache_path:
        with open(cache_path, "w", encoding="utf-8") as fh:
            json.dump(spectrum_to_json(s), fh)
    return s


def _parse_ks(text: str) -> tuple[int, ...]:
    text = text.strip()
    if ".." in text:
        lo, _, hi = text.partition("..")
        try:
            return tuple(range(int(lo), int(hi) + 1))
        except ValueError:
            raise InputError(f"bad k range {text!r}") from None
    try:
        return tuple(int(p) for p in text.split(",") if p)
    except ValueError:
        raise InputError(f"bad k list {text!r}") from None


def _cmd_generate(args) -> int:
    g = parse_graph_spec(args.graph)
    _emit(g.to_edge_list(), args.out)
    return 0


def _cmd_sample(args) -> int:
    g = parse_graph_spec(args.graph)
    s = _get_spectrum(g, args.spectrum_cache)
    seq = run_sequence(g, args.start, args.k, args.alpha, spectrum=s)
    if seq.has_revisit:
        print("note: the greedy sequence revisited a vertex", file=sys.stderr)
    _emit(json.dumps(seq.to_json(g.name), indent=2, sort_keys=True) + "\n", args.out)
    return 0


def _cmd_w1(args) -> int:
    g = parse_graph_spec(args.graph)
    mu = _load_measure(args.mu, g.n)
    nu = _load_measure(args.nu, g.n)
    res = wasserstein1(g, mu, nu)
    if args.format == "csv":
        text = f"cost\n{res.cost!r}\n"
    else:
        doc = {
            "graph": g.name,
            "cost": res.cost,
            "plan": [[int(u), int(v), m] for u, v, m in res.plan],
            "dual": res.dual.tolist(),
        }
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    _emit(text, args.out)
    return 0


def _cmd_bound(args) -> int:
    g = parse_graph_spec(args.graph)
    s = _get_spectrum(g, args.spectrum_cache)
    diam = g.diameter
    if args.mu:
        mu = _load_measure(args.mu, g.n)
        cb = combined_bound(s, mu)
        doc = {
            "graph": g.name,
            "diameter": diam,
            "combined_bound": cb.value,
            "diffusion_part": cb.diffusion_part,
            "tail": cb.tail,
            "extreme_part": cb.extreme_part,
            "diffusion_steps": cb.steps,
            "mid_rate": cb.mid_rate,
        }
        if args.exact:
            dx = np.full(g.n, 1.0 / g.n)
            doc["exact_w1"] = wasserstein1(g, mu, dx, need_plan=False).cost
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
        _emit(text, args.out)
        return 0
    if args.exact:
        entries = figure_tightness(g, spectrum=s)
        rows = [
            {
                "eigenvalue": e.eigenvalue,
                "multiplicity": e.multiplicity,
                "degenerate": e.degenerate,
                "w1": e.w1,
                "bound": e.bound,
                "quotient": e.quotient,
            }
            for e in entries
        ]
    else:
        lam = s.eigenvalues
        rows = []
        i = 1
        while i < g.n:
            j = i
            while j + 1 < g.n and lam[j + 1] - lam[i] <= 1e-9:
                j += 1
            bounds = [
                eigvec_bound(float(lam[idx]), s.eigenvectors[:, idx], diam)
                for idx in range(i, j + 1)
            ]
            worst = max(b.best for b in bounds)
            rows.append(
                {
                    "eigenvalue": float(lam[i]),
                    "multiplicity": j - i + 1,
                    "degenerate": j > i,
                    "spectral": max(b.spectral for b in bounds),
                    "trivial": max(b.trivial for b in bounds),
                    "best": worst,
                    "spectral_preferred": bounds[0].spectral_preferred,
                }
            )
            i = j + 1
    if args.format == "csv":
        keys = list(rows[0].keys())
        lines = [",".join(keys)]
        for row in rows:
            lines.append(",".join(_csv_cell(row[k]) for k in keys))
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(
            {"graph": g.name, "diameter": diam, "rows": rows},
            indent=2,
            sort_keys=True,
        ) + "\n"
    _emit(text, args.out)
    return 0


def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def _cmd_table(args) -> int:
    start = None if args.start == "all" else int(args.start)
    config = BenchConfig(
        graph=args.graph,
        alpha=args.alpha,
        ks=_parse_ks(args.k),
        trials=args.trials,
        seed=args.seed,
        start=start,
        fmt=args.format,
        out=args.out,
    )
    g = parse_graph_spec(config.graph)
    s = _get_spectrum(g, args.spectrum_cache)
    report = table_report(config, g=g, spectrum=s)
    text = render_table_csv(report) if config.fmt == "csv" else render_table_json(report)
    _emit(text, args.out)
    return 0


def _cmd_figure(args) -> int:
    if args.kind == "potential":
        rows = figure_potential_profile(args.n, args.alpha)
        if args.format == "csv":
            lines = ["x,discrete,continuous"]
            lines += [
                f"{x},{d!r},{'' if c is None else repr(c)}" for x, d, c in rows
            ]
            text = "\n".join(lines) + "\n"
        else:
            text = json.dumps(
                {
                    "n": args.n,
                    "alpha": args.alpha,
                    "rows": [
                        {"x": x, "discrete": d, "continuous": c} for x, d, c in rows
                    ],
                },
                indent=2,
                sort_keys=True,
            ) + "\n"
    else:
        g = parse_graph_spec(args.graph)
        s = _get_spectrum(g, args.spectrum_cache)
        entries = figure_tightness(g, spectrum=s)
        if args.format == "csv":
            lines = ["eigenvalue,multiplicity,degenerate,w1,bound,quotient"]
            lines += [
                f"{e.eigenvalue!r},{e.multiplicity},{int(e.degenerate)},"
                f"{e.w1!r},{e.bound!r},{e.quotient!r}"
                for e in entries
            ]
            text = "\n".join(lines) + "\n"
        else:
            text = json.dumps(
                {
                    "graph": g.name,
                    "rows": [
                        {
                            "eigenvalue": e.eigenvalue,
                            "multiplicity": e.multiplicity,
                            "degenerate": e.degenerate,
                            "w1": e.w1,
                            "bound": e.bound,
                            "quotient": e.quotient,
                        }
                        for e in entries
                    ],
                },
                indent=2,
                sort_keys=True,
            ) + "\n"
    _emit(text, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphspread",
        description="Well-spread vertex sequences on graphs and spectral transport bounds",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, *, graph=True, fmt_default="json"):
        if graph:
            p.add_argument(
                "--graph",
                required=True,
                help="named graph spec (e.g. cycle:20, torus_grid:6,6, frucht) or edge-list path",
            )
        p.add_argument("--format", choices=("csv", "json"), default=fmt_default)
        p.add_argument("--out", default=None, help="output path (default: stdout)")

    p = sub.add_parser("generate", help="emit a named graph as an edge list")
    p.add_argument("--graph", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("sample", help="run the greedy sampler, emit sequence JSON")
    add_common(p)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--k", type=int, default=10, help="number of picks")
    p.add_argument("--spectrum-cache", default=None)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("w1", help="exact W1 between two measure files (JSON arrays)")
    add_common(p)
    p.add_argument("mu", help="JSON array of per-vertex masses")
    p.add_argument("nu", help="JSON array of per-vertex masses")
    p.set_defaults(func=_cmd_w1)

    p = sub.add_parser("bound", help="spectral transport bound report")
    add_common(p)
    p.add_argument("--mu", default=None, help="measure file: report the combined bound for it")
    p.add_argument("--exact", action="store_true", help="also compute exact W1 values")
    p.add_argument("--spectrum-cache", default=None)
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("table", help="greedy-vs-random W1 table")
    add_common(p, fmt_default="csv")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--start", default="0", help="start vertex, or 'all' to sweep")
    p.add_argument("--k", default="1..10", help="k values: 'a..b' or comma list")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--spectrum-cache", default=None)
    p.set_defaults(func=_cmd_table)

    p = sub.add_parser("figure", help="figure data: potential profile or bound tightness")
    p.add_argument("kind", choices=("potential", "tightness"))
    p.add_argument("--graph", default=None, help="graph spec (tightness)")
    p.add_argument("--n", type=int, default=100, help="cycle size (potential)")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.add_argument("--spectrum-cache", default=None)
    p.set_defaults(func=_cmd_figure)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "figure" and args.kind == "tightness" and not args.graph:
        parser.error("figure tightness requires --graph")
    try:
        return args.func(args)
    except MassMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except GraphSpreadError as exc:  # safety net for anything uncategorized
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
