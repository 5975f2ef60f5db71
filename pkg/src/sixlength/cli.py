"""Command-line entry point.

Vertices are 1-indexed on the command line and in every file.  Data goes to
``--out`` (default stdout) as CSV or line-delimited JSON; progress and errors go
to stderr.  Every output starts with a header naming the tool version, the
subcommand, the resolved flags and the seed.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import __version__
from .asymptotics import ladder_table, m3_bound_check
from .degrees import check_assumptions, parse_generator_spec, stats
from .errors import SixLengthError
from .exact import joint_law, survival
from .experiments import (ExperimentConfig, draw_samples, resolve_target, summarize,
                          write_samples)
from .graph import read_graph_csv, sample_uniform, sample_walks_lazy, walk_lengths
from .reduction import coupled_six_length, n_extend, urn_run_many, urn_mean, w_reduce
from .rng import fresh_seed, stream

COLUMNS = {
    "sample": "v,f_v: edge list of the sampled mapping (1-indexed)",
    "walk": "vertex,six,tail,cycle",
    "exact": "k,surv: P(SL > k)",
    "joint": "six,tail,prob: P(SL = six, TL = tail)",
    "approx": "k,exact,rayleigh,refined,product,rel_err_*: approximations of g(k)",
    "reduce": "reduced_id,original_id,f_reduced,degree",
    "extend": "v,f_v: edge list of the extended mapping (1-indexed)",
    "urn": "run,red: red balls after the requested number of draws",
    "couple": "trial,six: six-length via the reduced graph and urn",
    "experiment": "statistic,value: summary statistics of the run",
    "check": "condition,lhs,rhs,ratio,want,degenerate plus degree statistics",
}


class Output:
    def __init__(self, path: str | None, fmt: str, header: dict):
        self.fmt = fmt
        self.fh = open(path, "w") if path else sys.stdout
        self.own = bool(path)
        if fmt == "json":
            self.fh.write(json.dumps({"header": header}, sort_keys=True) + "\n")
        else:
            for key in ("tool", "subcommand", "seed", "flags"):
                val = header[key] if key != "flags" else json.dumps(header[key], sort_keys=True)
                self.fh.write(f"# {key}: {val}\n")

    def rows(self, columns: Sequence[str], rows: Iterable[Sequence]) -> None:
        if self.fmt == "json":
            for r in rows:
                self.fh.write(json.dumps(dict(zip(columns, [_plain(x) for x in r]))) + "\n")
        else:
            self.fh.write(",".join(columns) + "\n")
            for r in rows:
                self.fh.write(",".join(_cell(x) for x in r) + "\n")

    def close(self):
        if self.own:
            self.fh.close()
        else:
            self.fh.flush()


def _plain(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, Fraction):
        return str(x)
    return x


def _cell(x) -> str:
    x = _plain(x)
    if isinstance(x, float):
        return repr(x)
    return str(x)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="vertex count for generator specs")
    common.add_argument("--degrees", help="file:PATH | generator:KIND[:k=v,...]")
    common.add_argument("--vertex", default="1",
                        help="start vertex (1-indexed), or max-degree / zero-degree")
    common.add_argument("--seed", type=int, help="root seed (default: OS entropy, echoed)")
    common.add_argument("--trials", type=int, default=1)
    common.add_argument("--kmax", type=int)
    common.add_argument("--backend", choices=("rational", "float"), default="float")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--workers", type=int, default=1)

    p = argparse.ArgumentParser(prog="sixlength", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"sixlength {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_,
                              description=f"{help_}. Columns: {COLUMNS[name]}")

    add("sample", "sample a uniform mapping with the given in-degrees")
    w = add("walk", "six-, tail- and cycle-length of a start vertex")
    w.add_argument("--graph", help="graph CSV (v,f(v) lines); otherwise lazy sampling")
    add("exact", "exact survival table P(SL > k)")
    add("joint", "exact joint law of (six-length, tail-length)")
    add("approx", "approximation ladder for g(k) against the exact value")
    r = add("reduce", "contract degree-1 vertices keeping --vertex")
    r.add_argument("--graph", help="graph CSV; otherwise a graph is sampled from --degrees")
    r.add_argument("--labels-out", help="write the original_id,reduced_id map here")
    e = add("extend", "randomly re-inflate a graph to --n vertices")
    e.add_argument("--graph", required=True, help="graph CSV of the reduced graph")
    e.add_argument("--labels", help="original_id,reduced_id map of the reduced graph")
    u = add("urn", "run Polya urns")
    u.add_argument("--steps", type=int, required=True)
    u.add_argument("--red", type=int, required=True)
    u.add_argument("--blue", type=int, required=True)
    add("couple", "six-length via reduction and urn")
    x = add("experiment", "Monte-Carlo experiment with summary statistics")
    x.add_argument("--sampler", choices=("full", "lazy", "coupled"), default="lazy")
    x.add_argument("--samples-out", help="stream raw (six, tail) pairs to this file")
    add("check", "degree statistics and assumption diagnostics")
    return p


def _degrees(args, gen):
    if not args.degrees:
        raise SixLengthError("--degrees is required")
    return parse_generator_spec(args.degrees, args.n, gen)


def _vertex(args, ds) -> int:
    rule = args.vertex
    if rule in ("max-degree", "zero-degree"):
        return resolve_target(ds, rule)
    v = int(rule) - 1
    if ds is not None and not 0 <= v < ds.n:
        raise SixLengthError(f"vertex {rule} outside 1..{ds.n}")
    return v


def _read_labels(path) -> list[int]:
    pairs = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or line.startswith("original"):
                continue
            a, b = line.split(",")[:2]
            pairs.append((int(b), int(a)))
    pairs.sort()
    return [orig - 1 for _, orig in pairs]


def run(args) -> None:
    seed = args.seed if args.seed is not None else fresh_seed()
    flags = {k: v for k, v in vars(args).items() if k != "command"}
    flags["seed"] = seed
    header = {"tool": f"sixlength {__version__}", "subcommand": args.command, "seed": seed,
              "flags": flags}
    gen_deg = stream(seed, 0)
    gen = stream(seed, 2)
    cmd = args.command

    if cmd == "urn":
        out = Output(args.out, args.format, header)
        red = urn_run_many(args.steps, args.red, args.blue, gen, size=args.trials)
        print(f"mean {red.mean():.6g} (expected {urn_mean(args.steps, args.red, args.blue):.6g})",
              file=sys.stderr)
        out.rows(["run", "red"], ((i + 1, r) for i, r in enumerate(red.tolist())))
        out.close()
        return

    if cmd == "extend":
        g = read_graph_csv(args.graph)
        labels = _read_labels(args.labels) if args.labels else None
        if args.n is None:
            raise SixLengthError("--n (target size) is required")
        h = n_extend(g, args.n, gen, labels)
        out = Output(args.out, args.format, header)
        out.rows(["v", "f_v"], ((v + 1, f + 1) for v, f in enumerate(h.image.tolist())))
        out.close()
        return

    if cmd == "walk" and args.graph:
        g = read_graph_csv(args.graph)
        v = _vertex(args, g.degree_sequence())
        wl = walk_lengths(g, v)
        out = Output(args.out, args.format, header)
        out.rows(["vertex", "six", "tail", "cycle"], [(v + 1, wl.six, wl.tail, wl.cycle)])
        out.close()
        return

    ds = _degrees(args, gen_deg)
    out = Output(args.out, args.format, header)
    try:
        if cmd == "sample":
            g = sample_uniform(ds, gen)
            out.rows(["v", "f_v"], ((v + 1, f + 1) for v, f in enumerate(g.image.tolist())))
        elif cmd == "walk":
            v = _vertex(args, ds)
            recs = sample_walks_lazy(ds, v, args.trials, gen)
            out.rows(["vertex", "six", "tail", "cycle"],
                     ((v + 1, s, t, s - t) for s, t in recs.tolist()))
        elif cmd == "exact":
            v = _vertex(args, ds)
            tab = survival(ds, v, args.kmax, args.backend)
            out.rows(["k", "surv"], enumerate(tab.surv))
        elif cmd == "joint":
            v = _vertex(args, ds)
            law = joint_law(ds, v, args.kmax, args.backend)
            out.rows(["six", "tail", "prob"], law.items())
        elif cmd == "approx":
            ks = range(1, args.kmax + 1) if args.kmax else None
            rows = ladder_table(ds, ks, args.backend)
            cols = list(rows[0]) if rows else ["k"]
            out.rows(cols, ([r[c] for c in cols] for r in rows))
        elif cmd == "reduce":
            v = _vertex(args, ds)
            g = read_graph_csv(args.graph) if args.graph else sample_uniform(ds, gen)
            res = w_reduce(g, ds, v)
            print(f"n_hat {res.n_hat}, kept {len(res.kept)} of {ds.n}", file=sys.stderr)
            out.rows(["reduced_id", "original_id", "f_reduced", "degree"],
                     ((i + 1, orig + 1, int(res.reduced.image[i]) + 1, ds[orig])
                      for i, orig in enumerate(res.kept)))
            if args.labels_out:
                res.write_label_map(args.labels_out,
                                    [f"sixlength {__version__}", f"n_hat {res.n_hat}"])
        elif cmd == "couple":
            v = _vertex(args, ds)
            six = coupled_six_length(ds, v, gen, size=args.trials)
            out.rows(["trial", "six"], ((i + 1, s) for i, s in enumerate(six.tolist())))
        elif cmd == "experiment":
            v = _vertex(args, ds)
            cfg = ExperimentConfig(degrees=ds, n=ds.n, target=v, trials=args.trials, seed=seed,
                                   sampler=args.sampler, workers=args.workers)
            t0 = time.time()
            print(f"running {args.trials} trials at n={ds.n}", file=sys.stderr)
            samples = draw_samples(cfg, ds, v)
            rep = summarize(samples, ds, v, cfg)
            print(f"done in {time.time() - t0:.1f}s", file=sys.stderr)
            out.rows(["statistic", "value"], rep.rows())
            if args.samples_out:
                write_samples(samples, args.samples_out,
                              [f"sixlength {__version__}", f"seed: {seed}", "six tail"])
        elif cmd == "check":
            rep = check_assumptions(ds)
            st = stats(ds)
            m3 = m3_bound_check(ds)
            rows = [(r["condition"], r["lhs"], r["rhs"], r["ratio"], r["want"], r["degenerate"])
                    for r in rep.rows()]
            rows += [("n", st.n, "", "", "", ""), ("delta", st.delta, "", "", "", ""),
                     ("m2", st.m2, "", "", "", ""), ("m3", st.m3, "", "", "", ""),
                     ("sigma2", st.sigma2, "", st.sigma2_float, "", ""),
                     ("m3_bound", m3.m3, m3.bound, m3.ratio, "holds" if m3.holds else "fails", "")]
            out.rows(["condition", "lhs", "rhs", "ratio", "want", "degenerate"], rows)
    finally:
        out.close()


def dispatch(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        run(args)
    except (SixLengthError, OSError, ValueError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
