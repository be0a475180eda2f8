"""Command line front end.

    hurwitz <subcommand> [options]

Exit status: 0 success, 1 a verification failed, 2 an enumeration budget
refused the job, 64 bad usage.  Settings resolve as flag, then ``HF_*``
environment variable, then ``key = value`` config file, then default.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
import time
from dataclasses import dataclass, fields
from fractions import Fraction
from pathlib import Path
from typing import Callable

from . import oracle, spectral, surfaces
from .cutjoin import NORMALIZATIONS, verify_cutjoin
from .permgroup import CycleType

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_BUDGET = 2
EXIT_USAGE = 64

log = logging.getLogger("hurwitz")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    budget: int = oracle.DEFAULT_BUDGET
    threads: int = 1
    g_max: int = 2
    n_max: int = 3
    m_max: int = 4
    output: str = "text"
    seed: int = 0
    cache: str | None = None

    def validate(self):
        if self.budget < 1:
            raise UsageError("budget must be at least 1")
        for name in ("threads", "g_max", "n_max", "m_max"):
            if getattr(self, name) < 1:
                raise UsageError(f"{name} must be positive")
        if self.output not in ("text", "json"):
            raise UsageError("output must be text or json")
        return self

    @classmethod
    def resolve(cls, flags: dict, env=None, config_path: str | None = None) -> "RunConfig":
        env = os.environ if env is None else env
        config_path = config_path or env.get("HF_CONFIG")
        from_file = read_config(config_path) if config_path else {}
        kw = {}
        for f in fields(cls):
            raw = flags.get(f.name)
            if raw is None:
                raw = env.get("HF_" + f.name.upper())
            if raw is None:
                raw = from_file.get(f.name)
            if raw is None:
                continue
            kw[f.name] = _coerce(f.name, raw)
        return cls(**kw).validate()


_INT_KEYS = {"budget", "threads", "g_max", "n_max", "m_max", "seed"}


def _coerce(name, raw):
    if name in _INT_KEYS:
        try:
            return int(raw)
        except (TypeError, ValueError):
            raise UsageError(f"{name} must be an integer, got {raw!r}") from None
    return str(raw)


def read_config(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment, ``[section]`` lines are ignored."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line or line.startswith("["):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value.strip("\"'")
    return out


# ---------------------------------------------------------------------------
# output


class Output:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def emit(self, text: str, data):
        if self.fmt == "json":
            print(json.dumps(data, indent=2, default=str), file=self.stream)
        else:
            print(text, file=self.stream)


def read_graph(source: str) -> surfaces.MultiGraph:
    """A graph from a file path or an inline ``"1-2;1-2;1-2"`` string."""
    p = Path(source)
    text = p.read_text() if p.is_file() else source
    try:
        return surfaces.MultiGraph.parse(text)
    except (ValueError, IndexError) as exc:
        raise UsageError(f"cannot parse graph {source!r}: {exc}") from None


def _need(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required")


def _cache(cfg):
    return oracle.PolyCache(cfg.cache) if cfg.cache else None


# ---------------------------------------------------------------------------
# subcommands; each returns an exit code


def cmd_hurwitz_poly(args, cfg, out):
    kw = dict(budget=cfg.budget, workers=cfg.threads, cache=_cache(cfg))
    if args.lam is not None:
        _need(args, "g")
        lam = CycleType.parse(args.lam)
        P = oracle.hurwitz_poly_lambda(lam, args.g, **kw)
        label = f"P_{{{args.g},({','.join(map(str, lam))})}}"
    else:
        _need(args, "n", "g")
        P = oracle.hurwitz_poly(args.n, args.g, **kw)
        label = f"P_{{{args.g},{args.n}}}"
    out.emit(f"{label} = {P}", P.to_json())
    return EXIT_OK


def cmd_hurwitz_number(args, cfg, out):
    kw = dict(budget=cfg.budget, workers=cfg.threads, cache=_cache(cfg))
    _need(args, "g")
    if args.lam is not None:
        lam = CycleType.parse(args.lam)
        h = oracle.hurwitz_number_lambda(lam, args.g, **kw)
        label = f"h_{{{args.g},({','.join(map(str, lam))})}}"
    else:
        _need(args, "n")
        h = oracle.hurwitz_number(args.n, args.g, **kw)
        label = f"h_{{{args.g},{args.n}}}"
    out.emit(f"{label} = {h}", {"value": str(h)})
    return EXIT_OK


def cmd_tree_poly(args, cfg, out):
    _need(args, "n")
    T = spectral.tree_poly(args.n, method=args.method)
    out.emit(f"T_{args.n} = {T}", T.to_json())
    return EXIT_OK


def cmd_rgn(args, cfg, out):
    _need(args, "n", "g")
    if args.kind == "r":
        P = spectral.r_part(args.g, args.n)
    else:
        P = spectral.R_part(args.g, args.n)
    name = f"{args.kind}_{{{args.g},{args.n}}}"
    if args.graphs:
        from .wring import collect

        S = collect(P)
        lines = [f"{name} as graphs:"] + [f"  {c}  {G}" for G, c in S.items()]
        out.emit("\n".join(lines), S.to_json())
    else:
        out.emit(f"{name} = {P}", P.to_json())
    return EXIT_OK


def cmd_verify_div(args, cfg, out):
    _need(args, "n", "g")
    rep = spectral.verify_div(args.g, args.n, budget=cfg.budget, workers=cfg.threads, cache=_cache(cfg))
    data = {"n": rep.n, "g": rep.g, "check": rep.ok, "oracle_terms": len(rep.oracle)}
    if not rep.ok:
        m, c = next(iter(sorted(rep.diff.terms.items())))
        data["first_difference"] = {"monomial": [[i, j, k] for (i, j), k in m], "diff": str(c)}
    out.emit(rep.summary(), data)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_hurwitz_closed(args, cfg, out):
    _need(args, "n", "g")
    h = spectral.hurwitz_closed(args.g, args.n)
    data = {"n": args.n, "g": args.g, "value": str(h)}
    text = f"h_{{{args.g},{args.n}}} = {h}"
    if args.check:
        ref = oracle.hurwitz_number(args.n, args.g, budget=cfg.budget, workers=cfg.threads, cache=_cache(cfg))
        data["oracle"] = str(ref)
        data["check"] = ref == h
        text += f" (oracle {ref}: {'equal' if ref == h else 'DIFFERENT'})"
        out.emit(text, data)
        return EXIT_OK if ref == h else EXIT_FAIL
    out.emit(text, data)
    return EXIT_OK


def cmd_embeddings(args, cfg, out):
    _need(args, "graph")
    G = read_graph(args.graph)
    dist = surfaces.face_distribution(G, budget=cfg.budget)
    data = {
        "graph": str(G),
        "emb": surfaces.emb_count(G),
        "one_faced": dist[1],
        "faces": {str(f): k for f, k in sorted(dist.items())},
    }
    lines = [f"{G}: {data['emb']} embeddings, {data['one_faced']} one-faced"]
    for f, k in sorted(dist.items()):
        genus = (2 - G.v + G.n_edges - f) // 2
        lines.append(f"  {f} faces (genus {genus}): {k}")
    out.emit("\n".join(lines), data)
    return EXIT_OK


def cmd_decorations(args, cfg, out):
    _need(args, "graph")
    G = read_graph(args.graph)
    decs = surfaces.decorations(G)
    total = sum((d.weight for d in decs), Fraction(0))

    def show(d):
        return " ".join(f"v{x + 1}:{list(hs)}" for x, hs in sorted(d.chosen.items()))

    lines = [f"{G}: {len(decs)} decorations, total weight {total}"]
    lines += [f"  {d.weight}  {show(d)}" for d in decs]
    data = {
        "graph": str(G),
        "decorations": [{"chosen": {str(x + 1): list(hs) for x, hs in d.chosen.items()}, "weight": str(d.weight)}
                        for d in decs],
        "decoration_sum": str(total),
    }
    out.emit("\n".join(lines), data)
    return EXIT_OK


def cmd_verify_spiders(args, cfg, out):
    if args.exhaustive:
        reports = []
        for G in surfaces.connected_multigraphs(args.max_edges, loops=True, min_edges=1):
            b = G.betti()
            if b >= 2 and b % 2 == 0:
                reports.append(surfaces.verify_spiders(G, budget=cfg.budget))
        bad = [r for r in reports if not r.check]
        text = "\n".join(r.summary() for r in reports)
        text += f"\n{len(reports) - len(bad)}/{len(reports)} graphs satisfy the identity"
        out.emit(text, {"graphs": [r.to_json() for r in reports], "check": not bad})
        return EXIT_FAIL if bad else EXIT_OK
    _need(args, "graph")
    rep = surfaces.verify_spiders(read_graph(args.graph), budget=cfg.budget)
    out.emit(rep.summary(), rep.to_json())
    return EXIT_OK if rep.check else EXIT_FAIL


def cmd_verify_cutjoin(args, cfg, out):
    rep = verify_cutjoin(cfg.n_max, cfg.m_max, budget=cfg.budget, workers=cfg.threads,
                         normalization=args.normalization)
    data = rep.to_json()
    if rep.ok:
        text = (f"cut-and-join holds for n <= {rep.n_max}, w-degree < {rep.m_max} "
                f"({len(rep.blocks_checked)} blocks, {rep.lhs_terms} terms)")
    else:
        first = data["first_mismatch"]
        text = (f"cut-and-join FAILS: {len(rep.mismatches)} mismatches; first at "
                f"{first['w']} * p{first['p']}: lhs {first['lhs']}, rhs {first['rhs']}")
    out.emit(text, data)
    return EXIT_OK if rep.ok else EXIT_FAIL


def random_weights(n: int, rng: random.Random) -> dict:
    """Positive rational w_ij with numerators and denominators in 1..100."""
    return {(i, j): Fraction(rng.randint(1, 100), rng.randint(1, 100))
            for i in range(1, n + 1) for j in range(i + 1, n + 1)}


def cmd_sumsign(args, cfg, out):
    _need(args, "n", "g")
    exact = oracle.hurwitz_poly(args.n, args.g, budget=cfg.budget, workers=cfg.threads, cache=_cache(cfg))
    rng = random.Random(cfg.seed)
    worst = worst_k = 0.0
    for _ in range(args.samples):
        rep = spectral.eval_sumsign(args.g, args.n, random_weights(args.n, rng), exact=exact)
        worst = max(worst, rep.rel_error)
        worst_k = max(worst_k, rep.kirchhoff_rel_error)
    ok = worst < args.tol and worst_k < args.tol
    data = {"n": args.n, "g": args.g, "samples": args.samples, "seed": cfg.seed,
            "max_rel_error": worst, "max_kirchhoff_rel_error": worst_k, "check": ok}
    out.emit(f"eigenvalue formula at (n={args.n}, g={args.g}), {args.samples} samples: "
             f"max rel. error {worst:.3g}, sigma product vs n*T_n {worst_k:.3g}", data)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_positivity_scan(args, cfg, out):
    rep = spectral.positivity_scan(cfg.g_max, cfg.n_max)
    data = {"g_max": rep.g_max, "n_max": rep.n_max, "checked": rep.checked,
            "nonpositive": [{"g": g, "n": n, "graph": str(G), "coeff": str(c)} for g, n, G, c in rep.negatives]}
    text = f"{rep.checked} coefficients of R_g (g <= {rep.g_max}, n <= {rep.n_max}): "
    text += "all positive" if rep.ok else f"{len(rep.negatives)} non-positive"
    for g, n, G, c in rep.negatives:
        text += f"\n  g={g} n={n} {G}: {c}"
    out.emit(text, data)
    return EXIT_FAIL if (args.strict and not rep.ok) else EXIT_OK


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output", choices=["text", "json"], help="output format")
    common.add_argument("--report", dest="output", choices=["text", "json"], help="alias of --format")
    common.add_argument("--budget", type=int, help="maximum leaf visits for enumerations")
    common.add_argument("--threads", type=int, help="worker processes")
    common.add_argument("--seed", type=int)
    common.add_argument("--config", help="key = value settings file")
    common.add_argument("--cache", help="directory memoizing oracle polynomials")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="hurwitz", description="Hurwitz polynomials, graph expansions and their checks.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def add(name, func: Callable, help_text, *opts):
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        for opt in opts:
            opt(p)
        p.set_defaults(func=func)
        return p

    def n(p):
        p.add_argument("--n", type=int)

    def g(p):
        p.add_argument("--g", type=int)

    def lam(p):
        p.add_argument("--lambda", dest="lam", help="cycle type, e.g. 2,1,1")

    def graph(p):
        p.add_argument("--graph", help="file or inline edge list such as 1-2;1-2;1-2")

    add("hurwitz-poly", cmd_hurwitz_poly, "enumerate P_{g,n} (or P_{g,lambda})", n, g, lam)
    add("hurwitz-number", cmd_hurwitz_number, "enumerate h_{g,n} = P(1)/n!", n, g, lam)
    add("tree-poly", cmd_tree_poly, "the tree polynomial T_n", n,
        lambda p: p.add_argument("--method", choices=["auto", "kirchhoff", "pruefer"], default="auto"))
    add("rgn", cmd_rgn, "r_{g,n} or R_{g,n}", n, g,
        lambda p: p.add_argument("--kind", choices=["r", "R"], default="R"),
        lambda p: p.add_argument("--graphs", action="store_true", help="print as a combination of graphs"))
    add("verify-div", cmd_verify_div, "check P_{g,n} = (n+2g-1)! T_n R_{g,n}", n, g)
    add("hurwitz-closed", cmd_hurwitz_closed, "closed form of h_{g,n}", n, g,
        lambda p: p.add_argument("--check", action="store_true", help="compare with the enumeration"))
    add("embeddings", cmd_embeddings, "count embeddings by number of faces", graph)
    add("decorations", cmd_decorations, "list decorations and their weights", graph)
    add("verify-spiders", cmd_verify_spiders, "one-faced embeddings vs decoration weights", graph,
        lambda p: p.add_argument("--exhaustive", action="store_true"),
        lambda p: p.add_argument("--max-edges", type=int, default=5))
    add("verify-cutjoin", cmd_verify_cutjoin, "check the cut-and-join equation on a truncation",
        lambda p: p.add_argument("--n-max", type=int),
        lambda p: p.add_argument("--m-max", type=int),
        lambda p: p.add_argument("--normalization", choices=NORMALIZATIONS, default="class"))
    add("sumsign", cmd_sumsign, "eigenvalue formula at random positive weights", n, g,
        lambda p: p.add_argument("--samples", type=int, default=100),
        lambda p: p.add_argument("--tol", type=float, default=1e-8))
    add("positivity-scan", cmd_positivity_scan, "search R_g for non-positive graph coefficients",
        lambda p: p.add_argument("--g-max", type=int),
        lambda p: p.add_argument("--n-max", type=int),
        lambda p: p.add_argument("--strict", action="store_true", help="exit 1 if a counterexample is found"))
    return parser


def main(argv=None, env=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    flags = {k: getattr(args, k, None) for k in ("budget", "threads", "output", "seed", "cache",
                                                   "g_max", "n_max", "m_max")}
    try:
        cfg = RunConfig.resolve(flags, env, args.config)
        out = Output(cfg.output)
        start = time.perf_counter()
        code = args.func(args, cfg, out)
        log.debug("%s finished in %.2fs", args.command, time.perf_counter() - start)
        return code
    except UsageError as exc:
        print(f"hurwitz: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (oracle.BudgetExceeded, surfaces.EnumerationBudgetExceeded) as exc:
        print(f"hurwitz: refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"hurwitz: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
