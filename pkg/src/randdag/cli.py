"""Command-line interface: ``randdag gen | verify | path``.

Exit codes: 0 pass, 1 a verification failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional, Sequence

from . import io
from .chain import (
    CONNECTED,
    UNRESTRICTED,
    ChainConfig,
    MarkovChain,
    default_burn_in,
    default_steps,
    derive_seed,
    run_chain,
)
from .exceptions import InputError
from .oracle import (
    build_matrix,
    check_convergence,
    check_doubly_stochastic,
    check_irreducible,
    check_rows_exact,
    check_symmetric,
    diameter,
    enumerate_space,
    start_ordinal,
    path_length_bound,
)
from .proofpath import PathCertificate, build_path
from .stats import chi_square_band, sample_chain

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

CHECKS = ("symmetry", "irreducibility", "diameter", "convergence", "uniformity", "remark")

# option name -> (converter, hard default); hard defaults that depend on n are None
_CHAIN_KEYS = {
    "n": (int, None),
    "seed": (int, 0),
    "connected": (lambda v: _truthy(v), False),
    "no_reversal": (lambda v: _truthy(v), False),
    "max_arcs": (int, None),
    "max_out_degree": (int, None),
    "max_in_degree": (int, None),
}


def _truthy(value) -> bool:
    if isinstance(value, bool):
        return value
    return str(value).strip().lower() in ("1", "true", "yes", "on")


def _chain_options(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("chain")
    g.add_argument("--config", help="key=value file; explicit flags override it")
    g.add_argument("--n", type=int, help="number of vertices (>= 2)")
    g.add_argument("--seed", type=int, help="64-bit RNG seed (default 0)")
    g.add_argument("--connected", action="store_const", const=True,
                   help="sample connected acyclic digraphs")
    g.add_argument("--no-reversal", action="store_const", const=True,
                   help="disable reversal of disconnecting arcs")
    g.add_argument("--max-arcs", type=int, help="cap on the total number of arcs")
    g.add_argument("--max-out-degree", type=int, help="cap on every vertex's out-degree")
    g.add_argument("--max-in-degree", type=int, help="cap on every vertex's in-degree")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="randdag",
        description="Uniform random acyclic digraphs by Markov chain, with exhaustive checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate random graphs")
    _chain_options(gen)
    gen.add_argument("--steps", type=int, help="steps per independent graph (default 20 n^2)")
    gen.add_argument("--count", type=int, help="number of graphs (default 1)")
    gen.add_argument("--format", choices=io.FORMATS, help="output format (default edge-list)")
    gen.add_argument("--burn-in", type=int,
                     help="single-chain mode: steps discarded first (default 10 n^2 ln 3^(n(n-1)/2))")
    gen.add_argument("--gap", type=int,
                     help="switch to single-chain mode, emitting a graph every GAP steps")

    ver = sub.add_parser("verify", help="check a structural or statistical claim")
    ver.add_argument("check", choices=CHECKS)
    _chain_options(ver)
    ver.add_argument("--steps", type=int, help="convergence: matrix power (default 10000)")
    ver.add_argument("--tol", type=float,
                     help="TV threshold (default 1e-6 for convergence, 0.01 for uniformity)")
    ver.add_argument("--count", type=int, help="uniformity: samples (default 100000)")
    ver.add_argument("--burn-in", type=int, help="uniformity: burn-in steps")
    ver.add_argument("--gap", type=int, help="uniformity: steps between samples (default 50)")
    ver.add_argument("--chains", type=int, help="uniformity: independent chains (default 1)")
    ver.add_argument("--json", action="store_true", help="print the summary as JSON")

    path = sub.add_parser("path", help="emit or replay a transition certificate")
    path.add_argument("--from", dest="source", help="edge-list file of the start graph")
    path.add_argument("--to", dest="target", help="edge-list file of the end graph")
    path.add_argument("--replay", help="certificate file to validate ('-' for stdin)")
    return parser


def _resolve(args: argparse.Namespace, extra: Sequence[str] = ()) -> dict:
    file_values = io.read_config_file(args.config) if getattr(args, "config", None) else {}
    unknown = set(file_values) - set(_CHAIN_KEYS) - set(extra)
    if unknown:
        raise InputError(f"unknown config keys: {', '.join(sorted(unknown))}")
    out = {}
    for key, (conv, default) in _CHAIN_KEYS.items():
        value = getattr(args, key)
        if value is None and key in file_values:
            try:
                value = conv(file_values[key])
            except ValueError:
                raise InputError(f"config key {key}: bad value {file_values[key]!r}") from None
        out[key] = default if value is None else value
    for key in extra:
        value = getattr(args, key)
        if value is None and key in file_values:
            value = int(file_values[key])
        out[key] = value
    if out["n"] is None:
        raise InputError("--n is required")
    return out


def _config(opts: dict, steps: int = 0) -> ChainConfig:
    return ChainConfig(
        n=opts["n"],
        variant=CONNECTED if opts["connected"] else UNRESTRICTED,
        reversal=not opts["no_reversal"],
        max_arcs=opts["max_arcs"],
        max_out_degree=opts["max_out_degree"],
        max_in_degree=opts["max_in_degree"],
        steps=steps,
        seed=opts["seed"],
    )


def cmd_gen(args: argparse.Namespace) -> int:
    opts = _resolve(args, ("steps", "count", "burn_in", "gap"))
    n = opts["n"]
    steps = default_steps(n) if opts["steps"] is None else opts["steps"]
    count = 1 if opts["count"] is None else opts["count"]
    if count < 1:
        raise InputError("--count must be >= 1")
    cfg = _config(opts, steps)
    fmt = args.format or "edge-list"
    if opts["gap"] is not None:
        if opts["gap"] < 1:
            raise InputError("--gap must be >= 1")
        burn_in = default_burn_in(n) if opts["burn_in"] is None else opts["burn_in"]
        mc = MarkovChain(cfg)
        mc.advance(burn_in)
        graphs = [mc.run(opts["gap"]) for _ in range(count)]
    else:
        # graph k depends only on (seed, k), never on --count
        graphs = [run_chain(cfg.replace(seed=derive_seed(cfg.seed, k))) for k in range(count)]
    sys.stdout.write(io.dumps(graphs, fmt))
    return EXIT_PASS


def _report(summary: dict, passed: bool, as_json: bool) -> int:
    summary = {**summary, "result": "PASS" if passed else "FAIL"}
    if as_json:
        print(json.dumps(summary, default=lambda o: None if o is None else str(o)))
    else:
        for key, value in summary.items():
            print(f"{key}: {value}")
    return EXIT_PASS if passed else EXIT_FAIL


def cmd_verify(args: argparse.Namespace) -> int:
    opts = _resolve(args, ("steps", "count", "burn_in", "gap", "chains"))
    check = args.check
    if check == "remark":
        opts["connected"] = True
    cfg = _config(opts)
    n = cfg.n
    summary = {"check": check, "n": n, "variant": cfg.variant, "reversal": cfg.reversal}
    for cap in ("max_arcs", "max_out_degree", "max_in_degree"):
        if getattr(cfg, cap) is not None:
            summary[cap] = getattr(cfg, cap)

    if check == "uniformity":
        tol = 0.01 if args.tol is None else args.tol
        gap = 50 if opts["gap"] is None else opts["gap"]
        res = sample_chain(
            cfg,
            burn_in=opts["burn_in"],
            gap=gap,
            count=100_000 if opts["count"] is None else opts["count"],
            chains=1 if opts["chains"] is None else opts["chains"],
        )
        lo, hi = chi_square_band(res.dof) if res.dof else (math.nan, math.nan)
        summary.update(res.as_dict())
        summary.update(chi2_band=[lo, hi], tv_tol=tol)
        ok = res.chi2 is not None and lo <= res.chi2 <= hi and res.tv < tol
        return _report(summary, ok, args.json)

    space = enumerate_space(cfg)
    summary["states"] = len(space)
    if len(space) == 0:
        summary["note"] = "state space is empty under these caps"
        return _report(summary, False, args.json)

    if check == "remark":
        rows = {}
        for rev in (True, False):
            m = build_matrix(enumerate_space(cfg.replace(reversal=rev)))
            irr = check_irreducible(m)
            d = diameter(m) if irr else None
            tv = [check_convergence(m, start_ordinal(m.space), t) for t in (n * n, 4 * n * n)] if irr else None
            rows["on" if rev else "off"] = {"irreducible": irr, "diameter": d, "tv_after_n2_4n2": tv}
        summary["reversal_on"] = rows["on"]
        summary["reversal_off"] = rows["off"]
        expected_off = n >= 3
        ok = rows["on"]["irreducible"] and rows["off"]["irreducible"] == expected_off
        summary["expected"] = f"reversal off irreducible={expected_off}"
        return _report(summary, ok, args.json)

    m = build_matrix(space)
    if check == "symmetry":
        sym, witness = check_symmetric(m)
        summary.update(
            symmetric=sym,
            asymmetric_pair=witness,
            rows_exact=check_rows_exact(m),
            doubly_stochastic=check_doubly_stochastic(m),
        )
        return _report(summary, sym and summary["rows_exact"] and summary["doubly_stochastic"], args.json)

    irr = check_irreducible(m)
    summary["irreducible"] = irr
    if check == "irreducibility":
        return _report(summary, irr, args.json)
    if check == "diameter":
        d = diameter(m)
        bound = path_length_bound(n) if cfg.connected else n * (n - 1)
        summary.update(diameter=None if d == math.inf else d, bound=bound)
        return _report(summary, irr and d <= bound, args.json)
    # convergence
    t = 10_000 if opts["steps"] is None else opts["steps"]
    tol = 1e-6 if args.tol is None else args.tol
    try:
        start = start_ordinal(space)
    except KeyError:
        start = 0
    tv = check_convergence(m, start, t)
    summary.update(steps=t, start_state=start, tv=tv, tol=tol)
    return _report(summary, tv < tol, args.json)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def cmd_path(args: argparse.Namespace) -> int:
    if args.replay:
        cert = PathCertificate.from_text(_read(args.replay))
        try:
            cert.validate()
        except InputError as exc:
            print(f"FAIL: {exc}")
            return EXIT_FAIL
        if len(cert) > cert.bound:
            print(f"FAIL: length {len(cert)} exceeds bound {cert.bound}")
            return EXIT_FAIL
        print(f"PASS: {len(cert)} moves, bound {cert.bound}")
        return EXIT_PASS
    if not (args.source and args.target):
        raise InputError("path needs --from and --to, or --replay")
    g = io.parse_edge_list(_read(args.source))
    h = io.parse_edge_list(_read(args.target))
    sys.stdout.write(build_path(g, h).to_text())
    return EXIT_PASS


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"gen": cmd_gen, "verify": cmd_verify, "path": cmd_path}[args.command]
    try:
        return handler(args)
    except (ValueError, OSError) as exc:
        print(f"randdag: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
