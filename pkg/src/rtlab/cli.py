"""Command-line front end.

Subcommands: construct, verify, report, optimize, drc, sphere.  Exit
codes: 0 property holds / success, 1 property violated (witness written
as JSON), 2 input error, 3 search budget exceeded.  Flags mirror the
params.json keys and override file values; all randomness flows from the
single seed.
"""

import argparse
import json
import sys

from . import constructions as con
from . import drc as drcmod
from . import hypergraph as hg
from . import reports
from . import sphere as sph
from . import verifiers as ver

EXIT_HOLDS = 0
EXIT_VIOLATED = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3

PARAM_KEYS = ["r", "z", "alpha", "beta", "epsilon", "k", "blowup_t", "gamma",
              "pattern_cap", "seed"]


def _load_params(args) -> con.ConstructionParams:
    data = {}
    if getattr(args, "params", None):
        with open(args.params) as fh:
            data = json.load(fh)
    for key in PARAM_KEYS:
        override = getattr(args, key, None)
        if override is not None:
            data[key] = override
    return con.ConstructionParams.from_json(data)


def _add_param_flags(p: argparse.ArgumentParser):
    p.add_argument("--params", help="params.json path")
    p.add_argument("--r", type=int)
    p.add_argument("--z", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--blowup-t", dest="blowup_t", type=int)
    p.add_argument("--gamma", type=float)
    p.add_argument("--pattern-cap", dest="pattern_cap", type=int)
    p.add_argument("--seed", type=int)


def _read_input(path: str):
    h = hg.read_hypergraph(path)
    if h.r == 2:
        parts = h.part_of if any(p != hg.UNPARTITIONED for p in h.part_of) else None
        return hg.SimpleGraph(h.n, h.edges, parts), h
    return None, h


def _write_witness(emb, path):
    payload = emb.as_json() if emb is not None else None
    out = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_construct(args) -> int:
    params = _load_params(args)
    partition = params.build_partition()
    if args.type == "be":
        g = con.bollobas_erdos(partition, params.epsilon, params.k)
        hg.write_graph(g, args.out)
    elif args.type == "sphere":
        h = con.sphere_hypergraph(params, partition)
        hg.write_hypergraph(h, args.out)
    elif args.type == "full":
        h = con.full_construction(params, partition)
        hg.write_hypergraph(h, args.out)
    elif args.type == "corollary":
        ell = int(params.extras.get("ell", 2))
        q = int(params.extras.get("q", 2))
        mix_a = params.extras.get("mix_a")
        if mix_a is None:
            a_star, _ = con.optimize_a(params.r, ell, q)
            mix_a = float(a_star)
        full = con.full_construction(params, partition)
        base = con.shadow_first_parts(full, ell)
        provider = lambda n: con.maximal_ktfree_graph(n, params.r, params.seed)
        g = con.corollary_graph(base, q, params.r, provider, mix_a=mix_a)
        hg.write_graph(g, args.out)
    else:
        raise ValueError(f"unknown construction type {args.type}")
    print(f"wrote {args.type} construction to {args.out}")
    return EXIT_HOLDS


def _cmd_verify(args) -> int:
    g, h = _read_input(args.file)
    check = args.check
    witness = None
    if check == "clique":
        if g is None:
            raise ValueError("clique check needs a graph file (r=2)")
        if args.s is None:
            raise ValueError("clique check needs --s")
        witness = ver.find_clique(g, args.s, args.budget)
    elif check == "alpha_t":
        if g is None:
            raise ValueError("alpha_t needs a graph file (r=2)")
        if args.t is None:
            raise ValueError("alpha_t needs --t")
        value = ver.alpha_t(g, args.t, args.budget)
        print(f"alpha_{args.t} = {value}")
        if args.bound is not None and value > args.bound:
            return EXIT_VIOLATED
        return EXIT_HOLDS
    elif check == "tk":
        if args.s is None:
            raise ValueError("tk check needs --s")
        witness = ver.find_tk(h, args.s, args.budget)
    elif check == "tkf":
        if args.s is None:
            raise ValueError("tkf check needs --s")
        witness = ver.find_tkf_core(h, args.s, args.budget)
    elif check == "split-core":
        witness = ver.scan_split_core(h, args.budget)
    elif check == "sparse":
        ell = args.ell if args.ell is not None else h.r ** 3
        for p in range(max(1, h.parts)):
            part = h.induced(h.part_vertices(p)) if h.parts else h
            witness = ver.scan_sparse_patterns(part, h.r, ell, args.budget)
            if witness is not None:
                break
    elif check == "density":
        params = _load_params(args) if args.params else None
        rep = ver.density_report(h if g is None else g, params)
        text = reports.emit_report(rep, args.format,
                                   params.to_json() if params else {})
        if args.report_out:
            with open(args.report_out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return EXIT_HOLDS if rep.verdict == "holds" else EXIT_VIOLATED
    else:
        raise ValueError(f"unknown check {check}")
    if witness is None:
        print(f"{check}: holds")
        return EXIT_HOLDS
    _write_witness(witness, args.witness_out)
    print(f"{check}: violated")
    return EXIT_VIOLATED


def _cmd_report(args) -> int:
    g, h = _read_input(args.file)
    params = _load_params(args) if args.params else None
    rep = ver.density_report(h if g is None else g, params)
    text = reports.emit_report(rep, args.format,
                               params.to_json() if params else {})
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_HOLDS if rep.verdict == "holds" else EXIT_VIOLATED


def _cmd_optimize(args) -> int:
    a_star, bound = con.optimize_a(args.t, args.ell, args.q)
    print(f"a*={a_star.numerator}/{a_star.denominator} "
          f"bound={bound.numerator}/{bound.denominator}")
    return EXIT_HOLDS


def _cmd_drc(args) -> int:
    with open(args.params) as fh:
        p = drcmod.DrcParams.from_json(json.load(fh))
    _, h = _read_input(args.file)
    seed = args.seed if args.seed is not None else 0
    if args.action == "find-set":
        if h.r != 2:
            raise ValueError("find-set needs a graph file (r=2)")
        g = hg.SimpleGraph(h.n, h.edges)
        u = drcmod.drc_find_set(g, p, seed=seed)
        if u is None:
            print("find-set: no verified set within the retry budget")
            return EXIT_VIOLATED
        payload = {"U": sorted(u)}
    elif args.action == "find-f":
        try:
            w = drcmod.find_f_witness(h, p, seed=seed)
        except drcmod.PipelineFailure as exc:
            print(f"find-f failed at stage '{exc.stage}': {exc.detail}")
            return EXIT_VIOLATED
        payload = w.as_json()
    elif args.action == "find-tkf5":
        eps = p.epsilon
        try:
            tkf5, tk4 = drcmod.find_tkf5_tk4(h, eps, p.codegree_threshold,
                                             seed=seed, retries=p.retries)
        except drcmod.PipelineFailure as exc:
            print(f"find-tkf5 failed at stage '{exc.stage}': {exc.detail}")
            return EXIT_VIOLATED
        payload = {"tkf5": tkf5.as_json(),
                   "tk4": tk4.as_json() if tk4 else None}
    else:
        raise ValueError(f"unknown drc action {args.action}")
    out = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return EXIT_HOLDS


def _cmd_sphere(args) -> int:
    if args.action == "partition":
        part = sph.build_partition(args.k, args.z, args.theta, args.seed or 0)
        sph.write_partition(part, args.out)
        print(f"wrote partition (max cell diameter ~ {part.est_max_diameter:.4f}, "
              f"bound {part.domain_diam_bound:.4f})")
        return EXIT_HOLDS
    if args.action == "eps-k":
        eps, k = sph.find_eps_k(args.alpha, args.beta, args.t_max)
        print(f"eps={eps} k={k}")
        return EXIT_HOLDS
    if args.action == "cap-measure":
        print(f"{sph.cap_measure(args.k, args.s):.12f}")
        return EXIT_HOLDS
    raise ValueError(f"unknown sphere action {args.action}")


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rtlab",
                                 description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a construction and write it")
    p.add_argument("--type", required=True,
                   choices=["be", "sphere", "full", "corollary"])
    _add_param_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("verify", help="run a property check on a file")
    p.add_argument("--check", required=True,
                   choices=["clique", "alpha_t", "tk", "tkf", "split-core",
                            "sparse", "density"])
    p.add_argument("--s", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--ell", type=int)
    p.add_argument("--bound", type=int)
    p.add_argument("--budget", type=int)
    p.add_argument("--witness-out")
    p.add_argument("--report-out")
    p.add_argument("--format", default="csv", choices=["csv", "json"])
    _add_param_flags(p)
    p.add_argument("file")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("report", help="density report for a file")
    _add_param_flags(p)
    p.add_argument("--format", default="csv", choices=["csv", "json"])
    p.add_argument("--out")
    p.add_argument("file")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("optimize", help="exact mixing optimization")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("drc", help="dependent-random-choice pipelines")
    p.add_argument("action", choices=["find-set", "find-f", "find-tkf5"])
    p.add_argument("--params", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("file")
    p.set_defaults(func=_cmd_drc)

    p = sub.add_parser("sphere", help="sphere utilities")
    p.add_argument("action", choices=["partition", "eps-k", "cap-measure"])
    p.add_argument("--k", type=int)
    p.add_argument("--z", type=int)
    p.add_argument("--theta", type=float)
    p.add_argument("--s", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--t-max", dest="t_max", type=int, default=2)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_sphere)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, matching the input-error code
        return EXIT_INPUT if exc.code not in (0,) else 0
    try:
        return args.func(args)
    except ver.BudgetExceeded as exc:
        print(f"budget exceeded after {exc.nodes} nodes "
              f"(certified: {exc.certified})", file=sys.stderr)
        return EXIT_BUDGET
    except (OSError, ValueError, KeyError, TypeError,
            json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
