"""Command-line front end.

Exit codes: 0 when the command ran, 1 on usage or input errors, 2 when a
budget was exceeded (the message names the required size).
"""
from __future__ import annotations

import argparse
import sys

from . import bench as bench_mod
from .circuits import BoolCircuit, MajCircuit
from .compile import DEFAULT_STEP_BUDGET, circuit_to_mlp, majority_to_rmlp, relu_to_step
from .core import (
    BudgetExceeded,
    Fbdd,
    Mlp,
    Perceptron,
    QueryVerdict,
    XQError,
    as_instance,
    as_partial,
    format_bits,
)
from .fbdd_engine import cc_fbdd, csr_fbdd, mcr_fbdd, msr_fbdd
from .formats import (
    parse_dnf,
    parse_graph,
    parse_model,
    relabel_ids,
    serialize_model,
)
from .knapsack import DEFAULT_DP_LIMIT
from .mlp_engine import DEFAULT_LIMIT, cc_mlp, csr_mlp, mcr_mlp, msr_mlp
from .oracle import CC, CSR, MCR, MSR, oracle_query
from .perceptron_engine import cc_perceptron, csr_perceptron, mcr_perceptron, msr_perceptron
from .reductions import domdag_to_msr, normalize_maj, sic_to_msr, taut_to_csr, vc_to_mcr, wcs_to_mcr

QUERIES = ("mcr", "msr", "csr", "cc")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_model(path: str):
    model = parse_model(_read(path))
    if isinstance(model, BoolCircuit):
        return circuit_to_mlp(model)
    if isinstance(model, MajCircuit):
        return majority_to_rmlp(model)
    return model


def _need(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.query} needs {' '.join(missing)}")


def run_query(query: str, model, args):
    """Dispatch a query to the engine for the model's family."""
    x = as_instance(args.instance) if args.instance is not None else None
    y = as_partial(args.partial) if args.partial is not None else None
    limit = args.limit
    if isinstance(model, Fbdd):
        table = {
            "mcr": lambda: mcr_fbdd(model, x, args.k),
            "msr": lambda: msr_fbdd(model, x, args.k, limit or DEFAULT_LIMIT),
            "csr": lambda: csr_fbdd(model, x, y),
            "cc": lambda: cc_fbdd(model, y),
        }
    elif isinstance(model, Perceptron):
        table = {
            "mcr": lambda: mcr_perceptron(model, x, args.k),
            "msr": lambda: msr_perceptron(model, x, args.k),
            "csr": lambda: csr_perceptron(model, x, y),
            "cc": lambda: cc_perceptron(model, y, limit or DEFAULT_DP_LIMIT),
        }
    else:
        lim = limit or DEFAULT_LIMIT
        table = {
            "mcr": lambda: mcr_mlp(model, x, args.k, lim),
            "msr": lambda: msr_mlp(model, x, args.k, lim),
            "csr": lambda: csr_mlp(model, x, y, lim),
            "cc": lambda: cc_mlp(model, y, lim),
        }
    return table[query]()


def _check_query_args(args):
    if args.query in ("mcr", "msr"):
        _need(args, "instance", "k")
    elif args.query == "csr":
        _need(args, "instance", "partial")
    else:
        _need(args, "partial")


def _render(result) -> str:
    if isinstance(result, QueryVerdict):
        return result.format()
    if isinstance(result, bool):
        return "YES" if result else "NO"
    return str(result)


def _cmd_query(args, out):
    _check_query_args(args)
    model = _load_model(args.model)
    print(_render(run_query(args.query, model, args)), file=out)


def _cmd_oracle(args, out):
    _check_query_args(args)
    model = parse_model(_read(args.model))
    x = as_instance(args.instance) if args.instance is not None else None
    y = as_partial(args.partial) if args.partial is not None else None
    query = {"mcr": lambda: MCR(x, args.k), "msr": lambda: MSR(x, args.k),
             "csr": lambda: CSR(x, y), "cc": lambda: CC(y)}[args.query]()
    print(_render(oracle_query(model, query, args.limit or DEFAULT_LIMIT)), file=out)


def _emit_model(model, args, out, trailer: str = None):
    if isinstance(model, (Fbdd, BoolCircuit, MajCircuit)):
        model = relabel_ids(model)
    text = serialize_model(model)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        if trailer:
            print(trailer, file=out)
    else:
        out.write(text)
        if trailer:
            print(f"# {trailer}", file=out)


def _cmd_compile(args, out):
    model = parse_model(_read(args.input))
    if args.kind == "circuit-to-mlp":
        if not isinstance(model, BoolCircuit):
            raise UsageError("circuit-to-mlp needs a 'circuit' file")
        result = circuit_to_mlp(model)
    elif args.kind == "majority-to-rmlp":
        if not isinstance(model, MajCircuit):
            raise UsageError("majority-to-rmlp needs a 'majcircuit' file")
        result = majority_to_rmlp(model)
    else:
        if not isinstance(model, Mlp):
            raise UsageError("relu-to-step needs an 'mlp' file")
        result = relu_to_step(model, args.budget)
    _emit_model(result, args, out)


def _cmd_reduce(args, out):
    text = _read(args.input)
    kind = args.kind
    if kind in ("vc", "domdag"):
        directed, edges, n = parse_graph(text)
        if (kind == "domdag") != directed:
            raise UsageError(f"{kind} needs a {'directed' if kind == 'domdag' else 'undirected'} graph")
        _need_k(args)
        if kind == "vc":
            model, x, k = vc_to_mcr(edges, args.k, n)
            trailer = f"query=mcr instance={format_bits(x)} k={k}"
        else:
            model, x, k = domdag_to_msr(edges, args.k, n)
            trailer = f"query=msr instance={format_bits(x)} k={k}"
    elif kind == "sic":
        _need_k(args)
        model, x, k = sic_to_msr(parse_dnf(text), args.k)
        trailer = f"query=msr instance={format_bits(x)} k={k}"
    elif kind == "taut":
        circuit = parse_model(text, "circuit")
        model, x, y = taut_to_csr(circuit)
        trailer = f"query=csr instance={format_bits(x)} partial={format_bits(y)}"
    elif kind == "wcs":
        _need_k(args)
        model, x, k = wcs_to_mcr(parse_model(text, "majcircuit"), args.k)
        trailer = f"query=mcr instance={format_bits(x)} k={k}"
    else:
        _need_k(args)
        if args.t is None:
            raise UsageError("normalize needs --t")
        model, k = normalize_maj(parse_model(text, "majcircuit"), args.k, args.t, args.depth_budget)
        trailer = f"query=wcs k={k}"
    _emit_model(model, args, out, trailer)


def _need_k(args):
    if args.k is None:
        raise UsageError(f"reduce {args.kind} needs --k")


def _cmd_bench(args, out):
    sizes = args.sizes or ([500, 1000, 2000] if args.quick else [625, 1250, 2500, 5000, 10000])
    frees = args.free or ([8, 9, 10] if args.quick else [14, 15, 16, 17, 18])
    rows = bench_mod.bench_cc_fbdd(sizes, args.seed, args.repeats) + \
        bench_mod.bench_cc_mlp(frees, args.seed, args.repeats)
    if args.csv:
        with open(args.csv, "w") as fh:
            bench_mod.write_csv(rows, fh)
    else:
        bench_mod.write_csv(rows, out)
    if args.plot:
        bench_mod.plot(rows, args.plot)


def _query_args(p):
    p.add_argument("--model", required=True, help="model file (fbdd, perceptron, mlp, circuit, majcircuit)")
    p.add_argument("--instance", help="full instance as a bit string, e.g. 101")
    p.add_argument("--partial", help="partial instance over 0, 1 and * (undefined)")
    p.add_argument("--k", type=int)
    p.add_argument("--limit", type=int, help="enumeration or table budget")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="xq", description="Explainability queries over FBDDs, perceptrons and MLPs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for q in QUERIES:
        p = sub.add_parser(q, help=f"answer a {q.upper()} query")
        _query_args(p)
        p.set_defaults(handler=_cmd_query, query=q)
    p = sub.add_parser("query", help="answer a query named as an argument")
    p.add_argument("query", choices=QUERIES)
    _query_args(p)
    p.set_defaults(handler=_cmd_query)
    p = sub.add_parser("oracle", help="answer a query by brute force")
    p.add_argument("query", choices=QUERIES)
    _query_args(p)
    p.set_defaults(handler=_cmd_oracle)

    p = sub.add_parser("compile", help="translate circuits and networks")
    p.add_argument("kind", choices=("circuit-to-mlp", "majority-to-rmlp", "relu-to-step"))
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    p.add_argument("--budget", type=int, default=DEFAULT_STEP_BUDGET, help="relu-to-step replicated-node budget")
    p.set_defaults(handler=_cmd_compile)

    p = sub.add_parser("reduce", help="build a query instance from a classical problem")
    p.add_argument("kind", choices=("vc", "domdag", "sic", "taut", "wcs", "normalize"))
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    p.add_argument("--k", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--depth-budget", type=int, default=4)
    p.set_defaults(handler=_cmd_reduce)

    p = sub.add_parser("bench", help="time FBDD counting against MLP enumeration")
    p.add_argument("--csv", help="write rows here instead of stdout")
    p.add_argument("--plot", help="also render a PNG figure")
    p.add_argument("--sizes", type=int, nargs="+", help="target FBDD node counts")
    p.add_argument("--free", type=int, nargs="+", help="free-feature counts for the MLP sweep")
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--quick", action="store_true", help="small sizes, for smoke tests")
    p.set_defaults(handler=_cmd_bench)
    return parser


def run_command(argv, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        args.handler(args, out)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc.what} requires {exc.required} (limit {exc.limit})", file=err)
        return 2
    except (UsageError, XQError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return 1
    except SystemExit as exc:  # --help
        return 0 if not exc.code else 1
    return 0


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
