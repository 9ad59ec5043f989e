"""Command line entry point: ``minfb solve | generate | verify | decompose``.

Exit codes: 0 solved or valid, 1 no solution or invalid, 2 bad input,
3 resource cap exceeded.
"""
import argparse
import json
import logging
import sys
from pathlib import Path

from . import generators
from .decomp import compute_tree_decomposition, format_pace_td
from .errors import InputError, NotApplicable, ResourceError
from .graph import parse_ndfas, verify_solution
from .linsys import blocker_document, parse_system, system_to_digraph
from .portfolio import ALGORITHMS, DEFAULT_CAP, solve_portfolio

EXIT_OK, EXIT_NONE, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


def _load(path, fmt):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    if fmt == "minfb-json":
        system = parse_system(text)
        g, _ = system_to_digraph(system)
        return g, system
    return parse_ndfas(text), None


def _emit(doc, human, lines):
    if human:
        print("\n".join(lines))
    else:
        print(json.dumps(doc, indent=1))


def cmd_solve(args):
    g, system = _load(args.input, args.format)
    k = args.k
    if k is None:
        k = system.budget if system is not None and system.budget is not None else None
    if k is None:
        raise InputError("no budget: pass --k or put 'k' in the input")
    workers = 1 if args.deterministic else max(1, args.threads)
    res = solve_portfolio(g, k, args.algorithm, minimize=not args.any, cap=args.cap,
                          workers=workers)
    doc = res.as_dict()
    if system is not None:
        doc.update(blocker_document(system, res.arcs, res.potential, res.status))
    lines = [f"status: {res.status}", f"algorithm: {res.algorithm}", f"budget: {k}"]
    if res.status == "solved":
        lines.append(f"size: {len(res.arcs)}")
        lines.append("arcs: " + " ".join(str(a) for a in sorted(res.arcs)))
        if system is not None:
            lines.append("rows: " + " ".join(str(r) for r in doc["blocker_rows"]))
    _emit(doc, args.human, lines)
    return EXIT_OK if res.status == "solved" else EXIT_NONE


def _read_graph(path):
    try:
        return parse_ndfas(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def cmd_generate(args):
    fam = args.family
    if fam == "dfas":
        src = _read_graph(args.input)
        inst = generators.gen_from_dfas(src.n, [(a.tail, a.head) for a in src.arcs], args.k)
    elif fam == "partition":
        inst = generators.gen_partition_gadget(args.numbers)
    elif fam == "mcclique":
        coloring = [c - 1 for c in args.coloring]
        edges = []
        for e in args.edges:
            try:
                u, v = (int(x) - 1 for x in e.split("-"))
            except ValueError:
                raise InputError(f"bad edge {e!r}; use u-v") from None
            edges.append((u, v))
        k = args.k if args.k is not None else max(coloring, default=-1) + 1
        inst = generators.gen_multicolored_clique_gadget(len(coloring), edges, coloring, k)
    elif fam == "bedc-chain":
        src = _read_graph(args.input)
        inst = generators.gen_bedc_chain(src.n, [(a.tail, a.head) for a in src.arcs],
                                         args.s - 1, args.t - 1, args.k, args.ell)
    elif fam == "subdivide":
        src = _read_graph(args.input)
        h, back = generators.subdivide_to_unit_weights(src)
        inst = generators.Instance(h, args.k if args.k is not None else 0, "subdivide",
                                   {"source": str(args.input), "arc_back": list(back)})
    else:  # pragma: no cover
        raise InputError(f"unknown family {fam}")
    path = generators.write_instance(inst, args.out)
    doc = {"out": str(path), "meta": str(generators.meta_path(path)), **inst.meta()}
    _emit(doc, args.human, [f"wrote {path} (n={inst.graph.n}, m={inst.graph.m}, "
                            f"budget={inst.budget}, expected={inst.expected})"])
    return EXIT_OK


def _read_solution(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError:
        try:
            return [int(x) for x in text.split()], None
        except ValueError:
            raise InputError("solution must be JSON or whitespace-separated arc ids") from None
    if isinstance(doc, list):
        return doc, None
    if isinstance(doc, dict):
        arcs = doc.get("arcs", doc.get("blocker_rows"))
        if isinstance(arcs, list):
            return arcs, doc.get("k")
    raise InputError("solution JSON needs an 'arcs' list")


def cmd_verify(args):
    g, _ = _load(args.input, args.format)
    arcs, k = _read_solution(args.solution)
    if any(isinstance(a, bool) or not isinstance(a, int) for a in arcs):
        raise InputError("arc ids must be integers")
    if args.k is not None:
        k = args.k
    if k is None:
        k = len(set(arcs))
    rep = verify_solution(g, arcs, k)
    doc = rep.as_dict()
    _emit(doc, args.human, [f"{key}: {val}" for key, val in doc.items() if key != "certificate"])
    return EXIT_OK if rep.valid else EXIT_NONE


def cmd_decompose(args):
    g, _ = _load(args.input, args.format)
    td = compute_tree_decomposition(g)
    sys.stdout.write(format_pace_td(td, g.n))
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="minfb", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def output_flags(q):
        g = q.add_mutually_exclusive_group()
        g.add_argument("--json", dest="human", action="store_false", help="JSON output (default)")
        g.add_argument("--human", dest="human", action="store_true", help="plain text output")
        q.set_defaults(human=False)

    s = sub.add_parser("solve", help="find a minimum blocker")
    s.add_argument("--input", required=True)
    s.add_argument("--format", choices=["ndfas", "minfb-json"], default="ndfas")
    s.add_argument("--k", type=int)
    s.add_argument("--algorithm", choices=ALGORITHMS)
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--deterministic", action="store_true")
    s.add_argument("--any", action="store_true", help="accept any solution of size <= k")
    s.add_argument("--cap", type=float, default=DEFAULT_CAP, help="work estimate cap")
    output_flags(s)
    s.set_defaults(func=cmd_solve)

    gen = sub.add_parser("generate", help="write an instance with a known answer")
    gen.add_argument("family", choices=["dfas", "partition", "mcclique", "bedc-chain", "subdivide"])
    gen.add_argument("--input", help="source graph (dfas, bedc-chain, subdivide)")
    gen.add_argument("--numbers", type=int, nargs="+", help="partition numbers")
    gen.add_argument("--coloring", type=int, nargs="+", default=[], help="class (1..k) per vertex")
    gen.add_argument("--edges", nargs="*", default=[], help="edges as u-v, 1-indexed")
    gen.add_argument("--k", type=int)
    gen.add_argument("--s", type=int, help="source vertex (1-indexed)")
    gen.add_argument("--t", type=int, help="sink vertex (1-indexed)")
    gen.add_argument("--ell", type=int)
    gen.add_argument("--out", required=True)
    output_flags(gen)
    gen.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", help="check a solution")
    v.add_argument("--input", required=True)
    v.add_argument("--format", choices=["ndfas", "minfb-json"], default="ndfas")
    v.add_argument("--solution", required=True)
    v.add_argument("--k", type=int)
    output_flags(v)
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("decompose", help="print a tree decomposition (PACE td format)")
    d.add_argument("--input", required=True)
    d.add_argument("--format", choices=["ndfas", "minfb-json"], default="ndfas")
    d.set_defaults(func=cmd_decompose)
    return p


def _check_generate(args):
    need = {
        "dfas": ["input", "k"], "partition": ["numbers"], "mcclique": ["coloring"],
        "bedc-chain": ["input", "s", "t", "k", "ell"], "subdivide": ["input"],
    }[args.family]
    missing = [f"--{x}" for x in need if getattr(args, x) in (None, [])]
    if missing:
        raise InputError(f"{args.family} needs {' '.join(missing)}")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "generate":
            _check_generate(args)
        return args.func(args)
    except (InputError, NotApplicable, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        if exc.estimates:
            print(json.dumps({k: float(v) for k, v in exc.estimates.items()}), file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
