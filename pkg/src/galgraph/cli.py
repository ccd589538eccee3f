"""galgraph command line.

Exit codes: 0 pass, 1 property violation or inconclusive, 2 input error.
Reports on stdout are deterministic; wall-clock timings go to stderr.
"""

from __future__ import annotations

import argparse
import re
import sys
import time
from pathlib import Path

from .budget import Budget, BudgetExceeded

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


class Report:
    def __init__(self, argv: list[str]) -> None:
        self.lines = [f"command: galgraph {' '.join(argv)}"]
        self.t0 = time.monotonic()

    def add(self, line: str) -> None:
        self.lines.append(line)

    def emit(self, budget: Budget | None = None) -> None:
        if budget is not None:
            self.lines.append(f"budget: {budget.nodes} nodes used")
        sys.stdout.write("\n".join(self.lines) + "\n")
        sys.stdout.flush()
        sys.stderr.write(f"elapsed: {time.monotonic() - self.t0:.2f}s\n")


def _params(args):
    from .codec import choose_parameters

    try:
        return choose_parameters(args.phat)
    except ValueError as exc:
        raise InputError(f"--phat {args.phat}: {exc}") from None


def _budget(args) -> Budget:
    return Budget(max_nodes=args.budget_nodes, max_seconds=args.budget_secs)


def _read(path: str, what: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {what} {path}: {exc.strerror}") from None


def _graph(path: str):
    from .graphs import GraphError, parse_graph

    try:
        return parse_graph(_read(path, "graph file"))
    except GraphError as exc:
        raise InputError(f"{path}: {exc}") from None


def _group(arg: str, params=None):
    from .groupspec import LiteralError, parse_group_literal

    text, base = arg, None
    p = Path(arg)
    if not arg.startswith("builtin:") and p.is_file():
        text, base = p.read_text(), p.parent
    try:
        return parse_group_literal(text, params, base)
    except LiteralError as exc:
        raise InputError(f"group {arg!r}: {exc}") from None


def _formula(path: str, sentence: bool):
    from .formulas import FormulaError, parse_graph_formula

    try:
        f = parse_graph_formula(_read(path, "formula file"))
    except FormulaError as exc:
        raise InputError(f"{path}: {exc}") from None
    return f


_PHI = re.compile(r"\s*phi_nq\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*")


def _lg_sentence(arg: str):
    from .formulas import FormulaError
    from .inverse_system import parse_lg_sentence, phi_nq

    m = _PHI.fullmatch(arg)
    if m:
        q = int(m.group(2))
        if q < 1:
            raise InputError("phi_nq needs q >= 1")
        return phi_nq(int(m.group(1)), q)
    try:
        return parse_lg_sentence(_read(arg, "sentence file"))
    except FormulaError as exc:
        raise InputError(f"{arg}: {exc}") from None


# -- commands -------------------------------------------------------------------

def cmd_params(args, rep: Report) -> int:
    P = _params(args)
    rep.add(f"params: {P.digest()}")
    rep.add(f"s={P.s} r={P.r} t={P.t} p_r={P.p_r} |D|={P.D.order} |U|={P.U.order} "
            f"|W|={P.W.order}")
    rep.emit()
    return EXIT_OK


def cmd_verify(args, rep: Report) -> int:
    from .conditions import PASS, verify_graph_conditions

    P = _params(args)
    budget = _budget(args)
    report = verify_graph_conditions(P, g2_index_bound=args.g2_bound, budget=budget)
    rep.add(f"params: {P.digest()}")
    for line in report.lines():
        rep.add(line)
    ok = all(v.status == PASS for v in report.verdicts.values())
    rep.add(f"result: {'PASS' if ok else 'FAIL'}")
    rep.emit(budget)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_encode(args, rep: Report) -> int:
    from .codec import encode_graph

    P = _params(args)
    g = _graph(_need(args, "graph"))
    enc = encode_graph(g, P)
    rep.add(f"params: {P.digest()}")
    rep.add(f"graph: {len(g.vertices)} vertices, {len(g.edges)} edges")
    rep.add(f"order: {enc.order} = {P.D.order}^{enc.nA} * {P.t}^{enc.nR}")
    rep.add(f"generators: {len(enc.presentation().gens)}")
    rep.emit()
    return EXIT_OK


def cmd_decode(args, rep: Report) -> int:
    from .codec import decode_graph
    from .graphs import format_graph

    P = _params(args)
    G = _group(_need(args, "group"), P)
    budget = _budget(args)
    g = decode_graph(G, P, budget)
    rep.add(f"params: {P.digest()}")
    rep.add(f"group order: {G.order}")
    rep.add("graph:")
    rep.add(format_graph(g).rstrip("\n"))
    rep.emit(budget)
    return EXIT_OK


def cmd_roundtrip(args, rep: Report) -> int:
    from .codec import decode_graph, encode_graph
    from .graphs import are_isomorphic, format_graph

    P = _params(args)
    g = _graph(_need(args, "graph"))
    budget = _budget(args)
    h = decode_graph(encode_graph(g, P), P, budget)
    ok = are_isomorphic(g, h)
    rep.add(f"params: {P.digest()}")
    rep.add("decoded:")
    rep.add(format_graph(h).rstrip("\n"))
    rep.add(f"result: {'PASS' if ok else 'FAIL'} (decode(encode(G)) {'≅' if ok else '≇'} G)")
    rep.emit(budget)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_check_interp(args, rep: Report) -> int:
    from .codec import decode_graph_full, encode_graph
    from .formulas import to_sexpr
    from .transpiler import check_reduction, group_interpretation, template_sexpr, translate

    P = _params(args)
    g = _graph(_need(args, "graph"))
    f = _formula(_need(args, "formula"), sentence=False)
    budget = _budget(args)
    enc = encode_graph(g, P)
    dec = decode_graph_full(enc, P, budget)
    interp = group_interpretation(enc, P, dec)
    ok = check_reduction(enc, g, interp, f)
    rep.add(f"params: {P.digest()}")
    rep.add(f"formula: {to_sexpr(f)}")
    rep.add(f"translation: {template_sexpr(translate(f, P))}")
    rep.add(f"result: {'PASS' if ok else 'FAIL'} (condition (†) over "
            f"{len(interp.domain)} domain elements)")
    rep.emit(budget)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_cotheory(args, rep: Report) -> int:
    from .inverse_system import build_inverse_system, eval_lg_sentence, lg_to_sexpr, max_sort_of

    P = None
    arg = _need(args, "group")
    if "builtin:" in arg:
        P = _params(args)
    G = _group(arg, P)
    phi = _lg_sentence(_need(args, "sentence"))
    budget = _budget(args)
    S = build_inverse_system(G, max(1, max_sort_of(phi)), budget)
    val = eval_lg_sentence(S, phi)
    rep.add(f"group order: {G.order}")
    rep.add(f"sentence: {lg_to_sexpr(phi)}")
    rep.add(f"value: {'true' if val else 'false'}")
    rep.emit(budget)
    return EXIT_OK


def cmd_selftest(args, rep: Report) -> int:
    from .acceptance import run_all

    only = None
    if args.only:
        try:
            only = {int(x) for x in args.only.split(",")}
        except ValueError:
            raise InputError("--only takes a comma-separated list of criterion numbers") from None
    rep.emit()
    results = run_all(only, echo=lambda line: print(_strip_time(line), flush=True))
    ok = all(r.ok for r in results)
    print(f"result: {sum(r.ok for r in results)}/{len(results)} criteria pass", flush=True)
    for r in results:
        sys.stderr.write(f"criterion {r.number}: {r.seconds:.1f}s\n")
    return EXIT_OK if ok else EXIT_FAIL


def _strip_time(line: str) -> str:
    return re.sub(r" \([0-9.]+s / limit [0-9]+s\)$", "", line)


def _need(args, name: str) -> str:
    val = getattr(args, name)
    if val is None:
        raise InputError(f"--{name} is required for {args.cmd}")
    return val


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="galgraph", description="Graphs encoded in finite groups.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p, phat=True):
        if phat:
            p.add_argument("--phat", type=int, default=2)
        p.add_argument("--budget-nodes", type=int, default=50_000_000)
        p.add_argument("--budget-secs", type=float, default=None)
        p.add_argument("--seed", type=int, default=0)
        return p

    common(sub.add_parser("params", help="print the parameter groups"))
    p = common(sub.add_parser("verify", help="check the graph conditions G1-G4"))
    p.add_argument("--g2-bound", type=int, default=2)
    p = common(sub.add_parser("encode", help="build G_Gamma from a graph file"))
    p.add_argument("--graph")
    p = common(sub.add_parser("decode", help="recover the graph of a group"))
    p.add_argument("--group")
    p = common(sub.add_parser("roundtrip", help="decode(encode(graph)) against the graph"))
    p.add_argument("--graph")
    p = common(sub.add_parser("check-interp", help="check condition (†) for a formula"))
    p.add_argument("--graph")
    p.add_argument("--formula")
    p = common(sub.add_parser("cotheory", help="evaluate a sentence over S(G)"))
    p.add_argument("--group")
    p.add_argument("--sentence")
    p = common(sub.add_parser("selftest", help="run the acceptance suite"))
    p.add_argument("--only", help="comma-separated criterion numbers")
    return ap


COMMANDS = {
    "params": cmd_params,
    "verify": cmd_verify,
    "encode": cmd_encode,
    "decode": cmd_decode,
    "roundtrip": cmd_roundtrip,
    "check-interp": cmd_check_interp,
    "cotheory": cmd_cotheory,
    "selftest": cmd_selftest,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    rep = Report(argv)
    rep.add(f"seed: {args.seed}")
    try:
        return COMMANDS[args.cmd](args, rep)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        rep.add(f"result: INCONCLUSIVE ({exc})")
        rep.emit()
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
