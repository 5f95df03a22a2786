"""Command-line front door: recognize, dump forests, enumerate trees, count
derivations, report stats, or benchmark a grammar over growing inputs.

Exit codes: 0 accept, 1 reject, 2 operational error (bad grammar, IO, fuel).
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from typing import Optional

from .core import Applied, SymbolId, render_slot
from .dsl import Elaborator, GrammarError, parse_grammar
from .engine import run_recognize
from .forest import extract_errors, extract_trees
from . import forest
from .naive import NaiveInterpreter
from .state import ParseState, ResourceExhausted

DEFAULT_FUEL = 10 ** 7


@dataclass
class RunConfig:
    grammar: str
    start: str
    mode: str = "char"
    text: Optional[str] = None
    input: Optional[str] = None
    stdin: bool = False
    fuel: int = DEFAULT_FUEL
    errors: int = 3
    max_trees: int = 10
    format: str = "text"
    deterministic: bool = False
    oracle: bool = False


class CliError(Exception):
    pass


def _read_input(cfg: RunConfig) -> str:
    sources = [cfg.text is not None, cfg.input is not None, cfg.stdin]
    if sum(sources) != 1:
        raise CliError("exactly one of --text, --input, --stdin is required")
    if cfg.text is not None:
        return cfg.text
    if cfg.input is not None:
        try:
            with open(cfg.input, "r") as f:
                return f.read()
        except OSError as e:
            raise CliError(f"cannot read input: {e}")
    return sys.stdin.read()


def _tokens(cfg: RunConfig, text: str):
    return text.split() if cfg.mode == "words" else text


def _load(cfg: RunConfig):
    try:
        with open(cfg.grammar, "r") as f:
            grammar_text = f.read()
    except OSError as e:
        raise CliError(f"cannot read grammar: {e}")
    try:
        ast = parse_grammar(grammar_text)
        elab = Elaborator(ast, cfg.mode)
        start = elab.start_symbol(cfg.start)
    except (GrammarError, ValueError) as e:
        raise CliError(str(e))
    return elab, start


def _budgets(cfg: RunConfig):
    fuel = None if cfg.fuel == 0 else cfg.fuel
    inst = None if fuel is None else max(1, fuel // 100)
    return fuel, inst


def _run(cfg: RunConfig, start, tokens) -> tuple[bool, ParseState]:
    fuel, inst = _budgets(cfg)
    return run_recognize(start, tokens, fuel=fuel, instantiation_budget=inst)


def _sid_json(sid: SymbolId) -> dict:
    if isinstance(sid, Applied):
        return {"nt": sid.name, "args": [_sid_json(a) for a in sid.args]}
    return {"token": sid.name}


def _error_json(report) -> dict:
    return {"position": report.position, "expected": list(report.expected),
            "got": report.got}


def _print_reject(cfg: RunConfig, state: ParseState) -> None:
    reports = extract_errors(state, cfg.errors, accepted=False)
    if cfg.format == "json":
        print(json.dumps({"result": "reject",
                          "errors": [_error_json(r) for r in reports]}))
        return
    print("reject")
    for r in reports:
        got = "end of input" if r.got is None else repr(r.got)
        print(f"at {r.position}: expected {r.expected[0]}, got {got}")


def cmd_recognize(cfg: RunConfig) -> int:
    elab, start = _load(cfg)
    tokens = _tokens(cfg, _read_input(cfg))
    accepted, state = _run(cfg, start, tokens)
    if cfg.oracle:
        oracle_accepted = NaiveInterpreter(elab.ast, cfg.mode).accepts(cfg.start, tokens)
        if oracle_accepted != accepted:
            raise CliError(f"oracle mismatch: engine={accepted} oracle={oracle_accepted}")
    if accepted:
        print(json.dumps({"result": "accept"}) if cfg.format == "json" else "accept")
        return 0
    _print_reject(cfg, state)
    return 1


def cmd_bsr(cfg: RunConfig) -> int:
    _elab, start = _load(cfg)
    tokens = _tokens(cfg, _read_input(cfg))
    accepted, state = _run(cfg, start, tokens)
    elements = state.bsrs.sorted_elements()
    if cfg.format == "json":
        print(json.dumps({
            "result": "accept" if accepted else "reject",
            "elements": [{"slot": {"lhs": _sid_json(b.slot.lhs),
                                   "pre": [_sid_json(s) for s in b.slot.pre],
                                   "post": [_sid_json(s) for s in b.slot.post]},
                          "l": b.left, "k": b.pivot, "r": b.right}
                         for b in elements],
            "total": len(elements)}))
    else:
        for b in elements:
            print(f"{render_slot(b.slot)}, {b.left}, {b.pivot}, {b.right}")
        print(f"total: {len(elements)}")
    return 0 if accepted else 1


def cmd_parse(cfg: RunConfig) -> int:
    elab, start = _load(cfg)
    tokens = _tokens(cfg, _read_input(cfg))
    accepted, state = _run(cfg, start, tokens)
    if not accepted:
        _print_reject(cfg, state)
        return 1
    prec = elab.precedence_filter()
    filters = [prec] if prec is not None else []
    trees = extract_trees(start, tokens, state.bsrs,
                          limit=cfg.max_trees + 1, filters=filters)
    truncated = len(trees) > cfg.max_trees
    trees = trees[:cfg.max_trees]
    if cfg.format == "json":
        print(json.dumps({"result": "accept",
                          "trees": [t.to_json() for t in trees],
                          "truncated": truncated}))
        return 0
    for t in trees:
        print(t.render())
    note = f"{len(trees)} trees (truncated)" if truncated else f"{len(trees)} trees"
    print(note)
    return 0


def cmd_count(cfg: RunConfig) -> int:
    _elab, start = _load(cfg)
    tokens = _tokens(cfg, _read_input(cfg))
    accepted, state = _run(cfg, start, tokens)
    if not accepted:
        _print_reject(cfg, state)
        return 1
    count = forest.count_derivations(start, tokens, state.bsrs, 0, len(tokens))
    if cfg.format == "json":
        print(json.dumps({"result": "accept", "count": count.value,
                          "saturated": count.saturated}))
    else:
        print(f"{count.value} (saturated)" if count.saturated else str(count.value))
    return 0


def cmd_stats(cfg: RunConfig) -> int:
    _elab, start = _load(cfg)
    tokens = _tokens(cfg, _read_input(cfg))
    t0 = time.perf_counter()
    accepted, state = _run(cfg, start, tokens)
    elapsed = time.perf_counter() - t0
    metrics = {
        "result": "accept" if accepted else "reject",
        "descriptors_processed": state.stats.descriptors_processed,
        "uset": len(state.uset),
        "bsrs": len(state.bsrs),
        "prel": len(state.prel),
    }
    if cfg.format == "json":
        if not cfg.deterministic:
            metrics["wall_time_s"] = elapsed
        print(json.dumps(metrics))
    else:
        print(f"result: {metrics['result']}")
        print(f"descriptors processed: {metrics['descriptors_processed']}")
        print(f"uset: {metrics['uset']}")
        print(f"bsrs: {metrics['bsrs']}")
        print(f"prel: {metrics['prel']}")
        if not cfg.deterministic:
            print(f"wall time: {elapsed:.6f}s", file=sys.stderr)
    return 0 if accepted else 1


def cmd_bench(cfg: RunConfig, sizes: list[int], char: str) -> int:
    _elab, start = _load(cfg)
    rows = []
    for size in sizes:
        text = char * size
        tokens = _tokens(cfg, text)
        t0 = time.perf_counter()
        accepted, _state = _run(cfg, start, tokens)
        elapsed = time.perf_counter() - t0
        rows.append((size, accepted, elapsed))
        print(f"size {size}: {'accept' if accepted else 'reject'}")
        if not cfg.deterministic:
            print(f"size {size}: {elapsed:.6f}s", file=sys.stderr)
    if cfg.format == "json":
        print(json.dumps([{"size": s, "result": "accept" if a else "reject",
                           **({} if cfg.deterministic else {"wall_time_s": e})}
                          for s, a, e in rows]))
    return 0


def build_arg_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--grammar", required=True, help="grammar file path")
    shared.add_argument("--start", required=True,
                        help="start symbol reference, e.g. CSV(alpha)")
    shared.add_argument("--mode", choices=("char", "words"), default="char")
    src = shared.add_mutually_exclusive_group()
    src.add_argument("--text", help="input given directly on the command line")
    src.add_argument("--input", help="input file path")
    src.add_argument("--stdin", action="store_true", help="read input from stdin")
    shared.add_argument("--fuel", type=int, default=DEFAULT_FUEL,
                        help="descriptor budget, 0 = unlimited")
    shared.add_argument("--errors", type=int, default=3,
                        help="max error reports on reject")
    shared.add_argument("--max-trees", type=int, default=10)
    shared.add_argument("--format", choices=("text", "json"), default="text")
    shared.add_argument("--deterministic", action="store_true",
                        help="suppress timing output")
    shared.add_argument("--oracle", action="store_true",
                        help="cross-check against the naive recognizer")

    parser = argparse.ArgumentParser(prog="gllkit",
                                     description="generalized-LL parsing toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("recognize", "bsr", "parse", "count", "stats"):
        sub.add_parser(name, parents=[shared])
    bench = sub.add_parser("bench", parents=[shared])
    bench.add_argument("--sizes", type=int, nargs="+", required=True)
    bench.add_argument("--bench-char", default="a",
                       help="character replicated to build each input")
    return parser


def _config(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(grammar=ns.grammar, start=ns.start, mode=ns.mode,
                     text=ns.text, input=ns.input, stdin=ns.stdin,
                     fuel=ns.fuel, errors=ns.errors, max_trees=ns.max_trees,
                     format=ns.format, deterministic=ns.deterministic,
                     oracle=ns.oracle)


def main(argv: Optional[list[str]] = None) -> int:
    ns = build_arg_parser().parse_args(argv)
    cfg = _config(ns)
    try:
        if ns.command == "recognize":
            return cmd_recognize(cfg)
        if ns.command == "bsr":
            return cmd_bsr(cfg)
        if ns.command == "parse":
            return cmd_parse(cfg)
        if ns.command == "count":
            return cmd_count(cfg)
        if ns.command == "stats":
            return cmd_stats(cfg)
        if ns.command == "bench":
            if cfg.text is None and cfg.input is None and not cfg.stdin:
                cfg.text = ""  # bench builds its own inputs
            return cmd_bench(cfg, ns.sizes, ns.bench_char)
        raise CliError(f"unknown command {ns.command!r}")
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ResourceExhausted as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
