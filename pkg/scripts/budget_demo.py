#!/usr/bin/env python3
"""Show how resource budgets tame a self-instantiating grammar.

The a^n b^n c^n grammar applies itself to ever-growing argument tuples, so
every fresh instantiation mints a new nonterminal and the search never
closes. This script sweeps the instantiation budget and reports how far the
engine gets before each budget trips, demonstrating that the abort is
proportional and predictable rather than a crash.
"""
import argparse
import sys
import time
from dataclasses import dataclass
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from gllkit.dsl import Elaborator, parse_grammar  # noqa: E402
from gllkit.engine import run_recognize  # noqa: E402
from gllkit.state import ResourceExhausted  # noqa: E402

GRAMMARS = Path(__file__).resolve().parent.parent / "grammars"


@dataclass
class DemoConfig:
    text: str = "aabbcc"
    budgets: tuple[int, ...] = (10, 100, 1000, 10000)


def probe(config, budget):
    source = (GRAMMARS / "anbncn.g").read_text()
    sym = Elaborator(parse_grammar(source)).start_symbol("Start")
    t0 = time.perf_counter()
    try:
        run_recognize(sym, config.text, instantiation_budget=budget)
    except ResourceExhausted as exc:
        return time.perf_counter() - t0, str(exc)
    raise AssertionError("expected the budget to trip")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--text", default="aabbcc")
    parser.add_argument("--budgets", type=int, nargs="+")
    args = parser.parse_args(argv)
    config = DemoConfig(text=args.text)
    if args.budgets:
        config.budgets = tuple(args.budgets)

    print(f"input: {config.text!r}")
    for budget in config.budgets:
        elapsed, message = probe(config, budget)
        print(f"  budget {budget:6d}: tripped after {elapsed:6.3f}s ({message})")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
