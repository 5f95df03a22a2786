"""Shared test utilities: random grammar generation, structural analyses of
grammar ASTs, and slow-but-obvious brute-force derivation oracles."""
from __future__ import annotations

import random
from pathlib import Path

from gllkit.dsl import GrammarAst, Lit, Ref, parse_grammar

GRAMMARS = Path(__file__).resolve().parent.parent / "grammars"


def load_grammar(name: str) -> GrammarAst:
    return parse_grammar((GRAMMARS / name).read_text())


def random_grammar(rng: random.Random, max_nts: int = 4, max_alts: int = 3,
                   max_len: int = 3, tokens: str = "ab") -> str:
    """A small random grammar in DSL text form. Nullable and left-recursive
    definitions arise naturally from empty alternates and self-references."""
    names = [f"N{i}" for i in range(rng.randint(1, max_nts))]
    lines = []
    for name in names:
        alts = []
        for _ in range(rng.randint(1, max_alts)):
            syms = []
            for _ in range(rng.randint(0, max_len)):
                if rng.random() < 0.5:
                    syms.append(f"'{rng.choice(tokens)}'")
                else:
                    syms.append(rng.choice(names))
            alts.append(" ".join(syms))
        lines.append(f"{name}: " + " | ".join(alts))
    return "\n".join(lines) + "\n"


def random_input(rng: random.Random, max_len: int = 8, tokens: str = "ab") -> str:
    return "".join(rng.choice(tokens) for _ in range(rng.randint(0, max_len)))


def nullable_names(ast: GrammarAst) -> set[str]:
    """Fixpoint of definitions that can derive the empty string
    (non-parameterized definitions only)."""
    nullable: set[str] = set()
    changed = True
    while changed:
        changed = False
        for d in ast.definitions:
            if d.name in nullable:
                continue
            for alt in d.alternates:
                if all(isinstance(s, Ref) and not s.args and s.name in nullable
                       for s in alt):
                    nullable.add(d.name)
                    changed = True
                    break
    return nullable


def is_left_recursive(ast: GrammarAst) -> bool:
    """True iff some definition can reach itself through a left corner,
    counting corners exposed by nullable prefixes."""
    nullable = nullable_names(ast)
    edges: dict[str, set[str]] = {d.name: set() for d in ast.definitions}
    for d in ast.definitions:
        for alt in d.alternates:
            for s in alt:
                if isinstance(s, Lit):
                    break
                edges[d.name].add(s.name)
                if s.name not in nullable:
                    break
    # cycle detection over the left-corner graph
    color: dict[str, int] = {}

    def visit(name: str) -> bool:
        state = color.get(name, 0)
        if state == 1:
            return True
        if state == 2:
            return False
        color[name] = 1
        if any(visit(t) for t in edges.get(name, ())):
            return True
        color[name] = 2
        return False

    return any(visit(d.name) for d in ast.definitions)


def brute_count(ast: GrammarAst, start: str, text: str) -> int:
    """Independent derivation counter: direct recursion over the AST with the
    same same-extent curtailment rule the semantic phase uses. Handles only
    non-parameterized definitions."""
    defs = {d.name: d for d in ast.definitions}
    token_decls = {t.name: t.pattern.classifier() for t in ast.tokens}
    memo: dict = {}

    def sym_count(sym, l: int, r: int, visited: frozenset) -> int:
        if isinstance(sym, Lit):
            return 1 if r == l + 1 and text[l] == sym.char else 0
        if sym.name in token_decls:
            return 1 if r == l + 1 and token_decls[sym.name](text[l]) is not None else 0
        return nt_count(sym.name, l, r, visited)

    def nt_count(name: str, l: int, r: int, visited: frozenset) -> int:
        if name in visited:
            return 0
        key = (name, l, r, visited)
        if key in memo:
            return memo[key]
        total = 0
        for alt in defs[name].alternates:
            total += seq_count(alt, 0, l, r, (l, r), visited | {name})
        memo[key] = total
        return total

    def seq_count(alt, i: int, l: int, r: int, parent_extent, visited) -> int:
        if i == len(alt):
            return 1 if l == r else 0
        total = 0
        for mid in range(l, r + 1):
            vis = visited if (l, mid) == parent_extent else frozenset()
            first = sym_count(alt[i], l, mid, vis)
            if first:
                total += first * seq_count(alt, i + 1, mid, r, parent_extent, visited)
        return total

    return nt_count(start, 0, len(text), frozenset())


def brute_accepts(ast: GrammarAst, start: str, text: str) -> bool:
    return brute_count(ast, start, text) > 0


def uset_snapshot(state) -> frozenset:
    return frozenset(state.uset)
