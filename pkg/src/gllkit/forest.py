"""Semantic phase: walk a BSR forest to evaluate, enumerate and count
derivations, with curtailment of cyclic nonterminals, disambiguation filters,
and furthest-failure error reports."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import islice
from typing import Callable, NamedTuple, Optional, Sequence

from .core import Slot, SymbolId, render_id, render_slot
from .engine import AltPlan, Symbol, Token, TokenPattern
from .state import BsrSet, ParseState

# Counts saturate here rather than growing without bound on pathological
# forests; the flag in DerivationCount reports when the cap was hit.
COUNT_CAP = 10 ** 30


@dataclass(frozen=True)
class TreeNode:
    """Nonterminal derivation node spanning input[left:right]."""

    symbol: SymbolId
    left: int
    right: int
    children: tuple

    def render(self) -> str:
        parts = [render_id(self.symbol), str(self.left), str(self.right)]
        parts.extend(c.render() for c in self.children)
        return "(" + " ".join(parts) + ")"

    def to_json(self) -> dict:
        return {"name": render_id(self.symbol), "left": self.left,
                "right": self.right,
                "children": [c.to_json() for c in self.children]}


@dataclass(frozen=True)
class Leaf:
    """Matched token leaf."""

    value: object
    position: int

    def render(self) -> str:
        return f"'{self.value}'@{self.position}"

    def to_json(self) -> dict:
        return {"token": str(self.value), "position": self.position}


@dataclass(frozen=True)
class ErrorReport:
    """One furthest-failure diagnosis: what was expected where."""

    position: int
    expected: tuple[str, ...]
    got: Optional[object]


class DerivationCount(NamedTuple):
    value: int
    saturated: bool


@dataclass(frozen=True)
class SplitCandidate:
    """One way of tiling an alternate over an extent, with its child values."""

    plan: AltPlan
    boundaries: tuple[int, ...]
    children: tuple


def enumerate_splits(slots: Sequence[Slot], l: int, r: int, bsrs: BsrSet) -> list[tuple[int, ...]]:
    """All boundary vectors (b_0=l, ..., b_n=r) such that symbol i of the
    alternate spans [b_i, b_{i+1}), read off the forest right to left.

    `slots` is the alternate's slot chain: slots[i] has the dot after i
    symbols. The epsilon alternate yields one empty vector when its element
    is present. Vectors come out sorted ascending."""
    n = len(slots) - 1
    if n == 0:
        return [()] if l == r and l in bsrs.pivots(slots[0], l, r) else []
    results: list[tuple[int, ...]] = []

    def walk(i: int, right: int, acc: tuple[int, ...]) -> None:
        if i == 0:
            if right == l:
                results.append((l,) + acc)
            return
        for k in bsrs.pivots(slots[i], l, right):
            walk(i - 1, k, (right,) + acc)

    walk(n, r, ())
    results.sort()
    return results


def evaluate_token(pattern: TokenPattern, input, l: int, r: int) -> list:
    """The token's value when the extents are one apart and it matches."""
    if r == l + 1 and l < len(input) and pattern.classifier(input[l]) is not None:
        return [input[l]]
    return []


def _child_visited(cl: int, cr: int, l: int, r: int,
                   visited: frozenset, sid: SymbolId) -> frozenset:
    # Curtailment: re-entering a nonterminal is only forbidden while the
    # extent pair stays the same; any progress resets the guard.
    if (cl, cr) != (l, r):
        return frozenset()
    return visited | {sid}


def evaluate(sym: Symbol, input, bsrs: BsrSet, l: int, r: int,
             visited: frozenset = frozenset(), filters: Sequence = ()) -> list:
    """One semantic value per (curtailed) derivation of input[l:r) at sym."""
    if isinstance(sym, Token):
        return evaluate_token(sym.pattern, input, l, r)
    if sym.id in visited:
        return []
    out: list = []
    for plan in sym.plans():
        for bounds in enumerate_splits(plan.slots, l, r, bsrs):
            child_lists = []
            for i, child in enumerate(plan.symbols):
                cl, cr = bounds[i], bounds[i + 1]
                vals = evaluate(child, input, bsrs, cl, cr,
                                _child_visited(cl, cr, l, r, visited, sym.id),
                                filters)
                if not vals:
                    break
                child_lists.append(vals)
            else:
                if plan.action_kind == "multi" and plan.action is not None:
                    out.extend(plan.action(child_lists))
                    continue
                candidates = [SplitCandidate(plan, bounds, combo)
                              for combo in _product(child_lists)]
                for cand in apply_filters(filters, candidates):
                    if plan.action is not None:
                        out.append(plan.action(list(cand.children)))
                    else:
                        out.append(TreeNode(sym.id, l, r, cand.children))
    return out


def _product(lists: list) -> list[tuple]:
    combos: list[tuple] = [()]
    for vals in lists:
        combos = [c + (v,) for c in combos for v in vals]
    return combos


def count_derivations(sym: Symbol, input, bsrs: BsrSet, l: int, r: int,
                      visited: frozenset = frozenset(),
                      _memo: Optional[dict] = None) -> DerivationCount:
    """Curtailed derivation count, memoized, saturating at COUNT_CAP."""
    memo: dict = {} if _memo is None else _memo
    n = _count(sym, input, bsrs, l, r, visited, memo)
    return DerivationCount(min(n, COUNT_CAP), n > COUNT_CAP)


def _count(sym, input, bsrs, l, r, visited, memo) -> int:
    if isinstance(sym, Token):
        return 1 if evaluate_token(sym.pattern, input, l, r) else 0
    if sym.id in visited:
        return 0
    key = (sym.id, l, r, visited)
    hit = memo.get(key)
    if hit is not None:
        return hit
    total = 0
    for plan in sym.plans():
        for bounds in enumerate_splits(plan.slots, l, r, bsrs):
            prod = 1
            for i, child in enumerate(plan.symbols):
                cl, cr = bounds[i], bounds[i + 1]
                prod *= _count(child, input, bsrs, cl, cr,
                               _child_visited(cl, cr, l, r, visited, sym.id),
                               memo)
                if prod == 0:
                    break
            total += prod
            if total > COUNT_CAP:
                total = COUNT_CAP + 1
    memo[key] = total
    return total


def iter_trees(sym: Symbol, input, bsrs: BsrSet, l: int, r: int,
               visited: frozenset = frozenset(), filters: Sequence = ()):
    """Lazily yield derivation trees in deterministic order: splits ascending
    by boundary vector, alternates in definition order."""
    if isinstance(sym, Token):
        if evaluate_token(sym.pattern, input, l, r):
            yield Leaf(input[l], l)
        return
    if sym.id in visited:
        return
    for plan in sym.plans():
        for bounds in enumerate_splits(plan.slots, l, r, bsrs):
            factories = [
                (lambda child=child, cl=bounds[i], cr=bounds[i + 1]:
                 iter_trees(child, input, bsrs, cl, cr,
                            _child_visited(cl, cr, l, r, visited, sym.id),
                            filters))
                for i, child in enumerate(plan.symbols)]
            for combo in _lazy_combos(factories, 0):
                cand = SplitCandidate(plan, bounds, combo)
                if apply_filters(filters, [cand]):
                    yield TreeNode(sym.id, l, r, combo)


def _lazy_combos(factories: list, i: int):
    if i == len(factories):
        yield ()
        return
    for first in factories[i]():
        for rest in _lazy_combos(factories, i + 1):
            yield (first,) + rest


def extract_trees(sym: Symbol, input, bsrs: BsrSet,
                  limit: Optional[int] = None, filters: Sequence = ()) -> list:
    """Up to `limit` full-extent derivation trees, a prefix of the unlimited
    enumeration."""
    gen = iter_trees(sym, input, bsrs, 0, len(input), frozenset(), filters)
    return list(gen if limit is None else islice(gen, limit))


def apply_filters(filters: Sequence, candidates: Sequence[SplitCandidate]) -> list[SplitCandidate]:
    """Keep the candidates every filter allows; contractive and idempotent."""
    if not filters:
        return list(candidates)
    return [c for c in candidates
            if all(f.allow(c) for f in filters)]


class PrecedenceFilter:
    """Prunes splits that violate precedence or associativity declarations.

    `groups` is the ordered list of (assoc, [token names]) declarations;
    later groups bind tighter. An alternate's operator is its rightmost
    declared token; a subtree's root operator is the rightmost declared token
    leaf among its direct children. A split is pruned when a child's root
    operator binds looser than the parent's, or equally with the child on the
    disallowed side.
    """

    def __init__(self, groups: Sequence[tuple[str, Sequence[str]]]):
        self.levels: dict[str, tuple[int, str]] = {}
        for level, (assoc, names) in enumerate(groups):
            if assoc not in ("left", "right", "nonassoc"):
                raise ValueError(f"unknown associativity {assoc!r}")
            for name in names:
                self.levels[name] = (level, assoc)

    def _operator_index(self, plan: AltPlan) -> Optional[int]:
        for i in range(len(plan.symbols) - 1, -1, -1):
            s = plan.symbols[i]
            if isinstance(s, Token) and s.id.name in self.levels:
                return i
        return None

    def _root_operator(self, tree) -> Optional[str]:
        if not isinstance(tree, TreeNode):
            return None
        for child in reversed(tree.children):
            if isinstance(child, Leaf):
                name = f"'{child.value}'"
                if name in self.levels:
                    return name
        return None

    def allow(self, cand: SplitCandidate) -> bool:
        op_index = self._operator_index(cand.plan)
        if op_index is None:
            return True
        level, assoc = self.levels[cand.plan.symbols[op_index].id.name]
        for i, child in enumerate(cand.children):
            child_op = self._root_operator(child)
            if child_op is None:
                continue
            child_level, _ = self.levels[child_op]
            if child_level < level:
                return False
            if child_level == level:
                if assoc == "nonassoc":
                    return False
                if assoc == "left" and i > op_index:
                    return False
                if assoc == "right" and i < op_index:
                    return False
        return True


def extract_errors(state: ParseState, n: int = 3,
                   accepted: bool = False) -> list[ErrorReport]:
    """Reports for the furthest failed token match: one per distinct slot
    attempted there, sorted by rendered slot, truncated to n. Empty when the
    run accepted (flagging caller misuse) or nothing ever failed."""
    if accepted or state.failures.position < 0:
        return []
    pos = state.failures.position
    rendered = sorted(render_slot(s) for s in state.failures.slots)[:n]
    got = state.input[pos] if pos < len(state.input) else None
    return [ErrorReport(pos, (slot,), got) for slot in rendered]
