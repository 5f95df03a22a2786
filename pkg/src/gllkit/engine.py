"""The generalized-LL engine: descend, ascend, continue and process actions.

Symbols carry an identifier plus a matcher; nonterminal symbols own a list of
alternate plans (symbol sequence, slot chain, semantic action). Effects are
driven through an explicit work queue rather than native recursion, so deeply
cascading descriptor chains cannot overflow the call stack. FIFO is the
default schedule; order independence of the final state licenses any other.
"""
from __future__ import annotations

from typing import Callable, Iterable, Optional, Sequence

from .core import (
    Applied,
    BSRElement,
    Commencement,
    ContinuationId,
    Slot,
    SymbolId,
    TokenName,
)
from .state import ParseState, ResourceExhausted

START_NAME = "__START"
START_ID = Applied(START_NAME)


class TokenPattern:
    """A pure classifier over tokens plus a display name."""

    __slots__ = ("classifier", "name")

    def __init__(self, classifier: Callable[[object], Optional[object]], name: str):
        self.classifier = classifier
        self.name = name

    def __repr__(self) -> str:
        return f"TokenPattern({self.name!r})"


class AltPlan:
    """One alternate of a nonterminal, with its precomputed slot chain.

    slots[i] is the alternate's slot with the dot after i symbols; actions are
    either plain (child values -> value) or ambiguity-aware ("multi": child
    value lists -> list of values).
    """

    __slots__ = ("lhs", "symbols", "slots", "action", "action_kind")

    def __init__(self, lhs: SymbolId, symbols: Sequence["Symbol"],
                 action=None, action_kind: str = "plain"):
        self.lhs = lhs
        self.symbols = tuple(symbols)
        ids = tuple(s.id for s in self.symbols)
        n = len(ids)
        self.slots = tuple(Slot(lhs, ids[:i], ids[i:]) for i in range(n + 1))
        self.action = action
        self.action_kind = action_kind

    def __repr__(self) -> str:
        return f"AltPlan({self.slots[0]!r})"


class Symbol:
    """A grammar symbol: identifier plus matching and evaluation behavior."""

    __slots__ = ("id",)

    id: SymbolId

    @property
    def is_token(self) -> bool:
        return isinstance(self, Token)

    def match(self, state: ParseState, l: int, cid: ContinuationId, cont) -> None:
        raise NotImplementedError

    def evaluate(self, input, bsrs, l: int, r: int, visited: frozenset = frozenset()):
        from . import forest

        return forest.evaluate(self, input, bsrs, l, r, visited)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.id!r})"


class Token(Symbol):
    __slots__ = ("pattern",)

    def __init__(self, pattern: TokenPattern):
        self.id = TokenName(pattern.name)
        self.pattern = pattern

    def match(self, state: ParseState, l: int, cid: ContinuationId, cont) -> None:
        inp = state.input
        if l < len(inp) and self.pattern.classifier(inp[l]) is not None:
            _apply_cont(state, cont, l, l + 1)
        else:
            state.failures.record(l, _retreat(cid.slot))


class Nonterminal(Symbol):
    """A (possibly parameterized instance of a) defined nonterminal.

    Plans may be supplied lazily via a thunk so that self-instantiating
    definitions elaborate without divergence; the thunk is forced at most once,
    the first time the symbol is matched or evaluated.
    """

    __slots__ = ("_plans", "_thunk")

    def __init__(self, id: SymbolId, plans: Optional[Iterable[AltPlan]] = None,
                 thunk: Optional[Callable[[], Iterable[AltPlan]]] = None):
        if (plans is None) == (thunk is None):
            raise ValueError("exactly one of plans/thunk required")
        self.id = id
        self._plans = None if plans is None else tuple(plans)
        self._thunk = thunk

    def plans(self) -> tuple[AltPlan, ...]:
        if self._plans is None:
            self._plans = tuple(self._thunk())
            self._thunk = None
        return self._plans

    def match(self, state: ParseState, l: int, cid: ContinuationId, cont) -> None:
        descend(Commencement(self.id, l), cid, cont,
                lambda st: _alternates(st, self, l), state)


def token_symbol(pattern: TokenPattern) -> Token:
    return Token(pattern)


def char_token(ch: str) -> Token:
    """Token matching one literal character; named with its quotes: "'a'"."""
    return Token(TokenPattern(lambda t: t if t == ch else None, f"'{ch}'"))


def nonterminal_symbol(name: str, args: Sequence[Symbol],
                       alternates: Sequence[tuple]) -> Nonterminal:
    """Build a nonterminal Symbol with eager plans.

    Each alternate is (symbols,) or (symbols, action) or
    (symbols, action, action_kind).
    """
    sid = Applied(name, tuple(a.id for a in args))
    plans = [AltPlan(sid, *alt) if isinstance(alt, tuple) else AltPlan(sid, alt)
             for alt in alternates]
    return Nonterminal(sid, plans=plans)


def lazy_nonterminal(sid: SymbolId, thunk: Callable[[], Iterable[AltPlan]]) -> Nonterminal:
    return Nonterminal(sid, thunk=thunk)


def _retreat(slot: Slot) -> Slot:
    """The slot one symbol to the left of `slot`'s dot (for failure reports)."""
    if not slot.pre:
        return slot
    return Slot(slot.lhs, slot.pre[:-1], (slot.pre[-1],) + slot.post)


# A continuation is (plan, i, l): on (pivot, right) it records BSR element
# (plan.slots[i], l, pivot, right) and processes the advanced descriptor.
# None is the inert continuation used above the start symbol.


def _apply_cont(state: ParseState, cont, k: int, r: int) -> None:
    if cont is None:
        return
    if type(cont) is tuple:
        plan, i, l = cont
        state.bsrs.add4(plan.slots[i], l, k, r)
        _process(state, plan, i, l, r)
    else:
        cont(state, k, r)


def _process(state: ParseState, plan: AltPlan, i: int, l: int, r: int) -> None:
    """Gate on the descriptor set; schedule the descriptor's effect iff new."""
    if state.uset.add3(plan.slots[i], l, r):
        stats = state.stats
        stats.fuel_consumed += 1
        if state.fuel is not None and stats.fuel_consumed > state.fuel:
            err = ResourceExhausted(f"fuel budget of {state.fuel} exhausted")
            err.state = state
            raise err
        state.queue.append((plan, i, l, r))


def _alternates(state: ParseState, sym: Nonterminal, l: int) -> None:
    """Apply the initial effect of every alternate of sym at extent l."""
    if sym._plans is None:
        stats = state.stats
        stats.instantiations += 1
        budget = state.instantiation_budget
        if budget is not None and stats.instantiations > budget:
            err = ResourceExhausted(
                f"instantiation budget of {budget} exhausted")
            err.state = state
            raise err
    plans = sym.plans()
    if state.reverse_alternates:
        plans = tuple(reversed(plans))
    for plan in plans:
        if plan.symbols:
            _process(state, plan, 0, l, l)
        else:
            state.bsrs.add4(plan.slots[0], l, l, l)
            _process(state, plan, 0, l, l)


def _act(state: ParseState, plan: AltPlan, i: int, l: int, r: int) -> None:
    """Effect of descriptor (plan.slots[i], l, r): handle the symbol after the dot."""
    symbols = plan.symbols
    if i == len(symbols):
        ascend(Commencement(plan.lhs, l), r, state)
        return
    sym = symbols[i]
    if type(sym) is Token:
        inp = state.input
        if r < len(inp) and sym.pattern.classifier(inp[r]) is not None:
            state.bsrs.add4(plan.slots[i + 1], l, r, r + 1)
            _process(state, plan, i + 1, l, r + 1)
        else:
            state.failures.record(r, plan.slots[i])
    else:
        sym.match(state, r, ContinuationId(plan.slots[i + 1], l), (plan, i + 1, l))


def descend(c: Commencement, cid: ContinuationId, cont,
            alternates_effect: Callable[[ParseState], None], state: ParseState) -> None:
    """Register the continuation; reuse known extents or start the alternates."""
    state.grel.add(c, cid, cont)
    extents = state.prel.extents_for(c)
    if extents:
        for r in list(extents):
            _apply_cont(state, cont, c.left, r)
    else:
        alternates_effect(state)


def ascend(c: Commencement, r: int, state: ParseState) -> None:
    """Record the extent and apply every continuation registered for c."""
    state.prel.add(c, r)
    for _cid, cont in state.grel.continuations_for(c):
        _apply_cont(state, cont, c.left, r)


def continue_with(b: BSRElement, next_effect, state: ParseState) -> None:
    """Record the BSR element, then process its descriptor (once only)."""
    state.bsrs.add(b)
    if state.uset.add3(b.slot, b.left, b.right):
        stats = state.stats
        stats.fuel_consumed += 1
        if state.fuel is not None and stats.fuel_consumed > state.fuel:
            err = ResourceExhausted(f"fuel budget of {state.fuel} exhausted")
            err.state = state
            raise err
        state.queue.append(next_effect)


def _drive(state: ParseState) -> None:
    """Drain the work queue to quiescence under the configured schedule."""
    queue = state.queue
    pop = queue.pop if state.lifo else queue.popleft
    stats = state.stats
    while queue:
        item = pop()
        stats.descriptors_processed += 1
        if type(item) is tuple:
            _act(state, item[0], item[1], item[2], item[3])
        else:
            item(state)


def _start_parse(s: Symbol, input, fuel: Optional[int], lifo: bool,
                 reverse_alternates: bool,
                 instantiation_budget: Optional[int]) -> tuple[ParseState, AltPlan]:
    if s.id == START_ID:
        raise ValueError(f"{START_NAME} is reserved for the artificial start symbol")
    state = ParseState(input, fuel=fuel, lifo=lifo,
                       reverse_alternates=reverse_alternates,
                       instantiation_budget=instantiation_budget)
    start_plan = AltPlan(START_ID, (s,))
    cid = ContinuationId(start_plan.slots[1], 0)
    # A token start must record its match somewhere visible; a nonterminal
    # start is read off prel directly, so its continuation is inert and the
    # forest stays free of artificial-start elements.
    cont = (start_plan, 1, 0) if s.is_token else None
    s.match(state, 0, cid, cont)
    _drive(state)
    return state, start_plan


def _accept_commencement(s: Symbol) -> Commencement:
    return Commencement(START_ID if s.is_token else s.id, 0)


def run_recognize(s: Symbol, input, fuel: Optional[int] = None, lifo: bool = False,
                  reverse_alternates: bool = False,
                  instantiation_budget: Optional[int] = None) -> tuple[bool, ParseState]:
    """Parse the whole input; accepted iff its full extent was derived from 0."""
    state, _ = _start_parse(s, input, fuel, lifo, reverse_alternates,
                            instantiation_budget)
    extents = state.prel.extents_for(_accept_commencement(s))
    return (len(input) in extents, state)


def run_prefix(s: Symbol, input, fuel: Optional[int] = None, lifo: bool = False,
               reverse_alternates: bool = False,
               instantiation_budget: Optional[int] = None) -> tuple[list[int], ParseState]:
    """All right extents reachable from position 0, ascending."""
    state, _ = _start_parse(s, input, fuel, lifo, reverse_alternates,
                            instantiation_budget)
    return (list(state.prel.extents_for(_accept_commencement(s))), state)
