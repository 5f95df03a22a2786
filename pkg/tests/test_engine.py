"""Engine actions and whole-run behavior, including the hand-derived golden
trace for the cyclic grammar E: E E E | 'a' | on input "a"."""
import pytest

from gllkit.core import (
    Applied,
    BSRElement,
    Commencement,
    ContinuationId,
    Descriptor,
    Slot,
    TokenName,
    render_slot,
)
from gllkit.engine import (
    AltPlan,
    Nonterminal,
    ascend,
    char_token,
    continue_with,
    descend,
    lazy_nonterminal,
    nonterminal_symbol,
    run_prefix,
    run_recognize,
    token_symbol,
    TokenPattern,
)
from gllkit.state import ParseState, ResourceExhausted

from helpers import load_grammar
from gllkit.dsl import Elaborator


def e_grammar():
    a = char_token("a")
    E = Applied("E")
    sym = Nonterminal(E, thunk=lambda: [
        AltPlan(E, (sym, sym, sym)), AltPlan(E, (a,)), AltPlan(E, ())])
    return sym


# Hand-derived by stepping the descend/ascend/continue/process actions on
# E: E E E | 'a' | over "a": exactly these descriptors are processed and
# exactly these forest elements are recorded.
GOLDEN_DESCRIPTORS = {
    ("E ::= . E E E", 0, 0), ("E ::= . 'a'", 0, 0), ("E ::= .", 0, 0),
    ("E ::= 'a' .", 0, 1), ("E ::= E . E E", 0, 0), ("E ::= E . E E", 0, 1),
    ("E ::= E E . E", 0, 0), ("E ::= E E . E", 0, 1), ("E ::= . E E E", 1, 1),
    ("E ::= . 'a'", 1, 1), ("E ::= .", 1, 1), ("E ::= E E E .", 0, 0),
    ("E ::= E E E .", 0, 1), ("E ::= E . E E", 1, 1), ("E ::= E E . E", 1, 1),
    ("E ::= E E E .", 1, 1),
}
GOLDEN_FOREST = {
    ("E ::= .", 0, 0, 0), ("E ::= E . E E", 0, 0, 0), ("E ::= E E . E", 0, 0, 0),
    ("E ::= E E E .", 0, 0, 0), ("E ::= 'a' .", 0, 0, 1),
    ("E ::= E . E E", 0, 0, 1), ("E ::= E E . E", 0, 0, 1),
    ("E ::= E E . E", 0, 1, 1), ("E ::= E E E .", 0, 0, 1),
    ("E ::= E E E .", 0, 1, 1), ("E ::= .", 1, 1, 1), ("E ::= E . E E", 1, 1, 1),
    ("E ::= E E . E", 1, 1, 1), ("E ::= E E E .", 1, 1, 1),
}


class TestGoldenTrace:
    def test_descriptors_and_forest(self):
        accepted, state = run_recognize(e_grammar(), "a")
        assert accepted
        got_descrs = {(render_slot(d.slot), d.left, d.right) for d in state.uset}
        assert got_descrs == GOLDEN_DESCRIPTORS
        got_forest = {(render_slot(b.slot), b.left, b.pivot, b.right)
                      for b in state.bsrs}
        assert got_forest == GOLDEN_FOREST
        assert state.stats.descriptors_processed == 16
        assert len(state.bsrs) == 14


class TestRuns:
    def test_accepts_single_token(self):
        accepted, _ = run_recognize(e_grammar(), "a")
        assert accepted

    def test_accepts_empty(self):
        accepted, _ = run_recognize(e_grammar(), "")
        assert accepted

    def test_rejects_unknown_token(self):
        accepted, _ = run_recognize(e_grammar(), "b")
        assert not accepted

    def test_prefixes(self):
        prefixes, _ = run_prefix(e_grammar(), "ab")
        assert prefixes == [0, 1]

    def test_prefix_of_empty(self):
        prefixes, _ = run_prefix(e_grammar(), "")
        assert prefixes == [0]

    def test_token_only_start(self):
        a = char_token("a")
        prefixes, _ = run_prefix(a, "aa")
        assert prefixes == [1]
        accepted, state = run_recognize(a, "a")
        assert accepted
        assert len(state.bsrs) == 1
        (element,) = list(state.bsrs)
        assert render_slot(element.slot) == "__START ::= 'a' ."
        assert (element.left, element.pivot, element.right) == (0, 0, 1)

    def test_token_start_reject(self):
        accepted, state = run_recognize(char_token("a"), "b")
        assert not accepted
        assert len(state.bsrs) == 0

    def test_epsilon_only_nonterminal(self):
        sym = nonterminal_symbol("Z", (), [((),)])
        accepted, state = run_recognize(sym, "")
        assert accepted
        assert state.prel.extents_for(Commencement(sym.id, 0)) == [0]

    def test_start_name_is_reserved(self):
        sym = nonterminal_symbol("__START", (), [((),)])
        with pytest.raises(ValueError):
            run_recognize(sym, "")

    def test_left_recursive_instance_terminates(self):
        elab = Elaborator(load_grammar("csv.g"))
        start = elab.start_symbol("CSV(alpha)")
        assert start.id == Applied("CSV", (TokenName("alpha"),))
        for text in ("", "a", "a,b", "a,b,c", "a,b,c,d,e,f", "a,b,c,d,e,f,"):
            assert len(text) <= 12
            accepted, _ = run_recognize(start, text)
            assert accepted == (len(text) % 2 == 1)

    def test_parameterized_instance_recognizes(self):
        v = char_token("v")
        csv = Applied("CSV", (v.id,))
        comma = char_token(",")
        sym = Nonterminal(csv, thunk=lambda: [
            AltPlan(csv, (sym, comma, sym)), AltPlan(csv, (v,))])
        accepted, state = run_recognize(sym, "v,v")
        assert accepted
        assert 3 in state.prel.extents_for(Commencement(csv, 0))


class TestActions:
    def test_descend_first_time_runs_alternates(self):
        state = ParseState("a")
        c = Commencement(Applied("X"), 0)
        ran = []
        descend(c, ContinuationId(Slot(Applied("Y"), (Applied("X"),), ()), 0),
                lambda st, k, r: ran.append(("cont", k, r)),
                lambda st: ran.append("alts"), state)
        assert ran == ["alts"]
        assert len(list(state.grel.pairs())) == 1

    def test_descend_reuses_recorded_extents(self):
        state = ParseState("aa")
        c = Commencement(Applied("X"), 1)
        state.prel.add(c, 1)
        state.prel.add(c, 2)
        ran = []
        descend(c, ContinuationId(Slot(Applied("Y"), (Applied("X"),), ()), 0),
                lambda st, k, r: ran.append((k, r)),
                lambda st: ran.append("alts"), state)
        assert ran == [(1, 1), (1, 2)]

    def test_ascend_without_continuations_only_grows_prel(self):
        state = ParseState("a")
        c = Commencement(Applied("X"), 0)
        ascend(c, 1, state)
        assert state.prel.extents_for(c) == [1]
        assert len(state.uset) == 0

    def test_ascend_applies_each_continuation(self):
        state = ParseState("a")
        c = Commencement(Applied("X"), 0)
        ran = []
        slot_a = Slot(Applied("Y"), (Applied("X"),), (Applied("X"),))
        slot_b = Slot(Applied("Z"), (Applied("X"),), ())
        state.grel.add(c, ContinuationId(slot_a, 0),
                       lambda st, k, r: ran.append(("a", k, r)))
        state.grel.add(c, ContinuationId(slot_b, 0),
                       lambda st, k, r: ran.append(("b", k, r)))
        ascend(c, 1, state)
        assert sorted(ran) == [("a", 0, 1), ("b", 0, 1)]

    def test_continue_with_gates_on_descriptor(self):
        state = ParseState("a")
        slot = Slot(Applied("X"), (TokenName("'a'"),), ())
        b = BSRElement(slot, 0, 0, 1)
        ran = []
        continue_with(b, lambda st: ran.append("effect"), state)
        continue_with(b, lambda st: ran.append("effect"), state)
        while state.queue:
            state.queue.popleft()(state)
        assert ran == ["effect"]
        assert len(state.bsrs) == 1
        assert Descriptor(slot, 0, 1) in state.uset


class TestBudgets:
    def test_fuel_exhaustion(self):
        with pytest.raises(ResourceExhausted):
            run_recognize(e_grammar(), "aaaa", fuel=5)

    def test_fuel_not_tripped_when_sufficient(self):
        accepted, state = run_recognize(e_grammar(), "a", fuel=1000)
        assert accepted
        assert state.stats.fuel_consumed == 16

    def test_instantiation_budget(self):
        a = char_token("a")

        def mk(depth_id):
            sid = Applied("D", (depth_id,))
            sym = lazy_nonterminal(sid, lambda: [
                AltPlan(sid, (mk(sid), a)), AltPlan(sid, (a,))])
            return sym

        start = mk(a.id)
        with pytest.raises(ResourceExhausted, match="instantiation"):
            run_recognize(start, "aaa", instantiation_budget=2)


class TestInvariants:
    def test_no_descriptor_processed_twice(self):
        for text in ("", "a", "aa", "aaa", "b", "ab"):
            _, state = run_recognize(e_grammar(), text)
            assert state.stats.descriptors_processed == len(state.uset)

    def test_forest_soundness(self):
        _, state = run_recognize(e_grammar(), "aa")
        for b in state.bsrs:
            if not b.slot.pre:
                continue
            before = Slot(b.slot.lhs, b.slot.pre[:-1], (b.slot.pre[-1],) + b.slot.post)
            assert Descriptor(before, b.left, b.pivot) in state.uset
            last = b.slot.pre[-1]
            if isinstance(last, TokenName):
                assert b.right == b.pivot + 1
            else:
                assert b.right in state.prel.extents_for(Commencement(last, b.pivot))

    def test_schedule_and_alternate_order_do_not_matter(self):
        base = run_recognize(e_grammar(), "aaa")[1]
        for kwargs in ({"lifo": True}, {"reverse_alternates": True}):
            other = run_recognize(e_grammar(), "aaa", **kwargs)[1]
            assert frozenset(other.uset) == frozenset(base.uset)
            assert other.prel.snapshot() == base.prel.snapshot()
            assert other.bsrs.snapshot() == base.bsrs.snapshot()


class TestTokenSymbols:
    def test_classifier_match_and_value(self):
        pat = TokenPattern(lambda t: t if t.isdigit() else None, "digit")
        sym = token_symbol(pat)
        accepted, _ = run_recognize(sym, "7")
        assert accepted
        accepted, _ = run_recognize(sym, "x")
        assert not accepted

    def test_empty_input_fails(self):
        accepted, _ = run_recognize(char_token("a"), "")
        assert not accepted
