"""Grow-only parse structures: idempotent inserts, canonical listings."""
from hypothesis import given, strategies as st

from gllkit.core import (
    Applied,
    BSRElement,
    Commencement,
    Descriptor,
    Slot,
    TokenName,
)
from gllkit.state import (
    ParseState,
    add_bsr,
    add_continuation,
    add_descriptor,
    add_extent,
    continuations_for,
    extents_for,
    has_descriptor,
    pivots,
)
from gllkit.core import ContinuationId

E = Applied("E")
A = TokenName("'a'")
S0 = Slot(E, (), (E, E, E))
S1 = Slot(E, (E,), (E, E))
S2 = Slot(E, (E, E), (E,))
S3 = Slot(E, (E, E, E), ())


def fresh(n=4):
    return ParseState("a" * n)


class TestDescriptorSet:
    def test_membership_after_insert(self):
        state = fresh()
        d = Descriptor(S0, 0, 0)
        assert not has_descriptor(d, state)
        assert add_descriptor(d, state)
        assert has_descriptor(d, state)

    def test_insert_is_idempotent(self):
        state = fresh()
        d = Descriptor(S0, 0, 0)
        assert add_descriptor(d, state)
        assert not add_descriptor(d, state)
        assert len(state.uset) == 1

    def test_iteration_is_sorted(self):
        state = fresh()
        for d in (Descriptor(S2, 1, 2), Descriptor(S0, 0, 0), Descriptor(S1, 0, 1)):
            add_descriptor(d, state)
        listed = list(state.uset)
        assert listed == sorted(listed, key=lambda d: (d.left, d.right, d.slot.sort_key))

    @given(st.lists(st.tuples(st.sampled_from([S0, S1, S2, S3]),
                              st.integers(0, 3), st.integers(0, 3)),
                    max_size=20))
    def test_size_matches_distinct_inserts(self, entries):
        state = fresh()
        distinct = set()
        for slot, l, extra in entries:
            r = l + extra if l + extra <= 3 else l
            add_descriptor(Descriptor(slot, l, r), state)
            distinct.add((slot, l, r))
        assert len(state.uset) == len(distinct)
        assert set(state.uset) == {Descriptor(s, l, r) for s, l, r in distinct}


class TestContinuationRelation:
    def test_single_pair(self):
        state = fresh()
        c = Commencement(E, 0)
        cid = ContinuationId(S1, 0)
        cont = object()
        add_continuation(c, cid, cont, state)
        assert continuations_for(c, state) == [(cid, cont)]

    def test_unseen_commencement_is_empty(self):
        assert continuations_for(Commencement(E, 0), fresh()) == []

    def test_two_cids_under_one_commencement(self):
        state = fresh()
        c = Commencement(E, 0)
        add_continuation(c, ContinuationId(S2, 0), "k2", state)
        add_continuation(c, ContinuationId(S1, 0), "k1", state)
        got = continuations_for(c, state)
        assert len(got) == 2
        # canonical order: sorted by continuation id
        assert [cid for cid, _ in got] == [ContinuationId(S1, 0), ContinuationId(S2, 0)]

    def test_first_continuation_wins(self):
        state = fresh()
        c = Commencement(E, 0)
        cid = ContinuationId(S1, 0)
        add_continuation(c, cid, "first", state)
        add_continuation(c, cid, "second", state)
        assert continuations_for(c, state) == [(cid, "first")]


class TestExtentRelation:
    def test_ascending_listing(self):
        state = fresh()
        c = Commencement(E, 0)
        add_extent(c, 1, state)
        add_extent(c, 0, state)
        assert extents_for(c, state) == [0, 1]

    def test_unseen_commencement(self):
        assert extents_for(Commencement(E, 0), fresh()) == []

    def test_duplicate_add(self):
        state = fresh()
        c = Commencement(E, 1)
        add_extent(c, 1, state)
        add_extent(c, 1, state)
        assert extents_for(c, state) == [1]
        assert len(state.prel) == 1


def load_forest(state, elements):
    for b in elements:
        add_bsr(b, state)


class TestBsrSet:
    def test_pivots_ascending(self):
        state = fresh()
        load_forest(state, [BSRElement(S3, 0, 1, 1), BSRElement(S3, 0, 0, 1)])
        assert pivots(S3, 0, 1, state) == [0, 1]

    def test_pivots_empty(self):
        assert pivots(S3, 0, 1, fresh()) == []

    def test_single_pivot(self):
        state = fresh()
        load_forest(state, [BSRElement(S1, 0, 0, 0)])
        assert pivots(S1, 0, 0, state) == [0]

    def test_idempotent_count(self):
        state = fresh()
        load_forest(state, [BSRElement(S1, 0, 0, 1)] * 3)
        assert len(state.bsrs) == 1

    @given(st.lists(st.tuples(st.sampled_from([S1, S2, S3]), st.integers(0, 2),
                              st.integers(0, 2), st.integers(0, 2)),
                    max_size=20))
    def test_lookup_soundness(self, raw):
        state = fresh()
        wellformed = [(s, l, k, r) for s, l, k, r in raw if l <= k <= r]
        for s, l, k, r in wellformed:
            add_bsr(BSRElement(s, l, k, r), state)
        for s, l, k, r in wellformed:
            assert k in pivots(s, l, r, state)
        assert len(state.bsrs) == len(set(wellformed))
        assert state.bsrs.snapshot() == {BSRElement(s, l, k, r)
                                         for s, l, k, r in wellformed}

    def test_dump_order_is_canonical(self):
        state = fresh()
        load_forest(state, [BSRElement(S3, 0, 1, 1), BSRElement(S1, 1, 1, 1),
                            BSRElement(S1, 0, 0, 0), BSRElement(S3, 0, 0, 1)])
        dumped = state.bsrs.sorted_elements()
        from gllkit.core import bsr_sort_key
        assert dumped == sorted(dumped, key=bsr_sort_key)
        assert len(dumped) == 4
