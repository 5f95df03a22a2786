"""Identifiers, slots, descriptors and forest-edge values shared by every module.

All identifier-like values are interned: structurally equal ids and slots are
the same object, so the hot membership checks of the engine hash and compare
in O(1).
"""
from __future__ import annotations

from typing import Callable, NamedTuple


class SymbolId:
    """Structural name of a grammar symbol (a token name or an application)."""

    __slots__ = ("name", "args", "sort_key", "_hash", "_rendered")

    name: str
    args: tuple["SymbolId", ...]

    def __hash__(self) -> int:
        return self._hash

    # Interning makes identity comparison correct; fall back to structure so
    # accidental direct construction still behaves.
    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, SymbolId):
            return NotImplemented
        return type(self) is type(other) and self.name == other.name and self.args == other.args

    def __lt__(self, other: "SymbolId") -> bool:
        return self.sort_key < other.sort_key

    @property
    def is_token(self) -> bool:
        return isinstance(self, TokenName)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({render_id(self)})"


class TokenName(SymbolId):
    """Id of a token symbol. Literal-character tokens keep their quotes: "','"."""

    __slots__ = ()

    def __new__(cls, name: str) -> "TokenName":
        key = name
        hit = _TOKEN_INTERN.get(key)
        if hit is not None:
            return hit
        self = object.__new__(cls)
        self.name = name
        self.args = ()
        self.sort_key = (0, name)
        self._hash = hash((0, name))
        self._rendered = name
        _TOKEN_INTERN[key] = self
        return self


class Applied(SymbolId):
    """Id of a nonterminal: a name applied to zero or more argument ids."""

    __slots__ = ()

    def __new__(cls, name: str, args: tuple[SymbolId, ...] = ()) -> "Applied":
        args = tuple(args)
        key = (name, args)
        hit = _APPLIED_INTERN.get(key)
        if hit is not None:
            return hit
        self = object.__new__(cls)
        self.name = name
        self.args = args
        self.sort_key = (1, name, tuple(a.sort_key for a in args))
        self._hash = hash(key)
        self._rendered = None
        _APPLIED_INTERN[key] = self
        return self


_TOKEN_INTERN: dict = {}
_APPLIED_INTERN: dict = {}


def render_id(sid: SymbolId) -> str:
    """Deterministic textual form: token names verbatim, applications name(a,b)."""
    if sid._rendered is None:
        sid._rendered = "%s(%s)" % (sid.name, ",".join(render_id(a) for a in sid.args)) \
            if sid.args else sid.name
    return sid._rendered


class Slot:
    """A grammar position: one alternate of `lhs` with a dot splitting pre/post."""

    __slots__ = ("lhs", "pre", "post", "sort_key", "_hash", "_rendered")

    lhs: SymbolId
    pre: tuple[SymbolId, ...]
    post: tuple[SymbolId, ...]

    def __new__(cls, lhs: SymbolId, pre=(), post=()) -> "Slot":
        pre = tuple(pre)
        post = tuple(post)
        key = (lhs, pre, post)
        hit = _SLOT_INTERN.get(key)
        if hit is not None:
            return hit
        self = object.__new__(cls)
        self.lhs = lhs
        self.pre = pre
        self.post = post
        self.sort_key = (lhs.sort_key, tuple(s.sort_key for s in pre),
                         tuple(s.sort_key for s in post))
        self._hash = hash(key)
        self._rendered = None
        _SLOT_INTERN[key] = self
        return self

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Slot):
            return NotImplemented
        return self.lhs == other.lhs and self.pre == other.pre and self.post == other.post

    def __lt__(self, other: "Slot") -> bool:
        return self.sort_key < other.sort_key

    def __repr__(self) -> str:
        return f"Slot({render_slot(self)})"


_SLOT_INTERN: dict = {}


def slot_advance(slot: Slot) -> Slot:
    """Move the dot one symbol to the right."""
    if not slot.post:
        raise ValueError(f"cannot advance past the end of alternate: {render_slot(slot)}")
    return Slot(slot.lhs, slot.pre + (slot.post[0],), slot.post[1:])


def render_slot(slot: Slot) -> str:
    """Textual form "lhs ::= pre . post", deterministic and grammar-injective."""
    if slot._rendered is None:
        parts = [render_id(slot.lhs), "::="]
        parts.extend(render_id(s) for s in slot.pre)
        parts.append(".")
        parts.extend(render_id(s) for s in slot.post)
        slot._rendered = " ".join(parts)
    return slot._rendered


class Descriptor(NamedTuple):
    """One unit of parsing work: slot plus left and current right extent."""

    slot: Slot
    left: int
    right: int


class Commencement(NamedTuple):
    """A nonterminal about to be (or being) matched at a left extent."""

    nonterminal: SymbolId
    left: int


class ContinuationId(NamedTuple):
    """A descriptor with a hole for its right extent; names a stored continuation."""

    slot: Slot
    left: int


class BSRElement(NamedTuple):
    """Forest edge: slot, left extent, pivot, right extent."""

    slot: Slot
    left: int
    pivot: int
    right: int


# Continuations and state transformers; ParseState is defined in state.py.
Continuation = Callable[[object, int, int], None]


def descriptor_sort_key(d: Descriptor):
    return (d.slot.sort_key, d.left, d.right)


def bsr_sort_key(b: BSRElement):
    return (render_slot(b.slot), b.left, b.pivot, b.right)


def cid_sort_key(cid: ContinuationId):
    return (cid.slot.sort_key, cid.left)
