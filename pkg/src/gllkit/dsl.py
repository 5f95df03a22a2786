"""Textual grammar format with parameterized nonterminals.

Surface syntax:

    %token NAME pattern        pattern = 'c' | [items] | %alpha | %digit | %any
    %left 'c' ...              also %right / %nonassoc; later groups bind tighter
    Name(p, q): alt | alt      parameters optional; an empty alt is epsilon
    -- line comment

Alternates are sequences of symbol references: literals 'c', names, or
applications Name(arg, ...). Any nonterminal can serve as a start symbol.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

from .core import Applied, SymbolId, TokenName
from .engine import (
    AltPlan,
    Nonterminal,
    Symbol,
    Token,
    TokenPattern,
    START_NAME,
    lazy_nonterminal,
    token_symbol,
)
from .forest import PrecedenceFilter

NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class GrammarError(Exception):
    """Syntax error in a grammar file, with position information."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class PatternSpec:
    """Token pattern: a literal char, a char set, or a builtin class."""

    kind: str  # "literal" | "set" | "class"
    value: str

    def classifier(self):
        if self.kind == "literal":
            lit = self.value
            return lambda t: t if t == lit else None
        if self.kind == "class":
            if self.value == "alpha":
                return lambda t: t if isinstance(t, str) and t.isalpha() else None
            if self.value == "digit":
                return lambda t: t if isinstance(t, str) and t.isdigit() else None
            return lambda t: t
        members = _set_members(self.value)
        return lambda t: t if t in members else None


def _set_members(items: str) -> frozenset:
    """Expand the body of a [...] pattern into its member characters."""
    out = set()
    i = 0
    while i < len(items):
        if i + 2 < len(items) and items[i + 1] == "-":
            lo, hi = items[i], items[i + 2]
            out.update(chr(c) for c in range(ord(lo), ord(hi) + 1))
            i += 3
        else:
            out.add(items[i])
            i += 1
    return frozenset(out)


@dataclass(frozen=True)
class Lit:
    """A literal character used directly in an alternate."""

    char: str

    @property
    def token_name(self) -> str:
        return f"'{self.char}'"


@dataclass(frozen=True)
class Ref:
    """A name reference, possibly applied to arguments."""

    name: str
    args: tuple = ()


SymRef = Union[Lit, Ref]


@dataclass(frozen=True)
class TokenDecl:
    name: str
    pattern: PatternSpec


@dataclass(frozen=True)
class PrecDecl:
    assoc: str  # "left" | "right" | "nonassoc"
    names: tuple[str, ...]  # literal token names, quotes included


@dataclass(frozen=True)
class NtDef:
    name: str
    params: tuple[str, ...]
    alternates: tuple[tuple, ...]  # each a tuple of SymRef


@dataclass(frozen=True)
class GrammarAst:
    tokens: tuple[TokenDecl, ...]
    precedences: tuple[PrecDecl, ...]
    definitions: tuple[NtDef, ...]

    def token_decl(self, name: str) -> Optional[TokenDecl]:
        for t in self.tokens:
            if t.name == name:
                return t
        return None

    def definition(self, name: str) -> Optional[NtDef]:
        for d in self.definitions:
            if d.name == name:
                return d
        return None


@dataclass(frozen=True)
class _Tok:
    kind: str  # "name" | "lit" | "set" | "directive" | punctuation itself
    text: str
    line: int
    col: int


def _lex(text: str) -> list[_Tok]:
    toks = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if text.startswith("--", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if c == "'":
            if i + 2 >= n or text[i + 2] != "'":
                raise GrammarError("unterminated character literal", line, col)
            toks.append(_Tok("lit", text[i + 1], start_line, start_col))
            i += 3
            col += 3
            continue
        if c == "[":
            j = text.find("]", i + 1)
            if j < 0:
                raise GrammarError("unterminated character set", line, col)
            toks.append(_Tok("set", text[i + 1:j], start_line, start_col))
            col += j + 1 - i
            i = j + 1
            continue
        if c == "%":
            m = NAME_RE.match(text, i + 1)
            if not m:
                raise GrammarError("bad directive", line, col)
            toks.append(_Tok("directive", m.group(), start_line, start_col))
            col += m.end() - i
            i = m.end()
            continue
        m = NAME_RE.match(text, i)
        if m:
            toks.append(_Tok("name", m.group(), start_line, start_col))
            col += m.end() - i
            i = m.end()
            continue
        if c in "():,|":
            toks.append(_Tok(c, c, start_line, start_col))
            i += 1
            col += 1
            continue
        raise GrammarError(f"unexpected character {c!r}", line, col)
    return toks


class _Parser:
    def __init__(self, toks: list[_Tok]):
        self.toks = toks
        self.pos = 0

    def peek(self, offset: int = 0) -> Optional[_Tok]:
        i = self.pos + offset
        return self.toks[i] if i < len(self.toks) else None

    def next(self) -> _Tok:
        tok = self.peek()
        if tok is None:
            last = self.toks[-1] if self.toks else _Tok("", "", 1, 1)
            raise GrammarError("unexpected end of grammar", last.line, last.col)
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Tok:
        tok = self.next()
        if tok.kind != kind:
            raise GrammarError(f"expected {kind!r}, found {tok.text!r}",
                               tok.line, tok.col)
        return tok

    def parse(self) -> GrammarAst:
        tokens: list[TokenDecl] = []
        precs: list[PrecDecl] = []
        defs: list[NtDef] = []
        while self.peek() is not None:
            tok = self.peek()
            if tok.kind == "directive":
                if tok.text == "token":
                    tokens.append(self.token_decl())
                elif tok.text in ("left", "right", "nonassoc"):
                    precs.append(self.prec_decl())
                else:
                    raise GrammarError(f"unknown directive %{tok.text}",
                                       tok.line, tok.col)
            elif tok.kind == "name":
                defs.append(self.nt_def())
            else:
                raise GrammarError(f"expected declaration, found {tok.text!r}",
                                   tok.line, tok.col)
        return GrammarAst(tuple(tokens), tuple(precs), tuple(defs))

    def token_decl(self) -> TokenDecl:
        self.next()
        name = self.expect("name").text
        tok = self.next()
        if tok.kind == "lit":
            spec = PatternSpec("literal", tok.text)
        elif tok.kind == "set":
            spec = PatternSpec("set", tok.text)
        elif tok.kind == "directive" and tok.text in ("alpha", "digit", "any"):
            spec = PatternSpec("class", tok.text)
        else:
            raise GrammarError(f"expected token pattern, found {tok.text!r}",
                               tok.line, tok.col)
        return TokenDecl(name, spec)

    def prec_decl(self) -> PrecDecl:
        assoc = self.next().text
        names = []
        while self.peek() is not None and self.peek().kind == "lit":
            names.append(f"'{self.next().text}'")
        if not names:
            tok = self.peek() or self.toks[-1]
            raise GrammarError(f"%{assoc} needs at least one literal",
                               tok.line, tok.col)
        return PrecDecl(assoc, tuple(names))

    def _at_definition_header(self) -> bool:
        """True iff the upcoming tokens form NAME [ ( ... ) ] ':'."""
        if self.peek() is None or self.peek().kind != "name":
            return False
        nxt = self.peek(1)
        if nxt is None:
            return False
        if nxt.kind == ":":
            return True
        if nxt.kind != "(":
            return False
        depth = 0
        i = 1
        while True:
            tok = self.peek(i)
            if tok is None:
                return False
            if tok.kind == "(":
                depth += 1
            elif tok.kind == ")":
                depth -= 1
                if depth == 0:
                    after = self.peek(i + 1)
                    return after is not None and after.kind == ":"
            i += 1

    def nt_def(self) -> NtDef:
        name = self.expect("name").text
        params: list[str] = []
        if self.peek() is not None and self.peek().kind == "(":
            self.next()
            params.append(self.expect("name").text)
            while self.peek() is not None and self.peek().kind == ",":
                self.next()
                params.append(self.expect("name").text)
            self.expect(")")
        self.expect(":")
        alternates = [self.alternate()]
        while self.peek() is not None and self.peek().kind == "|":
            self.next()
            alternates.append(self.alternate())
        return NtDef(name, tuple(params), tuple(alternates))

    def alternate(self) -> tuple:
        syms: list[SymRef] = []
        while True:
            tok = self.peek()
            if tok is None or tok.kind in ("|", "directive"):
                break
            if tok.kind == "lit":
                syms.append(Lit(self.next().text))
            elif tok.kind == "name":
                if self._at_definition_header():
                    break
                syms.append(self.symref())
            else:
                break
        return tuple(syms)

    def symref(self) -> SymRef:
        tok = self.next()
        if tok.kind == "lit":
            return Lit(tok.text)
        if tok.kind != "name":
            raise GrammarError(f"expected symbol, found {tok.text!r}",
                               tok.line, tok.col)
        args: list[SymRef] = []
        if self.peek() is not None and self.peek().kind == "(":
            self.next()
            args.append(self.symref())
            while self.peek() is not None and self.peek().kind == ",":
                self.next()
                args.append(self.symref())
            self.expect(")")
        return Ref(tok.text, tuple(args))


def parse_grammar(text: str) -> GrammarAst:
    return _Parser(_lex(text)).parse()


def parse_symref(text: str) -> SymRef:
    """Parse a start-symbol reference such as "CSV(alpha)"."""
    parser = _Parser(_lex(text))
    ref = parser.symref()
    if parser.peek() is not None:
        tok = parser.peek()
        raise GrammarError(f"trailing input after symbol reference: {tok.text!r}",
                           tok.line, tok.col)
    return ref


def render_grammar(ast: GrammarAst) -> str:
    """Canonical textual form; parse_grammar(render_grammar(ast)) == ast."""
    lines = []
    for t in ast.tokens:
        if t.pattern.kind == "literal":
            pat = f"'{t.pattern.value}'"
        elif t.pattern.kind == "set":
            pat = f"[{t.pattern.value}]"
        else:
            pat = f"%{t.pattern.value}"
        lines.append(f"%token {t.name} {pat}")
    for p in ast.precedences:
        lines.append(f"%{p.assoc} " + " ".join(n for n in p.names))
    for d in ast.definitions:
        header = d.name
        if d.params:
            header += "(" + ", ".join(d.params) + ")"
        alts = " | ".join(" ".join(_render_ref(s) for s in alt)
                          for alt in d.alternates)
        lines.append(f"{header}: {alts}")
    return "\n".join(lines) + "\n"


def _render_ref(ref: SymRef) -> str:
    if isinstance(ref, Lit):
        return f"'{ref.char}'"
    if ref.args:
        return ref.name + "(" + ", ".join(_render_ref(a) for a in ref.args) + ")"
    return ref.name


def validate(ast: GrammarAst) -> list[str]:
    """All static violations, one message each; empty means well formed."""
    diags: list[str] = []
    token_names = set()
    for t in ast.tokens:
        if t.name in token_names:
            diags.append(f"duplicate token declaration {t.name!r}")
        token_names.add(t.name)
    def_names = set()
    for d in ast.definitions:
        if d.name == START_NAME:
            diags.append(f"{START_NAME!r} is reserved")
        if d.name in def_names:
            diags.append(f"duplicate definition {d.name!r}")
        def_names.add(d.name)
        if d.name in token_names:
            diags.append(f"{d.name!r} declared both as token and nonterminal")
        seen_params = set()
        for p in d.params:
            if p in seen_params:
                diags.append(f"duplicate parameter {p!r} in {d.name!r}")
            seen_params.add(p)
    arity = {d.name: len(d.params) for d in ast.definitions}
    for d in ast.definitions:
        scope = set(d.params)
        for alt in d.alternates:
            for ref in alt:
                _check_ref(ref, d.name, scope, token_names, arity, diags)
    return diags


def _check_ref(ref: SymRef, where: str, scope: set, token_names: set,
               arity: dict, diags: list) -> None:
    if isinstance(ref, Lit):
        return
    if ref.name in scope:
        if ref.args:
            diags.append(f"parameter {ref.name!r} applied to arguments in {where!r}")
    elif ref.name in token_names:
        if ref.args:
            diags.append(f"token {ref.name!r} applied to arguments in {where!r}")
    elif ref.name in arity:
        if len(ref.args) != arity[ref.name]:
            diags.append(
                f"{ref.name!r} expects {arity[ref.name]} arguments, "
                f"got {len(ref.args)} in {where!r}")
    else:
        diags.append(f"undefined name {ref.name!r} in {where!r}")
    for a in ref.args:
        _check_ref(a, where, scope, token_names, arity, diags)


class Elaborator:
    """Turns a validated GrammarAst into an engine Symbol graph.

    Instantiation of parameterized definitions is memoized by Applied id and
    the alternates of each instance are built lazily, so self-instantiating
    definitions elaborate in bounded time.
    """

    def __init__(self, ast: GrammarAst, mode: str = "char"):
        if mode not in ("char", "words"):
            raise ValueError(f"unknown token mode {mode!r}")
        problems = validate(ast)
        if problems:
            raise ValueError("invalid grammar: " + "; ".join(problems))
        self.ast = ast
        self.mode = mode
        self.registry: dict[SymbolId, Symbol] = {}

    def literal_symbol(self, char: str) -> Token:
        sid = TokenName(f"'{char}'")
        sym = self.registry.get(sid)
        if sym is None:
            classifier = (lambda t, c=char: t if t == c else None)
            sym = token_symbol(TokenPattern(classifier, sid.name))
            self.registry[sid] = sym
        return sym

    def declared_token_symbol(self, decl: TokenDecl) -> Token:
        sid = TokenName(decl.name)
        sym = self.registry.get(sid)
        if sym is None:
            if self.mode == "words":
                classifier = (lambda t, n=decl.name: t if t == n else None)
            else:
                classifier = decl.pattern.classifier()
            sym = token_symbol(TokenPattern(classifier, decl.name))
            self.registry[sid] = sym
        return sym

    def resolve(self, ref: SymRef, env: Optional[dict] = None) -> Symbol:
        env = env or {}
        if isinstance(ref, Lit):
            return self.literal_symbol(ref.char)
        if ref.name in env:
            return env[ref.name]
        decl = self.ast.token_decl(ref.name)
        if decl is not None:
            return self.declared_token_symbol(decl)
        defn = self.ast.definition(ref.name)
        if defn is None:
            raise ValueError(f"unresolved symbol reference {ref.name!r}")
        args = tuple(self.resolve(a, env) for a in ref.args)
        return self.instantiate(defn, args)

    def instantiate(self, defn: NtDef, args: tuple) -> Nonterminal:
        sid = Applied(defn.name, tuple(a.id for a in args))
        sym = self.registry.get(sid)
        if sym is None:
            env = dict(zip(defn.params, args))
            sym = lazy_nonterminal(sid, lambda: [
                AltPlan(sid, tuple(self.resolve(s, env) for s in alt))
                for alt in defn.alternates])
            self.registry[sid] = sym
        return sym

    def start_symbol(self, start: Union[str, SymRef]) -> Symbol:
        ref = parse_symref(start) if isinstance(start, str) else start
        return self.resolve(ref)

    def precedence_filter(self) -> Optional[PrecedenceFilter]:
        if not self.ast.precedences:
            return None
        return PrecedenceFilter([(p.assoc, p.names) for p in self.ast.precedences])


def elaborate(ast: GrammarAst, start: Union[str, SymRef],
              mode: str = "char") -> Symbol:
    """Convenience wrapper: validate, build the registry, return the start Symbol."""
    return Elaborator(ast, mode).start_symbol(start)
