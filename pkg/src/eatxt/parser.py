"""Recursive-descent parser for the textual notation.

Grammar::

    model     := element* ;
    element   := KIND IDENT ( '{' (attribute | element)* '}' | ';' ) ;
    attribute := ATTRNAME value ';' ;
    value     := dotted-identifier | direction-literal ;

Attribute names are contextual: whether an identifier starts an attribute
depends on the enclosing element kind, so ``type`` or ``from`` remain usable
as shortNames. After an error the parser skips to the next ``;``, ``}`` or
element keyword and carries on, so one bad line does not hide its siblings.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .diagnostics import Diagnostic, Span, error, sort_diagnostics
from .lexer import Token, TokenKind, TriviaKind, lex
from .metamodel import DEFAULT_VERSION, REGISTRY, ElementKind, SchemaVersion
from .model import Element, Model


def levenshtein(a: str, b: str) -> int:
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        current = [i]
        for j, cb in enumerate(b, 1):
            current.append(min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + (ca != cb)))
        previous = current
    return previous[-1]


def keyword_suggest(word: str, candidates: Iterable[str]) -> Optional[str]:
    """Closest candidate within edit distance 2, if exactly one is closest."""
    scored = sorted((levenshtein(word, c), c) for c in set(candidates))
    if not scored or scored[0][0] > 2:
        return None
    if len(scored) > 1 and scored[1][0] == scored[0][0]:
        return None
    return scored[0][1]


@dataclass
class _Body:
    """Accumulates the contents of one element body while parsing."""

    attributes: dict[str, str] = field(default_factory=dict)
    attr_spans: dict[str, Span] = field(default_factory=dict)
    attr_comments: dict[str, tuple[tuple[str, ...], Optional[str]]] = field(default_factory=dict)
    children: list[Element] = field(default_factory=list)


class Parser:
    def __init__(self, source: str, version: SchemaVersion = DEFAULT_VERSION):
        self.source = source
        self.version = version
        self.tokens, self.diagnostics = lex(source)
        self.pos = 0
        # token index -> index of its leading trivia already claimed as a
        # trailing comment of the previous line
        self._claimed: dict[int, int] = {}

    # token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, ahead: int = 1) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind is not TokenKind.EOF:
            self.pos += 1
        return tok

    def at_eof(self) -> bool:
        return self.tok.kind is TokenKind.EOF

    def leading_comments(self, index: Optional[int] = None) -> tuple[str, ...]:
        index = self.pos if index is None else index
        claimed = self._claimed.get(index)
        return tuple(
            t.text.rstrip()
            for i, t in enumerate(self.tokens[index].leading)
            if t.kind is TriviaKind.COMMENT and i != claimed
        )

    def claim_trailing(self) -> Optional[str]:
        """Take a comment that sits on the same line as the token just consumed."""
        index = self.pos
        for i, t in enumerate(self.tokens[index].leading):
            if t.kind is TriviaKind.COMMENT:
                self._claimed[index] = i
                return t.text.rstrip()
            if t.kind is TriviaKind.WHITESPACE and ("\n" in t.text or "\r" in t.text):
                return None
        return None

    # errors and recovery

    def expected_here(self, kind: Optional[ElementKind]) -> list[str]:
        kinds = sorted(k.keyword for k in REGISTRY.child_kinds(self.version, kind))
        if kind is None:
            return kinds
        attrs = [s.name for s in REGISTRY.attribute_specs(self.version, kind)]
        return kinds + attrs + ["'}'"]

    def unexpected(self, expected: list[str]) -> None:
        tok = self.tok
        found = "end of input" if tok.kind is TokenKind.EOF else f"'{tok.text}'"
        self.diagnostics.append(error("E001", tok.span, f"unexpected {found}; expected one of: {', '.join(expected)}"))

    def synchronize(self) -> None:
        """Skip to the next ';' (consumed), '}' or element keyword."""
        while not self.at_eof():
            tok = self.tok
            if tok.is_punct(";"):
                self.advance()
                return
            if tok.is_punct("}") or tok.kind is TokenKind.KEYWORD:
                return
            self.advance()

    # grammar

    def parse_model(self) -> Model:
        roots: list[Element] = []
        while not self.at_eof():
            tok = self.tok
            if tok.kind is TokenKind.KEYWORD:
                el = self.parse_element(None)
                if el is not None:
                    roots.append(el)
            elif tok.kind is TokenKind.IDENTIFIER:
                self.unknown_keyword(None)
            else:
                self.unexpected(self.expected_here(None))
                self.advance()
                self.synchronize()
        trailing = self.leading_comments()
        return Model(tuple(roots), self.version, trailing)

    def unknown_keyword(self, container: Optional[ElementKind]) -> None:
        tok = self.tok
        expected = sorted(k.keyword for k in REGISTRY.child_kinds(self.version, container))
        suggestion = keyword_suggest(tok.text, expected)
        if suggestion is None and len(expected) == 1:
            suggestion = expected[0]
        hint = f"did you mean the element keyword '{suggestion}'?" if suggestion else None
        self.diagnostics.append(
            error(
                "E002",
                tok.span,
                f"unknown keyword '{tok.text}'; expected one of: {', '.join(expected)}",
                hint,
            )
        )
        # Parse the rest as an element of unknown kind so its body does not cascade.
        if self.peek().kind is TokenKind.IDENTIFIER and (self.peek(2).is_punct("{") or self.peek(2).is_punct(";")):
            self.parse_element(None, unknown=True)
        else:
            self.advance()
            self.synchronize()

    def parse_element(self, container: Optional[ElementKind], unknown: bool = False) -> Optional[Element]:
        start_index = self.pos
        head = self.advance()
        leading = self.leading_comments(start_index)
        kind = None if unknown else ElementKind.from_keyword(head.text)
        ok = True
        if self.tok.kind is TokenKind.IDENTIFIER:
            name = self.advance().text
        else:
            self.unexpected([f"a name after '{head.text}'"])
            ok = False
            name = ""
            if not (self.tok.is_punct("{") or self.tok.is_punct(";")):
                self.synchronize()
                return None
        header_comment = trailing = None
        closing: tuple[str, ...] = ()
        body = _Body()
        if self.tok.is_punct(";"):
            self.advance()
            trailing = self.claim_trailing()
        elif self.tok.is_punct("{"):
            self.advance()
            header_comment = self.claim_trailing()
            closed = self.parse_body(kind, body)
            if closed:
                closing = self.leading_comments()
                self.advance()
                trailing = self.claim_trailing()
        else:
            self.unexpected(["'{'", "';'"])
            self.synchronize()
            return None
        if unknown or not ok:
            return None
        end = self.tokens[self.pos - 1].span
        span = Span(head.span.line, head.span.column, end.end - head.span.offset, head.span.offset)
        return Element(
            kind,
            name,
            body.attributes,
            tuple(body.children),
            span,
            leading_comments=leading,
            header_comment=header_comment,
            trailing_comment=trailing,
            closing_comments=closing,
            attr_comments=body.attr_comments,
            attr_spans=body.attr_spans,
        )

    def parse_body(self, kind: Optional[ElementKind], body: _Body) -> bool:
        """Parse up to the closing brace; returns False if input ended first."""
        attr_names = REGISTRY.attribute_names(kind) if kind is not None else set()
        while True:
            tok = self.tok
            if tok.is_punct("}"):
                return True
            if tok.kind is TokenKind.EOF:
                self.unexpected(self.expected_here(kind) if kind else ["'}'"])
                return False
            if tok.kind is TokenKind.KEYWORD:
                child = self.parse_element(kind)
                if child is not None:
                    body.children.append(child)
            elif tok.kind is TokenKind.IDENTIFIER:
                if (
                    tok.text not in attr_names
                    and self.peek().kind is TokenKind.IDENTIFIER
                    and (self.peek(2).is_punct("{") or self.peek(2).is_punct(";"))
                    and (kind is None or REGISTRY.child_kinds(self.version, kind))
                ):
                    self.unknown_keyword(kind)
                else:
                    self.parse_attribute(kind, body)
            else:
                self.unexpected(self.expected_here(kind) if kind else ["'}'"])
                if tok.is_punct("{") or tok.is_punct("."):
                    self.advance()
                self.synchronize()

    def parse_attribute(self, kind: Optional[ElementKind], body: _Body) -> None:
        start_index = self.pos
        name_tok = self.advance()
        leading = self.leading_comments(start_index)
        if self.tok.kind is not TokenKind.IDENTIFIER:
            self.unexpected([f"a value for '{name_tok.text}'"])
            self.synchronize()
            return
        parts = [self.advance().text]
        while self.tok.is_punct("."):
            self.advance()
            if self.tok.kind is not TokenKind.IDENTIFIER:
                self.unexpected(["an identifier after '.'"])
                self.synchronize()
                return
            parts.append(self.advance().text)
        if not self.tok.is_punct(";"):
            self.unexpected(["';'"])
            self.synchronize()
            return
        end = self.advance().span
        trailing = self.claim_trailing()
        name = name_tok.text
        span = Span(name_tok.span.line, name_tok.span.column, end.end - name_tok.span.offset, name_tok.span.offset)
        if name in body.attributes:
            self.diagnostics.append(error("E004", span, f"attribute '{name}' is given more than once"))
            return
        body.attributes[name] = ".".join(parts)
        body.attr_spans[name] = span
        if leading or trailing:
            body.attr_comments[name] = (leading, trailing)


def parse(source: str, version: SchemaVersion = DEFAULT_VERSION) -> tuple[Model, list[Diagnostic]]:
    parser = Parser(source, version)
    model = parser.parse_model()
    return model, sort_diagnostics(parser.diagnostics)
