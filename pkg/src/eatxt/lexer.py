"""Lossless lexer for the textual notation.

Whitespace, ``//`` comments and skipped garbage characters become trivia
attached to the token that follows them, so joining every token's trivia and
text gives back the source byte for byte.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from .diagnostics import Diagnostic, Span, error
from .metamodel import KEYWORDS

class TokenKind(enum.Enum):
    KEYWORD = "keyword"
    IDENTIFIER = "identifier"
    PUNCT = "punct"
    EOF = "eof"


class TriviaKind(enum.Enum):
    WHITESPACE = "whitespace"
    COMMENT = "comment"
    SKIPPED = "skipped"


@dataclass(frozen=True)
class Trivia:
    kind: TriviaKind
    text: str
    span: Span


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    span: Span
    leading: tuple[Trivia, ...] = ()

    def is_punct(self, char: str) -> bool:
        return self.kind is TokenKind.PUNCT and self.text == char

    def __repr__(self) -> str:
        return f"Token({self.kind.value}, {self.text!r}, {self.span.line}:{self.span.column})"


def detokenize(tokens: list[Token]) -> str:
    return "".join("".join(t.text for t in tok.leading) + tok.text for tok in tokens)


_SCANNER = re.compile(
    r"""
    (?P<ws>[ \t\r\n\f\v]+)
  | (?P<comment>//[^\r\n]*)
  | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[{};.])
  | (?P<other>.)
    """,
    re.VERBOSE | re.DOTALL,
)


def lex(source: str) -> tuple[list[Token], list[Diagnostic]]:
    tokens: list[Token] = []
    diagnostics: list[Diagnostic] = []
    trivia: list[Trivia] = []
    line, column = 1, 1
    for match in _SCANNER.finditer(source):
        group = match.lastgroup
        text = match.group()
        span = Span(line, column, len(text), match.start())
        if group == "ws":
            trivia.append(Trivia(TriviaKind.WHITESPACE, text, span))
            breaks = text.count("\n")
            if breaks:
                # CRLF counts once: only LF moves to a new line
                line += breaks
                column = len(text) - text.rfind("\n")
                continue
        elif group == "comment":
            trivia.append(Trivia(TriviaKind.COMMENT, text, span))
        elif group == "word":
            kind = TokenKind.KEYWORD if text in KEYWORDS else TokenKind.IDENTIFIER
            tokens.append(Token(kind, text, span, tuple(trivia)))
            trivia = []
        elif group == "punct":
            tokens.append(Token(TokenKind.PUNCT, text, span, tuple(trivia)))
            trivia = []
        else:
            trivia.append(Trivia(TriviaKind.SKIPPED, text, span))
            diagnostics.append(error("E001", span, f"unexpected character {text!r}"))
        column += len(text)
    tokens.append(Token(TokenKind.EOF, "", Span(line, column, 0, len(source)), tuple(trivia)))
    return tokens, diagnostics
