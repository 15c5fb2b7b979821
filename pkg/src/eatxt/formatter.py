"""Canonical pretty-printer for the textual notation.

Style: 4-space indentation, ``{`` on the header line, one attribute or child
per line, attributes before children, ``Kind Name;`` for empty elements and
exactly one trailing newline. Comments travel with the element or attribute
they precede; same-line trailing comments stay on their line.
"""
from __future__ import annotations

from typing import Optional

from .diagnostics import Diagnostic, has_errors
from .metamodel import DEFAULT_VERSION, SchemaVersion
from .model import Element, Model
from .parser import parse

INDENT = "    "


def _with_comment(line: str, *comments: Optional[str]) -> str:
    tail = " ".join(c for c in comments if c)
    return f"{line} {tail}" if tail else line


def _emit_element(el: Element, depth: int, out: list[str]) -> None:
    pad = INDENT * depth
    inner = pad + INDENT
    out.extend(pad + c for c in el.leading_comments)
    header = f"{pad}{el.kind.keyword} {el.short_name}"
    if el.is_empty and not el.closing_comments:
        out.append(_with_comment(header + ";", el.header_comment, el.trailing_comment))
        return
    out.append(_with_comment(header + " {", el.header_comment))
    for name, value in el.attributes.items():
        leading, trailing = el.attr_comments.get(name, ((), None))
        out.extend(inner + c for c in leading)
        out.append(_with_comment(f"{inner}{name} {value};", trailing))
    for child in el.children:
        _emit_element(child, depth + 1, out)
    out.extend(inner + c for c in el.closing_comments)
    out.append(_with_comment(pad + "}", el.trailing_comment))


def emit_lines(element: Element, depth: int = 0) -> list[str]:
    out: list[str] = []
    _emit_element(element, depth, out)
    return out


def emit(model: Model) -> str:
    out: list[str] = []
    for root in model.roots:
        _emit_element(root, 0, out)
    out.extend(model.trailing_comments)
    return "\n".join(out) + "\n" if out else ""


def format(source: str, version: SchemaVersion = DEFAULT_VERSION) -> tuple[str, list[Diagnostic]]:
    """Reformat ``source``; text that does not parse cleanly is returned untouched."""
    model, diagnostics = parse(source, version)
    if has_errors(diagnostics):
        return source, diagnostics
    return emit(model), diagnostics
