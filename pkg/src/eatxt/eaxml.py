"""Serializer and streaming deserializer for ``.eaxml`` documents.

Document layout::

    <?xml version="1.0" encoding="UTF-8"?>
    <EAXML xmlns="http://east-adl.info/2.2">
      <TOP-LEVEL-PACKAGES>
        <EA-PACKAGE>
          <SHORT-NAME>P</SHORT-NAME>
          <ELEMENTS>
            <DESIGN-FUNCTION-TYPE>
              ...

Children sit under container tags (SUB-PACKAGES, ELEMENTS, PORTS, PARTS,
CONNECTORS). Consecutive children sharing a container share one container
block, so child order survives the round trip even when kinds interleave.
Type references are written as absolute paths and read back in the shortest
form that still resolves from the referencing element.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional
from xml.parsers import expat
from xml.sax.saxutils import escape

from .diagnostics import Diagnostic, DiagnosticError, Span, error, has_errors, sort_diagnostics
from .metamodel import (
    CONTAINER_TAGS,
    NAMESPACE_PREFIX,
    REGISTRY,
    ElementKind,
    SchemaVersion,
    ValueShape,
    supported_versions,
)
from .model import IDENTIFIER, Element, Model, QualifiedRef, ResolutionError, minimal_ref, qualified_name, resolve, validate

XML_DECLARATION = '<?xml version="1.0" encoding="UTF-8"?>'
ROOT_TAG = "EAXML"
TOP_LEVEL_TAG = "TOP-LEVEL-PACKAGES"
SHORT_NAME_TAG = "SHORT-NAME"
_CONTAINERS = frozenset(CONTAINER_TAGS.values()) | {TOP_LEVEL_TAG}
_ENTITIES = {'"': "&quot;", "'": "&apos;"}
_XMLNS = re.compile(r'xmlns="([^"]*)"')


class SchemaVersionError(DiagnosticError):
    pass


def _e005(message: str, line: int = 2, column: int = 1, length: int = 0, hint: Optional[str] = None) -> Diagnostic:
    return error("E005", Span(line, column, length), message, hint)


def detect_version(xml: str) -> SchemaVersion:
    """Schema version named by the root ``xmlns``; only the first two lines are read."""
    head = xml.split("\n", 2)[:2]
    for line_no, line in enumerate(head, 1):
        match = _XMLNS.search(line)
        if match is None:
            continue
        uri = match.group(1)
        column = match.start(1) + 1
        if not uri.startswith(NAMESPACE_PREFIX):
            raise SchemaVersionError(
                [_e005(f"unrecognized schema namespace '{uri}'; expected {NAMESPACE_PREFIX}<version>", line_no, column, len(uri))]
            )
        found = uri[len(NAMESPACE_PREFIX) :]
        try:
            return SchemaVersion(found)
        except ValueError:
            raise SchemaVersionError(
                [
                    _e005(
                        f"unsupported schema version '{found}'; supported: {', '.join(supported_versions())}",
                        line_no,
                        column,
                        len(uri),
                    )
                ]
            ) from None
    raise SchemaVersionError([_e005("missing xmlns schema declaration on the EAXML root element (line 2)")])


# writing


def to_eaxml(model: Model) -> str:
    """Serialize a valid model; refuses with the validation errors otherwise."""
    problems = [d for d in validate(model) if d.is_error]
    if problems:
        raise DiagnosticError(problems)
    out = [XML_DECLARATION, f'<{ROOT_TAG} xmlns="{model.version.namespace}">']
    if model.roots:
        out.append(f"  <{TOP_LEVEL_TAG}>")
        for root in model.roots:
            _write_element(model, root, 2, out)
        out.append(f"  </{TOP_LEVEL_TAG}>")
    out.append(f"</{ROOT_TAG}>")
    return "\n".join(out) + "\n"


def _attribute_text(model: Model, el: Element, shape: ValueShape, value: str) -> str:
    if shape is ValueShape.ENUM:
        return value.upper()
    if shape is ValueShape.REFERENCE:
        return qualified_name(model, resolve(model, QualifiedRef.parse(value), el)).path
    return value


def _write_element(model: Model, el: Element, depth: int, out: list[str]) -> None:
    pad = "  " * depth
    tag = el.kind.xml_tag
    out.append(f"{pad}<{tag}>")
    out.append(f"{pad}  <{SHORT_NAME_TAG}>{escape(el.short_name, _ENTITIES)}</{SHORT_NAME_TAG}>")
    for spec in REGISTRY.attribute_specs(model.version, el.kind):
        value = el.get(spec.name)
        if value is not None:
            text = escape(_attribute_text(model, el, spec.shape, value), _ENTITIES)
            out.append(f"{pad}  <{spec.xml_tag}>{text}</{spec.xml_tag}>")
    open_container = None
    for child in el.children:
        container = CONTAINER_TAGS[child.kind]
        if container != open_container:
            if open_container is not None:
                out.append(f"{pad}  </{open_container}>")
            out.append(f"{pad}  <{container}>")
            open_container = container
        _write_element(model, child, depth + 2, out)
    if open_container is not None:
        out.append(f"{pad}  </{open_container}>")
    out.append(f"{pad}</{tag}>")


# reading


@dataclass
class _Frame:
    tag: str
    span: Span
    kind: Optional[ElementKind] = None
    name: Optional[str] = None
    attributes: dict[str, str] = field(default_factory=dict)
    attr_spans: dict[str, Span] = field(default_factory=dict)
    children: list[Element] = field(default_factory=list)
    text: list[str] = field(default_factory=list)


class _Reader:
    """Single pass over the expat event stream with an open-tag stack."""

    def __init__(self, version: SchemaVersion):
        self.version = version
        self.stack: list[_Frame] = []
        self.roots: list[Element] = []
        self.diagnostics: list[Diagnostic] = []
        self.skip_depth = 0
        self.parser = expat.ParserCreate()
        self.parser.StartElementHandler = self.start
        self.parser.EndElementHandler = self.end
        self.parser.CharacterDataHandler = self.chars
        self.parser.buffer_text = True

    def here(self, tag: str) -> Span:
        return Span(self.parser.CurrentLineNumber, self.parser.CurrentColumnNumber + 1, len(tag) + 2, self.parser.CurrentByteIndex)

    def owner(self) -> Optional[_Frame]:
        for frame in reversed(self.stack):
            if frame.kind is not None:
                return frame
        return None

    def start(self, tag: str, attrs) -> None:
        span = self.here(tag)
        if self.skip_depth:
            self.skip_depth += 1
            return
        parent = self.stack[-1] if self.stack else None
        if parent is None:
            if tag != ROOT_TAG:
                self.diagnostics.append(error("E006", span, f"unknown root tag '{tag}'; expected {ROOT_TAG}"))
                self.skip_depth = 1
                return
            self.stack.append(_Frame(tag, span))
            return
        kind = ElementKind.from_xml_tag(tag)
        if kind is not None:
            expected_container = TOP_LEVEL_TAG if parent.tag == TOP_LEVEL_TAG else CONTAINER_TAGS[kind]
            if parent.tag != expected_container or (parent.tag == TOP_LEVEL_TAG and kind is not ElementKind.EAPackage):
                self.diagnostics.append(error("E006", span, f"<{tag}> is not allowed inside <{parent.tag}>"))
                self.skip_depth = 1
                return
            self.stack.append(_Frame(tag, span, kind=kind))
            return
        if tag in _CONTAINERS or tag == SHORT_NAME_TAG or REGISTRY.attribute_by_xml_tag(tag) is not None:
            if (tag == TOP_LEVEL_TAG) != (parent.tag == ROOT_TAG) or (tag != TOP_LEVEL_TAG and parent.kind is None):
                self.diagnostics.append(error("E006", span, f"<{tag}> is not allowed inside <{parent.tag}>"))
                self.skip_depth = 1
                return
            self.stack.append(_Frame(tag, span))
            return
        self.diagnostics.append(error("E006", span, f"unknown tag '{tag}'"))
        self.skip_depth = 1

    def chars(self, data: str) -> None:
        if not self.skip_depth and self.stack:
            self.stack[-1].text.append(data)

    def end(self, tag: str) -> None:
        if self.skip_depth:
            self.skip_depth -= 1
            return
        frame = self.stack.pop()
        if frame.kind is not None:
            self.finish_element(frame)
            return
        if not self.stack:
            return
        owner = self.stack[-1]
        text = "".join(frame.text).strip()
        if tag == SHORT_NAME_TAG:
            if not IDENTIFIER.match(text):
                self.diagnostics.append(error("E001", frame.span, f"invalid shortName '{text}'"))
            owner.name = text
            return
        spec = REGISTRY.attribute_by_xml_tag(tag)
        if spec is not None:
            if spec.shape is ValueShape.ENUM:
                text = text.lower()
            owner.attributes[spec.name] = text
            owner.attr_spans[spec.name] = frame.span

    def finish_element(self, frame: _Frame) -> None:
        if frame.name is None:
            self.diagnostics.append(error("E001", frame.span, f"<{frame.tag}> has no <{SHORT_NAME_TAG}>"))
            return
        el = Element(
            frame.kind, frame.name, frame.attributes, tuple(frame.children), frame.span, attr_spans=frame.attr_spans
        )
        parent = self.owner()
        if parent is None:
            self.roots.append(el)
        else:
            parent.children.append(el)


def from_eaxml(
    xml: str, expected: Optional[SchemaVersion] = None
) -> tuple[Optional[Model], Optional[SchemaVersion], list[Diagnostic]]:
    """Load a document, tagging the model with the version the file declares.

    A version differing from ``expected`` is reported as E005 but the model is
    still returned. The model is ``None`` only when the document cannot be
    read at all (unknown version or malformed XML).
    """
    try:
        version = detect_version(xml)
    except SchemaVersionError as exc:
        return None, None, exc.diagnostics
    diagnostics: list[Diagnostic] = []
    if expected is not None and expected != version:
        diagnostics.append(
            _e005(
                f"file declares schema {version} but tool expects {expected}; run migrate",
                hint=f"convert with 'eatxt migrate --to {expected}' or import with --auto-migrate",
            )
        )
    reader = _Reader(version)
    try:
        reader.parser.Parse(xml, True)
    except expat.ExpatError as exc:
        diagnostics.append(error("E001", Span(exc.lineno, exc.offset + 1, 1), f"malformed XML: {expat.errors.messages[exc.code]}"))
        return None, version, sort_diagnostics(diagnostics + reader.diagnostics)
    diagnostics.extend(reader.diagnostics)
    absolute = Model(tuple(reader.roots), version)
    model, ref_problems = _relativize(absolute)
    diagnostics.extend(ref_problems)
    if not has_errors(diagnostics):
        diagnostics.extend(validate(model))
    return model, version, sort_diagnostics(diagnostics)


def _relativize(model: Model) -> tuple[Model, list[Diagnostic]]:
    """Rewrite absolute type references into minimal textual references."""
    problems: list[Diagnostic] = []

    def rebuild(el: Element) -> Element:
        rewritten = {}
        for name, value in el.attributes.items():
            spec = REGISTRY.any_version_attribute(el.kind, name)
            if spec is not None and spec.shape is ValueShape.REFERENCE and value.startswith("/"):
                ref = QualifiedRef.parse(value)
                try:
                    target = resolve(model, ref, None, el.attr_spans.get(name, el.span))
                    short = minimal_ref(model, target, el)
                except ResolutionError as exc:
                    problems.extend(exc.diagnostics)
                    short = None
                value = short.dotted if short is not None else ref.dotted
            rewritten[name] = value
        children = tuple(rebuild(c) for c in el.children)
        return Element(el.kind, el.short_name, rewritten, children, el.span, attr_spans=el.attr_spans)

    roots = tuple(rebuild(r) for r in model.roots)
    return Model(roots, model.version), problems
