"""In-memory models, qualified-name scoping and semantic validation."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Mapping, Optional

from .diagnostics import NO_SPAN, Diagnostic, DiagnosticError, Span, error, sort_diagnostics, warning
from .metamodel import DIRECTIONS, REGISTRY, ElementKind, SchemaVersion, ValueShape

IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True, eq=False)
class Element:
    """A named model node.

    Comment fields only matter to the formatter; they take no part in
    ``model_equal``. ``attr_comments`` maps an attribute name to its
    ``(leading, trailing)`` comments.
    """

    kind: ElementKind
    short_name: str
    attributes: Mapping[str, str] = field(default_factory=dict)
    children: tuple["Element", ...] = ()
    span: Optional[Span] = None
    leading_comments: tuple[str, ...] = ()
    header_comment: Optional[str] = None
    trailing_comment: Optional[str] = None
    closing_comments: tuple[str, ...] = ()
    attr_comments: Mapping[str, tuple[tuple[str, ...], Optional[str]]] = field(default_factory=dict)
    attr_spans: Mapping[str, Span] = field(default_factory=dict)

    def get(self, name: str) -> Optional[str]:
        return self.attributes.get(name)

    def child(self, short_name: str) -> Optional["Element"]:
        for c in self.children:
            if c.short_name == short_name:
                return c
        return None

    def walk(self) -> Iterator["Element"]:
        yield self
        for c in self.children:
            yield from c.walk()

    @property
    def is_empty(self) -> bool:
        return not self.attributes and not self.children

    def __repr__(self) -> str:
        return f"Element({self.kind.keyword} {self.short_name}, {len(self.children)} children)"


@dataclass(frozen=True, eq=False)
class Model:
    roots: tuple[Element, ...] = ()
    version: SchemaVersion = field(default_factory=lambda: SchemaVersion("2.2"))
    trailing_comments: tuple[str, ...] = ()

    def walk(self) -> Iterator[Element]:
        for r in self.roots:
            yield from r.walk()

    def element_count(self) -> int:
        return sum(1 for _ in self.walk())

    @cached_property
    def index(self) -> "ModelIndex":
        return ModelIndex(self)

    def find(self, path: str) -> Element:
        """Look up an element by absolute path such as ``/P/FDA``."""
        return resolve(self, QualifiedRef.parse(path), None)


Scope = Optional[Element]


def _name_map(elements) -> dict[str, Element]:
    table: dict[str, Element] = {}
    for el in elements:
        table.setdefault(el.short_name, el)
    return table


class ModelIndex:
    """Parent links for a model, keyed by element identity."""

    def __init__(self, model: Model):
        self.model = model
        self._parent: dict[int, Optional[Element]] = {}
        for root in model.roots:
            self._parent[id(root)] = None
            stack = [root]
            while stack:
                el = stack.pop()
                for c in el.children:
                    self._parent[id(c)] = el
                    stack.append(c)

        self._by_name: dict[int, dict[str, Element]] = {}
        self._roots_by_name = _name_map(model.roots)

    def child_named(self, holder: Optional[Element], name: str) -> Optional[Element]:
        """First child of ``holder`` (or root, for ``None``) called ``name``."""
        if holder is None:
            return self._roots_by_name.get(name)
        table = self._by_name.get(id(holder))
        if table is None:
            table = self._by_name[id(holder)] = _name_map(holder.children)
        return table.get(name)

    def __contains__(self, element: Element) -> bool:
        return id(element) in self._parent

    def parent(self, element: Element) -> Optional[Element]:
        return self._parent[id(element)]

    def ancestors(self, element: Element) -> Iterator[Element]:
        """``element`` itself, then each enclosing element outward."""
        current: Optional[Element] = element
        while current is not None:
            yield current
            current = self._parent[id(current)]

    def path(self, element: Element) -> tuple[str, ...]:
        if element not in self:
            raise KeyError(f"{element!r} is not part of this model")
        return tuple(reversed([e.short_name for e in self.ancestors(element)]))


@dataclass(frozen=True)
class QualifiedRef:
    """A reference by shortName path.

    Textual form is dot-separated and may be relative; the EAXML form is an
    absolute slash-separated path starting at a root package.
    """

    segments: tuple[str, ...]
    absolute: bool = False

    def __post_init__(self):
        if not self.segments:
            raise ValueError("a qualified reference needs at least one segment")

    @classmethod
    def parse(cls, text: str) -> "QualifiedRef":
        if text.startswith("/"):
            return cls(tuple(text[1:].split("/")), absolute=True)
        return cls(tuple(text.split(".")))

    @property
    def dotted(self) -> str:
        return ".".join(self.segments)

    @property
    def path(self) -> str:
        return "/" + "/".join(self.segments)

    def __str__(self) -> str:
        return self.path if self.absolute else self.dotted


class ResolutionError(DiagnosticError):
    pass


def qualified_name(model: Model, element: Element) -> QualifiedRef:
    return QualifiedRef(model.index.path(element), absolute=True)


def resolve(model: Model, ref: QualifiedRef, scope: Scope, span: Span = NO_SPAN) -> Element:
    """Resolve ``ref`` as seen from ``scope``.

    The first segment is searched in the children of ``scope``, then of each
    enclosing element, then among the roots; the innermost hit wins. The
    remaining segments navigate downward by shortName. Absolute references
    and ``scope=None`` start at the roots.
    """
    index = model.index
    first, rest = ref.segments[0], ref.segments[1:]
    found: Optional[Element] = None
    if not ref.absolute and scope is not None:
        for holder in index.ancestors(scope):
            found = index.child_named(holder, first)
            if found is not None:
                break
    if found is None:
        found = index.child_named(None, first)
    if found is None:
        raise ResolutionError([_unresolved(ref, first, span)])
    for segment in rest:
        nxt = index.child_named(found, segment)
        if nxt is None:
            raise ResolutionError([_unresolved(ref, segment, span)])
        found = nxt
    return found


def _unresolved(ref: QualifiedRef, segment: str, span: Span) -> Diagnostic:
    if len(ref.segments) == 1:
        return error("E003", span, f"cannot resolve '{segment}'")
    return error("E003", span, f"cannot resolve '{segment}' in '{ref}'")


def minimal_ref(model: Model, target: Element, scope: Scope) -> Optional[QualifiedRef]:
    """Shortest dotted suffix of ``target``'s path that resolves back to it."""
    path = model.index.path(target)
    for start in range(len(path) - 1, -1, -1):
        candidate = QualifiedRef(path[start:])
        try:
            if resolve(model, candidate, scope) is target:
                return candidate
        except ResolutionError:
            continue
    return None


def resolve_port(model: Model, connector: Element, text: str, span: Span = NO_SPAN) -> Element:
    """Resolve a connector endpoint: ``proto.port`` or a port of the owning type."""
    index = model.index
    owner = index.parent(connector)
    segments = text.split(".")
    if owner is None:
        raise ResolutionError([error("E003", span, f"cannot resolve port '{text}' outside a function type")])
    if len(segments) == 1:
        port = index.child_named(owner, segments[0])
        if port is None or port.kind is not ElementKind.FunctionFlowPort:
            raise ResolutionError([error("E003", span, f"cannot resolve port '{text}'")])
        return port
    if len(segments) != 2:
        raise ResolutionError([error("E003", span, f"cannot resolve port '{text}': expected 'part.port'")])
    part = index.child_named(owner, segments[0])
    if part is None or part.kind is not ElementKind.DesignFunctionPrototype:
        raise ResolutionError([error("E003", span, f"cannot resolve '{segments[0]}' in '{text}'")])
    type_name = part.get("type")
    if type_name is None:
        raise ResolutionError([error("E003", span, f"part '{segments[0]}' has no type")])
    part_type = resolve(model, QualifiedRef.parse(type_name), part, span)
    port = index.child_named(part_type, segments[1])
    if port is None or port.kind is not ElementKind.FunctionFlowPort:
        raise ResolutionError([error("E003", span, f"cannot resolve '{segments[1]}' in '{text}'")])
    return port


def validate(model: Model) -> list[Diagnostic]:
    """All semantic findings for ``model`` against its schema version, ordered by span."""
    version = model.version
    found: list[Diagnostic] = []
    for root in model.roots:
        if root.kind is not ElementKind.EAPackage:
            found.append(
                error("E006", root.span or NO_SPAN, f"{root.kind.keyword} is not allowed at top level; expected EAPackage")
            )
    _check_siblings(model.roots, None, model, found)
    for el in model.walk():
        span = el.span or NO_SPAN
        legal = REGISTRY.child_kinds(version, el.kind)
        for c in el.children:
            if c.kind not in legal:
                found.append(
                    error(
                        "E006",
                        c.span or NO_SPAN,
                        f"{c.kind.keyword} is not allowed inside {el.kind.keyword} in schema {version}",
                    )
                )
        _check_siblings(el.children, el, model, found)
        _check_attributes(model, el, span, found)
    return sort_diagnostics(found)


def _check_siblings(children, parent: Scope, model: Model, found: list[Diagnostic]) -> None:
    seen: set[str] = set()
    where = qualified_name(model, parent).path if parent is not None else "the top level"
    for c in children:
        if c.short_name in seen:
            found.append(error("E004", c.span or NO_SPAN, f"duplicate name '{c.short_name}' in {where}"))
        seen.add(c.short_name)


def _check_attributes(model: Model, el: Element, element_span: Span, found: list[Diagnostic]) -> None:
    version = model.version
    for name, value in el.attributes.items():
        span = el.attr_spans.get(name, element_span)
        spec = REGISTRY.attribute_spec(version, el.kind, name)
        if spec is None:
            if REGISTRY.any_version_attribute(el.kind, name) is not None:
                message = (
                    f"attribute '{name}' is not necessary for the current version {version} "
                    f"({el.kind.keyword} has no such attribute in schema {version})"
                )
            else:
                message = f"unknown attribute '{name}' on {el.kind.keyword} in schema {version}"
            found.append(error("E006", span, message))
            continue
        if spec.shape is ValueShape.ENUM:
            if value not in DIRECTIONS:
                found.append(
                    error("E006", span, f"illegal value '{value}' for '{name}'; expected one of: {', '.join(DIRECTIONS)}")
                )
        elif spec.shape is ValueShape.REFERENCE:
            try:
                target = resolve(model, QualifiedRef.parse(value), el, span)
            except ResolutionError as exc:
                found.extend(exc.diagnostics)
                continue
            if spec.target is not None and target.kind is not spec.target:
                found.append(
                    error(
                        "E003",
                        span,
                        f"'{value}' resolves to {target.kind.keyword} {qualified_name(model, target)}, "
                        f"expected a {spec.target.keyword}",
                    )
                )
    for spec in REGISTRY.attribute_specs(version, el.kind):
        if spec.required and spec.name not in el.attributes:
            found.append(
                error("E006", element_span, f"missing required attribute '{spec.name}' on {el.kind.keyword} '{el.short_name}'")
            )
    if el.kind is ElementKind.FunctionConnector:
        _check_connector(model, el, element_span, found)


def _check_connector(model: Model, el: Element, element_span: Span, found: list[Diagnostic]) -> None:
    # A port of the owning type is seen from the inside, so its direction flips.
    for end, wanted in (("from", ("out", "inout")), ("to", ("in", "inout"))):
        text = el.get(end)
        if text is None:
            continue
        span = el.attr_spans.get(end, element_span)
        try:
            port = resolve_port(model, el, text, span)
        except ResolutionError as exc:
            found.extend(exc.diagnostics)
            continue
        direction = port.get("direction")
        if "." not in text:
            direction = {"in": "out", "out": "in"}.get(direction, direction)
        if direction is not None and direction not in wanted:
            found.append(
                warning(
                    "W102",
                    span,
                    f"connector '{el.short_name}': '{end}' endpoint '{text}' has direction {port.get('direction')}",
                    hint=f"a '{end}' endpoint should be {' or '.join(wanted)}",
                )
            )


def _element_equal(a: Element, b: Element) -> bool:
    if a.kind is not b.kind or a.short_name != b.short_name:
        return False
    if dict(a.attributes) != dict(b.attributes):
        return False
    if len(a.children) != len(b.children):
        return False
    return all(_element_equal(x, y) for x, y in zip(a.children, b.children))


def model_equal(a: Model, b: Model) -> bool:
    """Deep structural equality.

    Spans, comments, attribute order and the version tag are ignored; compare
    ``a.version`` separately where it matters.
    """
    if len(a.roots) != len(b.roots):
        return False
    return all(_element_equal(x, y) for x, y in zip(a.roots, b.roots))
