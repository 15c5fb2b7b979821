"""Editor services: deep outline, completion, fresh names and templates."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

from .diagnostics import Diagnostic, Span
from .formatter import emit_lines
from .lexer import TokenKind, lex
from .metamodel import DEFAULT_VERSION, DIRECTIONS, REGISTRY, ElementKind, SchemaVersion, ValueShape
from .model import Element, Model, QualifiedRef, ResolutionError, minimal_ref, resolve
from .parser import parse

# Kinds that live inside a function type; their outline paths are instance
# paths relative to that type, in the same ``part.port`` form connectors use.
INSTANCE_KINDS = frozenset(
    {ElementKind.FunctionFlowPort, ElementKind.DesignFunctionPrototype, ElementKind.FunctionConnector}
)
RECURSIVE_MARK = " …(recursive)"


@dataclass
class OutlineNode:
    label: str
    kind: ElementKind
    path: str
    synthetic: bool = False
    children: list["OutlineNode"] = field(default_factory=list)
    span: Optional[Span] = None

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "kind": self.kind.keyword,
            "path": self.path,
            "synthetic": self.synthetic,
            "children": [c.to_json() for c in self.children],
        }


@dataclass
class Outline:
    nodes: list[OutlineNode]
    diagnostics: list[Diagnostic] = field(default_factory=list)

    def walk(self):
        for n in self.nodes:
            yield from n.walk()

    def render(self) -> str:
        lines: list[str] = []

        def visit(node: OutlineNode, depth: int) -> None:
            marker = "~ " if node.synthetic else ""
            lines.append(f"{'  ' * depth}{marker}{node.label} [{node.kind.keyword}] {node.path}")
            for c in node.children:
                visit(c, depth + 1)

        for n in self.nodes:
            visit(n, 0)
        return "\n".join(lines) + "\n" if lines else ""


def outline(model: Model, max_depth: int = 10) -> Outline:
    """Outline tree that also expands prototypes through their types.

    A type may appear at most once on any root-to-node path; a prototype whose
    type is already on the path gets the recursion marker instead of children.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be positive")
    diagnostics: list[Diagnostic] = []
    reported: set[int] = set()

    def prototype_type(el: Element) -> Optional[Element]:
        ref = el.get("type")
        if ref is None:
            return None
        try:
            return resolve(model, QualifiedRef.parse(ref), el, el.attr_spans.get("type", el.span or Span()))
        except ResolutionError as exc:
            if id(el) not in reported:
                reported.add(id(el))
                diagnostics.extend(exc.diagnostics)
            return None

    def build(el: Element, depth: int, on_path: tuple[int, ...], prefix: str, synthetic: bool) -> Optional[OutlineNode]:
        if depth > max_depth:
            return None
        path = prefix + el.short_name
        node = OutlineNode(el.short_name, el.kind, path, synthetic, span=None if synthetic else el.span)
        if el.kind is ElementKind.EAPackage or el.kind in INSTANCE_KINDS:
            child_prefix = path + "."
        else:
            # a type opens its own instance namespace
            child_prefix = ""
            on_path = on_path + (id(el),)
        for c in el.children:
            child = build(c, depth + 1, on_path, child_prefix, synthetic)
            if child is not None:
                node.children.append(child)
        if el.kind is ElementKind.DesignFunctionPrototype:
            target = prototype_type(el)
            if target is not None:
                node.label = f"{el.short_name} : {target.short_name}"
                if id(target) in on_path:
                    node.label += RECURSIVE_MARK
                else:
                    inner = on_path + (id(target),)
                    for c in target.children:
                        child = build(c, depth + 1, inner, path + ".", True)
                        if child is not None:
                            node.children.append(child)
        return node

    nodes = [n for n in (build(r, 1, (), "", False) for r in model.roots) if n is not None]
    return Outline(nodes, diagnostics)


# fresh names and templates


def fresh_name(scope: Union[Element, Model, None], kind: ElementKind) -> str:
    """``<Kind><n>`` for the smallest n >= 1 not taken by a sibling in ``scope``."""
    if scope is None:
        taken: set[str] = set()
    elif isinstance(scope, Model):
        taken = {r.short_name for r in scope.roots}
    else:
        taken = {c.short_name for c in scope.children}
    n = 1
    while f"{kind.keyword}{n}" in taken:
        n += 1
    return f"{kind.keyword}{n}"


def _skeleton(kind: ElementKind, name: str, version: SchemaVersion) -> Element:
    attributes = {s.name: s.placeholder for s in REGISTRY.attribute_specs(version, kind) if s.required}
    return Element(kind, name, attributes)


def expand_template(kind: ElementKind, name: str, version: SchemaVersion = DEFAULT_VERSION) -> str:
    """Canonical skeleton for a new element, required attributes filled with placeholders."""
    return "\n".join(emit_lines(_skeleton(kind, name, version))) + "\n"


# completion


@dataclass(frozen=True)
class CompletionItem:
    label: str
    insert_text: str
    kind: str  # keyword | reference | template | fresh-name

    def to_json(self) -> dict:
        return {"label": self.label, "insert_text": self.insert_text, "kind": self.kind}


_PARTIAL = re.compile(r"[A-Za-z0-9_.]*\Z")


def _insertion(kind: ElementKind, name: str, version: SchemaVersion) -> str:
    skeleton = _skeleton(kind, name, version)
    if skeleton.attributes:
        return "\n".join(emit_lines(skeleton))
    if REGISTRY.child_kinds(version, kind):
        return f"{kind.keyword} {name} {{\n    \n}}"
    return f"{kind.keyword} {name};"


def _context(before: str):
    """Open element headers and the tokens of the unfinished statement."""
    tokens, _ = lex(before)
    stack: list[tuple[Optional[str], Optional[str]]] = []
    statement: list = []
    for tok in tokens:
        if tok.kind is TokenKind.EOF:
            break
        if tok.is_punct("{"):
            if len(statement) == 2 and statement[1].kind is TokenKind.IDENTIFIER:
                stack.append((statement[0].text, statement[1].text))
            else:
                stack.append((None, None))
            statement = []
        elif tok.is_punct("}"):
            if stack:
                stack.pop()
            statement = []
        elif tok.is_punct(";"):
            statement = []
        else:
            statement.append(tok)
    return stack, statement


def _locate(model: Model, stack) -> tuple[Optional[Element], bool]:
    """Element for the innermost open header; flag is False if the path broke."""
    holder: Optional[Element] = None
    for _, name in stack:
        if name is None:
            return holder, False
        nxt = model.index.child_named(holder, name)
        if nxt is None:
            return holder, False
        holder = nxt
    return holder, True


def complete(source: str, offset: int, version: SchemaVersion = DEFAULT_VERSION) -> list[CompletionItem]:
    if not 0 <= offset <= len(source):
        raise ValueError(f"offset {offset} outside 0..{len(source)}")
    before = source[:offset]
    partial = _PARTIAL.search(before).group(0)
    stack, statement = _context(before[: len(before) - len(partial)])
    container_kw = stack[-1][0] if stack else None
    if stack and container_kw is None:
        return []
    container = ElementKind.from_keyword(container_kw) if container_kw else None
    if container_kw and container is None:
        return []
    model, _ = parse(source, version)
    holder, intact = _locate(model, stack)
    scope: Union[Element, Model, None] = model if not stack else (holder if intact else None)
    items: list[CompletionItem] = []
    if not statement and "." not in partial:
        for kind in sorted(REGISTRY.child_kinds(version, container), key=lambda k: k.keyword):
            items.append(CompletionItem(kind.keyword, _insertion(kind, fresh_name(scope, kind), version), "template"))
        if container is not None:
            present = holder.attributes if isinstance(scope, Element) else {}
            for spec in REGISTRY.attribute_specs(version, container):
                if spec.name not in present:
                    items.append(CompletionItem(spec.name, f"{spec.name} {spec.placeholder};", "keyword"))
    elif len(statement) == 1 and statement[0].kind is TokenKind.KEYWORD and "." not in partial:
        name = fresh_name(scope, ElementKind.from_keyword(statement[0].text))
        items.append(CompletionItem(name, name, "fresh-name"))
    elif len(statement) == 1 and statement[0].kind is TokenKind.IDENTIFIER and container is not None:
        spec = REGISTRY.attribute_spec(version, container, statement[0].text)
        if spec is None:
            return []
        if spec.shape is ValueShape.ENUM:
            items.extend(CompletionItem(d, d, "keyword") for d in DIRECTIONS)
        elif not intact or holder is None:
            return []
        elif spec.shape is ValueShape.REFERENCE:
            for candidate in model.walk():
                if candidate.kind is not spec.target:
                    continue
                ref = minimal_ref(model, candidate, holder)
                if ref is not None:
                    items.append(CompletionItem(ref.dotted, ref.dotted, "reference"))
        else:
            items.extend(_port_items(model, holder))
    return sorted((i for i in items if i.label.startswith(partial)), key=lambda i: i.label)


def _port_items(model: Model, connector: Element) -> list[CompletionItem]:
    owner = model.index.parent(connector)
    if owner is None:
        return []
    items = []
    for c in owner.children:
        if c.kind is ElementKind.FunctionFlowPort:
            items.append(CompletionItem(c.short_name, c.short_name, "reference"))
        elif c.kind is ElementKind.DesignFunctionPrototype and c.get("type"):
            try:
                part_type = resolve(model, QualifiedRef.parse(c.get("type")), c)
            except ResolutionError:
                continue
            for port in part_type.children:
                if port.kind is ElementKind.FunctionFlowPort:
                    text = f"{c.short_name}.{port.short_name}"
                    items.append(CompletionItem(text, text, "reference"))
    return items
