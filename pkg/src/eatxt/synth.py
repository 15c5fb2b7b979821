"""Pseudo-random valid models for round-trip corpora and scale runs.

Names are globally unique, so a reference can be computed straight from the
paths: drop the longest prefix the target shares with the referencing
element's own path. That keeps the generator independent of the resolver it
is used to test.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from .metamodel import ElementKind, SchemaVersion
from .model import Element, Model

K = ElementKind


@dataclass
class _Node:
    kind: ElementKind
    name: str
    path: tuple[str, ...]
    attrs: dict[str, object] = field(default_factory=dict)
    children: list["_Node"] = field(default_factory=list)


def _relative(target: tuple[str, ...], holder: tuple[str, ...]) -> str:
    shared = 0
    for a, b in zip(target[:-1], holder):
        if a != b:
            break
        shared += 1
    return ".".join(target[shared:])


class _Builder:
    def __init__(self, rng: random.Random, version: SchemaVersion):
        self.rng = rng
        self.version = version
        self.counter = 0
        self.count = 0
        self.roots: list[_Node] = []
        self.packages: list[_Node] = []
        self.design_types: list[_Node] = []
        self.hw_components: list[_Node] = []

    def add(self, parent: Optional[_Node], kind: ElementKind, prefix: str) -> _Node:
        self.counter += 1
        name = f"{prefix}{self.counter}"
        node = _Node(kind, name, (parent.path if parent else ()) + (name,))
        (parent.children if parent else self.roots).append(node)
        self.count += 1
        return node

    def package(self) -> _Node:
        parent = self.rng.choice(self.packages) if self.packages and self.rng.random() < 0.85 else None
        node = self.add(parent, K.EAPackage, "pkg")
        self.packages.append(node)
        return node

    def ports(self, owner: _Node, low: int, high: int) -> None:
        for _ in range(self.rng.randint(low, high)):
            port = self.add(owner, K.FunctionFlowPort, "port")
            port.attrs["direction"] = self.rng.choice(("in", "out", "inout"))

    def design_type(self) -> _Node:
        owner = self.add(self.rng.choice(self.packages), K.DesignFunctionType, "dft")
        self.ports(owner, 1, 3)
        parts = []
        for _ in range(self.rng.randint(0, 3) if self.design_types else 0):
            part = self.add(owner, K.DesignFunctionPrototype, "part")
            part.attrs["type"] = self.rng.choice(self.design_types + [owner])
            parts.append(part)
        typed = [p for p in parts if p.attrs["type"] is not owner]
        for _ in range(self.rng.randint(0, 2)):
            end = self._connector_ends(owner, typed)
            if end is None:
                break
            conn = self.add(owner, K.FunctionConnector, "conn")
            conn.attrs["from"], conn.attrs["to"] = end
        self.rng.shuffle(owner.children)
        self.design_types.append(owner)
        return owner

    def _connector_ends(self, owner: _Node, parts: list[_Node]):
        sources, sinks = [], []
        for p in parts:
            for port in p.attrs["type"].children:
                if port.kind is K.FunctionFlowPort:
                    text = f"{p.name}.{port.name}"
                    if port.attrs["direction"] in ("out", "inout"):
                        sources.append(text)
                    if port.attrs["direction"] in ("in", "inout"):
                        sinks.append(text)
        # the owner's own ports act from the inside: an in port is a source
        for port in owner.children:
            if port.kind is K.FunctionFlowPort:
                if port.attrs["direction"] in ("in", "inout"):
                    sources.append(port.name)
                if port.attrs["direction"] in ("out", "inout"):
                    sinks.append(port.name)
        if not sources or not sinks:
            return None
        return self.rng.choice(sources), self.rng.choice(sinks)

    def other_type(self, kind: ElementKind) -> _Node:
        prefix = {K.AnalysisFunctionType: "aft", K.HardwareComponentType: "hct", K.HardwareFunctionType: "hft"}[kind]
        owner = self.add(self.rng.choice(self.packages), kind, prefix)
        if kind is K.HardwareComponentType:
            self.hw_components.append(owner)
        else:
            self.ports(owner, 0, 2)
        if kind is K.HardwareFunctionType and self.version.id == "2.1.12" and self.hw_components:
            if self.rng.random() < 0.7:
                owner.attrs["hardwareComponent"] = self.rng.choice(self.hw_components)
        return owner

    def freeze(self, node: _Node) -> Element:
        attrs = {}
        for name, value in node.attrs.items():
            attrs[name] = _relative(value.path, node.path) if isinstance(value, _Node) else value
        return Element(node.kind, node.name, attrs, tuple(self.freeze(c) for c in node.children))


def generate_model(rng: random.Random, size: int, version: SchemaVersion) -> Model:
    """A valid model of exactly ``size`` elements using every kind."""
    if size < 16:
        raise ValueError("size must be at least 16 to fit every element kind")
    b = _Builder(rng, version)
    b.package()
    for _ in range(max(0, size // 25)):
        b.package()
    b.other_type(K.HardwareComponentType)
    b.other_type(K.HardwareFunctionType)
    b.other_type(K.AnalysisFunctionType)
    b.design_type()
    while not any(c.kind is K.FunctionConnector for t in b.design_types for c in t.children):
        b.design_type()
    kinds = [K.DesignFunctionType] * 6 + [K.AnalysisFunctionType, K.HardwareComponentType, K.HardwareFunctionType]
    # a design type adds at most 1 + 3 + 3 + 2 elements
    while b.count + 9 <= size:
        kind = rng.choice(kinds)
        if kind is K.DesignFunctionType:
            b.design_type()
        else:
            b.other_type(kind)
    while b.count < size:
        b.other_type(K.HardwareComponentType)
    for p in b.packages:
        rng.shuffle(p.children)
    return Model(tuple(b.freeze(r) for r in b.roots), version)
