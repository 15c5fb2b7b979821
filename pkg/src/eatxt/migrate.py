"""Rule-based migration of models between schema versions."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Optional

from .diagnostics import NO_SPAN, Diagnostic, DiagnosticError, warning
from .eaxml import from_eaxml, to_eaxml
from .metamodel import ElementKind, SchemaVersion
from .model import Element, Model, qualified_name


class Action(enum.Enum):
    DROP_ATTRIBUTE = "drop-attribute"
    RENAME_ATTRIBUTE = "rename-attribute"
    DROP_ELEMENT_KIND = "drop-element-kind"


@dataclass(frozen=True)
class MigrationRule:
    source: SchemaVersion
    target: SchemaVersion
    kind: ElementKind
    action: Action
    name: str = ""
    new_name: str = ""
    note: str = ""


@dataclass
class MigrationReport:
    resulting_version: SchemaVersion
    applied: list[tuple[MigrationRule, str]] = field(default_factory=list)
    warnings: list[Diagnostic] = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return not self.applied

    def summary(self, source: SchemaVersion) -> str:
        return f"migrated {source} -> {self.resulting_version}: {len(self.applied)} change(s)"


V2112 = SchemaVersion("2.1.12")
V22 = SchemaVersion("2.2")

RULES: dict[tuple[str, str], tuple[MigrationRule, ...]] = {
    ("2.1.12", "2.2"): (
        MigrationRule(
            V2112,
            V22,
            ElementKind.HardwareFunctionType,
            Action.DROP_ATTRIBUTE,
            name="hardwareComponent",
            note="HardwareFunctionType no longer references a HardwareComponentType",
        ),
    ),
    ("2.2", "2.1.12"): (),
}


class MigrationError(Exception):
    pass


def rules_between(source: SchemaVersion, target: SchemaVersion) -> tuple[MigrationRule, ...]:
    try:
        return RULES[(source.id, target.id)]
    except KeyError:
        raise MigrationError(f"no migration path from {source} to {target}") from None


def migrate(model: Model, target: SchemaVersion) -> tuple[Model, MigrationReport]:
    report = MigrationReport(target)
    if model.version == target:
        return model, report
    rules = rules_between(model.version, target)

    def apply(el: Element) -> Optional[Element]:
        attributes = dict(el.attributes)
        for rule in rules:
            if rule.kind is not el.kind:
                continue
            path = qualified_name(model, el).path
            if rule.action is Action.DROP_ELEMENT_KIND:
                report.applied.append((rule, path))
                report.warnings.append(
                    warning("W101", el.span or NO_SPAN, f"dropped {el.kind.keyword} {path} (not present in {target})")
                )
                return None
            if rule.name not in attributes:
                continue
            value = attributes.pop(rule.name)
            report.applied.append((rule, path))
            if rule.action is Action.RENAME_ATTRIBUTE:
                attributes[rule.new_name] = value
            else:
                report.warnings.append(
                    warning(
                        "W101",
                        el.span or NO_SPAN,
                        f"dropped '{rule.name}' on {path} (not present in {target})",
                        hint=f"removed {path}/{rule.name} = {value}",
                    )
                )
        children = tuple(c for c in (apply(c) for c in el.children) if c is not None)
        if attributes == dict(el.attributes) and children == el.children:
            return el
        return replace(el, attributes=attributes, children=children)

    roots = tuple(r for r in (apply(r) for r in model.roots) if r is not None)
    return Model(roots, target, model.trailing_comments), report


def migrate_file(xml: str, target: SchemaVersion) -> tuple[str, MigrationReport]:
    """Read an ``.eaxml`` document of any registered version and rewrite it for ``target``."""
    model, _, diagnostics = from_eaxml(xml)
    if model is None or any(d.is_error for d in diagnostics):
        raise DiagnosticError([d for d in diagnostics if d.is_error])
    migrated, report = migrate(model, target)
    return to_eaxml(migrated), report
