"""Version-keyed metamodel registry for the supported EAST-ADL subset.

The registry is plain data: adding a schema version means adding a table
entry, not code.
"""
from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field
from typing import Mapping, Optional


class ElementKind(enum.Enum):
    """Element keywords of the textual notation, valued by their XML tag."""

    EAPackage = "EA-PACKAGE"
    DesignFunctionType = "DESIGN-FUNCTION-TYPE"
    AnalysisFunctionType = "ANALYSIS-FUNCTION-TYPE"
    HardwareComponentType = "HARDWARE-COMPONENT-TYPE"
    HardwareFunctionType = "HARDWARE-FUNCTION-TYPE"
    FunctionFlowPort = "FUNCTION-FLOW-PORT"
    DesignFunctionPrototype = "DESIGN-FUNCTION-PROTOTYPE"
    FunctionConnector = "FUNCTION-CONNECTOR"

    @property
    def keyword(self) -> str:
        return self.name

    @property
    def xml_tag(self) -> str:
        return self.value

    @classmethod
    def from_keyword(cls, keyword: str) -> Optional["ElementKind"]:
        return cls.__members__.get(keyword)

    @classmethod
    def from_xml_tag(cls, tag: str) -> Optional["ElementKind"]:
        try:
            return cls(tag)
        except ValueError:
            return None


KEYWORDS = frozenset(k.keyword for k in ElementKind)
DIRECTIONS = ("in", "out", "inout")


class ValueShape(enum.Enum):
    ENUM = "enum"
    REFERENCE = "reference"
    PORT_REFERENCE = "port-reference"


@dataclass(frozen=True)
class AttributeSpec:
    name: str
    shape: ValueShape
    required: bool = False
    target: Optional[ElementKind] = None
    xml_tag: str = ""

    @property
    def placeholder(self) -> str:
        """Template value inserted for a required attribute."""
        if self.shape is ValueShape.ENUM:
            return "in"
        if self.shape is ValueShape.PORT_REFERENCE:
            return "source.port" if self.name == "from" else "target.port"
        return "TypeName"


@functools.total_ordering
@dataclass(frozen=True)
class SchemaVersion:
    id: str

    def __post_init__(self):
        if self.id not in _VERSION_TABLES:
            raise ValueError(
                f"unsupported schema version {self.id!r}; supported: {', '.join(supported_versions())}"
            )

    @property
    def _key(self) -> tuple[int, ...]:
        return tuple(int(part) for part in self.id.split("."))

    def __lt__(self, other: "SchemaVersion") -> bool:
        if not isinstance(other, SchemaVersion):
            return NotImplemented
        return self._key < other._key

    def __str__(self) -> str:
        return self.id

    @property
    def namespace(self) -> str:
        return f"{NAMESPACE_PREFIX}{self.id}"


NAMESPACE_PREFIX = "http://east-adl.info/"

K = ElementKind

_TYPE_KINDS = frozenset(
    {K.DesignFunctionType, K.AnalysisFunctionType, K.HardwareComponentType, K.HardwareFunctionType}
)

_CONTAINMENT: dict[ElementKind, frozenset[ElementKind]] = {
    K.EAPackage: frozenset({K.EAPackage}) | _TYPE_KINDS,
    K.DesignFunctionType: frozenset({K.FunctionFlowPort, K.DesignFunctionPrototype, K.FunctionConnector}),
    K.AnalysisFunctionType: frozenset({K.FunctionFlowPort}),
    K.HardwareComponentType: frozenset(),
    K.HardwareFunctionType: frozenset({K.FunctionFlowPort}),
    K.FunctionFlowPort: frozenset(),
    K.DesignFunctionPrototype: frozenset(),
    K.FunctionConnector: frozenset(),
}

_DIRECTION = AttributeSpec("direction", ValueShape.ENUM, required=True, xml_tag="DIRECTION")
_TYPE = AttributeSpec(
    "type", ValueShape.REFERENCE, required=True, target=K.DesignFunctionType, xml_tag="TYPE-TREF"
)
_FROM = AttributeSpec("from", ValueShape.PORT_REFERENCE, required=True, xml_tag="FROM-PORT-IREF")
_TO = AttributeSpec("to", ValueShape.PORT_REFERENCE, required=True, xml_tag="TO-PORT-IREF")
_HW_COMPONENT = AttributeSpec(
    "hardwareComponent",
    ValueShape.REFERENCE,
    required=False,
    target=K.HardwareComponentType,
    xml_tag="HARDWARE-COMPONENT-TREF",
)

_ATTRIBUTES_2_2: dict[ElementKind, tuple[AttributeSpec, ...]] = {kind: () for kind in ElementKind}
_ATTRIBUTES_2_2.update(
    {
        K.FunctionFlowPort: (_DIRECTION,),
        K.DesignFunctionPrototype: (_TYPE,),
        K.FunctionConnector: (_FROM, _TO),
    }
)
_ATTRIBUTES_2_1_12 = dict(_ATTRIBUTES_2_2)
_ATTRIBUTES_2_1_12[K.HardwareFunctionType] = (_HW_COMPONENT,)

_VERSION_TABLES: dict[str, tuple[Mapping, Mapping]] = {
    "2.1.12": (_CONTAINMENT, _ATTRIBUTES_2_1_12),
    "2.2": (_CONTAINMENT, _ATTRIBUTES_2_2),
}

# XML container tag used to group each child kind under its parent.
CONTAINER_TAGS: dict[ElementKind, str] = {
    K.EAPackage: "SUB-PACKAGES",
    K.DesignFunctionType: "ELEMENTS",
    K.AnalysisFunctionType: "ELEMENTS",
    K.HardwareComponentType: "ELEMENTS",
    K.HardwareFunctionType: "ELEMENTS",
    K.FunctionFlowPort: "PORTS",
    K.DesignFunctionPrototype: "PARTS",
    K.FunctionConnector: "CONNECTORS",
}


def supported_versions() -> list[str]:
    return sorted(_VERSION_TABLES, key=lambda v: tuple(int(p) for p in v.split(".")))


@dataclass(frozen=True)
class MetamodelRegistry:
    containment: Mapping[str, Mapping[ElementKind, frozenset[ElementKind]]] = field(
        default_factory=lambda: {v: tables[0] for v, tables in _VERSION_TABLES.items()}
    )
    attributes: Mapping[str, Mapping[ElementKind, tuple[AttributeSpec, ...]]] = field(
        default_factory=lambda: {v: tables[1] for v, tables in _VERSION_TABLES.items()}
    )

    @property
    def versions(self) -> list[SchemaVersion]:
        return [SchemaVersion(v) for v in supported_versions()]

    def child_kinds(self, version: SchemaVersion, kind: Optional[ElementKind]) -> frozenset[ElementKind]:
        """Legal child kinds; ``kind=None`` asks about model roots."""
        if kind is None:
            return frozenset({K.EAPackage})
        return self.containment[version.id][kind]

    def attribute_specs(self, version: SchemaVersion, kind: ElementKind) -> tuple[AttributeSpec, ...]:
        return self.attributes[version.id][kind]

    def attribute_spec(self, version: SchemaVersion, kind: ElementKind, name: str) -> Optional[AttributeSpec]:
        for spec in self.attribute_specs(version, kind):
            if spec.name == name:
                return spec
        return None

    def any_version_attribute(self, kind: ElementKind, name: str) -> Optional[AttributeSpec]:
        """Look an attribute up in whichever version defines it."""
        for table in self.attributes.values():
            for spec in table[kind]:
                if spec.name == name:
                    return spec
        return None

    def attribute_by_xml_tag(self, tag: str) -> Optional[AttributeSpec]:
        for table in self.attributes.values():
            for specs in table.values():
                for spec in specs:
                    if spec.xml_tag == tag:
                        return spec
        return None

    def attribute_names(self, kind: ElementKind) -> set[str]:
        """Attribute names known for ``kind`` in any registered version."""
        return {spec.name for table in self.attributes.values() for spec in table[kind]}


REGISTRY = MetamodelRegistry()
DEFAULT_VERSION = SchemaVersion("2.2")
