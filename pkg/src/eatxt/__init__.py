"""Textual notation toolchain for an EAST-ADL metamodel subset.

Parse ``.eatxt`` text, round-trip it through ``.eaxml``, migrate between
schema versions 2.1.12 and 2.2, and compute editor services.
"""
__version__ = "0.1.0"

from .diagnostics import Diagnostic, DiagnosticError, Severity, Span
from .eaxml import detect_version, from_eaxml, to_eaxml
from .formatter import emit, format
from .lexer import Token, TokenKind, detokenize, lex
from .metamodel import REGISTRY, AttributeSpec, ElementKind, MetamodelRegistry, SchemaVersion
from .migrate import MigrationReport, MigrationRule, migrate, migrate_file
from .model import Element, Model, QualifiedRef, model_equal, qualified_name, resolve, validate
from .parser import keyword_suggest, parse
from .services import CompletionItem, OutlineNode, complete, expand_template, fresh_name, outline
from .sync import SyncEngine, SyncEvent

__all__ = [
    "AttributeSpec",
    "CompletionItem",
    "Diagnostic",
    "DiagnosticError",
    "Element",
    "ElementKind",
    "MetamodelRegistry",
    "MigrationReport",
    "MigrationRule",
    "Model",
    "OutlineNode",
    "QualifiedRef",
    "REGISTRY",
    "SchemaVersion",
    "Severity",
    "Span",
    "SyncEngine",
    "SyncEvent",
    "Token",
    "TokenKind",
    "complete",
    "detect_version",
    "detokenize",
    "emit",
    "expand_template",
    "format",
    "fresh_name",
    "from_eaxml",
    "keyword_suggest",
    "lex",
    "migrate",
    "migrate_file",
    "model_equal",
    "outline",
    "parse",
    "qualified_name",
    "resolve",
    "to_eaxml",
    "validate",
]
