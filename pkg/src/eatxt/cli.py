"""``eatxt`` command line front end.

Exit codes: 0 success, 1 error diagnostics were reported, 2 usage or I/O
failure. Diagnostics go to stderr, artifacts to stdout or ``-o``.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional

from . import __version__
from .diagnostics import Diagnostic, DiagnosticError, has_errors, sort_diagnostics
from .eaxml import from_eaxml, to_eaxml
from .formatter import emit, format
from .metamodel import DEFAULT_VERSION, ElementKind, SchemaVersion, supported_versions
from .migrate import migrate, migrate_file
from .model import Model, validate
from .parser import parse
from .services import complete, expand_template, outline
from .sync import POLL_INTERVAL, PollingEventSource, SyncEngine, atomic_write

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _report(path: str, diagnostics: list[Diagnostic]) -> None:
    for d in sort_diagnostics(diagnostics):
        print(d.render(path), file=sys.stderr)


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


def _write(text: str, output: Optional[str]) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        try:
            atomic_write(Path(output), text)
        except OSError as exc:
            raise UsageError(f"cannot write {output}: {exc.strerror or exc}") from None


def _schema(args) -> SchemaVersion:
    value = getattr(args, "schema", None) or os.environ.get("EATXT_SCHEMA") or DEFAULT_VERSION.id
    try:
        return SchemaVersion(value)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load(path: str, schema: SchemaVersion) -> tuple[Optional[Model], list[Diagnostic]]:
    """Parse or load a model by file extension, with validation findings."""
    text = _read(path)
    suffix = Path(path).suffix
    if suffix == ".eatxt":
        model, diagnostics = parse(text, schema)
        if not has_errors(diagnostics):
            diagnostics += validate(model)
        return model, diagnostics
    if suffix == ".eaxml":
        model, _, diagnostics = from_eaxml(text, schema)
        return model, diagnostics
    raise UsageError(f"{path}: expected a .eatxt or .eaxml file")


def cmd_check(args) -> int:
    _, diagnostics = _load(args.file, _schema(args))
    _report(args.file, diagnostics)
    return FAILED if has_errors(diagnostics) else OK


def cmd_fmt(args) -> int:
    formatted, diagnostics = format(_read(args.file), _schema(args))
    _report(args.file, diagnostics)
    _write(formatted, args.output)
    return FAILED if has_errors(diagnostics) else OK


def cmd_export(args) -> int:
    schema = _schema(args)
    model, diagnostics = parse(_read(args.file), schema)
    if not has_errors(diagnostics):
        diagnostics += validate(model)
    _report(args.file, diagnostics)
    if has_errors(diagnostics):
        return FAILED
    try:
        xml = to_eaxml(model)
    except DiagnosticError as exc:
        _report(args.file, exc.diagnostics)
        return FAILED
    _write(xml, args.output)
    return OK


def cmd_import(args) -> int:
    expected = _schema(args)
    model, found, diagnostics = from_eaxml(_read(args.file), expected)
    mismatch = [d for d in diagnostics if d.code == "E005"]
    if model is not None and mismatch and args.auto_migrate and found is not None:
        model, report = migrate(model, expected)
        diagnostics = [d for d in diagnostics if d.code != "E005"] + report.warnings + validate(model)
        _report(args.file, diagnostics)
        print(report.summary(found), file=sys.stderr)
    else:
        _report(args.file, diagnostics)
    if model is None or has_errors(diagnostics):
        return FAILED
    _write(emit(model), args.output)
    return OK


def cmd_migrate(args) -> int:
    try:
        target = SchemaVersion(args.to)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        xml, report = migrate_file(_read(args.file), target)
    except DiagnosticError as exc:
        _report(args.file, exc.diagnostics)
        return FAILED
    _report(args.file, report.warnings)
    _write(xml, args.output)
    return OK


def cmd_outline(args) -> int:
    if args.depth < 1:
        raise UsageError("--depth must be a positive integer")
    model, diagnostics = _load(args.file, _schema(args))
    if model is None:
        _report(args.file, diagnostics)
        return FAILED
    result = outline(model, args.depth)
    _report(args.file, [d for d in diagnostics if d.is_error] + result.diagnostics)
    if args.json:
        _write(json.dumps([n.to_json() for n in result.nodes], indent=2, ensure_ascii=False) + "\n", args.output)
    else:
        _write(result.render(), args.output)
    return FAILED if has_errors(diagnostics + result.diagnostics) else OK


def cmd_complete(args) -> int:
    source = _read(args.file)
    if not 0 <= args.offset <= len(source):
        raise UsageError(f"--offset must lie within 0..{len(source)}")
    items = complete(source, args.offset, _schema(args))
    if args.json:
        _write(json.dumps([i.to_json() for i in items], indent=2, ensure_ascii=False) + "\n", args.output)
    else:
        _write("".join(f"{i.kind}\t{i.label}\n" for i in items), args.output)
    return OK


def cmd_template(args) -> int:
    kind = ElementKind.from_keyword(args.kind)
    if kind is None:
        raise UsageError(f"unknown element kind {args.kind!r}")
    _write(expand_template(kind, args.name, _schema(args)), args.output)
    return OK


def cmd_sync(args) -> int:
    engine = SyncEngine(args.text, args.xml, _schema(args))
    try:
        ok = engine.sync_once()
    except FileNotFoundError as exc:
        raise UsageError(str(exc)) from None
    if not args.watch:
        return OK if ok else FAILED
    try:
        engine.watch(PollingEventSource([args.text, args.xml], args.interval))
    except KeyboardInterrupt:
        pass
    return OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--schema",
        choices=supported_versions(),
        default=argparse.SUPPRESS,
        help="schema version (default: $EATXT_SCHEMA or 2.2)",
    )
    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("-o", "--output", help="write the result here instead of stdout")

    parser = argparse.ArgumentParser(prog="eatxt", parents=[common], description="EAST-ADL textual notation toolchain")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="parse and validate a model file")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("fmt", parents=[common, output], help="format a .eatxt file")
    p.add_argument("file")
    p.set_defaults(func=cmd_fmt)

    p = sub.add_parser("export", parents=[common, output], help="convert .eatxt to .eaxml")
    p.add_argument("file")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("import", parents=[common, output], help="convert .eaxml to .eatxt")
    p.add_argument("file")
    p.add_argument("--auto-migrate", action="store_true", help="migrate a file of another schema version")
    p.set_defaults(func=cmd_import)

    p = sub.add_parser("migrate", parents=[common, output], help="migrate an .eaxml file to another schema version")
    p.add_argument("file")
    p.add_argument("--to", required=True, choices=supported_versions())
    p.set_defaults(func=cmd_migrate)

    p = sub.add_parser("outline", parents=[common, output], help="print the model outline")
    p.add_argument("file")
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_outline)

    p = sub.add_parser("complete", parents=[common, output], help="completion proposals at an offset")
    p.add_argument("file")
    p.add_argument("--offset", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_complete)

    p = sub.add_parser("template", parents=[common, output], help="print a code template")
    p.add_argument("kind")
    p.add_argument("--name", required=True)
    p.set_defaults(func=cmd_template)

    p = sub.add_parser("sync", parents=[common], help="keep a .eatxt/.eaxml pair in sync")
    p.add_argument("text")
    p.add_argument("xml")
    p.add_argument("--watch", action="store_true")
    p.add_argument("--interval", type=float, default=POLL_INTERVAL, help="poll interval in seconds")
    p.set_defaults(func=cmd_sync)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"eatxt: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
