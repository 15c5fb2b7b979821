"""Keeps an ``.eatxt``/``.eaxml`` pair consistent in the background.

Both files' digests are recorded after every conversion. An event whose
digests match the record (typically the echo of our own write) does nothing,
which is what prevents ping-pong conversions. If both files moved since the
last clean state the engine stops in ``conflict`` and converts nothing until
one of them is touched again; that file then wins.
"""
from __future__ import annotations

import enum
import hashlib
import os
import sys
import tempfile
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Iterator, Optional

from .diagnostics import Diagnostic, has_errors
from .eaxml import from_eaxml, to_eaxml
from .formatter import emit
from .metamodel import DEFAULT_VERSION, SchemaVersion
from .model import validate
from .parser import parse

POLL_INTERVAL = 0.2


class Status(enum.Enum):
    CLEAN = "clean"
    CONVERTING = "converting"
    CONFLICT = "conflict"


class Side(enum.Enum):
    TEXT = "text"
    XML = "xml"


@dataclass
class SyncState:
    text_path: Path
    xml_path: Path
    text_digest: Optional[str] = None
    xml_digest: Optional[str] = None
    status: Status = Status.CLEAN


@dataclass(frozen=True)
class SyncEvent:
    path: Path


def digest(path: Path) -> Optional[str]:
    try:
        return hashlib.sha256(path.read_bytes()).hexdigest()
    except FileNotFoundError:
        return None


def atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _stderr(message: str) -> None:
    print(message, file=sys.stderr)


class SyncEngine:
    def __init__(
        self,
        text_path,
        xml_path,
        schema: SchemaVersion = DEFAULT_VERSION,
        report: Callable[[str], None] = _stderr,
    ):
        self.state = SyncState(Path(text_path), Path(xml_path))
        self.schema = schema
        self.report = report
        self.conversions = 0
        self.failures = 0
        self._conflict_seen: tuple[Optional[str], Optional[str]] = (None, None)

    def _render(self, path: Path, diagnostics: list[Diagnostic]) -> None:
        for d in diagnostics:
            self.report(d.render(str(path)))

    def convert(self, source: Side) -> bool:
        """Regenerate the counterpart of ``source``; the counterpart is left alone on error."""
        st = self.state
        st.status = Status.CONVERTING
        if source is Side.TEXT:
            src, dst = st.text_path, st.xml_path
            model, diagnostics = parse(src.read_text(encoding="utf-8"), self.schema)
            if not has_errors(diagnostics):
                diagnostics = diagnostics + validate(model)
            output = None if has_errors(diagnostics) else to_eaxml(model)
        else:
            src, dst = st.xml_path, st.text_path
            model, _, diagnostics = from_eaxml(src.read_text(encoding="utf-8"), self.schema)
            output = None if model is None or has_errors(diagnostics) else emit(model)
        if output is None:
            self._render(src, diagnostics)
            self.report(f"sync: {src} not converted; {dst} left untouched")
            self.failures += 1
            st.status = Status.CLEAN
            return False
        atomic_write(dst, output)
        self.conversions += 1
        st.text_digest, st.xml_digest = digest(st.text_path), digest(st.xml_path)
        st.status = Status.CLEAN
        self.report(f"sync: {src} -> {dst}")
        return True

    def sync_once(self) -> bool:
        """Convert the newer file onto the other; a tie goes to the text file."""
        st = self.state
        text_exists, xml_exists = st.text_path.exists(), st.xml_path.exists()
        if not text_exists and not xml_exists:
            raise FileNotFoundError(f"neither {st.text_path} nor {st.xml_path} exists")
        if text_exists and xml_exists:
            newer_xml = st.xml_path.stat().st_mtime_ns > st.text_path.stat().st_mtime_ns
            source = Side.XML if newer_xml else Side.TEXT
        else:
            source = Side.TEXT if text_exists else Side.XML
        return self.convert(source)

    def handle(self, event: Optional[SyncEvent] = None) -> Optional[Side]:
        """React to a change notification; returns the side converted, if any."""
        st = self.state
        now = (digest(st.text_path), digest(st.xml_path))
        if st.status is Status.CONFLICT:
            moved = [side for side, d, seen in zip(Side, now, self._conflict_seen) if d != seen]
            if not moved:
                return None
            if len(moved) == 2:
                self._enter_conflict(now)
                return None
            source = moved[0]
        else:
            text_moved, xml_moved = now[0] != st.text_digest, now[1] != st.xml_digest
            if not text_moved and not xml_moved:
                return None
            if text_moved and xml_moved:
                self._enter_conflict(now)
                return None
            source = Side.TEXT if text_moved else Side.XML
        if now[0 if source is Side.TEXT else 1] is None:
            return None
        return source if self.convert(source) else None

    def _enter_conflict(self, now: tuple[Optional[str], Optional[str]]) -> None:
        self.state.status = Status.CONFLICT
        self._conflict_seen = now
        self.report(
            f"sync: conflict, both {self.state.text_path} and {self.state.xml_path} changed; "
            "touch the file to keep and sync resumes"
        )

    def watch(self, events: Iterable[SyncEvent]) -> None:
        for event in events:
            self.handle(event)


class PollingEventSource:
    """Yields an event whenever a watched file's mtime or size changes."""

    def __init__(self, paths, interval: float = POLL_INTERVAL, stop: Optional[threading.Event] = None):
        self.paths = [Path(p) for p in paths]
        self.interval = interval
        self.stop = stop or threading.Event()

    @staticmethod
    def _stamp(path: Path):
        try:
            st = path.stat()
        except FileNotFoundError:
            return None
        return st.st_mtime_ns, st.st_size

    def __iter__(self) -> Iterator[SyncEvent]:
        seen = {p: self._stamp(p) for p in self.paths}
        while not self.stop.is_set():
            time.sleep(self.interval)
            for p in self.paths:
                stamp = self._stamp(p)
                if stamp != seen[p]:
                    seen[p] = stamp
                    yield SyncEvent(p)
