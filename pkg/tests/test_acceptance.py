"""End-to-end acceptance checks, one PASS/FAIL line per criterion.

Run under pytest (``pytest -s tests/test_acceptance.py``) or directly with
``python3 tests/test_acceptance.py``. Set ``EATXT_REGEN_GOLDEN=1`` to rewrite
the CLI golden outputs after an intentional change.
"""
import contextlib
import io
import os
import random
import shutil
import sys
import tempfile
import time
import tracemalloc
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from conftest import DATA, V22, corpus  # noqa: E402

from eatxt import ElementKind, emit, format, from_eaxml, model_equal, parse, to_eaxml  # noqa: E402
from eatxt.cli import main  # noqa: E402
from eatxt.synth import generate_model  # noqa: E402

ROUND_TRIP_MODELS = 200
ROUND_TRIP_MAX_ELEMENTS = 200
ROUND_TRIP_BUDGET_S = 30.0
SCALE_ELEMENTS = 10_000
SCALE_BUDGET_S = 5.0
SCALE_BUDGET_BYTES = 512 * 1024 * 1024
LINEARITY_SIZES = (1_000, 5_000, 10_000)
# per-element peak at the largest size may exceed the smallest by this factor
LINEARITY_SLACK = 1.5
SYNC_EDITS = 50
GOLDEN_CLI = DATA / "golden" / "cli"


def report(number, ok, detail):
    print(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
    return ok


@contextlib.contextmanager
def workspace():
    """Temporary directory seeded with the checked-in data, made current."""
    previous = os.getcwd()
    with tempfile.TemporaryDirectory() as tmp:
        for name in ("hw_2_1_12.eaxml", "pfda.eatxt", "recursive.eatxt"):
            shutil.copy(DATA / name, Path(tmp) / name)
        os.chdir(tmp)
        try:
            yield Path(tmp)
        finally:
            os.chdir(previous)


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main([str(a) for a in argv])
    return code, out.getvalue(), err.getvalue()


def check_round_trip():
    start = time.perf_counter()
    failures, kinds_missing, count = [], 0, 0
    for i, model in enumerate(corpus(ROUND_TRIP_MODELS, ROUND_TRIP_MAX_ELEMENTS)):
        count += 1
        if model.element_count() > ROUND_TRIP_MAX_ELEMENTS:
            failures.append(f"model {i} too large")
        if {e.kind for e in model.walk()} != set(ElementKind):
            kinds_missing += 1
        text = emit(model)
        reparsed, diags = parse(text, model.version)
        if diags or not model_equal(model, reparsed):
            failures.append(f"text model {i}: {diags[:1]}")
        back, version, diags = from_eaxml(to_eaxml(reparsed), model.version)
        if diags or version != model.version or back is None or not model_equal(reparsed, back):
            failures.append(f"xml model {i}: {diags[:1]}")
    elapsed = time.perf_counter() - start
    ok = count >= ROUND_TRIP_MODELS and not failures and not kinds_missing and elapsed < ROUND_TRIP_BUDGET_S
    detail = f"{count} models, {len(failures)} failures, {kinds_missing} missing kinds, {elapsed:.1f}s"
    return ok, detail + (f" first: {failures[0]}" if failures else "")


def check_version_scenario():
    with workspace():
        code, out, err = run_cli("import", "hw_2_1_12.eaxml")
        e005 = [l for l in err.splitlines() if "E005" in l]
        plain_ok = code == 1 and len(e005) == 1 and "2.1.12" in e005[0] and "2.2" in e005[0]
        code2, out2, err2 = run_cli("import", "hw_2_1_12.eaxml", "--auto-migrate")
        w101 = [l for l in err2.splitlines() if "W101" in l]
        names_drop = "/Vehicle/BrakeActuation/hardwareComponent" in err2
        reparsed = code2 == 0 and parse(out2, V22)[1] == []
    ok = plain_ok and code2 == 0 and len(w101) == 1 and names_drop and reparsed
    return ok, f"plain exit {code} with {len(e005)} E005; auto-migrate exit {code2} with {len(w101)} W101"


def check_keyword_typo():
    _, diags = parse("shortName P {\n}\n", V22)
    e002 = [d for d in diags if d.code == "E002"]
    ok = (
        len(e002) == 1
        and "EAPackage" in e002[0].message.split("expected one of:")[-1]
        and (e002[0].span.line, e002[0].span.column) == (1, 1)
    )
    where = f"{e002[0].span.line}:{e002[0].span.column}" if e002 else "-"
    return ok, f"{len(e002)} E002 at {where}"


def check_outline():
    with workspace():
        code, out, _ = run_cli("outline", "pfda.eatxt", "--depth", 10)
        paths = [line.rsplit(" ", 1)[-1] for line in out.splitlines()]
        nested = [p for p in paths if p.startswith("pFDA.")]
        start = time.perf_counter()
        code2, out2, _ = run_cli("outline", "recursive.eatxt", "--depth", 10)
        elapsed = time.perf_counter() - start
        marked = "(recursive)" in out2
    ok = code == 0 and len(nested) >= 3 and code2 == 0 and marked
    return ok, f"{len(nested)} nodes under pFDA.; recursion marked={marked} in {elapsed:.3f}s"


def check_formatter():
    sources = [emit(m) for m in corpus(ROUND_TRIP_MODELS, ROUND_TRIP_MAX_ELEMENTS)]
    pathological = sorted((DATA / "pathological").glob("*.eatxt"))
    with open(DATA / "pfda.eatxt", encoding="utf-8") as fh:
        sources.append(fh.read())
    for path in pathological:
        with open(path, encoding="utf-8", newline="") as fh:
            sources.append(fh.read())
    bad = 0
    for source in sources:
        once = format(source, V22)[0]
        original, d1 = parse(source, V22)
        formatted, d2 = parse(once, V22)
        if d1 or d2 or format(once, V22)[0] != once or not model_equal(original, formatted):
            bad += 1
    ok = bad == 0 and len(pathological) == 10
    return ok, f"{len(sources)} sources ({len(pathological)} pathological), {bad} violations"


def _round_trip_peak(size):
    model = generate_model(random.Random(size), size, V22)
    tracemalloc.start()
    start = time.perf_counter()
    back, _, diags = from_eaxml(to_eaxml(model), V22)
    elapsed = time.perf_counter() - start
    _, peak = tracemalloc.get_traced_memory()
    tracemalloc.stop()
    return model, back, diags, elapsed, peak


def check_scale():
    model, back, diags, _, _ = _round_trip_peak(SCALE_ELEMENTS)
    start = time.perf_counter()
    from_eaxml(to_eaxml(model), V22)
    elapsed = time.perf_counter() - start  # untraced wall time
    equal = back is not None and not diags and model_equal(model, back)
    peaks = {}
    for size in LINEARITY_SIZES:
        m, _, _, _, peak = _round_trip_peak(size)
        peaks[size] = (m.element_count(), peak)
    per_element = {size: peak / count for size, (count, peak) in peaks.items()}
    ratio = per_element[LINEARITY_SIZES[-1]] / per_element[LINEARITY_SIZES[0]]
    peak_big = peaks[LINEARITY_SIZES[-1]][1]
    ok = (
        model.element_count() >= SCALE_ELEMENTS
        and equal
        and elapsed < SCALE_BUDGET_S
        and peak_big < SCALE_BUDGET_BYTES
        and ratio <= LINEARITY_SLACK
    )
    bytes_per = ", ".join(f"{s}:{per_element[s]:.0f}B" for s in LINEARITY_SIZES)
    return ok, (
        f"{model.element_count()} elements in {elapsed:.2f}s, peak {peak_big / 2**20:.1f} MiB, "
        f"per-element peak {bytes_per} (ratio {ratio:.2f})"
    )


def check_sync():
    from eatxt import Element, Model
    from eatxt.sync import Status, SyncEngine, SyncEvent

    def plus(model, name):
        return Model(model.roots + (Element(ElementKind.EAPackage, name),), model.version)

    with workspace() as tmp:
        text, xml = tmp / "pfda.eatxt", tmp / "pfda.eaxml"
        engine = SyncEngine(text, xml, V22, report=lambda m: None)
        engine.sync_once()
        base = engine.conversions
        duplicates = 0
        for i in range(SYNC_EDITS):
            if i % 2 == 0:
                text.write_text(emit(plus(parse(text.read_text(), V22)[0], f"E{i}")))
                src, dst = text, xml
            else:
                xml.write_text(to_eaxml(plus(from_eaxml(xml.read_text(), V22)[0], f"E{i}")))
                src, dst = xml, text
            engine.handle(SyncEvent(src))
            if engine.handle(SyncEvent(dst)) is not None:  # echo of the engine's own write
                duplicates += 1
        conversions = engine.conversions - base
        equal = model_equal(parse(text.read_text(), V22)[0], from_eaxml(xml.read_text(), V22)[0])

        new_text = text.read_text() + "EAPackage DualText;\n"
        new_xml = to_eaxml(plus(from_eaxml(xml.read_text(), V22)[0], "DualXml"))
        text.write_text(new_text)
        xml.write_text(new_xml)
        engine.handle(SyncEvent(text))
        engine.handle(SyncEvent(xml))
        conflict = engine.state.status is Status.CONFLICT
        untouched = text.read_text() == new_text and xml.read_text() == new_xml
    ok = conversions == SYNC_EDITS and duplicates == 0 and equal and conflict and untouched
    return ok, (
        f"{conversions} conversions for {SYNC_EDITS} edits, {duplicates} duplicates, equal={equal}; "
        f"dual edit conflict={conflict}, files unchanged={untouched}"
    )


PFDA_SOURCE = (DATA / "pfda.eatxt").read_text()
TYPE_REF_OFFSET = PFDA_SOURCE.index("type SubsystemA") + len("type ")
BODY_OFFSET = PFDA_SOURCE.index("    DesignFunctionType FDA") + 4

CLI_CASES = {
    "check_pfda": ("check", "pfda.eatxt"),
    "check_typo": ("check", "typo.eatxt"),
    "fmt_messy": ("fmt", "messy.eatxt"),
    "export_pfda": ("export", "pfda.eatxt"),
    "export_pfda_2_1_12": ("export", "pfda.eatxt", "--schema", "2.1.12"),
    "import_hw": ("import", "hw_2_1_12.eaxml"),
    "import_hw_auto": ("import", "hw_2_1_12.eaxml", "--auto-migrate"),
    "migrate_hw": ("migrate", "hw_2_1_12.eaxml", "--to", "2.2"),
    "outline_pfda": ("outline", "pfda.eatxt", "--depth", "10"),
    "outline_pfda_json": ("outline", "pfda.eatxt", "--json"),
    "outline_recursive": ("outline", "recursive.eatxt"),
    "complete_body": ("complete", "pfda.eatxt", "--offset", BODY_OFFSET, "--json"),
    "complete_type_ref": ("complete", "pfda.eatxt", "--offset", TYPE_REF_OFFSET),
    "template_port": ("template", "FunctionFlowPort", "--name", "speed"),
    "sync_pfda": ("sync", "pfda.eatxt", "pfda.eaxml"),
}


def _cli_outputs():
    outputs = {}
    with workspace() as tmp:
        (tmp / "typo.eatxt").write_text("shortName P {\n}\n")
        (tmp / "messy.eatxt").write_text("EAPackage   P{ // note\nEAPackage Q{}}")
        for name, argv in CLI_CASES.items():
            code, out, err = run_cli(*argv)
            produced = tmp / "pfda.eaxml"
            extra = ""
            if name.startswith("sync") and produced.exists():
                extra = "--- pfda.eaxml\n" + produced.read_text()
                produced.unlink()
            outputs[name] = f"exit {code}\n--- stdout\n{out}--- stderr\n{err}{extra}"
    return outputs


def check_determinism():
    first, second = _cli_outputs(), _cli_outputs()
    if os.environ.get("EATXT_REGEN_GOLDEN"):
        GOLDEN_CLI.mkdir(parents=True, exist_ok=True)
        for name, text in first.items():
            (GOLDEN_CLI / f"{name}.txt").write_text(text)
    rerun_diff = [n for n in first if first[n] != second[n]]
    golden_diff = []
    for name, text in first.items():
        path = GOLDEN_CLI / f"{name}.txt"
        if not path.exists() or path.read_text() != text:
            golden_diff.append(name)
    ok = not rerun_diff and not golden_diff
    return ok, f"{len(first)} invocations, rerun diffs {rerun_diff}, golden diffs {golden_diff}"


CRITERIA = [
    (1, "round trip", check_round_trip),
    (2, "schema version import", check_version_scenario),
    (3, "keyword typo diagnostic", check_keyword_typo),
    (4, "outline expansion", check_outline),
    (5, "formatter", check_formatter),
    (6, "scale", check_scale),
    (7, "sync", check_sync),
    (8, "determinism", check_determinism),
]


def _run(number):
    _, title, check = CRITERIA[number - 1]
    ok, detail = check()
    report(number, ok, f"{title}: {detail}")
    assert ok, detail


def test_criterion_1_round_trip():
    _run(1)


def test_criterion_2_version_scenario():
    _run(2)


def test_criterion_3_keyword_typo():
    _run(3)


def test_criterion_4_outline():
    _run(4)


def test_criterion_5_formatter():
    _run(5)


def test_criterion_6_scale():
    _run(6)


def test_criterion_7_sync():
    _run(7)


def test_criterion_8_determinism():
    _run(8)


if __name__ == "__main__":
    results = []
    for number, title, check in CRITERIA:
        ok, detail = check()
        results.append(report(number, ok, f"{title}: {detail}"))
    sys.exit(0 if all(results) else 1)
