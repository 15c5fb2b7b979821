"""Load a 2.1.12 EAXML file into a 2.2 toolchain.

HardwareFunctionType lost its ``hardwareComponent`` reference in 2.2, so a
plain import is refused with E005 and an explicit migration drops the
attribute with a W101 warning.
"""
from pathlib import Path

from eatxt import SchemaVersion, detect_version, emit, from_eaxml, migrate

LEGACY = Path(__file__).parent.parent / "tests" / "data" / "hw_2_1_12.eaxml"
xml = LEGACY.read_text()
print("declared version:", detect_version(xml))

model, found, diagnostics = from_eaxml(xml, expected=SchemaVersion("2.2"))
for d in diagnostics:
    print(d.render(LEGACY.name))

migrated, report = migrate(model, SchemaVersion("2.2"))
for w in report.warnings:
    print(w.render(LEGACY.name))
print(report.summary(found))
print(emit(migrated))
