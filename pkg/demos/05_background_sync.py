"""Keep a text file and its EAXML twin in step while both get edited."""
import tempfile
from pathlib import Path

from eatxt import SyncEngine, SyncEvent, emit, from_eaxml, parse, to_eaxml
from eatxt import Element, ElementKind, Model, SchemaVersion

with tempfile.TemporaryDirectory() as tmp:
    text, xml = Path(tmp) / "car.eatxt", Path(tmp) / "car.eaxml"
    text.write_text("EAPackage Car;\n")
    engine = SyncEngine(text, xml, schema=SchemaVersion("2.2"), report=print)
    engine.sync_once()

    # An edit on the XML side, as a tree editor would save it.
    model = from_eaxml(xml.read_text())[0]
    model = Model(model.roots + (Element(ElementKind.EAPackage, "Chassis"),), model.version)
    xml.write_text(to_eaxml(model))
    engine.handle(SyncEvent(xml))
    # The watcher also sees the engine's own write and ignores it.
    engine.handle(SyncEvent(text))
    print(text.read_text())

    # Both sides edited before the engine catches up: nothing is overwritten.
    text.write_text(text.read_text() + "EAPackage Body;\n")
    xml.write_text(to_eaxml(parse("EAPackage Car;\nEAPackage Wheels;\n")[0]))
    engine.handle(SyncEvent(text))
    engine.handle(SyncEvent(xml))
    print("status:", engine.state.status.name)
    print("conversions:", engine.conversions)
