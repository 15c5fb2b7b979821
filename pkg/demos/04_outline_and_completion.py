"""Outline a design through its prototypes, then ask for completions."""
from pathlib import Path

from eatxt import ElementKind, complete, expand_template, outline, parse

SOURCE = (Path(__file__).parent.parent / "tests" / "data" / "pfda.eatxt").read_text()
model, _ = parse(SOURCE)

# Entries marked "~" are reached through a prototype's type, not written under it.
print(outline(model, max_depth=10).render())

cursor = SOURCE.index("type SubsystemA") + len("type ")
print("completions after 'type':")
for item in complete(SOURCE, cursor):
    print(f"  {item.kind:10} {item.insert_text}")

cursor = SOURCE.index("    DesignFunctionType FDA") + 4
print("element templates inside the package:")
for item in complete(SOURCE, cursor):
    print(f"  {item.label}")

print(expand_template(ElementKind.FunctionFlowPort, "brakeRequest", model.version))
