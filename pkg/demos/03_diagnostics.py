"""What the checker says about common mistakes."""
from eatxt import parse, validate

CASES = {
    "attribute name where a keyword belongs": "shortName P {\n}\n",
    "misspelt keyword": "EAPackage P {\n    DesignFuntionType T;\n}\n",
    "missing semicolon": "EAPackage P {\n    DesignFunctionType T {\n        FunctionFlowPort a { direction in }\n    }\n}\n",
    "dangling type reference": "EAPackage P {\n    DesignFunctionType T {\n        DesignFunctionPrototype p { type Ghost; }\n    }\n}\n",
    "2.1.12 attribute under 2.2": (
        "EAPackage P {\n    HardwareComponentType ECU;\n"
        "    HardwareFunctionType F { hardwareComponent ECU; }\n}\n"
    ),
}

for title, source in CASES.items():
    model, diagnostics = parse(source)
    if not any(d.is_error for d in diagnostics):
        diagnostics += validate(model)
    print(f"# {title}")
    for d in diagnostics:
        print(d.render("demo.eatxt"))
    print()
