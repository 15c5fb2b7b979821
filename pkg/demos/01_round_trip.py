"""Write a small design in text, export it to EAXML and read it back."""
from eatxt import emit, from_eaxml, model_equal, parse, to_eaxml

SOURCE = """\
EAPackage Braking {
    DesignFunctionType PedalSensor {
        FunctionFlowPort position { direction out; }
    }
    DesignFunctionType BrakeController {
        FunctionFlowPort pedal { direction in; }
        DesignFunctionPrototype sensor { type PedalSensor; }
        // the sensor output feeds nothing yet; wire it up later
    }
}
"""

model, diagnostics = parse(SOURCE)
assert not diagnostics, diagnostics
print(f"parsed {model.element_count()} elements at schema {model.version}")

xml = to_eaxml(model)
print(xml)

# References are written as absolute paths in XML and shortened again on import.
back, version, diagnostics = from_eaxml(xml)
print("reimported cleanly:", not diagnostics and model_equal(model, back))
print(emit(back))
