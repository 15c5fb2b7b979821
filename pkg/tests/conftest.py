import random
from pathlib import Path

import pytest

from eatxt import SchemaVersion, parse
from eatxt.synth import generate_model

DATA = Path(__file__).parent / "data"
V2112 = SchemaVersion("2.1.12")
V22 = SchemaVersion("2.2")


def parse_clean(source, version=V22):
    model, diagnostics = parse(source, version)
    assert diagnostics == [], diagnostics
    return model


def corpus(count, size=200, seed=0):
    """Deterministic generated models alternating between both versions."""
    for i in range(count):
        version = (V2112, V22)[i % 2]
        yield generate_model(random.Random(seed + i), size, version)


@pytest.fixture
def data_dir():
    return DATA
