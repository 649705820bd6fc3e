import json
import pathlib

import pytest

EXAMPLES = pathlib.Path(__file__).resolve().parent.parent / "docs" / "examples"


@pytest.fixture(scope="session")
def route_tracking_doc():
    return json.loads((EXAMPLES / "route_clean.tracking.json").read_text())


@pytest.fixture(scope="session")
def route_lexicon_text():
    return (EXAMPLES / "route.pdlsl").read_text()
