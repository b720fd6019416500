import json
import os
import pathlib

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]


@pytest.fixture
def root():
    return ROOT


@pytest.fixture
def schema():
    return json.loads((ROOT / "schemas" / "report.schema.json").read_text())


@pytest.fixture
def put_config():
    return json.loads((ROOT / "configs" / "put_hyperbolic.json").read_text())


@pytest.fixture
def cli():
    path = os.environ.get("TISTOP_CLI")
    if not path:
        pytest.skip("TISTOP_CLI not set")
    return path
