import json
import os
import pathlib

import pytest

ROOT = pathlib.Path(os.environ.get("TSOGAME_ROOT", pathlib.Path(__file__).resolve().parents[2]))


@pytest.fixture(scope="session")
def root():
    return ROOT


@pytest.fixture(scope="session")
def schema():
    def load(name):
        return json.loads((ROOT / "schemas" / f"{name}.schema.json").read_text())

    return load


@pytest.fixture(scope="session")
def program_text():
    def load(name):
        return (ROOT / "tests" / "corpus" / "programs" / f"{name}.prog").read_text()

    return load
