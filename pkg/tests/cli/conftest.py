import logging
from pathlib import Path

import pytest
from click.testing import CliRunner

from app.services.formats import write_instance

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def runner(tmp_path, monkeypatch):
    # each invocation sets up file logging under ./logs
    monkeypatch.chdir(tmp_path)
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield CliRunner()
    root.handlers = handlers
    root.setLevel(level)


@pytest.fixture
def tiny_file():
    return str(DATA / "tiny.bvass")


@pytest.fixture
def duplication_file(tmp_path, duplication_instance):
    path = tmp_path / "duplication.bvass"
    write_instance(path, duplication_instance)
    return str(path)


@pytest.fixture
def counting_file(tmp_path):
    path = tmp_path / "counting.bvas"
    path.write_text("dim 1\nroot (2)\nleaf (0)\nunary (3)\nsplit (-2)\n", encoding="utf-8")
    return str(path)
