import os
import pathlib
import shutil

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]


@pytest.fixture
def snifattack():
    return (ROOT / "scenarios" / "snifattack.atk").read_text()


@pytest.fixture
def snifattack_path():
    return ROOT / "scenarios" / "snifattack.atk"


@pytest.fixture
def cli():
    exe = os.environ.get("ATTACKFORGE_CLI") or shutil.which("attackforge")
    if not exe:
        candidate = ROOT / "build" / "attackforge"
        exe = str(candidate) if candidate.exists() else None
    if not exe:
        pytest.skip("attackforge executable not found")
    return exe
