import json
from importlib import resources
from pathlib import Path

import pytest

from nrgit.instance import load

CORPUS = Path(str(resources.files("nrgit") / "corpus"))


def corpus_path(name):
    return CORPUS / f"{name}.json"


def instance_files():
    """Every corpus file that describes an instance (the homdim table is not one)."""
    out = []
    for p in sorted(CORPUS.glob("*.json")):
        if "ring" in json.loads(p.read_text()):
            out.append(p)
    return out


@pytest.fixture
def corpus():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = load(corpus_path(name))
        return cache[name]

    return get


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, title, secs = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}  ({secs:.2f}s)")
