import sys
from pathlib import Path

import pytest

from substrata.sequences import make_spec
from substrata.subfile import load_document
from substrata.substitution import Substitution

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_path(name: str) -> Path:
    return FIXTURES / name


def load_spec(name: str):
    doc = load_document(FIXTURES / name)
    seed = doc.seed if doc.seed is not None else doc.substitution.alphabet[0]
    return make_spec(doc.substitution, seed, doc.coding)


def sub(rules: dict) -> Substitution:
    return Substitution.from_strings(rules)


@pytest.fixture(scope="session")
def ex3x():
    return load_spec("ex3x.sub")


@pytest.fixture(scope="session")
def ex3y():
    return load_spec("ex3y.sub")


@pytest.fixture(scope="session")
def tm():
    return load_spec("tm.sub")


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(module.RESULTS):
        ok, detail = module.RESULTS[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
