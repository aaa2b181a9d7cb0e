from __future__ import annotations

import json
from pathlib import Path

import pytest

from metaforge.gateway import build_gateway
from metaforge.template import parse_template

FIXTURES = Path(__file__).parent / "fixtures"

TEMPLATE_NAMES = ("empty", "rnaseq_assay", "psych_ds", "study_contacts",
                  "kitchen_sink", "multilang")


def load_template_doc(name: str) -> dict:
    return json.loads((FIXTURES / "templates" / f"{name}.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def template_docs() -> dict[str, dict]:
    return {name: load_template_doc(name) for name in TEMPLATE_NAMES}


@pytest.fixture(scope="session")
def templates(template_docs):
    return {name: parse_template(doc) for name, doc in template_docs.items()}


@pytest.fixture(scope="session")
def empty_template(templates):
    return templates["empty"]


@pytest.fixture(scope="session")
def fig2_template(templates):
    return templates["rnaseq_assay"]


@pytest.fixture(scope="session")
def psych_template(templates):
    return templates["psych_ds"]


@pytest.fixture(scope="session")
def contacts_template(templates):
    return templates["study_contacts"]


@pytest.fixture(scope="session")
def sink_template(templates):
    return templates["kitchen_sink"]


@pytest.fixture(scope="session")
def multilang_template(templates):
    return templates["multilang"]


@pytest.fixture(scope="session")
def offline_gateway():
    return build_gateway(offline=True)


_acceptance_lines: list[str] = []


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::", 1)[1]
    outcome = "PASS" if report.passed else "FAIL"
    _acceptance_lines.append(f"[ACCEPTANCE] {name}: {outcome}")


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
