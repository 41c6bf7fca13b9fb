"""Shared test fixtures: corpus access and problem loading."""

from __future__ import annotations

from pathlib import Path

import pytest

from admcdm import Problem, parse_problem

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def load(name: str) -> Problem:
    return parse_problem((CORPUS / name).read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return CORPUS


@pytest.fixture(scope="session")
def corpus_files() -> list[Path]:
    files = sorted(CORPUS.glob("*.admp"))
    assert files, "corpus directory must not be empty"
    return files
