"""Shared fixtures.  The corpus is benchmarked once per session."""

from pathlib import Path

import pytest

from geoprover.cli import read_manifest, run_bench
from geoprover.prover import ProverConfig

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"


@pytest.fixture(scope="session")
def manifest():
    return read_manifest(CORPUS / "manifest.tsv")


@pytest.fixture(scope="session")
def corpus_records():
    """Default budget (60 s per theorem)."""
    return run_bench(CORPUS, ProverConfig(timeout=60))


@pytest.fixture(scope="session")
def corpus_records_tiny():
    """A deliberately tiny budget of one second."""
    return run_bench(CORPUS, ProverConfig(timeout=1))


def pytest_terminal_summary(terminalreporter):
    from .test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
