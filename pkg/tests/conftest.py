import json
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from paritylab.corpus import CorpusSpec, generate

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DATA = Path(__file__).parent / "data"

THREE_TWISTS = (1, -1, 2, -2, 3, -3, 5, -5)


def load(name):
    return json.loads((DATA / name).read_text())


@pytest.fixture(scope="session")
def two_corpus():
    """Pairs with b in 16*[-10, 10] and their duals: every one is good
    ordinary or multiplicative at 2, covering both positions of the
    kernel point on the reduction."""
    return generate(CorpusSpec("two", (-10, 10), (-10, 10), b_scale=16, include_duals=True)).curves


@pytest.fixture(scope="session")
def three_corpus():
    return generate(CorpusSpec("three", (-5, 5), (-5, 5), twists=THREE_TWISTS)).curves


def pytest_terminal_summary(terminalreporter):
    from .test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[key])
