import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from bubblescope.gfa_io import parse_corpus

settings.register_profile(
    "default", max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

CORPUS = Path(__file__).parent / "corpus"


@pytest.fixture(scope="session")
def fixtures():
    """Corpus entries of the hand-built fixtures, keyed by name."""
    return {e.name: e for e in parse_corpus((CORPUS / "fixtures.txt").read_text())}


def incs(g, *tokens):
    """``incs(g, "s+", "t-")`` -> frozenset of incidences."""
    return frozenset(g.inc(t) for t in tokens)
