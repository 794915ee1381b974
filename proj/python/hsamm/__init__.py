"""Python interface to the hsamm memory model checker."""

import json

from . import _hsamm
from ._hsamm import (
    Error,
    ParseError,
    ReplayError,
    StateLimitExceeded,
    Unreachable,
    ValidationError,
)

__all__ = [
    "Error",
    "ParseError",
    "ReplayError",
    "StateLimitExceeded",
    "Unreachable",
    "ValidationError",
    "check",
    "cover",
    "explore",
    "find_trace",
    "format_source",
    "verify",
]


def format_source(source):
    """Canonical text of a litmus source."""
    return _hsamm.format_source(source)


def check(source, max_states=10_000_000, workers=1):
    """Verdict for the test's outcome clause, as a dict."""
    return json.loads(_hsamm.check(source, max_states, workers))


def explore(source, max_states=10_000_000, workers=1):
    """Exploration statistics and final register maps, as a dict."""
    return json.loads(_hsamm.explore(source, max_states, workers))


def cover(source, watch=(), max_states=10_000_000):
    """Register-combination coverage over the watched masters."""
    return json.loads(_hsamm.cover(source, list(watch), max_states))


def find_trace(source, target, max_states=10_000_000):
    """Shortest test case reaching `target`, e.g. "M2:C0,M3:C1"."""
    return json.loads(_hsamm.find_trace(source, target, max_states))


def verify(test_case):
    """Replays a test case dict. Returns (ok, message)."""
    return _hsamm.verify(json.dumps(test_case))
