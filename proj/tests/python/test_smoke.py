import os
import pathlib

import pytest

import hsamm

CORPUS = pathlib.Path(os.environ.get(
    "HSAMM_CORPUS_DIR",
    pathlib.Path(__file__).resolve().parents[2] / "corpus"))


def source(name):
    return (CORPUS / f"{name}.litmus").read_text()


def test_check_iriw_fence_holds():
    v = hsamm.check(source("iriw-fence"), workers=2)
    assert v["verdict"] == "Holds"
    assert v["stateCount"] == 8124


def test_check_nofence_violated_with_counterexample():
    v = hsamm.check(source("iriw-nofence"))
    assert v["verdict"] == "Violated"
    assert v["counterexample"]


def test_cover_iriw_fence():
    c = hsamm.cover(source("iriw-fence"), watch=["M2", "M3"])
    assert len(c["covered"]) == 15
    assert c["uncovered"] == [["C2", "C2"]]


def test_find_trace_and_verify():
    tc = hsamm.find_trace(source("iriw-fence"), "M2:C0,M3:C0")
    ok, message = hsamm.verify(tc)
    assert ok, message
    tc["steps"] = tc["steps"][1:]
    ok, _ = hsamm.verify(tc)
    assert not ok


def test_unreachable_target():
    with pytest.raises(hsamm.Unreachable):
        hsamm.find_trace(source("iriw-fence"), "M2:C2,M3:C2")


def test_format_round_trip():
    text = source("mp-fence")
    assert hsamm.format_source(hsamm.format_source(text)) == hsamm.format_source(text)


def test_parse_error():
    with pytest.raises(hsamm.ParseError):
        hsamm.check("litmus \"x\"\nmaster M1 { I11: LD }\n")


def test_state_limit():
    with pytest.raises(hsamm.StateLimitExceeded):
        hsamm.explore(source("iriw-fence"), max_states=100)
