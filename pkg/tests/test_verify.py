"""Verification suites at reduced trial counts: every suite must come
back clean, produce replayable failure records, and the catalog replay
must flag the quoted-evaluation discrepancies it was built to expose."""
import json

import pytest

from jss import SUITES, run_all, run_suite
from jss.verify import reproduce_counterexamples, verify_two_box_base_case


SMALL = {
    "no_feedback_index": {"trials": 25},
    "order_independent_indexing": {"trials": 20},
    "two_box_base_case": {"trials": 40},
    "weak_feedback_monotonicity": {"trials": 12},
    "commutation_sign": {"trials": 150},
    "ratio_bound": {"trials": 30},
    "single_crossing": {"trials": 30},
    "normalization_shift": {"trials": 8},
    "counterexamples": {},
    "mc_consistency": {"pairs": 3, "episodes": 20000},
}


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suite_verifies_at_reduced_load(name):
    report = run_suite(name, **SMALL[name])
    assert report.status == "verified", report.text()
    assert report.failures == []
    assert report.elapsed_seconds >= 0
    assert report.trials >= 1


def test_unknown_suite_name():
    with pytest.raises(KeyError):
        run_suite("everything")


def test_report_round_trips_through_json():
    report = verify_two_box_base_case(trials=10)
    blob = json.dumps(report.to_dict())
    back = json.loads(blob)
    assert back["status"] == "verified"
    assert back["trials"] == 10
    assert isinstance(back["failures"], list)
    assert "claim" in back and back["claim"]


def test_failure_records_are_replayable():
    # force a failure by shrinking the claim's tolerance: run the MC suite
    # with far too few episodes for its 3-sigma bound to be meaningful is
    # still likely to pass, so instead check the record format directly
    from jss.verify import VerificationReport, _fail
    from jss import example_pair

    rep = VerificationReport(claim="format probe", trials=1)
    _fail(rep, 3, 110, example_pair("1/2"), "probe", extra=7)
    assert rep.status == "falsified"
    entry = rep.failures[0]
    assert entry["trial"] == 3 and entry["seed"] == 110
    assert entry["extra"] == 7
    assert entry["instance"]["prior_h"] == "1/2"
    json.dumps(rep.to_dict())  # serializable as-is
    assert "failure at trial 3" in rep.text()


def test_counterexample_replay_flags_quoted_discrepancies():
    report = reproduce_counterexamples()
    assert report.status == "verified"
    notes = "\n".join(report.notes)
    assert notes.count("DISCREPANCY") == 2
    assert "acceptance_rate_inverted" in notes
    assert "worthless_feedback_box" in notes
    assert "as quoted" in notes  # the low-prior floor case really is nonmonotone
    assert "19/23" in notes


def test_run_all_honours_per_suite_overrides():
    results = run_all(**SMALL)
    assert sorted(results) == sorted(SUITES)
    assert all(rep.status == "verified" for rep in results.values())
