import hashlib
import json
import math

import numpy as np
import pytest

from poset_dim_lab import InputError
from poset_dim_lab.experiments import (KINDS, ExperimentConfig, aggregate, property_verdict, run_experiment,
                                       run_extremal_fd, stability_snapshot, statistical_verdict, summarize,
                                       trial_seed)

SMALL = {
    "defect": dict(n=24, q=0.3, trials=6),
    "indep2": dict(n=16, q=0.4, trials=20),
    "bcn-markov": dict(n=12, q=0.5, trials=10),
    "glr-realizer": dict(n=27, q=0.3, trials=20),
    "dim-small": dict(n=4, q=0.5, trials=10),
    "hall": dict(n=20, q=0.3, trials=10),
    "directional": dict(n=16, trials=4, qs=(0.3, 0.4)),
    "extremal-fd": dict(n=12, d=3, trials=5),
}


def test_trial_seed_is_blake2b():
    want = int.from_bytes(hashlib.blake2b(b"7:3", digest_size=8).digest(), "little")
    assert trial_seed(7, 3) == want
    assert len({trial_seed(0, i) for i in range(1000)}) == 1000


@pytest.mark.parametrize("kind", KINDS)
def test_every_kind_is_deterministic(kind):
    a = run_experiment(kind, **SMALL[kind]).to_json()
    b = run_experiment(kind, **SMALL[kind]).to_json()
    assert a == b
    doc = json.loads(a)
    assert doc["schema"] == "pdl-report-v1" and doc["kind"] == kind
    assert doc["verdicts"]


@pytest.mark.parametrize("kind", ["indep2", "defect", "hall"])
def test_seed_changes_records(kind):
    a = run_experiment(kind, seed=1, **SMALL[kind])
    b = run_experiment(kind, seed=2, **SMALL[kind])
    assert [r["seed"] for r in a.records] != [r["seed"] for r in b.records]


def test_aggregates_recompute_from_records():
    rep = run_experiment("indep2", n=16, q=0.4, trials=30, seed=5)
    counts = [r["count"] for r in rep.records]
    agg = rep.aggregates["count"]
    assert agg["count"] == 30
    assert agg["mean"] == pytest.approx(np.mean(counts))
    assert agg["stderr"] == pytest.approx(np.std(counts, ddof=1) / math.sqrt(30))
    assert (agg["min"], agg["max"]) == (min(counts), max(counts))


def test_csv_has_one_row_per_trial():
    rep = run_experiment("hall", n=10, q=0.3, trials=7)
    lines = rep.to_csv().strip().splitlines()
    assert len(lines) == 8 and "matching" in lines[0]


def test_summarize_and_verdicts():
    assert summarize([])["count"] == 0
    assert summarize([4])["stderr"] == 0.0
    s = summarize([1, 2, 3, 4])
    v = statistical_verdict("x", s, 2.5)
    assert v["verdict"] == "within-3sigma"
    assert statistical_verdict("x", s, 100)["verdict"] == "violated"
    assert statistical_verdict("x", summarize([2, 2]), 2)["verdict"] == "within-3sigma"
    assert property_verdict("p", 0, 5)["verdict"] == "pass"
    assert property_verdict("p", 1, 5)["verdict"] == "violated"
    assert property_verdict("p", 1, 5, hypothesis=False)["verdict"] == "out-of-hypothesis"
    assert aggregate([{"a": 1}, {"a": None}, {"a": 3}], ["a"])["a"]["count"] == 2


def test_config_validation():
    for bad in (dict(n=0), dict(n=True), dict(p=0.3, q=0.3), dict(q=1.5), dict(trials=0), dict(seed=-1),
                dict(mode="fast"), dict(sigmas=0)):
        with pytest.raises(InputError):
            ExperimentConfig(**bad)
    with pytest.raises(InputError):
        ExperimentConfig(n=5).p_value
    assert ExperimentConfig(q=0.25).p_value == 0.75


def test_run_experiment_errors():
    with pytest.raises(InputError):
        run_experiment("nope", n=5, q=0.5)
    with pytest.raises(InputError):
        run_experiment("dim-small", n=9, q=0.5)
    with pytest.raises(InputError):
        run_experiment("glr-realizer", n=20, q=0.5)
    with pytest.raises(InputError):
        run_experiment("indep2", ExperimentConfig(q=0.5), n=5)
    with pytest.raises(InputError):
        run_extremal_fd(2, 10, 3)
    with pytest.raises(InputError):
        run_extremal_fd(3, 5, 3)


def test_dim_small_properties_hold():
    rep = run_experiment("dim-small", n=5, q=0.5, trials=40, seed=3)
    assert rep.ok
    for r in rep.records:
        if r["mmm"] is not None:
            assert r["dim"] <= r["mmm"]


def test_bcn_markov_reports_almost_sure_bound():
    rep = run_experiment("bcn-markov", n=24, q=0.3, trials=5)
    checks = [v["check"] for v in rep.verdicts]
    assert any(c.startswith("bcn <") for c in checks)
    assert rep.verdicts[1]["verdict"] in ("reported", "out-of-hypothesis")


def test_extremal_alteration_kills_copies():
    rep = run_extremal_fd(3, 14, 10, seed=4)
    assert rep.verdict("altered Q has no S_3")["verdict"] == "pass"
    assert all(r["se_Q"] < 3 for r in rep.records)


def test_stability_snapshot():
    rep = stability_snapshot(20, trials=3)
    assert rep.verdict("se <= 2 bcn + 1")["verdict"] == "pass"
    assert rep.config["q"] == pytest.approx(20 ** (-1 / 3))
    with pytest.raises(InputError):
        stability_snapshot(1)


def test_glr_realizer_with_constructed_array():
    rep = run_experiment("glr-realizer", n=24, q=0.2, trials=10, m=8, r=2, s=2)
    assert len(rep.config["glr"]) == 2
