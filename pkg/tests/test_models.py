import itertools
import json
import random

import numpy as np
import pytest

from gensym.curvature import MetricField
from gensym.models import (
    CATALOG, DEFAULT_TOL, LABELS, PointError, aggregate, analyze_point, build_report, classify,
    classify_points, get_model, report_json, sample_points, splitmix64,
)


def test_splitmix64_reference_vectors():
    assert list(itertools.islice(splitmix64(0), 3)) == [
        0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]


def test_sample_points_range_and_determinism():
    a = sample_points(50, 7)
    b = sample_points(50, 7)
    assert all(np.array_equal(x, y) for x, y in zip(a, b))
    arr = np.array(a)
    assert arr.min() >= -1 and arr.max() < 1
    assert not np.array_equal(a[0], sample_points(1, 8)[0])


def test_sample_points_domain_filter():
    pts = sample_points(30, 1, lambda p: p[0] > 0.5)
    assert all(p[0] > 0.5 for p in pts)
    with pytest.raises(ValueError):
        sample_points(1, 1, lambda p: False, max_tries=100)


def test_catalog_errors():
    with pytest.raises(KeyError, match="unknown model"):
        get_model("type9")
    with pytest.raises(KeyError, match="no parameter"):
        get_model("type1").params({"alpha": 1.0})


def test_every_expectation_has_a_note():
    for e in CATALOG.values():
        for exp in e.expected.values():
            assert exp.note


@pytest.mark.parametrize("name,prm,label", [
    ("type1", {"lambda": 1.0, "eta": 1.0}, "TypeI"),
    ("type1", {"lambda": 1.0, "eta": -1.0}, "TypeI"),
    ("type2", {"lambda": 1.0}, "TypeII"),
    ("type3", {"lambda": 1.0}, "TypeIII_conformallySymmetric"),
    ("type3", {"lambda": 0.0}, "TypeIII_conformallyFlat"),
    ("typeC", {"sign": 1.0}, "LocallySymmetric"),
    ("typeC", {"sign": -1.0}, "LocallySymmetric"),
    ("derdzinski", {}, "TypeIII_conformallySymmetric"),
    ("plumbing", {}, "Unclassified"),
])
def test_catalog_classification(name, prm, label):
    rep = build_report(model=name, params=prm, seed=3)
    assert rep["classification"]["label"] == label
    assert all(c["passed"] for c in rep["claims"]), [c for c in rep["claims"] if not c["passed"]]


@pytest.mark.slow
@pytest.mark.parametrize("lam", [0.5, 1.0, 3.0])
@pytest.mark.parametrize("eta", [1.0, -1.0])
def test_type1_stable_over_seeds(lam, eta):
    labels = {build_report(model="type1", params={"lambda": lam, "eta": eta}, seed=s)["classification"]["label"]
              for s in range(10)}
    assert labels == {"TypeI"}


def test_classify_without_structures():
    # metric evidence alone: Type I distinguished eigensections are spacelike
    m = get_model("type2").metric()
    assert classify(m, seed=1).label == "TypeII"
    e = get_model("type1")
    assert classify(e.metric(), seed=1, domain=e.domain).label == "TypeI"


def test_flat_is_locally_symmetric(flat):
    assert classify(flat, n_points=3).label == "LocallySymmetric"


def test_labels_closed_set():
    assert set(LABELS) == {"TypeI", "TypeII", "TypeIII_conformallySymmetric", "TypeIII_conformallyFlat",
                           "LocallySymmetric", "Unclassified"}


def test_classification_is_pure_function_of_evidence():
    e = get_model("type1")
    pts = sample_points(12, 4, e.domain)
    data = [analyze_point(e.metric(), p, omegas=e.omegas(e.params()), orientation=-1) for p in pts]
    first = classify_points(data)
    shuffled = data[:]
    random.Random(0).shuffle(shuffled)
    again = classify_points(shuffled)
    assert first.label == again.label
    assert first.evidence == again.evidence
    assert aggregate(data) == aggregate(shuffled)


def test_tolerance_changes_verdict():
    e = get_model("typeC")
    data = [analyze_point(e.metric(), p) for p in sample_points(5, 0)]
    assert classify_points(data).label == "LocallySymmetric"
    assert classify_points(data, {"zero": 0.0}).label != "LocallySymmetric"


def test_evidence_trail_order():
    rep = build_report(model="type2", seed=0, n_points=5)
    steps = [s["step"] for s in rep["classification"]["evidence"]]
    assert steps[0] == "locally_symmetric" and steps[-1] == "type_II"


def test_point_error_carries_coordinates():
    m = MetricField.from_strings([["x", "0", "0", "0"], [None, "1", "0", "0"],
                                  [None, None, "1", "0"], [None, None, None, "1"]])
    with pytest.raises(PointError) as exc:
        analyze_point(m, (0, 0.25, 0, 0))
    assert exc.value.point == [0.0, 0.25, 0.0, 0.0]
    m2 = MetricField.from_strings([["log(x)", "0", "0", "0"], [None, "1", "0", "0"],
                                   [None, None, "1", "0"], [None, None, None, "1"]])
    with pytest.raises(PointError, match="-0.5"):
        classify(m2, points=[(-0.5, 0, 0, 0)])


def test_report_schema_and_json():
    rep = build_report(model="type1", seed=7, n_points=4)
    assert set(rep) == {"model", "params", "seed", "tolerances", "points", "aggregate", "classification", "claims"}
    assert rep["tolerances"] == DEFAULT_TOL
    text = report_json(rep)
    back = json.loads(text)
    assert back["points"][0]["tau"] == rep["points"][0]["tau"]  # floats survive the round trip
    assert len(back["points"]) == 4
    for p in back["points"]:
        for o in ("1", "-1"):
            assert np.array(p["weyl"][o]["Wplus"]).shape == (3, 3)


def test_report_byte_identical():
    a = report_json(build_report(model="type2", seed=11, n_points=6))
    b = report_json(build_report(model="type2", seed=11, n_points=6))
    assert a == b
    assert a != report_json(build_report(model="type2", seed=12, n_points=6))


def test_explicit_points_override_sampling():
    rep = build_report(model="type2", points=[(0.1, 0.2, 0.3, 0.4)])
    assert len(rep["points"]) == 1 and rep["points"][0]["point"] == [0.1, 0.2, 0.3, 0.4]


def test_metric_report_with_params():
    m = get_model("type2").metric()
    rep = build_report(metric=m, params={"lambda": 2.0}, n_points=3)
    assert rep["params"] == {"lambda": 2.0}
    assert rep["aggregate"]["tau"]["max"] == pytest.approx(-6.0)
    with pytest.raises(ValueError):
        build_report()


def test_claim_failure_is_reported():
    e = get_model("type2")
    rep = build_report(model="type2", params={"lambda": 2.0}, n_points=3)
    assert all(c["passed"] for c in rep["claims"])
    tau = [c for c in rep["claims"] if c["name"] == "tau"][0]
    assert tau["expected"] == pytest.approx(-6.0)
    assert e.expected["tau"].value({"lambda": 1.0}) == -12


def test_type3_weyl_rho_coefficient():
    rep = build_report(model="type3", params={"lambda": 2.0}, n_points=5)
    c = rep["aggregate"]["weyl_rho_coefficient"]
    assert c["min"] == pytest.approx(3 * 2.0 / 16) and c["max"] == pytest.approx(3 * 2.0 / 16)
