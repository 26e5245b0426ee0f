import os
import pathlib

import pytest

import faircompass

FIXTURES = pathlib.Path(os.environ.get("FC_FIXTURES", pathlib.Path(__file__).resolve().parents[2] / "fixtures"))
ADULT = {
    "label_column": "income",
    "prediction_column": "prediction",
    "class_aliases": {"<=50K": 1, ">50K": 0},
    "numeric_columns": ["age", "fnlwgt", "education-num", "capital-gain", "capital-loss", "hours-per-week"],
}


@pytest.fixture(scope="module")
def adult():
    return faircompass.load_dataset((FIXTURES / "adult" / "adult.csv").read_text(), ADULT)


def test_load(adult):
    assert adult.row_count == 32561
    assert "sex" in adult.feature_names
    assert adult.id.startswith("ds-")


def test_errors_carry_codes():
    with pytest.raises(faircompass.Error, match="NonBinaryLabel"):
        faircompass.load_dataset("a,label,prediction\nx,3,1\n")
    with pytest.raises(faircompass.Error, match="MissingColumn"):
        faircompass.load_dataset("")


def test_session_walk(adult):
    s = faircompass.Session(adult)
    groups = s.generate_groups("sex", "occupation")
    assert len(groups) == 29
    for step in [("policy", "No"), ("equal_base_rates", "No, but should be"), ("explaining_variables", "Yes")]:
        s.navigate(*step)
    ev = s.evaluate(favourable_class=0, sensitive_attribute="sex", legitimate_attributes=["occupation"])
    assert ev["result"]["satisfied"] is False
    before = s.state_hash()
    s.metrics()
    assert s.state_hash() == before
    md = s.report("markdown")
    assert "Explaining variables →(Yes)→ Conditional statistical parity" in md
    assert len(s.state()["stage_log"]) == 5
    with pytest.raises(faircompass.Error, match="OffPath"):
        s.navigate("policy", "Yes")


def test_service_roundtrip():
    svc = faircompass.Service()
    status, body = svc.request("POST", "/api/v1/datasets", {"csv": "sex,label,prediction\nM,1,1\nF,0,1\nM,0,0\n"})
    assert status == 201
    status, session = svc.request("POST", "/api/v1/sessions", {"dataset_id": body["dataset_id"]})
    assert status == 201
    status, _ = svc.request("GET", "/api/v1/sessions/" + session["session_id"] + "/groupsets/gs-1")
    assert status == 404


def test_default_tree():
    tree = faircompass.default_tree()
    assert tree["root"] == "policy"
    with pytest.raises(faircompass.Error, match="MalformedTree"):
        faircompass.validate_tree("{}")
