import json
import os

import pytest

import drclosure


def fixture(name, case=None):
    with open(os.path.join(drclosure.fixture_dir, name + ".json")) as f:
        doc = json.load(f)
    cases = doc.pop("cases", [])
    doc.pop("expected", None)
    for c in cases:
        if c["name"] == case:
            doc.update({k: v for k, v in c.items() if k not in ("name", "expected")})
    return doc


def test_validate_and_levels():
    doc = fixture("unmarked_zeros")
    v = drclosure.validate(doc)
    assert v["version"] == drclosure.schema_version
    assert v["graph"]["ok"] and v["twr"]["ok"] and not v["twdr"]["ok"]
    assert drclosure.level_structures(doc)["count"] == 3
    assert drclosure.level_structures(doc, max_levels=1)["count"] == 1


def test_evaluation_and_constraints():
    doc = fixture("unmarked_zeros")
    ev = drclosure.evaluation(doc)
    assert ev["0"]["vanishes"] == "conditional"
    assert ev["-1"]["vanishes"] is True
    c = drclosure.constraints(doc)
    assert c["consistent"] and c["dimension"] == 1


def test_twist_round_trip():
    doc = fixture("horizontal_nodes", "twr")
    t = drclosure.twist(doc)
    assert [i["edge"] for i in t["insertions"]] == ["q3"]
    back = drclosure.stabilize(t["twdr"])["twr"]
    assert back["levels"] == doc["levels"]
    assert back["decoration"]["orders"] == doc["decoration"]["orders"]


def test_hurwitz():
    assert drclosure.hurwitz(3, [[3], [1, 1, 1]] + [[2, 1]] * 4, genus=1)["exists"]
    v = drclosure.hurwitz(4, [[2, 2], [2, 2], [3, 1]])
    assert v["rh"] and not v["exists"]


def test_check_closure_and_verify():
    doc = fixture("dollar", "G2")
    r = drclosure.check_closure(doc)
    assert r["member"] == "yes"
    assert len(r["families"]) == 2
    cert = dict(r["certificates"][0], version=1)
    assert drclosure.verify(doc, cert)["verdict"] != "rejected"


def test_errors_raise_value_error():
    doc = fixture("unmarked_zeros")
    doc["edges"][0]["ends"][1] = "nowhere"
    with pytest.raises(drclosure.InputError):
        drclosure.validate(doc)
    with pytest.raises(ValueError):
        drclosure.validate("{not json")


def test_cli_parity():
    code, out, _ = drclosure.run("fixtures", "--check")
    assert code == 0
    assert all(f["passed"] for f in json.loads(out)["fixtures"])


def test_summary_matches_expected():
    with open(os.path.join(drclosure.fixture_dir, "cherry.json")) as f:
        raw = json.load(f)
    s = drclosure.summary(fixture("cherry", "G1"))
    assert s["accepted_level_structures"] == 3
    assert s["cover_accepted"] is True
    assert raw["name"] == "cherry"
