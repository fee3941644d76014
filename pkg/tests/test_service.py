import json

import pytest
from fastapi.testclient import TestClient

from xbn.cli import main
from xbn.formats import asia_bif_text, asia_json_text
from xbn.service import create_app


@pytest.fixture()
def client():
    return TestClient(create_app())


def cli_json(capsys, *args) -> str:
    code = main(list(args) + ["--format", "json"])
    out = capsys.readouterr().out
    assert code == 0
    return out


class TestNetworks:
    def test_builtin_preregistered(self, client):
        listing = client.get("/api/networks").json()
        ids = [n["id"] for n in listing["networks"]]
        assert "builtin:asia" in ids

    def test_upload_bif(self, client):
        r = client.post(
            "/api/networks",
            content=asia_bif_text(),
            headers={"content-type": "text/plain"},
        )
        assert r.status_code == 201
        assert r.json()["name"] == "Asia"
        net_id = r.json()["id"]
        assert client.get(f"/api/networks/{net_id}").status_code == 200

    def test_upload_json(self, client):
        r = client.post(
            "/api/networks",
            content=asia_json_text(),
            headers={"content-type": "application/json"},
        )
        assert r.status_code == 201

    def test_upload_malformed_bif(self, client):
        r = client.post(
            "/api/networks",
            content="network x {",
            headers={"content-type": "text/plain"},
        )
        assert r.status_code == 400
        body = r.json()
        assert body["code"] == "parse_error"
        assert "line" in body["detail"]

    def test_get_structure(self, client):
        doc = client.get("/api/networks/builtin:asia").json()
        assert len(doc["variables"]) == 8
        assert len(doc["arcs"]) == 8
        assert {"from": "Tuberculosis", "to": "TbOrCancer"} in doc["arcs"]

    def test_structure_round_trip(self, client):
        doc = client.get("/api/networks/builtin:asia").json()
        r = client.post(
            "/api/networks",
            content=json.dumps(doc),
            headers={"content-type": "application/json"},
        )
        assert r.status_code == 201
        again = client.get(f"/api/networks/{r.json()['id']}").json()
        assert again["variables"] == doc["variables"]
        assert again["cpts"] == doc["cpts"]

    def test_unknown_id(self, client):
        assert client.get("/api/networks/nope").status_code == 404


class TestQueries:
    def test_infer_posterior(self, client):
        r = client.post(
            "/api/networks/builtin:asia/query",
            json={"operation": "infer", "targets": ["Smoker"],
                  "evidence": {"TbOrCancer": "yes"}},
        )
        assert r.status_code == 200
        post = r.json()["result"]["posterior"]["Smoker"]
        assert post["yes"] == pytest.approx(0.8435, abs=0.0005)
        assert post["no"] == pytest.approx(0.1565, abs=0.0005)

    def test_sdp_empty_hidden(self, client):
        r = client.post(
            "/api/networks/builtin:asia/query",
            json={"operation": "sdp", "hypothesis": ["Smoker", "yes"],
                  "threshold": 0.55, "evidence": {"TbOrCancer": "yes"},
                  "hidden": []},
        )
        assert r.json()["result"]["sdp"] == 1.0

    def test_mre_table(self, client):
        r = client.post(
            "/api/networks/builtin:asia/query",
            json={"operation": "mre", "targets": "ALL",
                  "evidence": {"Dyspnoea": "yes"}, "k": 10},
        )
        entries = r.json()["result"]["entries"]
        assert entries[0]["assignment"] == {"Bronchitis": "yes"}
        assert entries[0]["score"] == pytest.approx(6.1391, abs=0.001)

    def test_unknown_id_404(self, client):
        r = client.post(
            "/api/networks/missing/query", json={"operation": "infer"}
        )
        assert r.status_code == 404

    def test_invalid_parameters_422(self, client):
        r = client.post(
            "/api/networks/builtin:asia/query",
            json={"operation": "infer", "targets": ["Ghost"]},
        )
        assert r.status_code == 422
        assert "unknown variable 'Ghost'" in r.json()["message"]

    def test_impossible_evidence_409(self, client):
        r = client.post(
            "/api/networks/builtin:asia/query",
            json={"operation": "infer", "targets": ["Smoker"],
                  "evidence": {"TbOrCancer": "no", "Tuberculosis": "yes"}},
        )
        assert r.status_code == 409

    def test_guard_exceeded_413(self, client):
        body = {
            "operation": "mre",
            "targets": "ALL",
            "evidence": {},
            "k": 3,
        }
        # Build a wide network to trip the search-space guard.
        import random

        from xbn.formats import write_bif
        from util import random_network

        net = random_network(random.Random(8), n_vars=24, edge_prob=0.05)
        r = client.post(
            "/api/networks",
            content=write_bif(net),
            headers={"content-type": "text/plain"},
        )
        net_id = r.json()["id"]
        r = client.post(f"/api/networks/{net_id}/query", json=body)
        assert r.status_code == 413

    def test_queries_do_not_mutate(self, client):
        body = {"operation": "infer", "targets": ["Smoker"],
                "evidence": {"TbOrCancer": "yes"}}
        first = client.post("/api/networks/builtin:asia/query", json=body)
        for _ in range(3):
            client.post(
                "/api/networks/builtin:asia/query",
                json={"operation": "mpe", "evidence": {"Dyspnoea": "yes"}},
            )
        second = client.post("/api/networks/builtin:asia/query", json=body)
        assert first.content == second.content


class TestCliParity:
    """Service responses are byte-identical to CLI --format json output."""

    CASES = [
        (
            {"operation": "infer", "targets": ["Smoker"],
             "evidence": {"TbOrCancer": "yes"}},
            ["query", "--target", "Smoker", "--evidence", "TbOrCancer=yes"],
        ),
        (
            {"operation": "classify", "target": "Smoker",
             "evidence": {"Dyspnoea": "yes"}},
            ["classify", "--target", "Smoker", "--evidence", "Dyspnoea=yes"],
        ),
        (
            {"operation": "mpe", "evidence": {"Dyspnoea": "yes"}},
            ["mpe", "--evidence", "Dyspnoea=yes"],
        ),
        (
            {"operation": "map", "targets": ["Bronchitis", "Smoker"],
             "evidence": {"Dyspnoea": "yes"}},
            ["map", "--targets", "Bronchitis,Smoker",
             "--evidence", "Dyspnoea=yes"],
        ),
        (
            {"operation": "mre", "targets": "ALL",
             "evidence": {"Dyspnoea": "yes"}, "k": 10,
             "include_dominated": False},
            ["mre", "--targets", "ALL", "--evidence", "Dyspnoea=yes",
             "--top-k", "10"],
        ),
        (
            {"operation": "gbf", "explanation": {"Bronchitis": "yes"},
             "evidence": {"Dyspnoea": "yes"}},
            ["gbf", "--explanation", "Bronchitis=yes",
             "--evidence", "Dyspnoea=yes"],
        ),
        (
            {"operation": "sdp", "hypothesis": ["Smoker", "yes"],
             "threshold": 0.55, "evidence": {"TbOrCancer": "yes"},
             "hidden": ["VisitToAsia", "Tuberculosis"]},
            ["sdp", "--hypothesis", "Smoker=yes", "--threshold", "0.55",
             "--evidence", "TbOrCancer=yes",
             "--hidden", "VisitToAsia,Tuberculosis"],
        ),
        (
            {"operation": "decide", "hypothesis": ["Smoker", "yes"],
             "threshold": 0.55, "evidence": {"TbOrCancer": "yes"}},
            ["decide", "--hypothesis", "Smoker=yes", "--threshold", "0.55",
             "--evidence", "TbOrCancer=yes"],
        ),
        (
            {"operation": "explain", "question": "ReadyToDecide",
             "hypothesis": ["Smoker", "yes"], "threshold": 0.55,
             "evidence": {"TbOrCancer": "yes"}, "hidden": ["VisitToAsia"],
             "k": 10},
            ["explain", "--question", "ReadyToDecide", "--hypothesis",
             "Smoker=yes", "--threshold", "0.55", "--evidence",
             "TbOrCancer=yes", "--hidden", "VisitToAsia"],
        ),
    ]

    @pytest.mark.parametrize("body, cli_args", CASES)
    def test_parity(self, client, capsys, body, cli_args):
        service_bytes = client.post(
            "/api/networks/builtin:asia/query", json=body
        ).content
        cli_out = cli_json(capsys, *cli_args, "--net", "builtin:asia")
        assert cli_out.rstrip("\n") == service_bytes.decode()
