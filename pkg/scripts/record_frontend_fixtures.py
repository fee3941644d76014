"""Record real service responses as frontend test fixtures.

Run from the repository root:

    python scripts/record_frontend_fixtures.py

Overwrites frontend/tests/fixtures/*.json with live responses from an
in-process service instance, so the UI tests always assert against
genuine backend output.
"""

from __future__ import annotations

import json
import pathlib

from fastapi.testclient import TestClient

from xbn.service import create_app

OUT = pathlib.Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    client = TestClient(create_app())

    def save(name: str, response) -> None:
        body = response.json()
        doc = {"status": response.status_code, "body": body}
        path = OUT / f"{name}.json"
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        print(f"wrote {path.relative_to(OUT.parent.parent)} "
              f"({response.status_code})")

    save("networks_list", client.get("/api/networks"))
    save("structure_builtin_asia", client.get("/api/networks/builtin:asia"))
    save("structure_unknown", client.get("/api/networks/no-such-id"))

    def query(body: dict):
        return client.post("/api/networks/builtin:asia/query", json=body)

    all_vars = [
        "VisitToAsia", "Tuberculosis", "Smoker", "LungCancer",
        "Bronchitis", "TbOrCancer", "XRay", "Dyspnoea",
    ]

    def infer(evidence: dict) -> dict:
        targets = [v for v in all_vars if v not in evidence]
        return {"operation": "infer", "targets": targets, "evidence": evidence}

    save("infer__none", query(infer({})))
    save("infer__TbOrCancer_yes", query(infer({"TbOrCancer": "yes"})))
    save(
        "infer__TbOrCancer_yes__Tuberculosis_yes",
        query(infer({"TbOrCancer": "yes", "Tuberculosis": "yes"})),
    )
    save("infer__Dyspnoea_yes", query(infer({"Dyspnoea": "yes"})))
    save(
        "infer__impossible",
        query(infer({"TbOrCancer": "no", "Tuberculosis": "yes"})),
    )

    save("mpe__none", query({"operation": "mpe", "evidence": {}}))
    save(
        "mpe__Dyspnoea_yes",
        query({"operation": "mpe", "evidence": {"Dyspnoea": "yes"}}),
    )
    save(
        "mre__Dyspnoea_yes",
        query({
            "operation": "mre", "targets": "ALL",
            "evidence": {"Dyspnoea": "yes"}, "k": 10,
        }),
    )
    save(
        "sdp__empty_hidden",
        query({
            "operation": "sdp", "hypothesis": ["Smoker", "yes"],
            "threshold": 0.55, "evidence": {"TbOrCancer": "yes"},
            "hidden": [],
        }),
    )
    save(
        "sdp__tuberculosis_hidden",
        query({
            "operation": "sdp", "hypothesis": ["Smoker", "yes"],
            "threshold": 0.55, "evidence": {"TbOrCancer": "yes"},
            "hidden": ["Tuberculosis"],
        }),
    )


if __name__ == "__main__":
    main()
